#include "dctrack/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/beta.hpp>

#include "dctrack/errors.hpp"

namespace dctrack {

double quantile(std::vector<double> samples, double q) {
  if (samples.empty()) throw DomainError("quantile: empty sample");
  if (q < 0 || q > 1) throw DomainError("quantile: q out of [0, 1]");
  std::sort(samples.begin(), samples.end());
  const double h = q * (samples.size() - 1);
  const std::size_t i = static_cast<std::size_t>(std::floor(h));
  if (i + 1 >= samples.size()) return samples.back();
  const double f = h - i;
  return samples[i] * (1.0 - f) + samples[i + 1] * f;
}

RateEstimate clopperPearson(long k, long n, double confidence) {
  RateEstimate r;
  r.k = k;
  r.n = n;
  if (n <= 0) return r;
  if (k < 0 || k > n) throw DomainError("clopperPearson: k out of [0, n]");
  r.defined = true;
  r.value = static_cast<double>(k) / n;
  const double alpha = 1.0 - confidence;
  r.lo = (k == 0) ? 0.0
                  : boost::math::quantile(
                        boost::math::beta_distribution<double>(k, n - k + 1),
                        alpha / 2.0);
  r.hi = (k == n) ? 1.0
                  : boost::math::quantile(
                        boost::math::beta_distribution<double>(k + 1, n - k),
                        1.0 - alpha / 2.0);
  return r;
}

}  // namespace dctrack
