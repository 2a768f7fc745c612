#pragma once

#include <vector>

namespace dctrack {

/// q-th quantile with linear interpolation between order statistics.
double quantile(std::vector<double> samples, double q);

/// Rate with a central Clopper-Pearson confidence interval.
struct RateEstimate {
  long k = 0, n = 0;
  double value = 0, lo = 0, hi = 0;
  bool defined = false;
};

RateEstimate clopperPearson(long k, long n, double confidence = 0.6827);

}  // namespace dctrack
