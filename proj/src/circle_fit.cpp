#include "dctrack/circle_fit.hpp"

#include <cmath>

namespace dctrack {

// Taubin algebraic circle fit (Newton iteration on the characteristic
// polynomial of the scatter matrix, centered on the data centroid).
std::optional<CircleFit> taubinCircleFit(const std::vector<double>& xs,
                                         const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 3 || ys.size() != n) return std::nullopt;

  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;

  double mxx = 0, myy = 0, mxy = 0, mxz = 0, myz = 0, mzz = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = xs[i] - mx;
    const double yi = ys[i] - my;
    const double zi = xi * xi + yi * yi;
    mxx += xi * xi;
    myy += yi * yi;
    mxy += xi * yi;
    mxz += xi * zi;
    myz += yi * zi;
    mzz += zi * zi;
  }
  mxx /= n;
  myy /= n;
  mxy /= n;
  mxz /= n;
  myz /= n;
  mzz /= n;

  const double mz = mxx + myy;
  const double cov_xy = mxx * myy - mxy * mxy;
  const double var_z = mzz - mz * mz;
  const double a3 = 4.0 * mz;
  const double a2 = -3.0 * mz * mz - mzz;
  const double a1 = var_z * mz + 4.0 * cov_xy * mz - mxz * mxz - myz * myz;
  const double a0 = mxz * (mxz * myy - myz * mxy) + myz * (myz * mxx - mxz * mxy) -
                    var_z * cov_xy;
  const double a22 = 2.0 * a2;
  const double a33 = 3.0 * a3;

  double x = 0.0, y = a0;
  for (int iter = 0; iter < 99; ++iter) {
    const double dy = a1 + x * (a22 + x * a33);
    const double x_new = x - y / dy;
    if (!std::isfinite(x_new) || x_new == x) break;
    const double y_new = a0 + x_new * (a1 + x_new * (a2 + x_new * a3));
    if (std::abs(y_new) >= std::abs(y)) break;
    x = x_new;
    y = y_new;
  }

  const double det = x * x - x * mz + cov_xy;
  if (std::abs(det) < 1e-14 * (mz * mz + 1e-300)) return std::nullopt;
  const double cx = (mxz * (myy - x) - myz * mxy) / det / 2.0;
  const double cy = (myz * (mxx - x) - mxz * mxy) / det / 2.0;
  const double r2 = cx * cx + cy * cy + mz;
  if (!(r2 > 0) || !std::isfinite(r2)) return std::nullopt;

  CircleFit fit;
  fit.cx = cx + mx;
  fit.cy = cy + my;
  fit.radius = std::sqrt(r2);
  return fit;
}

}  // namespace dctrack
