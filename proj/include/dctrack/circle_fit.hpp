#pragma once

#include <optional>
#include <vector>

namespace dctrack {

struct CircleFit {
  double cx = 0, cy = 0, radius = 0;
};

/// Taubin algebraic circle fit. Needs >= 3 non-collinear points.
std::optional<CircleFit> taubinCircleFit(const std::vector<double>& xs,
                                         const std::vector<double>& ys);

}  // namespace dctrack
