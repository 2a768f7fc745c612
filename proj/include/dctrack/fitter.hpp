#pragma once

#include <cstddef>
#include <vector>

#include "dctrack/config.hpp"
#include "dctrack/event.hpp"
#include "dctrack/helix.hpp"

namespace dctrack {

struct FitterConfig {
  double b_field = 1.0;
  int max_iterations = 20;
  double step_tol = 1e-8;
  double sigma_floor = 1e-5;  // cm, guards against zero drift errors
  int coarse_samples = 96;

  static FitterConfig fromConfig(const KeyValueConfig& cfg);
};

struct FitResult {
  HelixParams params;
  double chi2 = 0;
  int ndf = 0;
  bool converged = false;
  bool z_constrained = false;  // false when too few stereo hits to fit d_z/tan_lambda
};

/// Least-squares helix fit of drift distances. Gauss-Newton on the five
/// track parameters (three transverse parameters only when the candidate
/// has fewer than two stereo hits) with numeric derivatives and step
/// halving; a failed fit returns the seed with converged = false.
FitResult fitHelix(const Event& event, const std::vector<std::size_t>& hit_ids,
                   const HelixParams& seed, const Geometry& geometry,
                   const FitterConfig& cfg);

int fittedCharge(const FitResult& fit);

}  // namespace dctrack
