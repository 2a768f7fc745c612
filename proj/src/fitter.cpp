#include "dctrack/fitter.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dctrack {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct HitContext {
  Segment3 wire;
  double drift = 0;
  double sigma = 1;
};

// s_hint caches the approach arc length per hit between the many evaluations
// of one fit: successive parameter sets move the approach by far less than a
// turn, so a narrow window with few coarse samples replaces the full scan.
// A minimum on the window edge falls back to the full scan.
Eigen::VectorXd residuals(const HelixParams& h, const std::vector<HitContext>& hits,
                          const FitterConfig& cfg,
                          std::vector<double>* s_hint = nullptr) {
  constexpr double kWindow = 5.0;  // cm
  Eigen::VectorXd r(hits.size());
  for (std::size_t i = 0; i < hits.size(); ++i) {
    std::optional<WireApproach> app;
    if (s_hint && std::isfinite((*s_hint)[i])) {
      const double s = (*s_hint)[i];
      app = pocaToWire(h, hits[i].wire, cfg.b_field,
                       ArcWindow{s - kWindow, s + kWindow}, 16);
    }
    if (!app)
      app = pocaToWire(h, hits[i].wire, cfg.b_field, std::nullopt,
                       cfg.coarse_samples);
    // The full-turn window always yields an approach.
    if (s_hint) (*s_hint)[i] = app->s_star;
    r[i] = (app->doca - hits[i].drift) / hits[i].sigma;
  }
  return r;
}

HelixParams applyStep(HelixParams h, const Eigen::VectorXd& dx, int n_par) {
  h.d_r += dx[0];
  h.phi0 += dx[1];
  h.phi0 = std::fmod(h.phi0, kTwoPi);
  if (h.phi0 < 0) h.phi0 += kTwoPi;
  h.kappa += dx[2];
  if (n_par == 5) {
    h.d_z += dx[3];
    h.tan_lambda += dx[4];
  }
  return h;
}

}  // namespace

FitterConfig FitterConfig::fromConfig(const KeyValueConfig& cfg) {
  FitterConfig f;
  f.b_field = cfg.getDouble("b_field", f.b_field);
  f.max_iterations = static_cast<int>(cfg.getLong("fitter.max_iterations", f.max_iterations));
  f.step_tol = cfg.getDouble("fitter.step_tol", f.step_tol);
  f.sigma_floor = cfg.getDouble("fitter.sigma_floor", f.sigma_floor);
  f.coarse_samples = static_cast<int>(cfg.getLong("fitter.coarse_samples", f.coarse_samples));
  return f;
}

FitResult fitHelix(const Event& event, const std::vector<std::size_t>& hit_ids,
                   const HelixParams& seed, const Geometry& geometry,
                   const FitterConfig& cfg) {
  FitResult out;
  out.params = seed;

  std::vector<HitContext> hits;
  hits.reserve(hit_ids.size());
  int n_stereo = 0;
  for (const std::size_t idx : hit_ids) {
    const Hit& hit = event.hits[idx];
    HitContext ctx;
    ctx.wire = geometry.wireSegment(hit.wire);
    ctx.drift = hit.raw_drift_dist;
    ctx.sigma = std::max(hit.raw_drift_dist_err, cfg.sigma_floor);
    hits.push_back(ctx);
    if (geometry.layerSpec(hit.wire.layer).stereo_class != StereoClass::A) ++n_stereo;
  }

  const int n_par = n_stereo >= 2 ? 5 : 3;
  out.z_constrained = n_par == 5;
  out.ndf = static_cast<int>(hits.size()) - n_par;
  if (out.ndf < 1 || seed.kappa == 0) {
    out.chi2 = residuals(seed, hits, cfg).squaredNorm();
    return out;
  }

  HelixParams cur = seed;
  std::vector<double> s_hint(hits.size(), std::numeric_limits<double>::quiet_NaN());
  Eigen::VectorXd r = residuals(cur, hits, cfg, &s_hint);
  double chi2 = r.squaredNorm();

  // Forward-difference scales per parameter.
  const double eps[5] = {1e-4, 1e-5, 1e-5 * std::abs(cur.kappa) + 1e-6, 1e-4, 1e-5};

  bool converged = false;
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    Eigen::MatrixXd jac(hits.size(), n_par);
    for (int j = 0; j < n_par; ++j) {
      Eigen::VectorXd dx = Eigen::VectorXd::Zero(5);
      dx[j] = eps[j];
      const Eigen::VectorXd rp = residuals(applyStep(cur, dx, 5), hits, cfg, &s_hint);
      jac.col(j) = (rp - r) / eps[j];
    }

    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(jtj);
    if (ldlt.info() != Eigen::Success) break;
    Eigen::VectorXd step = ldlt.solve(-jtr);
    if (!step.allFinite()) break;

    // Backtracking: accept only chi2-non-increasing steps.
    bool accepted = false;
    for (int half = 0; half < 8; ++half) {
      Eigen::VectorXd full = Eigen::VectorXd::Zero(5);
      full.head(n_par) = step;
      const HelixParams trial = applyStep(cur, full, n_par);
      if (trial.kappa != 0) {
        const Eigen::VectorXd rt = residuals(trial, hits, cfg, &s_hint);
        const double ct = rt.squaredNorm();
        if (ct <= chi2) {
          cur = trial;
          r = rt;
          const double gain = chi2 - ct;
          chi2 = ct;
          accepted = true;
          if (step.norm() < cfg.step_tol || gain < 1e-12 * (1.0 + chi2))
            converged = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      converged = true;  // local minimum: no direction improves
      break;
    }
    if (converged) break;
  }

  out.params = cur;
  out.chi2 = chi2;
  out.converged = converged;
  return out;
}

int fittedCharge(const FitResult& fit) { return fit.params.charge(); }

}  // namespace dctrack
