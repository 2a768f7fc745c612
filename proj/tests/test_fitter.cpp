#include <cmath>

#include "dctrack/finder.hpp"
#include "dctrack/fitter.hpp"
#include "dctrack/simulator.hpp"
#include "doctest.h"

using namespace dctrack;

namespace {

const Geometry& geom() {
  static const Geometry g = Geometry::standard();
  return g;
}

SimulationConfig cleanConfig() {
  SimulationConfig cfg;
  cfg.sigma_drift = 0.0;
  cfg.det_efficiency = 1.0;
  cfg.noise_rate = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("fit on clean events recovers the truth parameters") {
  SimulationConfig cfg = cleanConfig();
  FinderConfig fc;
  FitterConfig ftc;
  int good = 0, total = 0;
  for (long id = 0; id < 40; ++id) {
    const Event ev = generateEvent(id, geom(), cfg);
    if (ev.truth.size() != 1) continue;
    const auto cands = findTracks(ev, geom(), fc);
    if (cands.empty()) continue;
    ++total;
    const auto fit = fitHelix(ev, cands[0].hit_ids, cands[0].seed, geom(), ftc);
    const HelixParams truth = helixFromState(ev.truth[0].state, cfg.b_field);
    const bool ok = fit.converged &&
                    fit.params.pt() == doctest::Approx(truth.pt()).epsilon(5e-3) &&
                    std::abs(fit.params.d_r - truth.d_r) < 0.05 &&
                    fittedCharge(fit) == truth.charge();
    if (ok) ++good;
    CHECK(fit.ndf == static_cast<int>(cands[0].hit_ids.size()) - (fit.z_constrained ? 5 : 3));
    CHECK(fit.chi2 >= 0.0);
  }
  CHECK(total >= 35);
  CHECK(good >= total - 2);
}

TEST_CASE("fit refines the seed on smeared data") {
  SimulationConfig cfg = cleanConfig();
  cfg.sigma_drift = 0.013;
  FinderConfig fc;
  FitterConfig ftc;
  double seed_err = 0, fit_err = 0;
  int n = 0, kappa_moved = 0;
  for (long id = 0; id < 30; ++id) {
    const Event ev = generateEvent(id, geom(), cfg);
    if (ev.truth.size() != 1) continue;
    const auto cands = findTracks(ev, geom(), fc);
    if (cands.empty()) continue;
    const auto fit = fitHelix(ev, cands[0].hit_ids, cands[0].seed, geom(), ftc);
    if (!fit.converged) continue;
    const HelixParams truth = helixFromState(ev.truth[0].state, cfg.b_field);
    seed_err += std::abs(cands[0].seed.pt() - truth.pt()) / truth.pt();
    fit_err += std::abs(fit.params.pt() - truth.pt()) / truth.pt();
    if (fit.params.kappa != cands[0].seed.kappa) ++kappa_moved;
    ++n;
  }
  REQUIRE(n >= 20);
  CHECK(kappa_moved == n);          // the fit actually refines
  CHECK(fit_err < seed_err);        // and on average it helps
}

TEST_CASE("too few hits leaves the seed untouched and unconverged") {
  SimulationConfig cfg = cleanConfig();
  const Event ev = generateEvent(0, geom(), cfg);
  REQUIRE(ev.hits.size() >= 3);
  HelixParams seed = helixFromState(ev.truth[0].state, cfg.b_field);
  const std::vector<std::size_t> few = {0, 1, 2};
  const auto fit = fitHelix(ev, few, seed, geom(), FitterConfig{});
  CHECK(!fit.converged);
  CHECK(fit.params.kappa == seed.kappa);
  CHECK(fit.ndf < 1);
}

TEST_CASE("axial-only candidates fit the transverse parameters only") {
  SimulationConfig cfg = cleanConfig();
  const Event ev = generateEvent(5, geom(), cfg);
  REQUIRE(ev.truth.size() == 1);
  std::vector<std::size_t> axial_ids;
  for (std::size_t i = 0; i < ev.hits.size(); ++i)
    if (geom().layerSpec(ev.hits[i].wire.layer).stereo_class == StereoClass::A)
      axial_ids.push_back(i);
  REQUIRE(axial_ids.size() >= 8);
  HelixParams seed = helixFromState(ev.truth[0].state, cfg.b_field);
  seed.kappa *= 1.02;  // perturb so the fit has work to do
  const auto fit = fitHelix(ev, axial_ids, seed, geom(), FitterConfig{});
  CHECK(!fit.z_constrained);
  CHECK(fit.params.d_z == seed.d_z);
  CHECK(fit.params.tan_lambda == seed.tan_lambda);
  const HelixParams truth = helixFromState(ev.truth[0].state, cfg.b_field);
  CHECK(fit.params.pt() == doctest::Approx(truth.pt()).epsilon(0.01));
}

TEST_CASE("fitter config reads overrides") {
  const auto kv =
      KeyValueConfig::fromString("fitter.max_iterations = 7\nfitter.step_tol = 1e-6\n");
  const FitterConfig fc = FitterConfig::fromConfig(kv);
  CHECK(fc.max_iterations == 7);
  CHECK(fc.step_tol == doctest::Approx(1e-6));
  CHECK(fc.sigma_floor == doctest::Approx(1e-5));
}
