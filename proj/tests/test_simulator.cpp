#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

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

// Kolmogorov-Smirnov p-value against U(0, 1), asymptotic formula.
double ksUniformPValue(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = samples[i];
    d = std::max(d, std::abs((i + 1) / n - cdf));
    d = std::max(d, std::abs(cdf - i / n));
  }
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0;
  for (int k = 1; k <= 100; ++k)
    p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  return std::clamp(p, 0.0, 1.0);
}

bool identicalEvents(const Event& a, const Event& b) {
  if (a.hits.size() != b.hits.size() || a.truth.size() != b.truth.size()) return false;
  for (std::size_t i = 0; i < a.hits.size(); ++i) {
    const Hit &x = a.hits[i], &y = b.hits[i];
    if (!(x.wire == y.wire) || x.raw_drift_dist != y.raw_drift_dist ||
        x.is_signal != y.is_signal || x.track_index != y.track_index ||
        x.lr_ambig != y.lr_ambig || x.scaled_flt_len != y.scaled_flt_len)
      return false;
  }
  for (std::size_t t = 0; t < a.truth.size(); ++t) {
    if (a.truth[t].species != b.truth[t].species) return false;
    if (a.truth[t].state.momentum.x != b.truth[t].state.momentum.x) return false;
    if (a.truth[t].hit_indices != b.truth[t].hit_indices) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("generation is deterministic per (seed, event id)") {
  SimulationConfig cfg;
  cfg.noise_rate = 10.0;
  for (long id : {0L, 1L, 57L}) {
    const Event a = generateEvent(id, geom(), cfg);
    const Event b = generateEvent(id, geom(), cfg);
    CHECK(identicalEvents(a, b));
  }
  // Different seeds decorrelate.
  SimulationConfig other = cfg;
  other.seed = 2;
  CHECK(!identicalEvents(generateEvent(0, geom(), cfg), generateEvent(0, geom(), other)));
}

TEST_CASE("category track multiplicities and close-by separation") {
  SimulationConfig cfg = cleanConfig();
  cfg.category = EventCategory::Single;
  for (long id = 0; id < 50; ++id)
    CHECK(generateEvent(id, geom(), cfg).truth.size() == 1);

  cfg.category = EventCategory::CloseByTwo;
  for (long id = 0; id < 50; ++id) {
    const Event ev = generateEvent(id, geom(), cfg);
    REQUIRE(ev.truth.size() == 2);
    const bool pair = (ev.truth[0].species == "pi+" && ev.truth[1].species == "pi-") ||
                      (ev.truth[0].species == "pi-" && ev.truth[1].species == "pi+");
    CHECK(pair);
    const auto& m0 = ev.truth[0].state.momentum;
    const auto& m1 = ev.truth[1].state.momentum;
    double dphi = std::atan2(m1.y, m1.x) - std::atan2(m0.y, m0.x);
    dphi = std::remainder(dphi, 2.0 * std::numbers::pi);
    CHECK(std::abs(dphi) == doctest::Approx(cfg.delta_phi_closeby).epsilon(1e-9));
  }

  cfg.category = EventCategory::ConventionalTwo;
  const Event ev = generateEvent(3, geom(), cfg);
  CHECK(ev.truth.size() == 2);
}

TEST_CASE("sampled kinematics are uniform in pT") {
  SimulationConfig cfg;
  std::vector<double> u;
  for (long id = 0; id < 4000; ++id) {
    Rng rng = eventRng(cfg.seed, id);
    sampleSpecies(cfg.category, rng);
    const auto states = sampleKinematics(cfg.category, cfg, rng);
    const double pt = std::hypot(states[0].momentum.x, states[0].momentum.y);
    CHECK(pt >= cfg.pt_min);
    CHECK(pt <= cfg.pt_max);
    u.push_back((pt - cfg.pt_min) / (cfg.pt_max - cfg.pt_min));
  }
  CHECK(ksUniformPValue(u) > 0.01);
}

TEST_CASE("zero-smearing drift distances reproduce the true DOCA") {
  SimulationConfig cfg = cleanConfig();
  for (long id = 0; id < 20; ++id) {
    const Event ev = generateEvent(id, geom(), cfg);
    REQUIRE(ev.truth.size() == 1);
    const HelixParams h = helixFromState(ev.truth[0].state, cfg.b_field);
    for (const Hit& hit : ev.hits) {
      REQUIRE(hit.is_signal == 1);
      const double half_pitch = geom().halfCellPitch(hit.wire.layer);
      CHECK(hit.raw_drift_dist >= 0.0);
      CHECK(hit.raw_drift_dist < half_pitch);
      const auto app = pocaToWire(h, geom().wireSegment(hit.wire), cfg.b_field);
      REQUIRE(app.has_value());
      CHECK(hit.raw_drift_dist ==
            doctest::Approx(std::min(app->doca, half_pitch * (1 - 1e-9))).epsilon(1e-5));
      CHECK(hit.raw_drift_dist_err == 0.0);
    }
  }
}

TEST_CASE("hits cover consecutive crossed layers for a stiff central track") {
  SimulationConfig cfg = cleanConfig();
  KinematicState s;
  s.position = {0, 0, 0};
  s.momentum = {1.2, 0.3, 0.05};
  s.charge = +1;
  Rng rng = eventRng(1, 99);
  const auto hits = digitize(s, 1, geom(), cfg, rng);
  REQUIRE(hits.size() == 43);  // crosses every layer well inside |z| limits
  for (int l = 0; l < 43; ++l) CHECK(hits[l].wire.layer == l);
  // Flight length fraction grows monotonically with radius.
  for (std::size_t i = 1; i < hits.size(); ++i)
    CHECK(hits[i].scaled_flt_len > hits[i - 1].scaled_flt_len);
}

TEST_CASE("detection efficiency thins hits at the configured rate") {
  SimulationConfig cfg = cleanConfig();
  cfg.det_efficiency = 0.6;
  cfg.min_layers = 0;
  long kept = 0, events = 0, full = 0;
  SimulationConfig full_cfg = cleanConfig();
  for (long id = 0; id < 300; ++id) {
    kept += static_cast<long>(generateEvent(id, geom(), cfg).hits.size());
    full += static_cast<long>(generateEvent(id, geom(), full_cfg).hits.size());
    ++events;
  }
  const double ratio = static_cast<double>(kept) / full;
  CHECK(ratio == doctest::Approx(0.6).epsilon(0.05));
}

TEST_CASE("noise overlay adds Poisson-distributed hits on free wires") {
  SimulationConfig cfg = cleanConfig();
  cfg.noise_rate = 30.0;
  long noise_total = 0;
  for (long id = 0; id < 200; ++id) {
    const Event ev = generateEvent(id, geom(), cfg);
    std::set<WireId> wires;
    long noise = 0;
    for (const Hit& h : ev.hits) {
      CHECK(wires.insert(h.wire).second);  // one hit per wire
      if (!h.is_signal) {
        ++noise;
        CHECK(h.track_index == 0);
        CHECK(h.raw_drift_dist >= 0.0);
        CHECK(h.raw_drift_dist < geom().halfCellPitch(h.wire.layer));
      }
    }
    noise_total += noise;
  }
  CHECK(noise_total / 200.0 == doctest::Approx(30.0).epsilon(0.05));
}

TEST_CASE("track selection drops tracks below the layer threshold") {
  SimulationConfig cfg = cleanConfig();
  Event ev;
  ev.event_id = 0;
  TruthTrack t;
  t.track_index = 1;
  for (int l = 0; l < 4; ++l) {  // only 4 distinct layers
    Hit h;
    h.wire = {l, 0};
    h.is_signal = 1;
    h.track_index = 1;
    t.hit_indices.push_back(ev.hits.size());
    ev.hits.push_back(h);
  }
  ev.truth.push_back(t);
  applyTrackSelection(ev, cfg);
  CHECK(ev.truth.empty());
  for (const Hit& h : ev.hits) {
    CHECK(h.is_signal == 0);
    CHECK(h.track_index == 0);
  }
}

TEST_CASE("every surviving truth track is in acceptance and detectable") {
  SimulationConfig cfg;  // defaults: 98% efficiency, 130 um smearing
  for (long id = 0; id < 100; ++id) {
    const Event ev = generateEvent(id, geom(), cfg);
    for (const auto& t : ev.truth) {
      CHECK(t.pt() >= cfg.pt_min);
      CHECK(t.pt() <= cfg.pt_max);
      CHECK(std::abs(t.cosTheta()) <= cfg.cos_theta_max + 1e-12);
      std::set<int> layers;
      for (const std::size_t i : t.hit_indices) layers.insert(ev.hits[i].wire.layer);
      CHECK(static_cast<int>(layers.size()) >= cfg.min_layers);
    }
  }
}
