#include "dctrack/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <numbers>

#include "dctrack/errors.hpp"

namespace dctrack {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap2pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

int speciesCharge(const std::string& sp) {
  if (sp == "p") return +1;
  if (sp == "pbar") return -1;
  return sp.back() == '+' ? +1 : -1;
}

}  // namespace

std::string categoryName(EventCategory c) {
  switch (c) {
    case EventCategory::Single: return "single";
    case EventCategory::ConventionalTwo: return "conventional-two";
    case EventCategory::CloseByTwo: return "close-by-two";
  }
  return "?";
}

EventCategory categoryFromName(const std::string& name) {
  if (name == "single") return EventCategory::Single;
  if (name == "conventional-two") return EventCategory::ConventionalTwo;
  if (name == "close-by-two") return EventCategory::CloseByTwo;
  throw ConfigError("unknown event category: " + name);
}

SimulationConfig SimulationConfig::fromConfig(const KeyValueConfig& cfg) {
  SimulationConfig s;
  s.category = categoryFromName(cfg.getString("generate.category", "single"));
  s.n_events = cfg.getLong("generate.events", s.n_events);
  s.seed = static_cast<unsigned long>(cfg.getLong("generate.seed", 1));
  s.b_field = cfg.getDouble("b_field", s.b_field);
  s.noise_rate = cfg.getDouble("generate.noise_rate", s.noise_rate);
  s.det_efficiency = cfg.getDouble("generate.det_efficiency", s.det_efficiency);
  s.sigma_drift = cfg.getDouble("generate.sigma_drift", s.sigma_drift);
  s.pt_min = cfg.getDouble("generate.pt_min", s.pt_min);
  s.pt_max = cfg.getDouble("generate.pt_max", s.pt_max);
  s.cos_theta_max = cfg.getDouble("generate.cos_theta_max", s.cos_theta_max);
  s.delta_phi_closeby = cfg.getDouble("generate.delta_phi", s.delta_phi_closeby);
  s.min_layers = static_cast<int>(cfg.getLong("generate.min_layers", s.min_layers));
  if (s.noise_rate < 0) throw ConfigError("noise_rate must be >= 0");
  if (s.det_efficiency < 0 || s.det_efficiency > 1)
    throw ConfigError("det_efficiency must be in [0, 1]");
  return s;
}

Rng eventRng(unsigned long seed, long event_id) {
  std::seed_seq seq{static_cast<unsigned long>(seed),
                    static_cast<unsigned long>(event_id),
                    0x9e3779b97f4a7c15ul};
  return Rng(seq);
}

std::vector<std::string> sampleSpecies(EventCategory category, Rng& rng) {
  if (category != EventCategory::Single) {
    // Either charge may lead; for close-by events this decides whether the
    // pair bends apart or into an overlap.
    std::uniform_int_distribution<int> coin(0, 1);
    if (coin(rng)) return {"pi-", "pi+"};
    return {"pi+", "pi-"};
  }
  static const std::vector<std::string> kSingle = {
      "e+", "e-", "mu+", "mu-", "pi+", "pi-", "K+", "K-", "p", "pbar"};
  std::uniform_int_distribution<std::size_t> pick(0, kSingle.size() - 1);
  return {kSingle[pick(rng)]};
}

std::vector<KinematicState> sampleKinematics(EventCategory category,
                                             const SimulationConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> u_pt(cfg.pt_min, cfg.pt_max);
  std::uniform_real_distribution<double> u_cos(-cfg.cos_theta_max, cfg.cos_theta_max);
  std::uniform_real_distribution<double> u_phi(0.0, kTwoPi);

  const int n_tracks = category == EventCategory::Single ? 1 : 2;
  std::vector<KinematicState> states;
  double first_phi = 0;
  for (int i = 0; i < n_tracks; ++i) {
    const double pt = u_pt(rng);
    const double cos_theta = u_cos(rng);
    double phi = u_phi(rng);
    if (category == EventCategory::CloseByTwo) {
      if (i == 0)
        first_phi = phi;
      else
        phi = wrap2pi(first_phi + cfg.delta_phi_closeby);
    }
    const double sin_theta = std::sqrt(1.0 - cos_theta * cos_theta);
    KinematicState s;
    s.position = {0, 0, 0};
    s.momentum = {pt * std::cos(phi), pt * std::sin(phi), pt * cos_theta / sin_theta};
    s.charge = +1;  // caller assigns from species
    states.push_back(s);
  }
  return states;
}

std::vector<Hit> digitize(const KinematicState& state, int track_index,
                          const Geometry& geometry, const SimulationConfig& cfg,
                          Rng& rng) {
  const HelixParams h = helixFromState(state, cfg.b_field);
  const HelixCircle circ = helixCircle(h, cfg.b_field);
  const double rho = circ.radius;
  const double cnorm = std::hypot(circ.cx, circ.cy);
  const double psi_c = std::atan2(circ.cy, circ.cx);
  const double q = h.charge();
  const double turn = kTwoPi * rho;

  std::normal_distribution<double> smear(0.0, cfg.sigma_drift);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  std::vector<Hit> hits;
  for (int layer = 0; layer < geometry.nLayers(); ++layer) {
    const LayerSpec& spec = geometry.layerSpec(layer);
    const double r = spec.radius;

    // First outgoing crossing of the layer cylinder.
    double s_cross;
    if (cnorm < 1e-9) {
      if (std::abs(r - rho) > 1e-9) continue;
      s_cross = 0.0;
    } else {
      const double cos_arg = (r * r - cnorm * cnorm - rho * rho) / (2.0 * rho * cnorm);
      if (cos_arg < -1.0 || cos_arg > 1.0) continue;
      const double off = std::acos(cos_arg);
      const double s1 = rho * wrap2pi(q * (h.phi0 - (psi_c + off)));
      const double s2 = rho * wrap2pi(q * (h.phi0 - (psi_c - off)));
      s_cross = std::min(s1, s2);
    }
    if (s_cross > 0.5 * turn * 1.0001) continue;  // beyond the outgoing arc

    const Point3 cross = pointAtArclength(h, s_cross, cfg.b_field);
    if (std::abs(cross.z) > spec.half_length) continue;

    const WireId wire = geometry.nearestWire(layer, cross);
    const double half_window = std::max(5.0, 4.0 * geometry.cellPitch(layer));
    const auto approach =
        pocaToWire(h, geometry.wireSegment(wire), cfg.b_field,
                   ArcWindow{s_cross - half_window, s_cross + half_window}, 32);
    if (!approach) continue;

    const double half_pitch = geometry.halfCellPitch(layer);
    double raw = std::abs(approach->doca + (cfg.sigma_drift > 0 ? smear(rng) : 0.0));
    raw = std::min(raw, half_pitch * (1.0 - 1e-9));

    const bool survives = cfg.det_efficiency >= 1.0 || u01(rng) < cfg.det_efficiency;
    if (!survives) continue;

    Hit hit;
    hit.wire = wire;
    hit.slayer = spec.superlayer;
    hit.locallayer = spec.local_layer;
    std::tie(hit.middle_x, hit.middle_y) = geometry.wireMidpoint(wire);
    hit.raw_drift_dist = raw;
    hit.raw_drift_dist_err = cfg.sigma_drift;
    hit.is_signal = 1;
    hit.track_index = track_index;
    hit.scaled_flt_len = approach->s_star / turn;
    hit.lr_ambig = approach->side;
    hits.push_back(hit);
  }
  return hits;
}

void overlayNoise(Event& event, const Geometry& geometry,
                  const SimulationConfig& cfg, Rng& rng) {
  if (cfg.noise_rate <= 0) return;
  std::poisson_distribution<int> n_noise(cfg.noise_rate);
  std::uniform_int_distribution<int> pick_wire(0, geometry.nWires() - 1);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  std::set<WireId> occupied;
  for (const auto& hit : event.hits) occupied.insert(hit.wire);

  // Flat wire index -> WireId.
  std::vector<int> layer_offset(geometry.nLayers() + 1, 0);
  for (int l = 0; l < geometry.nLayers(); ++l)
    layer_offset[l + 1] = layer_offset[l] + geometry.layerSpec(l).n_wires;

  const int target = n_noise(rng);
  int added = 0, attempts = 0;
  while (added < target && attempts < 100 * target + 1000) {
    ++attempts;
    const int flat = pick_wire(rng);
    const int layer =
        static_cast<int>(std::upper_bound(layer_offset.begin(), layer_offset.end(), flat) -
                         layer_offset.begin()) - 1;
    const WireId wire{layer, flat - layer_offset[layer]};
    if (occupied.count(wire)) continue;
    occupied.insert(wire);

    Hit hit;
    hit.wire = wire;
    hit.slayer = geometry.layerSpec(layer).superlayer;
    hit.locallayer = geometry.layerSpec(layer).local_layer;
    std::tie(hit.middle_x, hit.middle_y) = geometry.wireMidpoint(wire);
    hit.raw_drift_dist = u01(rng) * geometry.halfCellPitch(layer);
    hit.raw_drift_dist_err = cfg.sigma_drift;
    hit.is_signal = 0;
    hit.track_index = 0;
    hit.scaled_flt_len = 0.0;
    hit.lr_ambig = u01(rng) < 0.5 ? -1 : +1;
    event.hits.push_back(hit);
    ++added;
  }
}

void applyTrackSelection(Event& event, const SimulationConfig& cfg) {
  std::vector<TruthTrack> kept;
  for (auto& track : event.truth) {
    std::set<int> layers;
    for (const std::size_t i : track.hit_indices) layers.insert(event.hits[i].wire.layer);
    if (static_cast<int>(layers.size()) >= cfg.min_layers) {
      kept.push_back(std::move(track));
    } else {
      for (const std::size_t i : track.hit_indices) {
        event.hits[i].is_signal = 0;
        event.hits[i].track_index = 0;
      }
    }
  }
  event.truth = std::move(kept);
}

Event generateEvent(long event_id, const Geometry& geometry,
                    const SimulationConfig& cfg) {
  Rng rng = eventRng(cfg.seed, event_id);
  Event event;
  event.event_id = event_id;
  event.category = cfg.category;

  const auto species = sampleSpecies(cfg.category, rng);
  auto states = sampleKinematics(cfg.category, cfg, rng);
  for (std::size_t i = 0; i < states.size(); ++i)
    states[i].charge = speciesCharge(species[i]);

  // One hit per wire per event: on a double fire the smaller drift wins.
  std::map<WireId, std::size_t> by_wire;
  for (std::size_t t = 0; t < states.size(); ++t) {
    TruthTrack track;
    track.track_index = static_cast<int>(t) + 1;
    track.species = species[t];
    track.state = states[t];
    event.truth.push_back(track);

    for (Hit& hit : digitize(states[t], track.track_index, geometry, cfg, rng)) {
      const auto it = by_wire.find(hit.wire);
      if (it == by_wire.end()) {
        by_wire[hit.wire] = event.hits.size();
        event.hits.push_back(hit);
      } else if (hit.raw_drift_dist < event.hits[it->second].raw_drift_dist) {
        event.hits[it->second] = hit;
      }
    }
  }
  for (std::size_t i = 0; i < event.hits.size(); ++i)
    if (event.hits[i].track_index > 0)
      event.truth[event.hits[i].track_index - 1].hit_indices.push_back(i);

  overlayNoise(event, geometry, cfg, rng);
  applyTrackSelection(event, cfg);
  return event;
}

std::vector<Event> generateEvents(const Geometry& geometry,
                                  const SimulationConfig& cfg) {
  std::vector<Event> events;
  events.reserve(cfg.n_events);
  for (long id = 0; id < cfg.n_events; ++id)
    events.push_back(generateEvent(id, geometry, cfg));
  return events;
}

}  // namespace dctrack
