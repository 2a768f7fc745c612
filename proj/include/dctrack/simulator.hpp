#pragma once

#include <random>

#include "dctrack/event.hpp"

namespace dctrack {

struct SimulationConfig {
  EventCategory category = EventCategory::Single;
  long n_events = 1000;
  unsigned long seed = 1;
  double b_field = 1.0;          // T
  double noise_rate = 0.0;       // mean noise hits per event
  double det_efficiency = 0.98;  // per-hit survival probability
  double sigma_drift = 0.013;    // cm, single-wire resolution
  double pt_min = 0.15, pt_max = 1.5;
  double cos_theta_max = 0.93;
  double delta_phi_closeby = 0.2;  // rad
  int min_layers = 6;              // track-level selection

  static SimulationConfig fromConfig(const KeyValueConfig& cfg);
};

using Rng = std::mt19937_64;

/// Deterministic per-event RNG stream.
Rng eventRng(unsigned long seed, long event_id);

/// Uniform kinematics over the category's phase space; one state for
/// single-track events, two (pi+ then pi-) for two-track categories.
std::vector<KinematicState> sampleKinematics(EventCategory category,
                                             const SimulationConfig& cfg, Rng& rng);

std::vector<std::string> sampleSpecies(EventCategory category, Rng& rng);

/// Propagates a truth state through the chamber, one hit per crossed
/// layer: nearest wire, smeared drift distance, survival at det_efficiency.
std::vector<Hit> digitize(const KinematicState& state, int track_index,
                          const Geometry& geometry, const SimulationConfig& cfg,
                          Rng& rng);

/// Adds Poisson(noise_rate) noise hits on unoccupied wires.
void overlayNoise(Event& event, const Geometry& geometry,
                  const SimulationConfig& cfg, Rng& rng);

/// Tracks with hits on fewer than min_layers distinct layers are dropped
/// and their hits relabeled as noise.
void applyTrackSelection(Event& event, const SimulationConfig& cfg);

/// Full chain for one event id: sample, digitize, dedup, noise, selection.
Event generateEvent(long event_id, const Geometry& geometry,
                    const SimulationConfig& cfg);

std::vector<Event> generateEvents(const Geometry& geometry,
                                  const SimulationConfig& cfg);

}  // namespace dctrack
