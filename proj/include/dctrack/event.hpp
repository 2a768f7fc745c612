#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dctrack/geometry.hpp"
#include "dctrack/helix.hpp"

namespace dctrack {

/// One detector hit, one CSV row.
struct Hit {
  WireId wire;
  int slayer = 0, locallayer = 0;
  double middle_x = 0, middle_y = 0;  // wire midpoint, cm
  double raw_drift_dist = 0;          // cm, in [0, half cell pitch)
  double raw_drift_dist_err = 0;      // cm
  int is_signal = 0;
  int track_index = 0;                // 0 on noise hits
  double scaled_flt_len = 0;
  int lr_ambig = +1;
};

enum class EventCategory { Single, ConventionalTwo, CloseByTwo };

std::string categoryName(EventCategory c);
EventCategory categoryFromName(const std::string& name);

/// MC particle with its detectable hits (indices into Event::hits).
struct TruthTrack {
  int track_index = 0;
  std::string species;  // "pi+", "mu-", ... empty when rebuilt from CSV
  KinematicState state;
  std::vector<std::size_t> hit_indices;

  double pt() const { return std::hypot(state.momentum.x, state.momentum.y); }
  double cosTheta() const {
    const double p = std::sqrt(state.momentum.x * state.momentum.x +
                               state.momentum.y * state.momentum.y +
                               state.momentum.z * state.momentum.z);
    return p > 0 ? state.momentum.z / p : 0.0;
  }
};

struct Event {
  long event_id = 0;
  EventCategory category = EventCategory::Single;
  std::vector<TruthTrack> truth;
  std::vector<Hit> hits;
};

}  // namespace dctrack
