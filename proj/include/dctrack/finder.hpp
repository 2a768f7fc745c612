#pragma once

#include "dctrack/config.hpp"
#include "dctrack/event.hpp"
#include "dctrack/helix.hpp"

namespace dctrack {

struct FinderConfig {
  double b_field = 1.0;
  int phi_bins = 720;
  int kappa_bins = 200;
  double kappa_max = 1.0 / 0.15;  // forced by the pT floor
  int min_votes = 6;
  int nms_phi_window = 10;
  int nms_kappa_window = 10;
  double road_cell_pitches = 3.0;
  double drift_road = 0.2;  // cm, drift-vs-circle consistency cut
  double z_road = 6.0;      // cm
  int min_hits = 6;

  static FinderConfig fromConfig(const KeyValueConfig& cfg);
};

struct TrackCandidate {
  std::vector<std::size_t> hit_ids;  // indices into Event::hits
  HelixParams seed;
  int quality = 0;  // accumulator votes
};

/// Conformal-mapping Hough finder: axial hits vote in (phi0, kappa),
/// peaks are extracted with non-maximum suppression, axial hits join their
/// best peak within a residual road, stereo hits attach by z consistency.
/// Candidates with fewer than min_hits hits are dropped.
std::vector<TrackCandidate> findTracks(const Event& event, const Geometry& geometry,
                                       const FinderConfig& cfg);

int seedCharge(const TrackCandidate& candidate);

}  // namespace dctrack
