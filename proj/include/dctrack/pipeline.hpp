#pragma once

#include <string>
#include <vector>

#include "dctrack/finder.hpp"
#include "dctrack/fitter.hpp"
#include "dctrack/metrics.hpp"
#include "dctrack/reco_io.hpp"

namespace dctrack {

struct RecoOptions {
  FinderConfig finder;
  FitterConfig fitter;
  bool fit = true;  // false: keep finder seeds as final parameters

  static RecoOptions fromConfig(const KeyValueConfig& cfg);
};

std::vector<RecoTrack> reconstructEvent(const Event& event, const Geometry& geometry,
                                        const RecoOptions& opts);
std::vector<RecoTrack> reconstruct(const std::vector<Event>& events,
                                   const Geometry& geometry, const RecoOptions& opts);

struct Evaluation {
  std::vector<MatchRecord> records;
  MetricsReport total;
  BinnedReport by_pt, by_cos;
};

/// Matches reco tracks against truth, event by event. Every reco event id
/// must exist on the truth side, otherwise an AlignmentError names the
/// offending ids.
Evaluation evaluate(const std::vector<Event>& truth_events,
                    const std::vector<RecoTrack>& reco_tracks,
                    const std::vector<double>& pt_edges,
                    const std::vector<double>& cos_edges);

std::vector<double> defaultPtEdges(int n_bins = 9);
std::vector<double> defaultCosEdges(int n_bins = 10);

std::string renderSummary(const MetricsReport& rep);   // aligned human-readable table
std::string renderMachine(const MetricsReport& rep);   // key=value lines
std::string renderBinned(const BinnedReport& rep);     // CSV series

}  // namespace dctrack
