#pragma once

#include <optional>
#include <vector>

#include "dctrack/event.hpp"
#include "dctrack/stats.hpp"

namespace dctrack {

/// A truth track is detectable if it left at least this many hits.
struct DetectabilityRule {
  int min_detectable_hits = 6;
};

enum class TrackClass { Matched, Clone, Fake, Missed };

/// One reconstructed candidate as seen by the matcher.
struct RecoForMatch {
  int reco_id = 0;
  std::vector<WireId> hits;
  int charge = 0;
  double pt = 0;
};

/// Outcome of matching one reco candidate (or, for Missed, one detectable
/// truth track that no candidate matched).
struct MatchRecord {
  long event_id = 0;
  int reco_id = -1;
  int truth_id = 0;  // 0 when no truth association (fakes)
  long n_matched = 0;
  long n_assigned = 0;
  long n_detectable = 0;
  double hit_eff = 0;
  double hit_purity = 0;
  TrackClass cls = TrackClass::Missed;
  bool charge_correct = false;
  double truth_pt = 0, truth_cos = 0;  // NaN when no truth
  double reco_pt = 0;                  // NaN for Missed
};

struct MetricsReport {
  long n_detectable = 0, n_matched = 0, n_matched_q = 0, n_wrong_q = 0;
  long n_clone = 0, n_fake = 0;
  RateEstimate eps_track, eps_track_q, r_wrong_q, r_clone, r_fake;
  RateEstimate hit_eff, hit_purity;  // summed over matched candidates
  std::optional<double> resolution;
  long n_residuals = 0;
};

enum class BinAxis { PtMc, CosThetaMc };

struct BinnedReport {
  BinAxis axis = BinAxis::PtMc;
  std::vector<double> edges;
  std::vector<MetricsReport> bins;
};

/// Classifies every reco candidate of one event as matched, clone or fake
/// against the event's truth tracks, and emits a Missed record for each
/// detectable truth track without a matched candidate. Purity/efficiency
/// thresholds are strict (>0.50, >0.20), the hit-count threshold is >= 6;
/// all criteria are evaluated in exact integer arithmetic.
std::vector<MatchRecord> matchEvent(const Event& truth_event,
                                    const std::vector<RecoForMatch>& recos,
                                    const DetectabilityRule& rule = {});

MetricsReport aggregate(const std::vector<MatchRecord>& records);

/// Normalized pT residuals of matched candidates with correct charge.
std::vector<double> ptResiduals(const std::vector<MatchRecord>& records);

/// 68.27% coverage of |eta - median(eta)|; equals sigma for Gaussian input.
std::optional<double> resolution(const std::vector<double>& etas);

BinnedReport binned(const std::vector<MatchRecord>& records, BinAxis axis,
                    const std::vector<double>& edges);

std::vector<double> uniformEdges(double lo, double hi, int n_bins);

}  // namespace dctrack
