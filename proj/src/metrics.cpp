#include "dctrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "dctrack/errors.hpp"

namespace dctrack {

namespace {

constexpr long kMinMatchedHits = 6;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Exact comparison of fractions a1/b1 > a2/b2 with positive denominators.
bool fracGreater(long a1, long b1, long a2, long b2) {
  return a1 * b2 > a2 * b1;
}

// Clone/fake counts can exceed the detectable-track denominator; the
// binomial interval only exists for k <= n.
RateEstimate overflowSafeRate(long k, long n) {
  if (n > 0 && k > n) {
    RateEstimate r;
    r.k = k;
    r.n = n;
    r.defined = true;
    r.value = static_cast<double>(k) / n;
    r.lo = 0.0;
    r.hi = 1.0;
    return r;
  }
  return clopperPearson(k, n);
}

}  // namespace

std::vector<MatchRecord> matchEvent(const Event& truth_event,
                                    const std::vector<RecoForMatch>& recos,
                                    const DetectabilityRule& rule) {
  // Wire key -> truth track index (signal hits only).
  std::map<WireId, int> wire_truth;
  std::map<int, const TruthTrack*> truth_by_id;
  std::map<int, long> n_detectable;
  for (const auto& t : truth_event.truth) {
    truth_by_id[t.track_index] = &t;
    n_detectable[t.track_index] = static_cast<long>(t.hit_indices.size());
    for (const std::size_t i : t.hit_indices)
      wire_truth[truth_event.hits[i].wire] = t.track_index;
  }

  // The finder contract forbids hit sharing between candidates.
  std::set<WireId> seen;
  for (const auto& r : recos)
    for (const auto& w : r.hits)
      if (!seen.insert(w).second)
        throw DomainError("matchEvent: hit assigned to two reco tracks (event " +
                          std::to_string(truth_event.event_id) + ")");

  std::vector<MatchRecord> records;
  std::vector<std::size_t> passing;  // indices into records
  for (const auto& reco : recos) {
    MatchRecord rec;
    rec.event_id = truth_event.event_id;
    rec.reco_id = reco.reco_id;
    rec.n_assigned = static_cast<long>(reco.hits.size());
    rec.reco_pt = reco.pt;

    // Dominant truth contributor; ties to the lower truth id.
    std::map<int, long> contrib;
    for (const auto& w : reco.hits) {
      const auto it = wire_truth.find(w);
      if (it != wire_truth.end()) ++contrib[it->second];
    }
    int dominant = 0;
    long best = 0;
    for (const auto& [id, n] : contrib)
      if (n > best) {
        best = n;
        dominant = id;
      }

    if (dominant > 0) {
      rec.truth_id = dominant;
      rec.n_matched = best;
      rec.n_detectable = n_detectable[dominant];
      rec.hit_eff = static_cast<double>(rec.n_matched) / rec.n_detectable;
      rec.hit_purity = static_cast<double>(rec.n_matched) / rec.n_assigned;
      const TruthTrack* t = truth_by_id[dominant];
      rec.truth_pt = t->pt();
      rec.truth_cos = t->cosTheta();
      rec.charge_correct = reco.charge == t->state.charge;
      const bool pass = 2 * rec.n_matched > rec.n_assigned &&      // p_hit > 0.50
                        5 * rec.n_matched > rec.n_detectable &&    // eps_hit > 0.20
                        rec.n_matched >= kMinMatchedHits;
      rec.cls = pass ? TrackClass::Matched : TrackClass::Fake;
    } else {
      rec.truth_pt = rec.truth_cos = kNaN;
      rec.cls = TrackClass::Fake;
    }
    records.push_back(rec);
    if (records.back().cls == TrackClass::Matched) passing.push_back(records.size() - 1);
  }

  // Clone resolution: per truth track keep the candidate with the highest
  // eps_hit; ties by higher p_hit, then lower reco id.
  std::map<int, std::size_t> best_for_truth;
  for (const std::size_t i : passing) {
    const auto& r = records[i];
    const auto it = best_for_truth.find(r.truth_id);
    if (it == best_for_truth.end()) {
      best_for_truth[r.truth_id] = i;
      continue;
    }
    const auto& b = records[it->second];
    bool better = false;
    if (r.n_matched != b.n_matched) {  // same denominator: eps compares by count
      better = r.n_matched > b.n_matched;
    } else if (fracGreater(r.n_matched, r.n_assigned, b.n_matched, b.n_assigned)) {
      better = true;
    } else if (!fracGreater(b.n_matched, b.n_assigned, r.n_matched, r.n_assigned)) {
      better = r.reco_id < b.reco_id;
    }
    if (better) it->second = i;
  }
  for (const std::size_t i : passing)
    if (best_for_truth[records[i].truth_id] != i) records[i].cls = TrackClass::Clone;

  // Missed detectable truth tracks.
  for (const auto& t : truth_event.truth) {
    if (n_detectable[t.track_index] < rule.min_detectable_hits) continue;
    if (best_for_truth.count(t.track_index)) continue;
    MatchRecord rec;
    rec.event_id = truth_event.event_id;
    rec.reco_id = -1;
    rec.truth_id = t.track_index;
    rec.n_detectable = n_detectable[t.track_index];
    rec.cls = TrackClass::Missed;
    rec.truth_pt = t.pt();
    rec.truth_cos = t.cosTheta();
    rec.reco_pt = kNaN;
    records.push_back(rec);
  }

  // A matched candidate whose truth track is below the detectability
  // threshold cannot exist (n_matched >= 6 implies n_detectable >= 6), so
  // N_detectable == Matched + Missed holds by construction.
  return records;
}

MetricsReport aggregate(const std::vector<MatchRecord>& records) {
  MetricsReport rep;
  long hit_matched = 0, hit_detectable = 0, hit_assigned = 0;
  for (const auto& r : records) {
    switch (r.cls) {
      case TrackClass::Matched:
        ++rep.n_matched;
        ++rep.n_detectable;
        if (r.charge_correct)
          ++rep.n_matched_q;
        else
          ++rep.n_wrong_q;
        hit_matched += r.n_matched;
        hit_detectable += r.n_detectable;
        hit_assigned += r.n_assigned;
        break;
      case TrackClass::Missed:
        ++rep.n_detectable;
        break;
      case TrackClass::Clone:
        ++rep.n_clone;
        break;
      case TrackClass::Fake:
        ++rep.n_fake;
        break;
    }
  }
  rep.eps_track = clopperPearson(rep.n_matched, rep.n_detectable);
  rep.eps_track_q = clopperPearson(rep.n_matched_q, rep.n_detectable);
  rep.r_wrong_q = clopperPearson(rep.n_wrong_q, rep.n_detectable);
  rep.r_clone = overflowSafeRate(rep.n_clone, rep.n_detectable);
  rep.r_fake = overflowSafeRate(rep.n_fake, rep.n_detectable);
  rep.hit_eff = clopperPearson(hit_matched, hit_detectable);
  rep.hit_purity = clopperPearson(hit_matched, hit_assigned);

  const auto etas = ptResiduals(records);
  rep.n_residuals = static_cast<long>(etas.size());
  rep.resolution = resolution(etas);
  return rep;
}

std::vector<double> ptResiduals(const std::vector<MatchRecord>& records) {
  std::vector<double> etas;
  for (const auto& r : records)
    if (r.cls == TrackClass::Matched && r.charge_correct && std::isfinite(r.reco_pt))
      etas.push_back((r.reco_pt - r.truth_pt) / r.truth_pt);
  return etas;
}

std::optional<double> resolution(const std::vector<double>& etas) {
  if (etas.empty()) return std::nullopt;
  const double med = quantile(etas, 0.5);
  std::vector<double> abs_dev;
  abs_dev.reserve(etas.size());
  for (const double e : etas) abs_dev.push_back(std::abs(e - med));
  return quantile(abs_dev, 0.6827);
}

std::vector<double> uniformEdges(double lo, double hi, int n_bins) {
  if (n_bins <= 0 || !(hi > lo)) throw DomainError("uniformEdges: bad binning");
  std::vector<double> edges(n_bins + 1);
  for (int i = 0; i <= n_bins; ++i) edges[i] = lo + (hi - lo) * i / n_bins;
  return edges;
}

BinnedReport binned(const std::vector<MatchRecord>& records, BinAxis axis,
                    const std::vector<double>& edges) {
  if (edges.size() < 2) throw ConfigError("binned: need at least two edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw ConfigError("binned: edges not increasing");

  BinnedReport out;
  out.axis = axis;
  out.edges = edges;
  const int n_bins = static_cast<int>(edges.size()) - 1;
  std::vector<std::vector<MatchRecord>> parts(n_bins);
  for (const auto& r : records) {
    const double v = axis == BinAxis::PtMc ? r.truth_pt : r.truth_cos;
    if (!std::isfinite(v)) continue;  // fakes carry no truth value
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    const int bin = static_cast<int>(it - edges.begin()) - 1;
    if (bin < 0 || bin >= n_bins) continue;
    parts[bin].push_back(r);
  }
  for (const auto& part : parts) out.bins.push_back(aggregate(part));
  return out;
}

}  // namespace dctrack
