#pragma once

// Reference matcher used to cross-check matchEvent: an independent,
// deliberately naive implementation of the same classification rules.

#include <map>
#include <random>
#include <set>
#include <vector>

#include "dctrack/metrics.hpp"

namespace dctrack::testing {

struct OracleResult {
  // reco_id -> class of that candidate
  std::map<int, TrackClass> reco_class;
  // truth ids with >= 6 detectable hits but no matched candidate
  std::set<int> missed;
};

inline OracleResult bruteForceMatch(const Event& truth_event,
                                    const std::vector<RecoForMatch>& recos) {
  OracleResult out;

  struct Scored {
    int reco_id;
    long matched, assigned, detectable;
    bool passes;
  };
  std::map<int, std::vector<Scored>> per_truth;

  for (const auto& reco : recos) {
    // Count shared hits against every truth track independently.
    long best_overlap = 0;
    int best_truth = 0;
    for (const auto& t : truth_event.truth) {
      long overlap = 0;
      for (const auto& w : reco.hits)
        for (const std::size_t i : t.hit_indices)
          if (truth_event.hits[i].wire == w) ++overlap;
      if (overlap > best_overlap ||
          (overlap == best_overlap && overlap > 0 && t.track_index < best_truth)) {
        best_overlap = overlap;
        best_truth = t.track_index;
      }
    }
    if (best_overlap == 0) {
      out.reco_class[reco.reco_id] = TrackClass::Fake;
      continue;
    }
    long detectable = 0;
    for (const auto& t : truth_event.truth)
      if (t.track_index == best_truth) detectable = static_cast<long>(t.hit_indices.size());
    const double purity = static_cast<double>(best_overlap) / reco.hits.size();
    const double eff = static_cast<double>(best_overlap) / detectable;
    const bool passes = purity > 0.5 && eff > 0.2 && best_overlap >= 6;
    per_truth[best_truth].push_back({reco.reco_id, best_overlap,
                                     static_cast<long>(reco.hits.size()), detectable,
                                     passes});
    out.reco_class[reco.reco_id] = passes ? TrackClass::Matched : TrackClass::Fake;
  }

  // Among passing candidates of one truth track, only the best stays
  // matched: highest hit efficiency, then highest purity, then lowest id.
  for (auto& [truth_id, cands] : per_truth) {
    const Scored* best = nullptr;
    for (const auto& c : cands) {
      if (!c.passes) continue;
      if (!best) {
        best = &c;
        continue;
      }
      const double eff_c = static_cast<double>(c.matched) / c.detectable;
      const double eff_b = static_cast<double>(best->matched) / best->detectable;
      const double pur_c = static_cast<double>(c.matched) / c.assigned;
      const double pur_b = static_cast<double>(best->matched) / best->assigned;
      if (eff_c > eff_b + 1e-12 ||
          (std::abs(eff_c - eff_b) <= 1e-12 &&
           (pur_c > pur_b + 1e-12 ||
            (std::abs(pur_c - pur_b) <= 1e-12 && c.reco_id < best->reco_id))))
        best = &c;
    }
    for (const auto& c : cands)
      if (c.passes && best && c.reco_id != best->reco_id)
        out.reco_class[c.reco_id] = TrackClass::Clone;
  }

  for (const auto& t : truth_event.truth) {
    if (static_cast<long>(t.hit_indices.size()) < 6) continue;
    bool found = false;
    for (const auto& [id, cls] : out.reco_class) {
      if (cls != TrackClass::Matched) continue;
      for (const auto& reco : recos) {
        if (reco.reco_id != id) continue;
        long overlap_best = 0;
        int truth_best = 0;
        for (const auto& t2 : truth_event.truth) {
          long overlap = 0;
          for (const auto& w : reco.hits)
            for (const std::size_t i : t2.hit_indices)
              if (truth_event.hits[i].wire == w) ++overlap;
          if (overlap > overlap_best ||
              (overlap == overlap_best && overlap > 0 && t2.track_index < truth_best)) {
            overlap_best = overlap;
            truth_best = t2.track_index;
          }
        }
        if (truth_best == t.track_index) found = true;
      }
    }
    if (!found) out.missed.insert(t.track_index);
  }
  return out;
}

/// Random small synthetic event plus reco candidates for oracle testing.
/// Truth tracks get disjoint wire sets; recos draw subsets plus stray
/// wires, never sharing a wire between two candidates.
inline std::pair<Event, std::vector<RecoForMatch>> randomMatchingScenario(
    std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n_truth_d(1, 3);
  std::uniform_int_distribution<int> n_hits_d(3, 20);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  Event ev;
  ev.event_id = 0;
  int next_cell = 0;
  const int n_truth = n_truth_d(rng);
  for (int t = 1; t <= n_truth; ++t) {
    TruthTrack track;
    track.track_index = t;
    track.state.momentum = {0.3 + 0.1 * t, 0.0, 0.1};
    track.state.charge = (t % 2) ? +1 : -1;
    const int n_hits = n_hits_d(rng);
    for (int i = 0; i < n_hits; ++i) {
      Hit h;
      h.wire = {i % 43, next_cell++};
      h.is_signal = 1;
      h.track_index = t;
      track.hit_indices.push_back(ev.hits.size());
      ev.hits.push_back(h);
    }
    ev.truth.push_back(track);
  }

  std::vector<RecoForMatch> recos;
  std::set<WireId> used;
  std::uniform_int_distribution<int> n_reco_d(0, 4);
  const int n_reco = n_reco_d(rng);
  for (int r = 1; r <= n_reco; ++r) {
    RecoForMatch reco;
    reco.reco_id = r;
    reco.charge = (rng() & 1) ? +1 : -1;
    reco.pt = 0.5;
    // Pick hits from a random truth track plus strays.
    const auto& track = ev.truth[rng() % ev.truth.size()];
    for (const std::size_t i : track.hit_indices) {
      const WireId w = ev.hits[i].wire;
      if (u01(rng) < 0.7 && !used.count(w)) {
        reco.hits.push_back(w);
        used.insert(w);
      }
    }
    const int strays = static_cast<int>(rng() % 5);
    for (int i = 0; i < strays; ++i) {
      const WireId w{42, next_cell++};
      reco.hits.push_back(w);
      used.insert(w);
    }
    if (!reco.hits.empty()) recos.push_back(std::move(reco));
  }
  return {std::move(ev), std::move(recos)};
}

}  // namespace dctrack::testing
