#include "dctrack/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "dctrack/dataset_io.hpp"
#include "dctrack/errors.hpp"

namespace dctrack {

namespace {

std::string rateCell(const RateEstimate& r) {
  if (!r.defined) return "      n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%7.4f [%6.4f, %6.4f]", r.value, r.lo, r.hi);
  return buf;
}

void machineRate(std::ostringstream& out, const std::string& key, const RateEstimate& r) {
  out << key << ".k=" << r.k << '\n' << key << ".n=" << r.n << '\n';
  if (r.defined) {
    out << key << "=" << formatValue(r.value) << '\n'
        << key << ".lo=" << formatValue(r.lo) << '\n'
        << key << ".hi=" << formatValue(r.hi) << '\n';
  }
}

}  // namespace

RecoOptions RecoOptions::fromConfig(const KeyValueConfig& cfg) {
  RecoOptions o;
  o.finder = FinderConfig::fromConfig(cfg);
  o.fitter = FitterConfig::fromConfig(cfg);
  o.fit = cfg.getLong("reco.fit", 1) != 0;
  return o;
}

std::vector<RecoTrack> reconstructEvent(const Event& event, const Geometry& geometry,
                                        const RecoOptions& opts) {
  std::vector<RecoTrack> out;
  const auto candidates = findTracks(event, geometry, opts.finder);
  int next_id = 1;
  for (const auto& cand : candidates) {
    RecoTrack t;
    t.event_id = event.event_id;
    t.reco_id = next_id++;
    for (const std::size_t i : cand.hit_ids) t.hits.push_back(event.hits[i].wire);
    std::sort(t.hits.begin(), t.hits.end());
    if (opts.fit) {
      const FitResult fit = fitHelix(event, cand.hit_ids, cand.seed, geometry, opts.fitter);
      t.params = fit.params;
      t.chi2 = fit.chi2;
      t.ndf = fit.ndf;
      t.converged = fit.converged;
    } else {
      t.params = cand.seed;
      t.ndf = static_cast<int>(cand.hit_ids.size()) - 5;
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<RecoTrack> reconstruct(const std::vector<Event>& events,
                                   const Geometry& geometry, const RecoOptions& opts) {
  std::vector<RecoTrack> out;
  for (const Event& ev : events) {
    auto tracks = reconstructEvent(ev, geometry, opts);
    out.insert(out.end(), std::make_move_iterator(tracks.begin()),
               std::make_move_iterator(tracks.end()));
  }
  return out;
}

Evaluation evaluate(const std::vector<Event>& truth_events,
                    const std::vector<RecoTrack>& reco_tracks,
                    const std::vector<double>& pt_edges,
                    const std::vector<double>& cos_edges) {
  std::map<long, const Event*> truth_by_id;
  for (const Event& ev : truth_events) truth_by_id[ev.event_id] = &ev;

  std::map<long, std::vector<RecoForMatch>> reco_by_event;
  std::set<long> orphans;
  for (const RecoTrack& t : reco_tracks) {
    if (!truth_by_id.count(t.event_id)) {
      orphans.insert(t.event_id);
      continue;
    }
    RecoForMatch r;
    r.reco_id = t.reco_id;
    r.hits = t.hits;
    r.charge = t.params.charge();
    r.pt = t.params.pt();
    reco_by_event[t.event_id].push_back(std::move(r));
  }
  if (!orphans.empty()) {
    std::ostringstream msg;
    msg << "reco tracks reference unknown event ids:";
    int shown = 0;
    for (const long id : orphans) {
      if (shown++ == 20) {
        msg << " ...";
        break;
      }
      msg << ' ' << id;
    }
    throw AlignmentError(msg.str());
  }

  Evaluation ev;
  static const std::vector<RecoForMatch> kNoReco;
  for (const auto& [id, truth] : truth_by_id) {
    const auto it = reco_by_event.find(id);
    const auto recs = matchEvent(*truth, it != reco_by_event.end() ? it->second : kNoReco);
    ev.records.insert(ev.records.end(), recs.begin(), recs.end());
  }
  ev.total = aggregate(ev.records);
  ev.by_pt = binned(ev.records, BinAxis::PtMc, pt_edges);
  ev.by_cos = binned(ev.records, BinAxis::CosThetaMc, cos_edges);
  return ev;
}

std::vector<double> defaultPtEdges(int n_bins) { return uniformEdges(0.15, 1.5, n_bins); }
std::vector<double> defaultCosEdges(int n_bins) { return uniformEdges(-0.93, 0.93, n_bins); }

std::string renderSummary(const MetricsReport& rep) {
  std::ostringstream out;
  out << "tracks: detectable " << rep.n_detectable << ", matched " << rep.n_matched
      << ", clones " << rep.n_clone << ", fakes " << rep.n_fake << "\n";
  out << "  track efficiency        " << rateCell(rep.eps_track) << "\n";
  out << "  charge-correct eff.     " << rateCell(rep.eps_track_q) << "\n";
  out << "  wrong-charge rate       " << rateCell(rep.r_wrong_q) << "\n";
  out << "  clone rate              " << rateCell(rep.r_clone) << "\n";
  out << "  fake rate               " << rateCell(rep.r_fake) << "\n";
  out << "  hit efficiency          " << rateCell(rep.hit_eff) << "\n";
  out << "  hit purity              " << rateCell(rep.hit_purity) << "\n";
  if (rep.resolution) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.5f", *rep.resolution);
    out << "  pT resolution           " << buf << "  (" << rep.n_residuals
        << " residuals)\n";
  } else {
    out << "  pT resolution           n/a\n";
  }
  return out.str();
}

std::string renderMachine(const MetricsReport& rep) {
  std::ostringstream out;
  out << "n_detectable=" << rep.n_detectable << '\n'
      << "n_matched=" << rep.n_matched << '\n'
      << "n_matched_q=" << rep.n_matched_q << '\n'
      << "n_wrong_q=" << rep.n_wrong_q << '\n'
      << "n_clone=" << rep.n_clone << '\n'
      << "n_fake=" << rep.n_fake << '\n';
  machineRate(out, "eps_track", rep.eps_track);
  machineRate(out, "eps_track_q", rep.eps_track_q);
  machineRate(out, "r_wrong_q", rep.r_wrong_q);
  machineRate(out, "r_clone", rep.r_clone);
  machineRate(out, "r_fake", rep.r_fake);
  machineRate(out, "hit_eff", rep.hit_eff);
  machineRate(out, "hit_purity", rep.hit_purity);
  out << "n_residuals=" << rep.n_residuals << '\n';
  if (rep.resolution) out << "pt_resolution=" << formatValue(*rep.resolution) << '\n';
  return out.str();
}

std::string renderBinned(const BinnedReport& rep) {
  std::ostringstream out;
  out << (rep.axis == BinAxis::PtMc ? "ptMcLo,ptMcHi" : "cosThetaMcLo,cosThetaMcHi")
      << ",nDetectable,nMatched,epsTrack,epsTrackLo,epsTrackHi,epsTrackQ,rWrongQ,"
         "rClone,rFake,hitEff,hitPurity,ptResolution\n";
  for (std::size_t i = 0; i < rep.bins.size(); ++i) {
    const MetricsReport& b = rep.bins[i];
    const auto opt = [](const RateEstimate& r) {
      return r.defined ? formatValue(r.value) : std::string("nan");
    };
    out << formatValue(rep.edges[i]) << ',' << formatValue(rep.edges[i + 1]) << ','
        << b.n_detectable << ',' << b.n_matched << ',' << opt(b.eps_track) << ','
        << (b.eps_track.defined ? formatValue(b.eps_track.lo) : std::string("nan")) << ','
        << (b.eps_track.defined ? formatValue(b.eps_track.hi) : std::string("nan")) << ','
        << opt(b.eps_track_q) << ',' << opt(b.r_wrong_q) << ',' << opt(b.r_clone) << ','
        << opt(b.r_fake) << ',' << opt(b.hit_eff) << ',' << opt(b.hit_purity) << ','
        << (b.resolution ? formatValue(*b.resolution) : std::string("nan")) << '\n';
  }
  return out.str();
}

}  // namespace dctrack
