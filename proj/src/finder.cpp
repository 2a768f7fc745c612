#include "dctrack/finder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dctrack/circle_fit.hpp"
#include "dctrack/fitter.hpp"

namespace dctrack {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap2pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

double wrapPi(double a) {
  a = std::fmod(a + std::numbers::pi, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a - std::numbers::pi;
}

struct Peak {
  int phi_bin, kappa_bin, votes;
};

struct Candidate {
  double cx = 0, cy = 0, rho = 0;
  int charge = +1;
  double phi0 = 0, d_r = 0;
  int votes = 0;
  std::vector<std::size_t> axial_hits;
  std::vector<std::size_t> stereo_hits;
  // (arc length, z estimate) pairs for the stereo line fit
  std::vector<std::pair<double, double>> sz;
  double d_z = 0, tan_lambda = 0;
};

// First outgoing crossing of the circle with a cylinder of radius r;
// nullopt when the track never reaches it.
std::optional<std::pair<double, double>>  // (arc length, azimuth psi)
circleLayerCrossing(double cx, double cy, double rho, int charge, double phi0,
                    double r) {
  const double cnorm = std::hypot(cx, cy);
  if (cnorm < 1e-12) return std::nullopt;
  const double cos_arg = (r * r - cnorm * cnorm - rho * rho) / (2.0 * rho * cnorm);
  if (cos_arg < -1.0 || cos_arg > 1.0) return std::nullopt;
  const double psi_c = std::atan2(cy, cx);
  const double off = std::acos(cos_arg);
  const double psi1 = psi_c + off, psi2 = psi_c - off;
  const double s1 = rho * wrap2pi(charge * (phi0 - psi1));
  const double s2 = rho * wrap2pi(charge * (phi0 - psi2));
  if (s1 <= s2) return std::make_pair(s1, psi1);
  return std::make_pair(s2, psi2);
}

}  // namespace

FinderConfig FinderConfig::fromConfig(const KeyValueConfig& cfg) {
  FinderConfig f;
  f.b_field = cfg.getDouble("b_field", f.b_field);
  f.phi_bins = static_cast<int>(cfg.getLong("finder.phi_bins", f.phi_bins));
  f.kappa_bins = static_cast<int>(cfg.getLong("finder.kappa_bins", f.kappa_bins));
  f.kappa_max = cfg.getDouble("finder.kappa_max", f.kappa_max);
  f.min_votes = static_cast<int>(cfg.getLong("finder.min_votes", f.min_votes));
  f.nms_phi_window = static_cast<int>(cfg.getLong("finder.nms_phi_window", f.nms_phi_window));
  f.nms_kappa_window =
      static_cast<int>(cfg.getLong("finder.nms_kappa_window", f.nms_kappa_window));
  f.road_cell_pitches = cfg.getDouble("finder.road_cell_pitches", f.road_cell_pitches);
  f.drift_road = cfg.getDouble("finder.drift_road", f.drift_road);
  f.z_road = cfg.getDouble("finder.z_road", f.z_road);
  f.min_hits = static_cast<int>(cfg.getLong("finder.min_hits", f.min_hits));
  return f;
}

std::vector<TrackCandidate> findTracks(const Event& event, const Geometry& geometry,
                                       const FinderConfig& cfg) {
  const double a = bendingRadius(1.0, cfg.b_field);  // rho = a * pT

  std::vector<std::size_t> axial, stereo;
  for (std::size_t i = 0; i < event.hits.size(); ++i) {
    const auto& spec = geometry.layerSpec(event.hits[i].wire.layer);
    (spec.stereo_class == StereoClass::A ? axial : stereo).push_back(i);
  }
  if (axial.empty()) return {};

  // --- Hough accumulation over (phi0, kappa) on conformal-mapped axial hits.
  const int np = cfg.phi_bins, nk = cfg.kappa_bins;
  const double dphi = kTwoPi / np;
  const double dkappa = 2.0 * cfg.kappa_max / nk;
  std::vector<int> acc(static_cast<std::size_t>(np) * nk, 0);
  std::vector<double> cos_phi(np), sin_phi(np);
  for (int p = 0; p < np; ++p) {
    const double phi = (p + 0.5) * dphi;
    cos_phi[p] = std::cos(phi);
    sin_phi[p] = std::sin(phi);
  }

  auto kappaBin = [&](double kappa) {
    return static_cast<int>(std::floor((kappa + cfg.kappa_max) / dkappa));
  };

  for (const std::size_t i : axial) {
    const Hit& hit = event.hits[i];
    const double r2 = hit.middle_x * hit.middle_x + hit.middle_y * hit.middle_y;
    if (r2 <= 0) continue;
    const double u = hit.middle_x / r2, v = hit.middle_y / r2;
    // Cell quantization moves the implied curvature by ~2*a*pitch/r^2.
    const double pitch = geometry.cellPitch(hit.wire.layer);
    const int width = std::min(
        12, 1 + static_cast<int>(std::ceil(2.0 * a * pitch / r2 / dkappa)));
    for (int p = 0; p < np; ++p) {
      const double kap = -2.0 * a * (u * cos_phi[p] + v * sin_phi[p]);
      if (kap <= 0 || kap > cfg.kappa_max) continue;
      for (int sign = 0; sign < 2; ++sign) {
        const int kb = kappaBin(sign == 0 ? kap : -kap);
        for (int d = -width; d <= width; ++d) {
          const int b = kb + d;
          if (b >= 0 && b < nk) ++acc[static_cast<std::size_t>(p) * nk + b];
        }
      }
    }
  }

  // --- Peak extraction with non-maximum suppression (phi axis wraps).
  std::vector<Peak> peaks;
  for (int p = 0; p < np; ++p) {
    for (int k = 0; k < nk; ++k) {
      const int votes = acc[static_cast<std::size_t>(p) * nk + k];
      if (votes < cfg.min_votes) continue;
      const long flat = static_cast<long>(p) * nk + k;
      bool suppressed = false;
      for (int dp = -cfg.nms_phi_window; dp <= cfg.nms_phi_window && !suppressed; ++dp) {
        int pp = (p + dp) % np;
        if (pp < 0) pp += np;
        for (int dk = -cfg.nms_kappa_window; dk <= cfg.nms_kappa_window; ++dk) {
          const int kk = k + dk;
          if (kk < 0 || kk >= nk) continue;
          const long nflat = static_cast<long>(pp) * nk + kk;
          if (nflat == flat) continue;
          const int nv = acc[nflat];
          if (nv > votes || (nv == votes && nflat < flat)) {
            suppressed = true;
            break;
          }
        }
      }
      if (!suppressed) peaks.push_back({p, k, votes});
    }
  }
  std::sort(peaks.begin(), peaks.end(), [&](const Peak& x, const Peak& y) {
    if (x.votes != y.votes) return x.votes > y.votes;
    return static_cast<long>(x.phi_bin) * nk + x.kappa_bin <
           static_cast<long>(y.phi_bin) * nk + y.kappa_bin;
  });

  // --- Greedy candidate building in peak-strength order. Each peak claims
  // the unclaimed hits consistent with its circle; a peak that cannot form
  // a full candidate releases them again. The two mirror-curvature peaks of
  // one track carry equal votes, so whichever comes first claims the hits
  // (the charge is resolved from the hits, not from the bin sign) and the
  // other starves.
  std::vector<char> claimed(event.hits.size(), 0);
  std::vector<TrackCandidate> out;

  for (const Peak& peak : peaks) {
    const double kappa = -cfg.kappa_max + (peak.kappa_bin + 0.5) * dkappa;
    const double rho_seed = a / std::abs(kappa);
    const double phi_seed = (peak.phi_bin + 0.5) * dphi;

    // A short arc supports circles of either curvature sign almost equally
    // well, so every peak is tried together with its reflection (phi0 + pi,
    // center mirrored through the origin) and the better hypothesis wins.
    // refine_mode: 2 = full initial refinement (normal peak builds),
    // 1 = drift iteration only from the given circle, 0 = none before the
    // drift-consistency stage.
    auto build = [&](double phi0_seed, double rho0,
                     int refine_mode) -> std::optional<Candidate> {
    Candidate c;
    c.phi0 = wrap2pi(phi0_seed);
    c.rho = rho0;
    c.cx = -c.rho * std::cos(c.phi0);
    c.cy = -c.rho * std::sin(c.phi0);
    c.votes = peak.votes;

    auto gatherAxial = [&] {
      c.axial_hits.clear();
      for (const std::size_t i : axial) {
        if (claimed[i]) continue;
        const Hit& hit = event.hits[i];
        const double road = cfg.road_cell_pitches * geometry.cellPitch(hit.wire.layer);
        const double dist = std::hypot(hit.middle_x - c.cx, hit.middle_y - c.cy);
        if (std::abs(dist - c.rho) <= road) c.axial_hits.push_back(i);
      }
    };
    auto resolveCharge = [&] {
      const double psi_origin = std::atan2(-c.cy, -c.cx);
      double progression = 0;
      for (const std::size_t i : c.axial_hits) {
        const double psi =
            std::atan2(event.hits[i].middle_y - c.cy, event.hits[i].middle_x - c.cx);
        progression += wrapPi(psi - psi_origin);
      }
      c.charge = progression < 0 ? +1 : -1;
      c.phi0 = wrap2pi(psi_origin);
      c.d_r = c.charge * (std::hypot(c.cx, c.cy) - c.rho);
    };
    auto dropBeyondArc = [&] {
      std::vector<std::size_t> keep;
      for (const std::size_t i : c.axial_hits) {
        const Hit& hit = event.hits[i];
        const double psi =
            std::atan2(hit.middle_y - c.cy, hit.middle_x - c.cx);
        const double s = c.rho * wrap2pi(c.charge * (c.phi0 - psi));
        if (s <= 0.55 * kTwoPi * c.rho) keep.push_back(i);
      }
      c.axial_hits = std::move(keep);
    };
    auto refineCircle = [&](bool reinit = true) {
      // Wire midpoints alone are sagitta-limited (cell quantization is the
      // size of the sagitta for stiff tracks), so fold the drift distances
      // in: move each midpoint onto the track side suggested by the current
      // circle and refit. The beam-line origin enters with the weight of
      // the whole hit set to stabilize the curvature. Exactly collinear
      // midpoints (wire columns lined up with the track) defeat the plain
      // fit; the hypothesis circle then starts the drift iteration, whose
      // displaced points are no longer collinear. An initial fit whose
      // center falls on the far side of the beam line is reflected back so
      // the iteration starts inside this hypothesis' basin.
      const std::size_t n = c.axial_hits.size();
      std::vector<double> xs, ys;
      xs.reserve(2 * n);
      ys.reserve(2 * n);
      for (const std::size_t i : c.axial_hits) {
        xs.push_back(event.hits[i].middle_x);
        ys.push_back(event.hits[i].middle_y);
      }
      xs.resize(2 * n, 0.0);
      ys.resize(2 * n, 0.0);
      CircleFit cur{c.cx, c.cy, c.rho};
      if (auto fit = reinit ? taubinCircleFit(xs, ys) : std::nullopt) {
        if (fit->cx * c.cx + fit->cy * c.cy < 0) {
          fit->cx = -fit->cx;
          fit->cy = -fit->cy;
        }
        cur = *fit;
      }
      for (int iter = 0; iter < 6; ++iter) {
        for (std::size_t j = 0; j < n; ++j) {
          const Hit& hit = event.hits[c.axial_hits[j]];
          const double ux = hit.middle_x - cur.cx;
          const double uy = hit.middle_y - cur.cy;
          const double d = std::hypot(ux, uy);
          if (d < 1e-9) continue;
          const double sign = cur.radius >= d ? +1.0 : -1.0;
          xs[j] = hit.middle_x + sign * hit.raw_drift_dist * ux / d;
          ys[j] = hit.middle_y + sign * hit.raw_drift_dist * uy / d;
        }
        const auto fit = taubinCircleFit(xs, ys);
        if (!fit) break;
        cur = *fit;
      }
      c.cx = cur.cx;
      c.cy = cur.cy;
      c.rho = cur.radius;
    };

    gatherAxial();
    if (c.axial_hits.size() < 3) return std::nullopt;
    resolveCharge();
    dropBeyondArc();
    if (c.axial_hits.size() < 3) return std::nullopt;
    if (refine_mode == 2) {
      refineCircle();
      gatherAxial();  // the refined circle may pick up or shed hits
      if (c.axial_hits.size() < 3) return std::nullopt;
      refineCircle();  // let any newly gathered hits pull the circle first
    } else if (refine_mode == 1) {
      // Challenge rebuilds start from a circle that is nearly right but may
      // sit beyond the drift road; iterate the drift refinement from it
      // without the midpoint re-initialization, which would jump basins.
      refineCircle(false);
    }

    // Drift-consistency filter: a compromise circle through two overlapping
    // tracks (or through noise) passes the wide midpoint road but cannot
    // reproduce the drift distances; iterate drop-and-refit until stable.
    auto driftFilter = [&] {
      std::vector<std::size_t> keep;
      for (const std::size_t i : c.axial_hits) {
        const Hit& hit = event.hits[i];
        const double dist = std::hypot(hit.middle_x - c.cx, hit.middle_y - c.cy);
        if (std::abs(std::abs(dist - c.rho) - hit.raw_drift_dist) <= cfg.drift_road)
          keep.push_back(i);
      }
      const bool changed = keep.size() != c.axial_hits.size();
      c.axial_hits = std::move(keep);
      return changed;
    };
    for (int pass = 0; pass < 3; ++pass) {
      if (!driftFilter() || c.axial_hits.size() < 3) break;
      refineCircle();
    }
    if (c.axial_hits.size() < 3) return std::nullopt;
    gatherAxial();  // recover hits shed while the circle was still converging
    driftFilter();
    if (c.axial_hits.size() < 3) return std::nullopt;
    resolveCharge();
    dropBeyondArc();
    if (c.axial_hits.size() < 3) return std::nullopt;

    // --- Stereo attachment by transverse proximity at the layer crossing.
    // The stereo wire sweeps only a few cell pitches transversely over its
    // full length, so a plain projection magnifies a drift-distance offset
    // into tens of centimeters in z. Instead, intersect the wire with the
    // drift circle around the crossing point: each hit yields up to two z
    // candidates (left/right ambiguity) that are sharp in z.
    struct StereoZ {
      std::size_t hit;
      double s, z;
    };
    struct StereoFit {
      std::vector<std::size_t> hits;
      std::vector<std::pair<double, double>> sz;
      double d_z = 0, tan_lambda = 0;
    };
    auto stereoFit = [&](int charge) {
      StereoFit out;
      std::vector<StereoZ> zcands;
      for (const std::size_t i : stereo) {
        if (claimed[i]) continue;
        const Hit& hit = event.hits[i];
        const double road = cfg.road_cell_pitches * geometry.cellPitch(hit.wire.layer);
        const double layer_r = geometry.layerSpec(hit.wire.layer).radius;
        const auto crossing =
            circleLayerCrossing(c.cx, c.cy, c.rho, charge, c.phi0, layer_r);
        if (!crossing || crossing->first > 0.55 * kTwoPi * c.rho) continue;
        const double psi = crossing->second;
        const double xx = c.cx + c.rho * std::cos(psi);
        const double yy = c.cy + c.rho * std::sin(psi);
        const Segment3 seg = geometry.wireSegment(hit.wire);
        const double wx = seg.b.x - seg.a.x, wy = seg.b.y - seg.a.y;
        const double len2 = wx * wx + wy * wy;
        if (len2 <= 0) continue;
        const double t_min = ((xx - seg.a.x) * wx + (yy - seg.a.y) * wy) / len2;
        const double tc = std::clamp(t_min, 0.0, 1.0);
        const double res = std::hypot(seg.a.x + tc * wx - xx, seg.a.y + tc * wy - yy);
        if (res > road) continue;
        // |wire(t) - crossing|^2 = drift^2: quadratic in t.
        const double dx0 = seg.a.x - xx, dy0 = seg.a.y - yy;
        const double qb = 2.0 * (dx0 * wx + dy0 * wy);
        const double qc = dx0 * dx0 + dy0 * dy0 -
                          hit.raw_drift_dist * hit.raw_drift_dist;
        const double disc = qb * qb - 4.0 * len2 * qc;
        bool added = false;
        if (disc >= 0) {
          const double sq = std::sqrt(disc);
          for (const double t : {(-qb - sq) / (2.0 * len2), (-qb + sq) / (2.0 * len2)}) {
            if (t < -0.02 || t > 1.02) continue;
            const double tcl = std::clamp(t, 0.0, 1.0);
            zcands.push_back({i, crossing->first, seg.a.z + tcl * (seg.b.z - seg.a.z)});
            added = true;
          }
        }
        // Drift smaller than the closest approach (smearing): fall back to
        // the projection point, which is then the best z estimate available.
        if (!added && t_min >= -0.02 && t_min <= 1.02)
          zcands.push_back({i, crossing->first, seg.a.z + tc * (seg.b.z - seg.a.z)});
      }

      // Pick the z(s) line by pairwise consensus over the candidates, then
      // least-squares refit on the per-hit best candidates within z_road.
      // Candidates of one hit are consecutive in zcands; record the groups.
      std::vector<std::pair<std::size_t, std::size_t>> groups;  // [begin, end)
      for (std::size_t j = 0; j < zcands.size();) {
        std::size_t k = j + 1;
        while (k < zcands.size() && zcands[k].hit == zcands[j].hit) ++k;
        groups.emplace_back(j, k);
        j = k;
      }
      // Per-hit best residual against a line; > z_road means unusable.
      auto bestInGroup = [&](const std::pair<std::size_t, std::size_t>& g,
                             double slope, double icpt) {
        double best = 1e30;
        std::size_t arg = g.first;
        for (std::size_t j = g.first; j < g.second; ++j) {
          const double resid = std::abs(zcands[j].z - (icpt + slope * zcands[j].s));
          if (resid < best) {
            best = resid;
            arg = j;
          }
        }
        return std::make_pair(best, arg);
      };

      if (groups.size() < 2) return out;
      const double tol = 0.5 * cfg.z_road;
      int best_score = -1;
      double best_sum = 0, best_slope = 0, best_icpt = 0;
      for (std::size_t j = 0; j < zcands.size(); ++j) {
        for (std::size_t k = j + 1; k < zcands.size(); ++k) {
          if (zcands[j].hit == zcands[k].hit) continue;
          const double ds = zcands[k].s - zcands[j].s;
          if (std::abs(ds) < 2.0) continue;
          const double slope = (zcands[k].z - zcands[j].z) / ds;
          if (std::abs(slope) > 3.5) continue;
          const double icpt = zcands[j].z - slope * zcands[j].s;
          int score = 0;
          double sum = 0;
          for (const auto& g : groups) {
            const double resid = bestInGroup(g, slope, icpt).first;
            if (resid <= tol) {
              ++score;
              sum += resid;
            }
          }
          if (score > best_score || (score == best_score && sum < best_sum)) {
            best_score = score;
            best_sum = sum;
            best_slope = slope;
            best_icpt = icpt;
          }
        }
      }
      if (best_score < 2) return out;
      out.tan_lambda = best_slope;
      out.d_z = best_icpt;
      // Two passes: reselect per-hit best candidates against the current
      // line, refit, and repeat once with the refined line.
      for (int iter = 0; iter < 2; ++iter) {
        out.hits.clear();
        out.sz.clear();
        for (const auto& g : groups) {
          const auto [resid, arg] = bestInGroup(g, out.tan_lambda, out.d_z);
          if (resid <= cfg.z_road) {
            out.hits.push_back(zcands[arg].hit);
            out.sz.emplace_back(zcands[arg].s, zcands[arg].z);
          }
        }
        const std::size_t n = out.sz.size();
        if (n < 2) break;
        double sum_s = 0, sum_z = 0, sum_ss = 0, sum_sz = 0;
        for (const auto& [s, z] : out.sz) {
          sum_s += s;
          sum_z += z;
          sum_ss += s * s;
          sum_sz += s * z;
        }
        const double det = n * sum_ss - sum_s * sum_s;
        if (std::abs(det) < 1e-9) break;
        out.tan_lambda = (n * sum_sz - sum_s * sum_z) / det;
        out.d_z = (sum_z - out.tan_lambda * sum_s) / n;
      }
      return out;
    };

    // The axial circle cannot tell the two charges of a short arc apart, but
    // the arc length to each stereo layer can: the wrong hypothesis reaches
    // the layers near the end of the turn (mostly failing the arc cut) and
    // puts the z intercept far from the production point at the origin.
    auto adoptStereo = [&]() -> bool {
      StereoFit same = stereoFit(c.charge);
      StereoFit flipped = stereoFit(-c.charge);
      const bool flip =
          flipped.hits.size() > same.hits.size() ||
          (!same.hits.empty() && flipped.hits.size() == same.hits.size() &&
           std::abs(flipped.d_z) < std::abs(same.d_z));
      if (flip) {
        c.charge = -c.charge;
        c.d_r = -c.d_r;
        gatherAxial();
        driftFilter();
        dropBeyondArc();
        if (c.axial_hits.size() < 3) return false;
      }
      const StereoFit& zf = flip ? flipped : same;
      c.stereo_hits = zf.hits;
      c.sz = zf.sz;
      c.d_z = zf.d_z;
      c.tan_lambda = zf.tan_lambda;
      return true;
    };
    if (!adoptStereo()) return std::nullopt;

    // Forward tracks cross few axial layers and leave the radius poorly
    // constrained, which in turn distorts the crossing points the stereo z
    // estimates hang on. Once a z line exists, each stereo hit pins a point
    // along its wire; rebuilding the circle through those anchors roughly
    // doubles the lever arm. Kept only when it does not lose hits.
    if (c.axial_hits.size() < 10 && c.sz.size() >= 3) {
      std::vector<double> xs, ys;
      for (const std::size_t i : c.axial_hits) {
        const Hit& hit = event.hits[i];
        const double ux = hit.middle_x - c.cx, uy = hit.middle_y - c.cy;
        const double d = std::hypot(ux, uy);
        if (d < 1e-9) continue;
        const double sign = c.rho >= d ? 1.0 : -1.0;
        xs.push_back(hit.middle_x + sign * hit.raw_drift_dist * ux / d);
        ys.push_back(hit.middle_y + sign * hit.raw_drift_dist * uy / d);
      }
      for (std::size_t j = 0; j < c.stereo_hits.size(); ++j) {
        const Segment3 seg = geometry.wireSegment(event.hits[c.stereo_hits[j]].wire);
        if (std::abs(seg.b.z - seg.a.z) < 1e-9) continue;
        const double t =
            std::clamp((c.sz[j].second - seg.a.z) / (seg.b.z - seg.a.z), 0.0, 1.0);
        xs.push_back(seg.a.x + t * (seg.b.x - seg.a.x));
        ys.push_back(seg.a.y + t * (seg.b.y - seg.a.y));
      }
      const std::size_t n_pts = xs.size();
      xs.resize(2 * n_pts, 0.0);  // beam-line origin, weighted as the hits
      ys.resize(2 * n_pts, 0.0);
      const auto anchored = taubinCircleFit(xs, ys);
      if (anchored && anchored->cx * c.cx + anchored->cy * c.cy > 0) {
        const Candidate backup = c;
        c.cx = anchored->cx;
        c.cy = anchored->cy;
        c.rho = anchored->radius;
        gatherAxial();
        driftFilter();
        bool ok = c.axial_hits.size() >= 3;
        if (ok) {
          resolveCharge();
          dropBeyondArc();
          ok = c.axial_hits.size() >= 3;
        }
        if (ok) ok = adoptStereo();
        if (!ok || c.axial_hits.size() + c.stereo_hits.size() <
                       backup.axial_hits.size() + backup.stereo_hits.size())
          c = backup;
      }
    }

    const std::size_t n_hits = c.axial_hits.size() + c.stereo_hits.size();
    if (static_cast<int>(n_hits) < cfg.min_hits) return std::nullopt;
    return c;
    };

    // A clearly larger hit count wins outright. Near-equal counts are
    // arbitrated by a helix fit of each hypothesis on its own hits: the
    // wrong-charge seed cannot reach the true minimum, so its chi2 stays
    // orders of magnitude higher.
    auto quality = [&](const Candidate& h) {
      HelixParams seed;
      seed.d_r = h.d_r;
      seed.phi0 = h.phi0;
      seed.kappa = h.charge * a / h.rho;
      seed.d_z = h.d_z;
      seed.tan_lambda = h.tan_lambda;
      std::vector<std::size_t> ids = h.axial_hits;
      ids.insert(ids.end(), h.stereo_hits.begin(), h.stereo_hits.end());
      FitterConfig fit_cfg;
      fit_cfg.b_field = cfg.b_field;
      const FitResult fit = fitHelix(event, ids, seed, geometry, fit_cfg);
      return fit.chi2 / std::max(fit.ndf, 1);
    };
    auto better = [&](std::optional<Candidate> x, std::optional<Candidate> y) {
      if (!y) return x;
      if (!x) return y;
      const std::size_t nx = x->axial_hits.size() + x->stereo_hits.size();
      const std::size_t ny = y->axial_hits.size() + y->stereo_hits.size();
      if (2 * ny > 3 * nx) return y;
      if (2 * nx > 3 * ny) return x;
      return quality(*y) < quality(*x) ? y : x;
    };

    std::optional<Candidate> cand =
        better(build(phi_seed, rho_seed, 2),
               build(phi_seed + std::numbers::pi, rho_seed, 2));
    // Reflection challenge: a short arc's drift pattern is reproduced almost
    // exactly by the circle reflected across the line its wire midpoints lie
    // on, and the refinement can even converge into that impostor's basin
    // from both starting hypotheses. The reflection of the winner's own
    // circle is rebuilt as a candidate and must be beaten; the true circle
    // collects the full stereo complement, the impostor only scraps.
    if (cand && !cand->axial_hits.empty()) {
      double sxx = 0, sxy = 0, syy = 0;
      for (const std::size_t i : cand->axial_hits) {
        const Hit& hit = event.hits[i];
        sxx += hit.middle_x * hit.middle_x;
        sxy += hit.middle_x * hit.middle_y;
        syy += hit.middle_y * hit.middle_y;
      }
      const double half = 0.5 * (sxx + syy);
      const double disc =
          std::sqrt(std::max(0.0, half * half - (sxx * syy - sxy * sxy)));
      double vx = sxy, vy = half + disc - sxx;  // leading principal axis
      if (std::hypot(vx, vy) < 1e-9 * (sxx + syy)) {
        vx = sxx >= syy ? 1.0 : 0.0;
        vy = sxx >= syy ? 0.0 : 1.0;
      }
      const double vn = std::hypot(vx, vy);
      vx /= vn;
      vy /= vn;
      const double proj = cand->cx * vx + cand->cy * vy;
      const double rcx = 2.0 * proj * vx - cand->cx;
      const double rcy = 2.0 * proj * vy - cand->cy;
      const double rphi = std::atan2(-rcy, -rcx);
      for (const int mode : {0, 1, 2})
        cand = better(cand, build(rphi, cand->rho, mode));
    }
    if (!cand) continue;
    const Candidate& c = *cand;

    for (const std::size_t i : c.axial_hits) claimed[i] = 1;
    for (const std::size_t i : c.stereo_hits) claimed[i] = 1;

    TrackCandidate tc;
    tc.hit_ids = c.axial_hits;
    tc.hit_ids.insert(tc.hit_ids.end(), c.stereo_hits.begin(), c.stereo_hits.end());
    std::sort(tc.hit_ids.begin(), tc.hit_ids.end());
    tc.seed.d_r = c.d_r;
    tc.seed.phi0 = c.phi0;
    tc.seed.kappa = c.charge * a / c.rho;
    tc.seed.d_z = c.d_z;
    tc.seed.tan_lambda = c.tan_lambda;
    tc.quality = c.votes;
    out.push_back(std::move(tc));
  }
  return out;
}

int seedCharge(const TrackCandidate& candidate) { return candidate.seed.charge(); }

}  // namespace dctrack
