#include "dctrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dctrack/errors.hpp"

namespace dctrack {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

StereoClass parseStereo(const std::string& s) {
  if (s == "A" || s == "a") return StereoClass::A;
  if (s == "U" || s == "u") return StereoClass::U;
  if (s == "V" || s == "v") return StereoClass::V;
  throw ConfigError("unknown stereo class: " + s);
}

double wrapAngle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

}  // namespace

double pointSegmentDistance(const Point3& p, const Segment3& seg) {
  const double dx = seg.b.x - seg.a.x;
  const double dy = seg.b.y - seg.a.y;
  const double dz = seg.b.z - seg.a.z;
  const double len2 = dx * dx + dy * dy + dz * dz;
  double t = 0.0;
  if (len2 > 0) {
    t = ((p.x - seg.a.x) * dx + (p.y - seg.a.y) * dy + (p.z - seg.a.z) * dz) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  const double cx = seg.a.x + t * dx - p.x;
  const double cy = seg.a.y + t * dy - p.y;
  const double cz = seg.a.z + t * dz - p.z;
  return std::sqrt(cx * cx + cy * cy + cz * cz);
}

std::vector<SuperlayerSpec> Geometry::standardSuperlayers() {
  auto make = [](StereoClass c, std::vector<int> wires, double r0, double r1,
                 double l0, double l1) {
    SuperlayerSpec s;
    s.stereo_class = c;
    s.wires = std::move(wires);
    s.radius_min_mm = r0;
    s.radius_max_mm = r1;
    s.length_min_mm = l0;
    s.length_max_mm = l1;
    s.twist_cells = (c == StereoClass::A) ? 0.0 : 3.0;
    return s;
  };
  return {
      make(StereoClass::U, {40, 44, 48, 56}, 79, 115, 780, 816),
      make(StereoClass::V, {64, 72, 80, 80}, 127, 162, 828, 864),
      make(StereoClass::A, {76, 76, 88, 88}, 197, 246, 1092, 1272),
      make(StereoClass::A, {100, 100, 112, 112}, 262, 311, 1442, 1612),
      make(StereoClass::A, {128, 128, 140, 140}, 327, 375, 1782, 1952),
      make(StereoClass::U, {160, 160, 160, 160}, 400, 448, 2174, 2192),
      make(StereoClass::V, {176, 176, 176, 176}, 464, 514, 2198, 2216),
      make(StereoClass::U, {208, 208, 208, 208}, 530, 579, 2222, 2240),
      make(StereoClass::V, {240, 240, 240, 240}, 595, 642, 2246, 2264),
      make(StereoClass::A, {256, 256, 256, 256}, 667, 716, 2276, 2294),
      make(StereoClass::A, {288, 288, 288}, 732, 763, 2300, 2306),
  };
}

Geometry::Geometry(const std::vector<SuperlayerSpec>& superlayers) {
  int global = 0;
  for (std::size_t sl = 0; sl < superlayers.size(); ++sl) {
    const auto& s = superlayers[sl];
    const int n_local = static_cast<int>(s.wires.size());
    if (n_local == 0) throw ConfigError("superlayer with no layers");
    for (int local = 0; local < n_local; ++local) {
      LayerSpec spec;
      spec.global_layer = global++;
      spec.superlayer = static_cast<int>(sl);
      spec.local_layer = local;
      spec.n_wires = s.wires[local];
      // Table radii/lengths are superlayer ranges; interpolate across
      // local layers (mm -> cm).
      const double f = (n_local > 1) ? static_cast<double>(local) / (n_local - 1) : 0.0;
      spec.radius = 0.1 * (s.radius_min_mm + f * (s.radius_max_mm - s.radius_min_mm));
      spec.half_length =
          0.05 * (s.length_min_mm + f * (s.length_max_mm - s.length_min_mm));
      spec.stereo_class = s.stereo_class;
      const double pitch = kTwoPi / spec.n_wires;
      switch (s.stereo_class) {
        case StereoClass::A: spec.twist = 0.0; break;
        case StereoClass::U: spec.twist = -s.twist_cells * pitch; break;
        case StereoClass::V: spec.twist = +s.twist_cells * pitch; break;
      }
      n_wires_total_ += spec.n_wires;
      layers_.push_back(spec);
    }
  }
  validate();
}

void Geometry::validate() const {
  double prev = 0.0;
  for (const auto& l : layers_) {
    if (l.n_wires <= 0) throw ConfigError("layer with no wires");
    if (l.radius <= prev)
      throw ConfigError("layer radii must strictly increase (layer " +
                        std::to_string(l.global_layer) + ")");
    prev = l.radius;
  }
}

Geometry Geometry::standard() { return Geometry(standardSuperlayers()); }

Geometry Geometry::fromConfig(const KeyValueConfig& cfg) {
  auto sls = standardSuperlayers();
  for (std::size_t i = 0; i < sls.size(); ++i) {
    const std::string p = "slayer." + std::to_string(i) + ".";
    if (cfg.has(p + "stereo"))
      sls[i].stereo_class = parseStereo(cfg.requireString(p + "stereo"));
    if (cfg.has(p + "wires")) {
      sls[i].wires.clear();
      for (double w : parseDoubleList(cfg.requireString(p + "wires")))
        sls[i].wires.push_back(static_cast<int>(w));
    }
    if (cfg.has(p + "radius_mm")) {
      const auto r = cfg.getDoubleList(p + "radius_mm", {});
      if (r.size() != 2) throw ConfigError(p + "radius_mm: expected min,max");
      sls[i].radius_min_mm = r[0];
      sls[i].radius_max_mm = r[1];
    }
    if (cfg.has(p + "length_mm")) {
      const auto l = cfg.getDoubleList(p + "length_mm", {});
      if (l.size() != 2) throw ConfigError(p + "length_mm: expected min,max");
      sls[i].length_min_mm = l[0];
      sls[i].length_max_mm = l[1];
    }
    sls[i].twist_cells = cfg.getDouble(p + "twist_cells", sls[i].twist_cells);
  }
  return Geometry(sls);
}

const LayerSpec& Geometry::layerSpec(int global_layer) const {
  if (global_layer < 0 || global_layer >= nLayers())
    throw DomainError("layer index out of range: " + std::to_string(global_layer));
  return layers_[global_layer];
}

double Geometry::pitchAngle(int global_layer) const {
  return kTwoPi / layerSpec(global_layer).n_wires;
}

double Geometry::cellPitch(int global_layer) const {
  const auto& l = layerSpec(global_layer);
  return kTwoPi * l.radius / l.n_wires;
}

std::pair<Point3, Point3> Geometry::wireEndpoints(WireId w) const {
  const auto& l = layerSpec(w.layer);
  if (w.cell < 0 || w.cell >= l.n_wires)
    throw DomainError("cell index out of range: " + std::to_string(w.cell));
  const double phi = w.cell * pitchAngle(w.layer);
  const double half_twist = 0.5 * l.twist;
  const Point3 east{l.radius * std::cos(phi + half_twist),
                    l.radius * std::sin(phi + half_twist), l.half_length};
  const Point3 west{l.radius * std::cos(phi - half_twist),
                    l.radius * std::sin(phi - half_twist), -l.half_length};
  return {east, west};
}

Segment3 Geometry::wireSegment(WireId w) const {
  const auto [east, west] = wireEndpoints(w);
  return {east, west};
}

std::pair<double, double> Geometry::wireMidpoint(WireId w) const {
  const auto [east, west] = wireEndpoints(w);
  return {0.5 * (east.x + west.x), 0.5 * (east.y + west.y)};
}

WireId Geometry::nearestWire(int global_layer, const Point3& position) const {
  const auto& l = layerSpec(global_layer);
  const double pitch = pitchAngle(global_layer);
  const int guess = static_cast<int>(std::lround(
      wrapAngle(std::atan2(position.y, position.x)) / pitch));

  // Stereo twist moves wires at most twist_cells/2 pitches off their
  // nominal azimuth, so a small window around the guess is exhaustive.
  constexpr int kWindow = 5;
  std::vector<int> cells;
  for (int d = -kWindow; d <= kWindow; ++d) {
    int c = (guess + d) % l.n_wires;
    if (c < 0) c += l.n_wires;
    cells.push_back(c);
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

  int best_cell = cells.front();
  double best = pointSegmentDistance(position, wireSegment({global_layer, cells.front()}));
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const double d = pointSegmentDistance(position, wireSegment({global_layer, cells[i]}));
    // Ascending scan with a strict-improvement margin keeps the lower
    // cell on ties.
    if (d < best - 1e-12) {
      best = d;
      best_cell = cells[i];
    }
  }
  return {global_layer, best_cell};
}

int Geometry::cellFromMidpoint(int global_layer, double mid_x, double mid_y) const {
  const auto& l = layerSpec(global_layer);
  const double pitch = pitchAngle(global_layer);
  int c = static_cast<int>(std::lround(wrapAngle(std::atan2(mid_y, mid_x)) / pitch));
  return c % l.n_wires;
}

}  // namespace dctrack
