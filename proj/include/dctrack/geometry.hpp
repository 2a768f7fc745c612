#pragma once

#include <array>
#include <string>
#include <vector>

#include "dctrack/config.hpp"

namespace dctrack {

struct Point3 {
  double x = 0, y = 0, z = 0;
};

struct Segment3 {
  Point3 a, b;
};

enum class StereoClass { A, U, V };

/// One sense-wire layer. Radii and lengths in cm, twist in rad
/// (azimuthal rotation between the two wire ends, negative for U,
/// positive for V, zero for axial layers).
struct LayerSpec {
  int global_layer = 0;
  int superlayer = 0;
  int local_layer = 0;
  int n_wires = 0;
  double radius = 0;
  double half_length = 0;
  StereoClass stereo_class = StereoClass::A;
  double twist = 0;
};

struct WireId {
  int layer = 0;
  int cell = 0;
  friend bool operator==(const WireId&, const WireId&) = default;
  friend auto operator<=>(const WireId&, const WireId&) = default;
};

/// Per-superlayer description as read from a geometry config.
struct SuperlayerSpec {
  StereoClass stereo_class = StereoClass::A;
  std::vector<int> wires;        // per local layer
  double radius_min_mm = 0, radius_max_mm = 0;
  double length_min_mm = 0, length_max_mm = 0;
  double twist_cells = 3.0;      // |twist| in units of cell pitch, 0 for axial
};

/// Immutable cylindrical drift chamber wire layout. Thread-safe for reads.
class Geometry {
 public:
  explicit Geometry(const std::vector<SuperlayerSpec>& superlayers);

  /// The 43-layer, 6796-wire default layout.
  static Geometry standard();
  static std::vector<SuperlayerSpec> standardSuperlayers();

  /// Build from a key-value config; keys absent fall back to the default
  /// layout (slayer.N.stereo / wires / radius_mm / length_mm / twist_cells).
  static Geometry fromConfig(const KeyValueConfig& cfg);

  int nLayers() const { return static_cast<int>(layers_.size()); }
  int nWires() const { return n_wires_total_; }

  const LayerSpec& layerSpec(int global_layer) const;

  /// Endpoints at z = +half_length (east) and z = -half_length (west).
  std::pair<Point3, Point3> wireEndpoints(WireId w) const;
  Segment3 wireSegment(WireId w) const;

  /// Transverse midpoint of the wire; supplies the middleX/middleY features.
  std::pair<double, double> wireMidpoint(WireId w) const;

  /// Wire whose segment is closest to `position`; ties go to the lower cell.
  WireId nearestWire(int global_layer, const Point3& position) const;

  /// Recover the cell index of a hit from its stored wire midpoint.
  int cellFromMidpoint(int global_layer, double mid_x, double mid_y) const;

  /// Azimuthal pitch between adjacent wires (rad) and its arc length (cm).
  double pitchAngle(int global_layer) const;
  double cellPitch(int global_layer) const;
  double halfCellPitch(int global_layer) const { return 0.5 * cellPitch(global_layer); }

  double outerRadius() const { return layers_.back().radius; }

 private:
  void validate() const;

  std::vector<LayerSpec> layers_;
  int n_wires_total_ = 0;
};

double pointSegmentDistance(const Point3& p, const Segment3& seg);

}  // namespace dctrack
