#pragma once

#include <optional>

#include "dctrack/geometry.hpp"

namespace dctrack {

/// Five track parameters at the POCA to the origin.
///   d_r        signed transverse distance of the POCA from the origin, cm.
///              Sign follows (d x p)_z with d the origin->POCA vector.
///   phi0       azimuth of the POCA as seen from the helix center, [0, 2pi).
///   kappa      signed 1/pT, (GeV/c)^-1; sign(kappa) is the charge.
///   d_z        z of the POCA, cm.
///   tan_lambda slope pz/pT.
struct HelixParams {
  double d_r = 0;
  double phi0 = 0;
  double kappa = 0;
  double d_z = 0;
  double tan_lambda = 0;

  int charge() const { return kappa >= 0 ? +1 : -1; }
  double pt() const { return 1.0 / std::abs(kappa); }
};

struct Vector3 {
  double x = 0, y = 0, z = 0;
};

struct KinematicState {
  Point3 position;   // cm
  Vector3 momentum;  // GeV/c
  int charge = +1;
};

/// Helix radius in cm for transverse momentum in GeV/c and field in tesla.
double bendingRadius(double pt, double b_field);

/// Transverse circle underlying a helix: center (cm) and radius (cm).
struct HelixCircle {
  double cx = 0, cy = 0, radius = 0;
};
HelixCircle helixCircle(const HelixParams& h, double b_field);

HelixParams helixFromState(const KinematicState& s, double b_field);
KinematicState stateFromHelix(const HelixParams& h, double b_field);

/// Point on the helix at transverse arc length s_2d from the POCA
/// (positive along the direction of flight).
Point3 pointAtArclength(const HelixParams& h, double s_2d, double b_field);

/// Track direction (unit tangent) at transverse arc length s_2d.
Vector3 directionAtArclength(const HelixParams& h, double s_2d, double b_field);

struct WireApproach {
  double s_star = 0;  // transverse arc length of closest approach, cm
  double doca = 0;    // distance of closest approach to the wire, cm
  int side = +1;      // sign of (track direction x track->wire)_z
};

struct ArcWindow {
  double s_min = 0;
  double s_max = 0;
};

/// Closest approach of the helix to a wire segment within an arc-length
/// window (default: the first outgoing turn). Returns nullopt when the
/// minimum sits on the window edge, i.e. no genuine approach inside.
std::optional<WireApproach> pocaToWire(const HelixParams& h, const Segment3& wire,
                                       double b_field,
                                       std::optional<ArcWindow> window = std::nullopt,
                                       int coarse_samples = 128);

}  // namespace dctrack
