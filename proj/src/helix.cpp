#include "dctrack/helix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dctrack/errors.hpp"

namespace dctrack {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// pT[GeV/c] = 0.299792458 * B[T] * R[m]
constexpr double kCurvatureConst = 0.299792458;

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

struct SegClosest {
  Point3 point;
  double dist;
};

SegClosest closestOnSegment(const Point3& p, const Segment3& seg) {
  const double dx = seg.b.x - seg.a.x;
  const double dy = seg.b.y - seg.a.y;
  const double dz = seg.b.z - seg.a.z;
  const double len2 = dx * dx + dy * dy + dz * dz;
  double t = 0.0;
  if (len2 > 0) {
    t = ((p.x - seg.a.x) * dx + (p.y - seg.a.y) * dy + (p.z - seg.a.z) * dz) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  const Point3 q{seg.a.x + t * dx, seg.a.y + t * dy, seg.a.z + t * dz};
  const double ex = q.x - p.x, ey = q.y - p.y, ez = q.z - p.z;
  return {q, std::sqrt(ex * ex + ey * ey + ez * ez)};
}

}  // namespace

double bendingRadius(double pt, double b_field) {
  if (pt <= 0) throw DomainError("bendingRadius: pT must be positive");
  if (b_field <= 0) throw DomainError("bendingRadius: B must be positive");
  return 100.0 * pt / (kCurvatureConst * b_field);  // m -> cm
}

HelixCircle helixCircle(const HelixParams& h, double b_field) {
  const double rho = bendingRadius(h.pt(), b_field);
  const double q = h.charge();
  const double c = -(q * h.d_r + rho);
  return {c * std::cos(h.phi0), c * std::sin(h.phi0), rho};
}

HelixParams helixFromState(const KinematicState& s, double b_field) {
  const double pt = std::hypot(s.momentum.x, s.momentum.y);
  if (pt <= 0) throw DomainError("helixFromState: zero transverse momentum");
  if (s.charge != 1 && s.charge != -1)
    throw DomainError("helixFromState: charge must be +-1");
  const double q = s.charge;
  const double rho = bendingRadius(pt, b_field);

  // Center of the transverse circle lies along q * (p_hat x z_hat).
  const double phx = s.momentum.x / pt, phy = s.momentum.y / pt;
  const double cx = s.position.x + q * rho * phy;
  const double cy = s.position.y - q * rho * phx;
  const double cnorm = std::hypot(cx, cy);

  double phi0;
  if (cnorm > 1e-12) {
    phi0 = wrap2pi(std::atan2(-cy, -cx));
  } else {
    // Circle centered on the origin: POCA azimuth is degenerate; keep the
    // azimuth of the current position.
    phi0 = wrap2pi(std::atan2(s.position.y - cy, s.position.x - cx));
  }

  HelixParams h;
  h.phi0 = phi0;
  h.kappa = q / pt;
  h.tan_lambda = s.momentum.z / pt;
  h.d_r = q * (cnorm - rho);

  // Arc length from the POCA to the given state fixes d_z.
  const double psi_now = std::atan2(s.position.y - cy, s.position.x - cx);
  const double s_now = q * rho * wrapPi(phi0 - psi_now);
  h.d_z = s.position.z - s_now * h.tan_lambda;
  return h;
}

KinematicState stateFromHelix(const HelixParams& h, double b_field) {
  (void)b_field;
  const double q = h.charge();
  const double pt = h.pt();
  KinematicState s;
  s.charge = static_cast<int>(q);
  s.position = {-q * h.d_r * std::cos(h.phi0), -q * h.d_r * std::sin(h.phi0), h.d_z};
  s.momentum = {pt * q * std::sin(h.phi0), -pt * q * std::cos(h.phi0),
                pt * h.tan_lambda};
  return s;
}

Point3 pointAtArclength(const HelixParams& h, double s_2d, double b_field) {
  const HelixCircle c = helixCircle(h, b_field);
  const double q = h.charge();
  const double psi = h.phi0 - q * s_2d / c.radius;
  return {c.cx + c.radius * std::cos(psi), c.cy + c.radius * std::sin(psi),
          h.d_z + s_2d * h.tan_lambda};
}

Vector3 directionAtArclength(const HelixParams& h, double s_2d, double b_field) {
  const HelixCircle c = helixCircle(h, b_field);
  const double q = h.charge();
  const double psi = h.phi0 - q * s_2d / c.radius;
  const double phi_p = psi - q * std::numbers::pi / 2.0;
  const double norm = std::sqrt(1.0 + h.tan_lambda * h.tan_lambda);
  return {std::cos(phi_p) / norm, std::sin(phi_p) / norm, h.tan_lambda / norm};
}

std::optional<WireApproach> pocaToWire(const HelixParams& h, const Segment3& wire,
                                       double b_field,
                                       std::optional<ArcWindow> window,
                                       int coarse_samples) {
  const HelixCircle circ = helixCircle(h, b_field);
  const double turn = kTwoPi * circ.radius;
  double lo = 0.0, hi = turn;
  if (window) {
    lo = window->s_min;
    hi = window->s_max;
  }
  if (!(hi > lo)) throw DomainError("pocaToWire: empty arc window");
  const bool periodic = (hi - lo) >= turn * (1.0 - 1e-12);

  const auto dist = [&](double s) {
    return closestOnSegment(pointAtArclength(h, s, b_field), wire).dist;
  };

  const int n = std::max(coarse_samples, 8);
  const double step = (hi - lo) / n;
  int best_i = 0;
  double best_d = dist(lo);
  for (int i = 1; i <= n; ++i) {
    const double d = dist(lo + i * step);
    if (d < best_d) {
      best_d = d;
      best_i = i;
    }
  }

  double a, b;
  if (periodic) {
    a = lo + (best_i - 1) * step;
    b = lo + (best_i + 1) * step;
  } else {
    if (best_i == 0 && dist(lo) < dist(lo + step)) return std::nullopt;
    if (best_i == n && dist(hi) < dist(hi - step)) return std::nullopt;
    a = std::max(lo, lo + (best_i - 1) * step);
    b = std::min(hi, lo + (best_i + 1) * step);
  }

  // Golden-section refinement; the distance is unimodal on the bracket.
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = dist(x1), f2 = dist(x2);
  while (b - a > 1e-8) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = dist(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = dist(x2);
    }
  }
  double s_star = 0.5 * (a + b);
  if (periodic) s_star = lo + std::fmod(s_star - lo + turn, turn);

  WireApproach out;
  out.s_star = s_star;
  const Point3 p = pointAtArclength(h, s_star, b_field);
  const SegClosest c = closestOnSegment(p, wire);
  out.doca = c.dist;
  const Vector3 dir = directionAtArclength(h, s_star, b_field);
  const double cross = dir.x * (c.point.y - p.y) - dir.y * (c.point.x - p.x);
  out.side = cross >= 0 ? +1 : -1;
  return out;
}

}  // namespace dctrack
