#pragma once

// Overlapping-hexagon handoff geometry.
//
// Two pointy-top hexagonal cells of side (and circumradius) a overlap so that
// the common chord A'B' sits at distance L inside the side AB.  The terminal
// starts at P, on the circle of radius a, a distance d = (2 - sqrt 3) a / 2
// beyond AB.  R is the chord midpoint; the P->R axis is the reference
// direction for trajectory angles.
//
// Coordinates: the cell owning side AB is centred at the origin, AB is the
// vertical side at x = sqrt(3) a / 2, P = (a, 0), R = (sqrt(3) a / 2 - L, 0).

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "handoff/errors.hpp"

namespace handoff {

inline constexpr double kSqrt3 = std::numbers::sqrt3;
inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Cell radius a and overlap L, validated on construction.
class CellGeometry {
 public:
  CellGeometry(double cell_radius_m, double overlap_m)
      : cell_radius_m_(cell_radius_m), overlap_m_(overlap_m) {
    if (!std::isfinite(cell_radius_m) || cell_radius_m <= 0.0) {
      throw InvalidParameter("cell radius must be > 0, got " + std::to_string(cell_radius_m));
    }
    if (!std::isfinite(overlap_m) || overlap_m < 0.0) {
      throw InvalidParameter("overlap must be >= 0, got " + std::to_string(overlap_m));
    }
    if (overlap_m >= max_overlap(cell_radius_m)) {
      throw InvalidParameter("overlap " + std::to_string(overlap_m) +
                             " must be < sqrt(3)/2 * cell radius = " +
                             std::to_string(max_overlap(cell_radius_m)));
    }
  }

  double cell_radius_m() const noexcept { return cell_radius_m_; }
  double overlap_m() const noexcept { return overlap_m_; }

  // Exclusive upper bound on L: the chord must stay between side and centre.
  static constexpr double max_overlap(double cell_radius_m) noexcept {
    return kSqrt3 * cell_radius_m / 2.0;
  }

  friend bool operator==(const CellGeometry&, const CellGeometry&) = default;

 private:
  double cell_radius_m_;
  double overlap_m_;
};

struct DerivedGeometry {
  double d_m;           // P to hexagon side AB
  double pr_m;          // P to chord midpoint R, d + L
  double half_chord_m;  // A'R = a/2 + L/sqrt(3)
  double big_d_m;       // D = 2 PR
  double theta1_rad;    // half-angle of the crossing cone

  // Distance from P to either chord endpoint.
  double endpoint_distance_m() const { return std::hypot(pr_m, half_chord_m); }
};

inline DerivedGeometry derive_geometry(const CellGeometry& geom) {
  const double a = geom.cell_radius_m();
  const double overlap = geom.overlap_m();
  DerivedGeometry out{};
  out.d_m = (2.0 - kSqrt3) * a / 2.0;
  out.pr_m = out.d_m + overlap;
  out.half_chord_m = a / 2.0 + overlap / kSqrt3;
  out.big_d_m = 2.0 * out.pr_m;
  out.theta1_rad = std::atan2(out.half_chord_m, out.pr_m);
  return out;
}

/// Overlap L produced by two hexagons whose centres are `center_spacing_m` apart.
inline double overlap_from_spacing(double cell_radius_m, double center_spacing_m) {
  if (!std::isfinite(cell_radius_m) || cell_radius_m <= 0.0) {
    throw InvalidParameter("cell radius must be > 0");
  }
  if (!std::isfinite(center_spacing_m) || center_spacing_m <= 0.0) {
    throw InvalidParameter("centre spacing must be > 0");
  }
  const double tangent = kSqrt3 * cell_radius_m;
  if (center_spacing_m > tangent) {
    throw InvalidParameter("centre spacing " + std::to_string(center_spacing_m) +
                           " exceeds sqrt(3) * radius; cells do not overlap");
  }
  return (tangent - center_spacing_m) / 2.0;
}

inline double spacing_from_overlap(double cell_radius_m, double overlap_m) {
  return kSqrt3 * cell_radius_m - 2.0 * overlap_m;
}

struct LocalFrame {
  Vec2 p_point;
  std::array<Vec2, 2> chord_endpoints;  // A' (upper), B' (lower)
  Vec2 chord_midpoint;
};

inline LocalFrame make_frame(const CellGeometry& geom) {
  const DerivedGeometry dg = derive_geometry(geom);
  const double a = geom.cell_radius_m();
  const double chord_x = CellGeometry::max_overlap(a) - geom.overlap_m();
  LocalFrame frame;
  frame.p_point = {a, 0.0};
  frame.chord_midpoint = {chord_x, 0.0};
  frame.chord_endpoints = {Vec2{chord_x, dg.half_chord_m}, Vec2{chord_x, -dg.half_chord_m}};
  return frame;
}

// Relative slack on the segment parameter so rays through A' or B' count as
// crossing.
inline constexpr double kEndpointSlack = 1e-12;

/// Distance travelled from P along direction `beta_rad` (measured from the
/// P->R axis) until the segment A'B' is hit, or nullopt when the ray misses.
inline std::optional<double> ray_chord_crossing(const LocalFrame& frame, double beta_rad) {
  if (!std::isfinite(beta_rad) || beta_rad <= -kPi || beta_rad > kPi) {
    throw InvalidParameter("direction must lie in (-pi, pi], got " + std::to_string(beta_rad));
  }
  const Vec2 axis = frame.chord_midpoint - frame.p_point;
  const double axis_len = norm(axis);
  const Vec2 chord = frame.chord_endpoints[1] - frame.chord_endpoints[0];
  if (axis_len <= 0.0 || norm(chord) <= 0.0) {
    throw InvalidParameter("degenerate frame");
  }
  const Vec2 u = (1.0 / axis_len) * axis;
  const double c = std::cos(beta_rad);
  const double s = std::sin(beta_rad);
  const Vec2 dir{u.x * c - u.y * s, u.x * s + u.y * c};

  const double denom = cross(dir, chord);
  if (denom == 0.0) {
    return std::nullopt;
  }
  const Vec2 to_a = frame.chord_endpoints[0] - frame.p_point;
  const double travel = cross(to_a, chord) / denom;
  const double along = cross(to_a, dir) / denom;
  if (travel <= 0.0 || along < -kEndpointSlack || along > 1.0 + kEndpointSlack) {
    return std::nullopt;
  }
  return travel;
}

/// Centres of the seven-cell cluster: the origin, then six neighbours at
/// distance sqrt(3) a and angles k*60 degrees, one across each side.
inline std::array<Vec2, 7> cluster_centers(double cell_radius_m) {
  if (!std::isfinite(cell_radius_m) || cell_radius_m <= 0.0) {
    throw InvalidParameter("cell radius must be > 0");
  }
  std::array<Vec2, 7> centers{};
  const double spacing = kSqrt3 * cell_radius_m;
  for (int k = 0; k < 6; ++k) {
    const double angle = k * kPi / 3.0;
    centers[k + 1] = {spacing * std::cos(angle), spacing * std::sin(angle)};
  }
  return centers;
}

/// Vertices of a pointy-top hexagon (vertices at 30 + k*60 degrees), matching
/// the frame above: the side at +x is vertical at x = sqrt(3)/2 * a.
inline std::array<Vec2, 6> hexagon_vertices(Vec2 center, double cell_radius_m) {
  std::array<Vec2, 6> v{};
  for (int k = 0; k < 6; ++k) {
    const double angle = kPi / 6.0 + k * kPi / 3.0;
    v[k] = {center.x + cell_radius_m * std::cos(angle), center.y + cell_radius_m * std::sin(angle)};
  }
  return v;
}

}  // namespace handoff
