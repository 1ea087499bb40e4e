#pragma once

// Closed-form handoff model: speed and direction densities, false handoff
// initiation probability, crossing time with its pdf and cdf, and the
// handoff failure probability.
//
// Throughout, D = 2 PR = (2 - sqrt 3) a + 2L.  A terminal leaving P at an
// angle beta inside the cone (-theta1, theta1) reaches the chord after
// t = PR sec(beta) / v.

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "handoff/errors.hpp"
#include "handoff/geometry.hpp"

namespace handoff {

struct FixedSpeed {
  double speed_mps;
};

struct UniformSpeed {
  double vmin_mps;
  double vmax_mps;
};

/// Either a fixed speed V or V uniform on [Vmin, Vmax].
class SpeedModel {
 public:
  static SpeedModel fixed(double speed_mps) {
    if (!std::isfinite(speed_mps) || speed_mps <= 0.0) {
      throw InvalidParameter("speed must be > 0, got " + std::to_string(speed_mps));
    }
    return SpeedModel(FixedSpeed{speed_mps});
  }

  static SpeedModel uniform(double vmin_mps, double vmax_mps) {
    if (!std::isfinite(vmin_mps) || !std::isfinite(vmax_mps) || vmin_mps <= 0.0 ||
        vmin_mps >= vmax_mps) {
      throw InvalidParameter("uniform speed needs 0 < vmin < vmax, got [" +
                             std::to_string(vmin_mps) + ", " + std::to_string(vmax_mps) + "]");
    }
    return SpeedModel(UniformSpeed{vmin_mps, vmax_mps});
  }

  bool is_fixed() const noexcept { return std::holds_alternative<FixedSpeed>(value_); }
  bool is_uniform() const noexcept { return std::holds_alternative<UniformSpeed>(value_); }
  const FixedSpeed& as_fixed() const { return std::get<FixedSpeed>(value_); }
  const UniformSpeed& as_uniform() const { return std::get<UniformSpeed>(value_); }

  double min_mps() const {
    return is_fixed() ? as_fixed().speed_mps : as_uniform().vmin_mps;
  }
  double max_mps() const {
    return is_fixed() ? as_fixed().speed_mps : as_uniform().vmax_mps;
  }

 private:
  explicit SpeedModel(std::variant<FixedSpeed, UniformSpeed> v) : value_(v) {}
  std::variant<FixedSpeed, UniformSpeed> value_;
};

/// Uniform speed density on the open interval (Vmin, Vmax).
inline double speed_pdf(double v, const SpeedModel& model) {
  if (!model.is_uniform()) {
    throw InvalidParameter("speed_pdf requires a uniform speed model");
  }
  const auto [vmin, vmax] = model.as_uniform();
  return (v > vmin && v < vmax) ? 1.0 / (vmax - vmin) : 0.0;
}

inline double speed_pdf(double v, double vmin_mps, double vmax_mps) {
  return speed_pdf(v, SpeedModel::uniform(vmin_mps, vmax_mps));
}

inline double direction_pdf(double theta_rad) {
  return (theta_rad > -kPi && theta_rad <= kPi) ? 1.0 / (2.0 * kPi) : 0.0;
}

/// P_a = 1 - theta1 / pi.
inline double false_handoff_probability(const CellGeometry& geom) {
  return 1.0 - derive_geometry(geom).theta1_rad / kPi;
}

struct CrossingTimeSupport {
  double t_min_s;  // perpendicular path, D / (2V)
  double t_max_s;  // path through a chord endpoint
};

namespace detail {
inline void require_speed(double v) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw OutOfDomain("speed must be > 0, got " + std::to_string(v));
  }
}
}  // namespace detail

inline CrossingTimeSupport crossing_time_support(const CellGeometry& geom, double v) {
  detail::require_speed(v);
  const DerivedGeometry dg = derive_geometry(geom);
  return {dg.pr_m / v, dg.endpoint_distance_m() / v};
}

inline double crossing_time(const CellGeometry& geom, double v, double beta_rad) {
  detail::require_speed(v);
  const DerivedGeometry dg = derive_geometry(geom);
  if (!(std::abs(beta_rad) < dg.theta1_rad)) {
    throw OutOfDomain("direction " + std::to_string(beta_rad) +
                      " is outside the crossing cone of half-angle " +
                      std::to_string(dg.theta1_rad));
  }
  return dg.big_d_m / (2.0 * v * std::cos(beta_rad));
}

/// f_t(t) = D / (theta1 t sqrt((2vt)^2 - D^2)) on (t_min, t_max), both roots
/// +-beta of t = g(beta) folded together.
inline double crossing_time_pdf(const CellGeometry& geom, double v, double t) {
  detail::require_speed(v);
  const DerivedGeometry dg = derive_geometry(geom);
  const double t_min = dg.pr_m / v;
  const double t_max = dg.endpoint_distance_m() / v;
  if (!(t > t_min && t < t_max)) {
    return 0.0;
  }
  const double two_vt = 2.0 * v * t;
  const double root = std::sqrt((two_vt - dg.big_d_m) * (two_vt + dg.big_d_m));
  if (root == 0.0) {
    return 0.0;
  }
  return dg.big_d_m / (dg.theta1_rad * t * root);
}

/// P(t < tau): 0 up to t_min, arccos(D / (2 v tau)) / theta1 in between,
/// 1 from t_max on.
inline double crossing_time_cdf(const CellGeometry& geom, double v, double tau) {
  detail::require_speed(v);
  if (!(tau >= 0.0)) {
    throw OutOfDomain("delay must be >= 0, got " + std::to_string(tau));
  }
  const DerivedGeometry dg = derive_geometry(geom);
  const double t_min = dg.pr_m / v;
  const double t_max = dg.endpoint_distance_m() / v;
  if (tau <= t_min) {
    return 0.0;
  }
  if (tau >= t_max) {
    return 1.0;
  }
  const double p = std::acos(dg.big_d_m / (2.0 * v * tau)) / dg.theta1_rad;
  return std::clamp(p, 0.0, 1.0);
}

/// Probability that the terminal crosses the chord before signalling of
/// duration tau completes.
inline double handoff_failure_probability(const CellGeometry& geom, double v, double tau) {
  return crossing_time_cdf(geom, v, tau);
}

/// Failure probability averaged over V ~ U[Vmin, Vmax].
///
/// P_f(V) is 0 for V <= PR / tau, 1 for V >= |PA'| / tau, and smooth in
/// between apart from a square-root edge at the lower breakpoint; the
/// integral is split at both breakpoints.
inline double expected_failure_over_speed(const CellGeometry& geom, const SpeedModel& model,
                                          double tau) {
  if (!model.is_uniform()) {
    throw InvalidParameter("expected_failure_over_speed requires a uniform speed model");
  }
  if (!(tau >= 0.0)) {
    throw OutOfDomain("delay must be >= 0, got " + std::to_string(tau));
  }
  const auto [vmin, vmax] = model.as_uniform();
  if (tau == 0.0) {
    return 0.0;
  }
  const DerivedGeometry dg = derive_geometry(geom);
  const double v_low = dg.pr_m / tau;                    // below: P_f = 0
  const double v_high = dg.endpoint_distance_m() / tau;  // above: P_f = 1

  double integral = 0.0;
  const double lo = std::clamp(v_low, vmin, vmax);
  const double hi = std::clamp(v_high, vmin, vmax);
  if (hi > lo) {
    auto integrand = [&](double v) {
      if (v <= v_low) return 0.0;
      const double c = std::min(1.0, dg.pr_m / (v * tau));
      return std::acos(c) / dg.theta1_rad;
    };
    boost::math::quadrature::tanh_sinh<double> integrator;
    integral += integrator.integrate(integrand, lo, hi, 1e-12);
  }
  integral += std::max(0.0, vmax - std::max(hi, vmin));
  return std::clamp(integral / (vmax - vmin), 0.0, 1.0);
}

struct AdaptResult {
  double overlap_m;
  double false_handoff;  // P_a at the solved overlap
  double failure;        // P_f at the solved overlap
  int iterations;
};

/// Overlap L at which the failure probability drops to `target_pf`.
///
/// Bisection on [0, sqrt(3)a/2 - 1e-9 a]; L -> P_f is nonincreasing, so a
/// target above P_f(0) is unreachable, as is one below P_f at the far edge.
inline AdaptResult adapt_overlap(double cell_radius_m, double v, double tau, double target_pf) {
  detail::require_speed(v);
  if (!(tau > 0.0)) {
    throw OutOfDomain("delay must be > 0, got " + std::to_string(tau));
  }
  if (!(target_pf > 0.0)) {
    throw NotBracketed("target failure probability must be > 0");
  }
  auto failure_at = [&](double overlap) {
    return handoff_failure_probability(CellGeometry(cell_radius_m, overlap), v, tau);
  };
  auto result_at = [&](double overlap, int iters) {
    const CellGeometry g(cell_radius_m, overlap);
    return AdaptResult{overlap, false_handoff_probability(g),
                       handoff_failure_probability(g, v, tau), iters};
  };

  double lo = 0.0;
  double hi = CellGeometry::max_overlap(cell_radius_m) - 1e-9 * cell_radius_m;
  const double f_lo = failure_at(lo);
  const double f_hi = failure_at(hi);
  if (target_pf > f_lo) {
    throw NotBracketed("target " + std::to_string(target_pf) +
                       " exceeds the failure probability without overlap (" +
                       std::to_string(f_lo) + ")");
  }
  if (target_pf == f_lo) {
    return result_at(lo, 0);
  }
  if (target_pf < f_hi) {
    throw NotBracketed("target " + std::to_string(target_pf) +
                       " is below the failure probability at maximum overlap (" +
                       std::to_string(f_hi) + ")");
  }
  if (target_pf == f_hi) {
    return result_at(hi, 0);
  }

  // Invariant: P_f(lo) > target >= P_f(hi).
  int iters = 0;
  for (; iters < 200; ++iters) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (failure_at(mid) > target_pf) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return result_at(hi, iters);
}

}  // namespace handoff
