#pragma once

// Parameter sweeps over the closed-form model with optional Monte Carlo
// overlay columns.
//
// A sweep has one swept axis and a set of series.  Series are the cartesian
// product of the non-swept parameter lists, in the order cell radius,
// overlap, speed, delay.  Rows are emitted series-major, then by axis point.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "handoff/analytic.hpp"
#include "handoff/errors.hpp"
#include "handoff/montecarlo.hpp"
#include "handoff/rng.hpp"
#include "handoff/version.hpp"

namespace handoff {

enum class SweepKind { FalseVsOverlap, FailureVsSpeed, FailureVsDelay };

inline std::string_view to_string(SweepKind k) {
  switch (k) {
    case SweepKind::FalseVsOverlap: return "false_vs_overlap";
    case SweepKind::FailureVsSpeed: return "failure_vs_speed";
    case SweepKind::FailureVsDelay: return "failure_vs_delay";
  }
  return "unknown";
}

inline std::optional<SweepKind> sweep_kind_from_string(std::string_view s) {
  if (s == "false_vs_overlap") return SweepKind::FalseVsOverlap;
  if (s == "failure_vs_speed") return SweepKind::FailureVsSpeed;
  if (s == "failure_vs_delay") return SweepKind::FailureVsDelay;
  return std::nullopt;
}

struct SweepAxis {
  double start = 0.0;
  double stop = 1.0;
  std::size_t steps = 41;
  // For false_vs_overlap only: start/stop are fractions of sqrt(3)/2 * a.
  bool relative = false;

  double at(std::size_t i) const {
    if (i + 1 == steps) return stop;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
};

struct SweepSpec {
  SweepKind kind = SweepKind::FalseVsOverlap;
  std::vector<double> cell_radii_m{1000.0};
  std::vector<double> overlaps_m{0.0};
  std::vector<double> speeds_mps{50.0};
  std::vector<double> delays_s{3.0};
  SweepAxis axis;
  std::optional<mc::SimControls> mc;
};

struct Provenance {
  std::string spec;
  std::optional<std::uint64_t> seed;
  std::string version;
};

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> series_labels;
  std::size_t x_column = 0;
  std::size_t y_column = 0;
  Provenance provenance;
};

namespace detail {

inline std::string join(const std::vector<double>& xs) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ";" : "") << xs[i];
  return os.str();
}

struct SeriesPoint {
  double a, overlap, speed, delay;
};

inline std::string series_label(SweepKind kind, const SeriesPoint& p) {
  std::ostringstream os;
  os << "a=" << p.a;
  if (kind != SweepKind::FalseVsOverlap) {
    os << " L=" << p.overlap;
    os << (kind == SweepKind::FailureVsSpeed ? " tau=" : " V=")
       << (kind == SweepKind::FailureVsSpeed ? p.delay : p.speed);
  }
  return os.str();
}

}  // namespace detail

/// Single-line echo of a sweep specification, recorded with every table.
inline std::string describe(const SweepSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << "kind=" << to_string(spec.kind) << " cell_radii_m=" << detail::join(spec.cell_radii_m)
     << " overlaps_m=" << detail::join(spec.overlaps_m)
     << " speeds_mps=" << detail::join(spec.speeds_mps)
     << " delays_s=" << detail::join(spec.delays_s) << " axis=" << spec.axis.start << ":"
     << spec.axis.stop << ":" << spec.axis.steps << (spec.axis.relative ? ":relative" : "");
  if (spec.mc) {
    os << " mc.samples=" << spec.mc->samples << " mc.seed=" << spec.mc->seed
       << " mc.batches=" << spec.mc->batches;
  }
  return os.str();
}

inline void validate(const SweepSpec& spec) {
  if (spec.axis.steps < 2) throw InvalidParameter("sweep axis needs steps >= 2");
  if (!std::isfinite(spec.axis.start) || !std::isfinite(spec.axis.stop)) {
    throw InvalidParameter("sweep axis bounds must be finite");
  }
  if (spec.axis.relative && spec.kind != SweepKind::FalseVsOverlap) {
    throw InvalidParameter("relative axis is only defined for false_vs_overlap");
  }
  auto nonempty = [](const std::vector<double>& v, const char* name) {
    if (v.empty()) throw InvalidParameter(std::string(name) + " must not be empty");
  };
  nonempty(spec.cell_radii_m, "cell_radii_m");
  if (spec.kind != SweepKind::FalseVsOverlap) {
    nonempty(spec.overlaps_m, "overlaps_m");
    if (spec.kind == SweepKind::FailureVsSpeed) nonempty(spec.delays_s, "delays_s");
    if (spec.kind == SweepKind::FailureVsDelay) nonempty(spec.speeds_mps, "speeds_mps");
  }
  if (spec.mc) spec.mc->validate();
}

inline SweepTable run_sweep(const SweepSpec& spec, const mc::Execution& exec = {}) {
  validate(spec);
  SweepTable table;
  table.provenance = {describe(spec), spec.mc ? std::optional(spec.mc->seed) : std::nullopt,
                      std::string(kVersion)};

  switch (spec.kind) {
    case SweepKind::FalseVsOverlap:
      table.columns = {"series", "cell_radius_m", "overlap_m", "false_handoff"};
      table.x_column = 2;
      break;
    case SweepKind::FailureVsSpeed:
      table.columns = {"series", "cell_radius_m", "overlap_m", "delay_s", "speed_mps", "failure"};
      table.x_column = 4;
      break;
    case SweepKind::FailureVsDelay:
      table.columns = {"series", "cell_radius_m", "overlap_m", "speed_mps", "delay_s", "failure"};
      table.x_column = 4;
      break;
  }
  table.y_column = table.columns.size() - 1;
  if (spec.mc) {
    table.columns.emplace_back("estimate");
    table.columns.emplace_back("std_err");
  }

  // Series enumeration; axis-owned lists collapse to a single placeholder.
  std::vector<detail::SeriesPoint> series;
  const bool overlap_series = spec.kind != SweepKind::FalseVsOverlap;
  const bool speed_series = spec.kind == SweepKind::FailureVsDelay;
  const bool delay_series = spec.kind == SweepKind::FailureVsSpeed;
  const std::vector<double> none{0.0};
  for (double a : spec.cell_radii_m)
    for (double l : overlap_series ? spec.overlaps_m : none)
      for (double v : speed_series ? spec.speeds_mps : none)
        for (double tau : delay_series ? spec.delays_s : none) series.push_back({a, l, v, tau});

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& base = series[s];
    table.series_labels.push_back(detail::series_label(spec.kind, base));
    for (std::size_t i = 0; i < spec.axis.steps; ++i) {
      const double x = spec.axis.at(i);
      detail::SeriesPoint p = base;
      std::vector<double> row;
      try {
        std::optional<mc::SimControls> ctl = spec.mc;
        if (ctl) ctl->seed = rng::derive_seed(spec.mc->seed, s, i);
        double value = 0.0;
        std::optional<mc::Estimate> est;
        switch (spec.kind) {
          case SweepKind::FalseVsOverlap: {
            p.overlap = spec.axis.relative ? x * CellGeometry::max_overlap(p.a) : x;
            const CellGeometry g(p.a, p.overlap);
            value = false_handoff_probability(g);
            if (ctl) est = mc::estimate_false_handoff(g, *ctl, exec);
            row = {static_cast<double>(s), p.a, p.overlap, value};
            break;
          }
          case SweepKind::FailureVsSpeed: {
            p.speed = x;
            const CellGeometry g(p.a, p.overlap);
            value = handoff_failure_probability(g, p.speed, p.delay);
            if (ctl) est = mc::estimate_failure(g, p.speed, p.delay, *ctl, exec);
            row = {static_cast<double>(s), p.a, p.overlap, p.delay, p.speed, value};
            break;
          }
          case SweepKind::FailureVsDelay: {
            p.delay = x;
            const CellGeometry g(p.a, p.overlap);
            value = handoff_failure_probability(g, p.speed, p.delay);
            if (ctl) est = mc::estimate_failure(g, p.speed, p.delay, *ctl, exec);
            row = {static_cast<double>(s), p.a, p.overlap, p.speed, p.delay, value};
            break;
          }
        }
        if (est) {
          row.push_back(est->p_hat);
          row.push_back(est->std_err);
        }
      } catch (const Error& e) {
        std::ostringstream os;
        os << "sweep point (series " << s << " [" << table.series_labels.back() << "], "
           << table.columns[table.x_column] << "=" << x << "): " << e.what();
        throw InvalidParameter(os.str());
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

}  // namespace handoff
