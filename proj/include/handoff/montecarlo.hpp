#pragma once

// Brute-force trajectory sampling used as an independent check on the
// closed forms.  Crossing decisions and distances come only from the exact
// ray/segment intersection in geometry.hpp; theta1 is used solely to draw
// directions from the crossing cone, never to decide a crossing.
//
// Samples are split into `batches` contiguous substreams.  Batch i draws from
// rng::Stream(seed, i); per-batch results are reduced in batch-index order,
// so the output is independent of the number of worker threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "handoff/analytic.hpp"
#include "handoff/errors.hpp"
#include "handoff/geometry.hpp"
#include "handoff/rng.hpp"

namespace handoff::mc {

struct SimControls {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t batches = 16;

  void validate() const {
    if (samples < 1) throw InvalidParameter("samples must be >= 1");
    if (batches < 1) throw InvalidParameter("batches must be >= 1");
    if (batches > samples) throw InvalidParameter("batches must not exceed samples");
  }
};

// How batches are scheduled.  Never changes results.
struct Execution {
  unsigned threads = 0;  // 0: hardware concurrency

  unsigned resolved(std::uint64_t batches) const {
    unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    return static_cast<unsigned>(std::min<std::uint64_t>(n, batches));
  }
};

struct Estimate {
  double p_hat = 0.0;
  double std_err = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;

  static Estimate from_counts(std::uint64_t hits, std::uint64_t n, std::uint64_t seed) {
    Estimate e;
    e.n = n;
    e.seed = seed;
    e.p_hat = static_cast<double>(hits) / static_cast<double>(n);
    e.std_err = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(n));
    return e;
  }
};

struct EcdfReport {
  std::vector<double> times;  // ascending
  double ks_stat = 0.0;
  std::uint64_t n = 0;
};

inline std::uint64_t batch_size(const SimControls& ctl, std::uint64_t batch) {
  const std::uint64_t base = ctl.samples / ctl.batches;
  return base + (batch < ctl.samples % ctl.batches ? 1 : 0);
}

/// Runs `body(batch_index, stream, count)` for every batch, distributing
/// batches over worker threads.  `body` must only touch state owned by its
/// batch index.
template <class Body>
void for_each_batch(const SimControls& ctl, const Execution& exec, Body&& body) {
  ctl.validate();
  const unsigned workers = exec.resolved(ctl.batches);
  auto run_range = [&](unsigned worker) {
    for (std::uint64_t b = worker; b < ctl.batches; b += workers) {
      rng::Stream stream(ctl.seed, b);
      body(b, stream, batch_size(ctl, b));
    }
  };
  if (workers <= 1) {
    run_range(0);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_range, w);
}

template <class Trial>
Estimate count_hits(const SimControls& ctl, const Execution& exec, Trial&& trial) {
  ctl.validate();
  std::vector<std::uint64_t> hits(ctl.batches, 0);
  for_each_batch(ctl, exec, [&](std::uint64_t b, rng::Stream& stream, std::uint64_t count) {
    std::uint64_t h = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      if (trial(stream)) ++h;
    }
    hits[b] = h;
  });
  std::uint64_t total = 0;
  for (std::uint64_t h : hits) total += h;
  return Estimate::from_counts(total, ctl.samples, ctl.seed);
}

/// Fraction of uniformly oriented trajectories from P that miss A'B'.
inline Estimate estimate_false_handoff(const CellGeometry& geom, const SimControls& ctl,
                                       const Execution& exec = {}) {
  const LocalFrame frame = make_frame(geom);
  return count_hits(ctl, exec, [&](rng::Stream& s) {
    const double theta = s.open_uniform(-kPi, kPi);
    return !ray_chord_crossing(frame, theta).has_value();
  });
}

namespace detail {
// Distance from P to the chord along a direction drawn from the crossing cone.
inline double sample_crossing_distance(const LocalFrame& frame, double theta1, rng::Stream& s) {
  const double beta = s.open_uniform(-theta1, theta1);
  const auto dist = ray_chord_crossing(frame, beta);
  if (!dist) {
    throw Error("direction " + std::to_string(beta) + " inside the crossing cone missed the chord");
  }
  return *dist;
}
}  // namespace detail

/// Fraction of crossing trajectories whose crossing time is below tau.
inline Estimate estimate_failure(const CellGeometry& geom, double v, double tau,
                                 const SimControls& ctl, const Execution& exec = {}) {
  if (!std::isfinite(v) || v <= 0.0) throw OutOfDomain("speed must be > 0");
  if (!(tau >= 0.0)) throw OutOfDomain("delay must be >= 0");
  const LocalFrame frame = make_frame(geom);
  const double theta1 = derive_geometry(geom).theta1_rad;
  return count_hits(ctl, exec, [&](rng::Stream& s) {
    return detail::sample_crossing_distance(frame, theta1, s) / v < tau;
  });
}

/// As estimate_failure, with the speed drawn per trajectory from U(Vmin, Vmax).
inline Estimate estimate_failure_over_speed(const CellGeometry& geom, const SpeedModel& model,
                                            double tau, const SimControls& ctl,
                                            const Execution& exec = {}) {
  if (!(tau >= 0.0)) throw OutOfDomain("delay must be >= 0");
  if (model.is_fixed()) {
    return estimate_failure(geom, model.as_fixed().speed_mps, tau, ctl, exec);
  }
  const auto [vmin, vmax] = model.as_uniform();
  const LocalFrame frame = make_frame(geom);
  const double theta1 = derive_geometry(geom).theta1_rad;
  return count_hits(ctl, exec, [&](rng::Stream& s) {
    const double v = s.open_uniform(vmin, vmax);
    return detail::sample_crossing_distance(frame, theta1, s) / v < tau;
  });
}

/// Kolmogorov-Smirnov distance between the sample and a continuous cdf.
/// `sorted` must be ascending.
inline double ks_statistic(const std::vector<double>& sorted,
                           const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

inline EcdfReport crossing_time_ecdf(const CellGeometry& geom, double v, const SimControls& ctl,
                                     const Execution& exec = {}) {
  if (!std::isfinite(v) || v <= 0.0) throw OutOfDomain("speed must be > 0");
  ctl.validate();
  const LocalFrame frame = make_frame(geom);
  const double theta1 = derive_geometry(geom).theta1_rad;

  std::vector<std::vector<double>> per_batch(ctl.batches);
  for_each_batch(ctl, exec, [&](std::uint64_t b, rng::Stream& s, std::uint64_t count) {
    auto& out = per_batch[b];
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      out.push_back(detail::sample_crossing_distance(frame, theta1, s) / v);
    }
  });

  EcdfReport report;
  report.n = ctl.samples;
  report.times.reserve(ctl.samples);
  for (const auto& batch : per_batch) {
    report.times.insert(report.times.end(), batch.begin(), batch.end());
  }
  std::sort(report.times.begin(), report.times.end());
  report.ks_stat = ks_statistic(report.times,
                                [&](double t) { return crossing_time_cdf(geom, v, t); });
  return report;
}

}  // namespace handoff::mc
