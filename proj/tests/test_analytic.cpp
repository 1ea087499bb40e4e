#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "handoff/analytic.hpp"
#include "handoff/montecarlo.hpp"
#include "oracles.hpp"

namespace {

using namespace handoff;
using handoff::testing::gauss_legendre;
using handoff::testing::integrate_pdf;

const CellGeometry kTangent(1000.0, 0.0);

TEST(SpeedPdf, Examples) {
  EXPECT_DOUBLE_EQ(speed_pdf(50.0, 40.0, 60.0), 0.05);
  EXPECT_DOUBLE_EQ(speed_pdf(70.0, 40.0, 60.0), 0.0);
  EXPECT_DOUBLE_EQ(speed_pdf(40.0, 40.0, 60.0), 0.0);
  EXPECT_THROW(speed_pdf(50.0, 60.0, 40.0), InvalidParameter);
  EXPECT_THROW(speed_pdf(50.0, SpeedModel::fixed(50.0)), InvalidParameter);
}

TEST(SpeedModel, Validation) {
  EXPECT_THROW(SpeedModel::fixed(0.0), InvalidParameter);
  EXPECT_THROW(SpeedModel::fixed(-1.0), InvalidParameter);
  EXPECT_THROW(SpeedModel::uniform(0.0, 10.0), InvalidParameter);
  EXPECT_THROW(SpeedModel::uniform(10.0, 10.0), InvalidParameter);
  const auto m = SpeedModel::uniform(10.0, 20.0);
  EXPECT_EQ(m.min_mps(), 10.0);
  EXPECT_EQ(m.max_mps(), 20.0);
}

TEST(DirectionPdf, ValuesAndNormalization) {
  EXPECT_NEAR(direction_pdf(0.0), 0.15915494309189535, 1e-15);
  EXPECT_EQ(direction_pdf(3 * kPi / 2), 0.0);
  EXPECT_EQ(direction_pdf(-kPi), 0.0);
  EXPECT_GT(direction_pdf(kPi), 0.0);
  EXPECT_NEAR(gauss_legendre(direction_pdf, -kPi, kPi, 100), 1.0, 1e-9);
}

TEST(FalseHandoff, SevenTwelfthsWithoutOverlap) {
  for (double a : {1.0, 100.0, 1000.0, 123456.0}) {
    EXPECT_NEAR(false_handoff_probability(CellGeometry(a, 0.0)), 7.0 / 12.0, 1e-14);
  }
}

TEST(FalseHandoff, OverlapExamplesAgreeWithMonteCarlo) {
  // Frozen closed-form values; each is checked against the sampler below.
  struct Case {
    double a, overlap, expected;
  };
  for (const Case c : {Case{1000.0, 200.0, 0.6582540847956255}, Case{500.0, 200.0, 0.7008294230075545}}) {
    const CellGeometry geom(c.a, c.overlap);
    EXPECT_NEAR(false_handoff_probability(geom), c.expected, 1e-12);
    const auto est = mc::estimate_false_handoff(geom, {1'000'000, 99, 8});
    EXPECT_LE(std::abs(est.p_hat - c.expected), 3 * est.std_err);
  }
}

TEST(FalseHandoff, IncreasingInOverlapAndSmallerCellsWorse) {
  for (double a : {200.0, 1000.0, 5000.0}) {
    double prev = false_handoff_probability(CellGeometry(a, 0.0));
    for (int i = 1; i < 150; ++i) {
      const double l = CellGeometry::max_overlap(a) * i / 150.0;
      const double p = false_handoff_probability(CellGeometry(a, l));
      EXPECT_GT(p, prev);
      EXPECT_LT(p, 1.0);
      prev = p;
    }
  }
  for (double l : {10.0, 50.0, 150.0}) {
    EXPECT_GT(false_handoff_probability(CellGeometry(500.0, l)),
              false_handoff_probability(CellGeometry(1000.0, l)));
  }
}

TEST(CrossingTime, Examples) {
  EXPECT_NEAR(crossing_time(kTangent, 50.0, 0.0), 2.679491924311227, 1e-12);
  EXPECT_NEAR(crossing_time(kTangent, 100.0, 0.0), 1.3397459621556135, 1e-12);
  const double theta1 = derive_geometry(kTangent).theta1_rad;
  const double near_edge = std::nextafter(theta1, 0.0);
  EXPECT_NEAR(crossing_time(kTangent, 50.0, near_edge), 10.35276180410083, 1e-6);
  // Same as the ray distance over speed.
  const auto dist = ray_chord_crossing(make_frame(kTangent), near_edge);
  ASSERT_TRUE(dist);
  EXPECT_NEAR(crossing_time(kTangent, 50.0, near_edge), *dist / 50.0, 1e-9);
}

TEST(CrossingTime, Errors) {
  const double theta1 = derive_geometry(kTangent).theta1_rad;
  EXPECT_THROW(crossing_time(kTangent, 50.0, theta1), OutOfDomain);
  EXPECT_THROW(crossing_time(kTangent, 50.0, -2.0), OutOfDomain);
  EXPECT_THROW(crossing_time(kTangent, 0.0, 0.0), OutOfDomain);
  EXPECT_THROW(crossing_time(kTangent, -3.0, 0.0), OutOfDomain);
}

TEST(CrossingTimeSupportTest, Bounds) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> radius(100, 5000), frac(0, 0.99), speed(1, 100);
  for (int i = 0; i < 200; ++i) {
    const double a = radius(gen);
    const CellGeometry g(a, frac(gen) * CellGeometry::max_overlap(a));
    const auto s = crossing_time_support(g, speed(gen));
    EXPECT_GT(s.t_min_s, 0.0);
    EXPECT_LT(s.t_min_s, s.t_max_s);
    EXPECT_NEAR(s.t_max_s, s.t_min_s / std::cos(derive_geometry(g).theta1_rad), 1e-12 * s.t_max_s);
  }
}

TEST(CrossingTimePdf, Examples) {
  EXPECT_NEAR(crossing_time_pdf(kTangent, 50.0, 3.0), 0.5057295556401299, 1e-12);
  EXPECT_EQ(crossing_time_pdf(kTangent, 50.0, 2.0), 0.0);
  EXPECT_EQ(crossing_time_pdf(kTangent, 50.0, 11.0), 0.0);
  EXPECT_EQ(crossing_time_pdf(kTangent, 50.0, crossing_time_support(kTangent, 50.0).t_min_s), 0.0);
}

TEST(CrossingTimePdf, MatchesMonteCarloHistogram) {
  // Density of sampled times in a narrow bin around t = 3 s.
  const auto report = mc::crossing_time_ecdf(kTangent, 50.0, {1'000'000, 77, 8});
  const double lo = 2.95, hi = 3.05;
  const auto first = std::lower_bound(report.times.begin(), report.times.end(), lo);
  const auto last = std::lower_bound(report.times.begin(), report.times.end(), hi);
  const double frac = static_cast<double>(last - first) / report.n;
  const double sigma = std::sqrt(frac * (1 - frac) / report.n);
  const double expected = integrate_pdf(kTangent, 50.0, hi) - integrate_pdf(kTangent, 50.0, lo);
  EXPECT_LE(std::abs(frac - expected), 3 * sigma);
  EXPECT_NEAR(frac / (hi - lo), 0.50573, 0.01);
}

TEST(CrossingTimeCdf, Examples) {
  EXPECT_NEAR(crossing_time_cdf(kTangent, 50.0, 3.0), 0.3560, 0.0005);
  EXPECT_NEAR(crossing_time_cdf(kTangent, 50.0, 3.0), 0.3563524881946607, 1e-12);
  EXPECT_EQ(crossing_time_cdf(kTangent, 50.0, crossing_time_support(kTangent, 50.0).t_min_s), 0.0);
  EXPECT_EQ(crossing_time_cdf(kTangent, 50.0, 20.0), 1.0);
  EXPECT_EQ(crossing_time_cdf(kTangent, 50.0, 0.0), 0.0);
  EXPECT_THROW(crossing_time_cdf(kTangent, 50.0, -1.0), OutOfDomain);
  EXPECT_NEAR(integrate_pdf(kTangent, 50.0, 3.0), 0.3563524881946607, 1e-9);
}

TEST(CrossingTimeCdf, QuadratureOfPdfMatchesCdf) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> radius(200, 5000), frac(0, 0.8), speed(5, 90), u(0, 1);
  for (int i = 0; i < 60; ++i) {
    const double a = radius(gen);
    const CellGeometry g(a, frac(gen) * CellGeometry::max_overlap(a));
    const double v = speed(gen);
    const auto sup = crossing_time_support(g, v);
    const double tau = sup.t_min_s + u(gen) * (sup.t_max_s - sup.t_min_s);
    EXPECT_NEAR(integrate_pdf(g, v, tau), crossing_time_cdf(g, v, tau), 1e-6);
    EXPECT_NEAR(integrate_pdf(g, v, sup.t_max_s), 1.0, 1e-6);
  }
}

TEST(FailureProbability, Examples) {
  EXPECT_NEAR(handoff_failure_probability(kTangent, 50.0, 3.0), 0.3560, 0.0005);
  EXPECT_EQ(handoff_failure_probability(kTangent, 50.0, 2.0), 0.0);
  const CellGeometry ten(1000.0, 10.0);
  EXPECT_NEAR(handoff_failure_probability(ten, 50.0, 3.0), 0.21987245010268971, 1e-12);
  EXPECT_NEAR(handoff_failure_probability(ten, 50.0, 3.0), 0.2199, 0.0001);
  const auto est = mc::estimate_failure(ten, 50.0, 3.0, {1'000'000, 5, 8});
  EXPECT_LE(std::abs(est.p_hat - 0.21987245010268971), 3 * est.std_err);
}

TEST(FailureProbability, ContinuousAtBranchPoints) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> radius(200, 5000), frac(0, 0.8), speed(5, 90);
  for (int i = 0; i < 100; ++i) {
    const double a = radius(gen);
    const CellGeometry g(a, frac(gen) * CellGeometry::max_overlap(a));
    const double v = speed(gen);
    const auto sup = crossing_time_support(g, v);
    const double eps = 1e-6 * sup.t_min_s;
    const double theta1 = derive_geometry(g).theta1_rad;
    // Square-root edge at t_min: P_f(t_min (1 + r)) ~ sqrt(2 r) / theta1 -> 0.
    for (double r : {1e-6, 1e-8, 1e-10}) {
      const double p = handoff_failure_probability(g, v, sup.t_min_s * (1 + r));
      EXPECT_NEAR(p, std::sqrt(2 * r) / theta1, 1e-3 * std::sqrt(2 * r) / theta1 + 1e-7);
    }
    EXPECT_EQ(handoff_failure_probability(g, v, sup.t_min_s - eps), 0.0);
    EXPECT_EQ(handoff_failure_probability(g, v, sup.t_min_s), 0.0);
    EXPECT_LT(1.0 - handoff_failure_probability(g, v, sup.t_max_s - eps), 1e-6);
    EXPECT_EQ(handoff_failure_probability(g, v, sup.t_max_s), 1.0);
  }
}

TEST(FailureProbability, MonotoneInSpeedDelayAndOverlap) {
  for (double a : {300.0, 1000.0, 4000.0}) {
    for (double l : {0.0, 10.0, 50.0, 200.0}) {
      const CellGeometry g(a, l);
      for (double tau : {0.5, 1.5, 3.0, 8.0}) {
        double prev = 0.0;
        for (double v = 1.0; v <= 120.0; v += 0.5) {
          const double p = handoff_failure_probability(g, v, tau);
          EXPECT_GE(p, prev);
          prev = p;
        }
      }
      for (double v : {10.0, 50.0, 90.0}) {
        double prev = 0.0;
        for (double tau = 0.0; tau <= 40.0; tau += 0.05) {
          const double p = handoff_failure_probability(g, v, tau);
          EXPECT_GE(p, prev);
          prev = p;
        }
        for (double tau = 0.1; tau <= 12.0; tau += 0.3) {
          EXPECT_GE(handoff_failure_probability(g, v, std::max(3.0, tau)),
                    handoff_failure_probability(g, v, std::min(1.5, tau)));
        }
      }
    }
    for (double v : {10.0, 50.0, 90.0}) {
      for (double tau : {1.5, 3.0, 10.0}) {
        double prev = 1.0;
        for (int i = 0; i < 300; ++i) {
          const double l = CellGeometry::max_overlap(a) * i / 300.0;
          const double p = handoff_failure_probability(CellGeometry(a, l), v, tau);
          EXPECT_LE(p, prev + 1e-15);
          prev = p;
        }
      }
    }
  }
}

TEST(ExpectedFailureOverSpeed, Examples) {
  const auto model = SpeedModel::uniform(40.0, 60.0);
  // Frozen from high-precision quadrature split at V = PR / tau.
  EXPECT_NEAR(expected_failure_over_speed(kTangent, model, 3.0), 0.29971144160290275, 1e-9);
  const auto est = mc::estimate_failure_over_speed(kTangent, model, 3.0, {1'000'000, 3, 8});
  EXPECT_LE(std::abs(est.p_hat - expected_failure_over_speed(kTangent, model, 3.0)),
            3 * est.std_err);

  EXPECT_EQ(expected_failure_over_speed(kTangent, SpeedModel::uniform(10.0, 20.0), 3.0), 0.0);
  EXPECT_EQ(expected_failure_over_speed(CellGeometry(700.0, 40.0), model, 0.0), 0.0);
  EXPECT_THROW(expected_failure_over_speed(kTangent, SpeedModel::fixed(3.0), 3.0),
               InvalidParameter);
}

TEST(ExpectedFailureOverSpeed, MatchesBruteForceAverage) {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> radius(200, 5000), frac(0, 0.8), speed(5, 90), delay(0.5, 12);
  for (int i = 0; i < 40; ++i) {
    const double a = radius(gen);
    const CellGeometry g(a, frac(gen) * CellGeometry::max_overlap(a));
    double v1 = speed(gen), v2 = speed(gen);
    if (v1 > v2) std::swap(v1, v2);
    if (v2 - v1 < 1.0) v2 = v1 + 1.0;
    const double tau = delay(gen);
    // Midpoint rule over a fine grid, with the sqrt edge resolved by density.
    const int n = 400000;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      sum += handoff_failure_probability(g, v1 + (k + 0.5) * (v2 - v1) / n, tau);
    }
    EXPECT_NEAR(expected_failure_over_speed(g, SpeedModel::uniform(v1, v2), tau), sum / n, 1e-6);
  }
}

TEST(AdaptOverlap, Examples) {
  const auto at_zero = adapt_overlap(1000.0, 50.0, 3.0, 0.3563524881946607);
  EXPECT_NEAR(at_zero.overlap_m, 0.0, 1e-6);
  const auto rounded = adapt_overlap(1000.0, 50.0, 3.0, 0.3560);
  EXPECT_NEAR(rounded.overlap_m, 0.0, 0.1);
  EXPECT_NEAR(rounded.failure, 0.3560, 1e-9);

  const auto ten = adapt_overlap(1000.0, 50.0, 3.0, 0.21987245010268971);
  EXPECT_NEAR(ten.overlap_m, 10.0, 1e-6);
  EXPECT_NEAR(ten.false_handoff, false_handoff_probability(CellGeometry(1000.0, 10.0)), 1e-9);

  EXPECT_THROW(adapt_overlap(1000.0, 50.0, 3.0, 0.9), NotBracketed);
  EXPECT_THROW(adapt_overlap(1000.0, 50.0, 3.0, 0.0), NotBracketed);
  EXPECT_THROW(adapt_overlap(1000.0, 50.0, 3.0, -0.1), NotBracketed);
  EXPECT_THROW(adapt_overlap(1000.0, 50.0, 0.0, 0.1), OutOfDomain);
}

TEST(AdaptOverlap, RoundTripAndTradeOff) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> radius(200, 5000), frac(0, 0.8), speed(5, 90), delay(0.5, 12);
  int checked = 0;
  while (checked < 50) {
    const double a = radius(gen);
    const double l = frac(gen) * CellGeometry::max_overlap(a);
    const double v = speed(gen), tau = delay(gen);
    const double target = handoff_failure_probability(CellGeometry(a, l), v, tau);
    if (target <= 0.0 || target >= 1.0) continue;
    const auto r = adapt_overlap(a, v, tau, target);
    EXPECT_NEAR(r.overlap_m, l, 1e-6 * a);
    EXPECT_NEAR(r.failure, target, 1e-9);
    EXPECT_GE(r.false_handoff, 7.0 / 12.0);
    ++checked;
  }
}

}  // namespace
