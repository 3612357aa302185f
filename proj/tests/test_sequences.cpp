#include <gtest/gtest.h>

#include <random>

#include "corrlab/correlations.hpp"
#include "corrlab/parallel.hpp"
#include "corrlab/sequences.hpp"
#include "oracles.hpp"

using namespace corrlab;

namespace {

// sup over [a,b] and (a,b) with endpoints in {0, 1, points}
double discrepancy_oracle(const std::vector<double>& xs) {
  std::vector<double> ends{0.0, 1.0};
  ends.insert(ends.end(), xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double best = 0;
  for (double a : ends) {
    for (double b : ends) {
      if (b < a) continue;
      int closed = 0, open = 0;
      for (double x : xs) {
        closed += (a <= x && x <= b);
        open += (a < x && x < b);
      }
      best = std::max({best, std::fabs(closed / n - (b - a)), std::fabs(open / n - (b - a))});
    }
  }
  return best;
}

std::vector<double> uniform_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST(DilatedPoints, Examples) {
  EXPECT_EQ(dilated_points(AlphaValue::rational(1, 4), 2, 4).points(),
            (std::vector<double>{0.0, 0.0, 0.25, 0.25}));
  EXPECT_EQ(dilated_points(AlphaValue::rational(1, 3), 1, 3).points(),
            (std::vector<double>{0.0, 1.0 / 3.0, 2.0 / 3.0}));
  auto ps = dilated_points(AlphaValue::sqrt_of(2), 2, 3);
  const auto r2 = oracle::sqrt_dec(2);
  std::vector<double> ref;
  for (int n : {1, 2, 3}) {
    oracle::Dec v = r2 * n * n;
    ref.push_back(static_cast<double>(v - boost::multiprecision::floor(v)));
  }
  std::sort(ref.begin(), ref.end());
  ASSERT_EQ(ps.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(ps[i], ref[i], 1e-15);
  EXPECT_NEAR(ps[0], 0.41421, 1e-5);
  EXPECT_NEAR(ps[1], 0.65685, 1e-5);
  EXPECT_NEAR(ps[2], 0.72792, 1e-5);
  ASSERT_TRUE(ps.provenance().has_value());
  EXPECT_EQ(ps.provenance()->N, 3);
}

TEST(DilatedPoints, SortedInUnitInterval) {
  auto ps = dilated_points(AlphaValue::golden(), 3, 5000);
  EXPECT_TRUE(std::is_sorted(ps.points().begin(), ps.points().end()));
  EXPECT_GE(ps.points().front(), 0.0);
  EXPECT_LT(ps.points().back(), 1.0);
}

TEST(DilatedPoints, PrecisionGuard) {
  EXPECT_THROW(dilated_points(AlphaValue::sqrt_of(2, 60), 2, 100000), Error);
}

TEST(Discrepancy, Examples) {
  EXPECT_DOUBLE_EQ(discrepancy(PointSet::from_values({0.25, 0.75})), 0.5);
  EXPECT_DOUBLE_EQ(discrepancy(PointSet::from_values({0.125, 0.375, 0.625, 0.875})), 0.25);
  EXPECT_DOUBLE_EQ(discrepancy(PointSet::from_values({0.5})), 1.0);
  EXPECT_THROW(discrepancy(PointSet::from_values({})), Error);
}

TEST(Discrepancy, EquallySpacedIsOneOverN) {
  for (int n : {1, 2, 7, 64}) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(static_cast<double>(i) / n);
    EXPECT_DOUBLE_EQ(discrepancy(PointSet::from_values(v)), 1.0 / n);
  }
}

TEST(Discrepancy, AgainstExhaustiveIntervals) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 40; ++t) {
    auto xs = uniform_points(rng, 1 + t % 17);
    EXPECT_NEAR(discrepancy(PointSet::from_values(xs)), discrepancy_oracle(xs), 1e-12);
  }
}

TEST(WindowMoment, Examples) {
  auto ps = PointSet::from_values({0.0, 0.5});
  EXPECT_DOUBLE_EQ(window_moment(ps, 1.0, 2), 1.0);
  EXPECT_DOUBLE_EQ(window_moment(ps, 2.0, 3), 8.0);
  EXPECT_THROW(window_moment(ps, 3.0, 1), Error);
  EXPECT_THROW(window_moment(ps, 0.0, 1), Error);
}

TEST(WindowMoment, AgainstPiecewiseOracle) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 30; ++t) {
    auto xs = uniform_points(rng, 5 + t);
    auto ps = PointSet::from_values(xs);
    const double L = 0.1 + 0.37 * t;
    for (int k = 1; k <= 4; ++k) {
      double ref = oracle::window_moment(xs, L / ps.size(), k);
      EXPECT_NEAR(window_moment(ps, L, k), ref, 1e-11 * std::max(1.0, ref));
    }
    EXPECT_NEAR(window_moment(ps, L, 1), L, 1e-9 * L);
  }
}

TEST(WindowMoment, ShiftInvariance) {
  auto ps = dilated_points(AlphaValue::sqrt_of(3), 2, 300);
  for (double s : {0.1, 0.5, 0.987}) {
    auto moved = ps.shifted(s);
    for (int k = 1; k <= 3; ++k) {
      EXPECT_NEAR(window_moment(moved, 7.5, k), window_moment(ps, 7.5, k), 1e-12);
    }
  }
}

TEST(WindowMoment, SecondMomentThroughPairCorrelation) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 10; ++t) {
    auto ps = PointSet::from_values(uniform_points(rng, 200));
    const double L = 1.0 + 9.9 * t;
    double r2 = pair_correlation(ps, L, TestKernel::triangle()).value;
    EXPECT_NEAR(window_moment(ps, L, 2), L + L * r2, 1e-9 * (L + L * r2));
  }
}

TEST(PoissonMoment, Examples) {
  for (double L : {0.3, 1.0, 2.5, 40.0}) {
    EXPECT_NEAR(poisson_moment(L, 1), L, 1e-14 * L);
    EXPECT_NEAR(poisson_moment(L, 2), L + L * L, 1e-13 * (L + L * L));
  }
  EXPECT_NEAR(poisson_moment(1.0, 3), 5.0, 1e-13);
  // Bell numbers B_k = E Po(1)^k
  const double bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975};
  for (int k = 1; k <= 10; ++k) EXPECT_NEAR(poisson_moment(1.0, k), bell[k], 1e-12 * bell[k]);
}

TEST(PoissonMoment, PmfSumsToOne) {
  double s = 0, m = 0;
  for (int k = 0; k < 80; ++k) {
    s += poisson_pmf(3.5, k);
    m += k * poisson_pmf(3.5, k);
  }
  EXPECT_NEAR(s, 1.0, 1e-14);
  EXPECT_NEAR(m, 3.5, 1e-13);
}

TEST(SimulateCounts, WholeCircleIsPointMass) {
  auto d = simulate_counts(10, 10.0, 500, 9);
  EXPECT_DOUBLE_EQ(d.prob(10), 1.0);
  EXPECT_DOUBLE_EQ(d.moment(1), 10.0);
}

TEST(SimulateCounts, PoissonBaseline) {
  auto d = simulate_counts(10000, 2.0, 100000, 1);
  EXPECT_LE(d.tv_to_poisson(2.0), 0.02);
  EXPECT_NEAR(d.moment(1), 2.0, 0.05);
  EXPECT_NEAR(d.moment(2), poisson_moment(2.0, 2), 0.2);
  EXPECT_EQ(d.csv().substr(0, 13), "k,count,prob\n");
}

TEST(SimulateCounts, DeterministicAcrossWorkers) {
  set_worker_count(1);
  auto a = simulate_counts(500, 3.0, 5000, 77);
  set_worker_count(4);
  auto b = simulate_counts(500, 3.0, 5000, 77);
  set_worker_count(0);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.csv(), b.csv());
  auto c = simulate_counts(500, 3.0, 5000, 78);
  EXPECT_NE(a.counts, c.counts);
}
