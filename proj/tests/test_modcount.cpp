#include <gtest/gtest.h>

#include <random>

#include "corrlab/modcount.hpp"
#include "corrlab/parallel.hpp"
#include "oracles.hpp"

using namespace corrlab;
using oracle::md;

TEST(SquareRootCounts, Examples) {
  auto t = square_root_counts(7, 7);
  EXPECT_EQ(t, (std::vector<std::int64_t>{1, 2, 2, 0, 2, 0, 0}));
  EXPECT_EQ(square_root_counts(7, 2), (std::vector<std::int64_t>{0, 1, 0, 0, 1, 0, 0}));
  EXPECT_EQ(square_root_counts(3, 3), (std::vector<std::int64_t>{1, 2, 0}));
}

TEST(CountA, Examples) {
  EXPECT_EQ(count_A(7, 2, 0, 0), 2);
  EXPECT_EQ(count_A(7, 2, 3, 4), 1);
  EXPECT_EQ(count_A(7, 7, 2, 5), count_A0_brute(7, 2, 5));
}

TEST(CountA, AgainstEnumeration) {
  for (std::int64_t q : {5, 11, 13}) {
    for (std::int64_t M : {std::int64_t{1}, std::int64_t{3}, q / 2, q}) {
      std::int64_t total = 0;
      for (std::int64_t c1 = 0; c1 < q; ++c1) {
        for (std::int64_t c2 = 0; c2 < q; ++c2) {
          auto v = count_A(q, M, c1, c2);
          ASSERT_EQ(v, oracle::triples(q, 1, M, c1, c2)) << q << " " << M;
          total += v;
        }
      }
      EXPECT_EQ(total, M * M * M);
    }
  }
  EXPECT_EQ(count_A(53, 50, 7, 11), oracle::triples(53, 1, 50, 7, 11));
}

TEST(A0, Examples) {
  EXPECT_EQ(count_A0_brute(3, 0, 0), 9);
  EXPECT_EQ(count_A0_brute(3, 0, 1), 4);
  EXPECT_EQ(count_A0_brute(3, 1, 1), 0);
  EXPECT_EQ(count_A0_closed(3, 0, 0), 9);
  EXPECT_EQ(count_A0_closed(3, 0, 1), 4);
  EXPECT_EQ(count_A0_closed(7, 1, 1), 4);
  EXPECT_EQ(oracle::triples(7, 0, 6, 1, 1), 4);
  EXPECT_THROW(count_A0_closed(9, 1, 1), Error);
  EXPECT_THROW(count_A0_brute(503, 1, 1), Error);
}

TEST(A0, ClosedFormMatchesEnumeration) {
  for (std::int64_t q : oracle::primes_by_trial(3, 23)) {
    std::int64_t total = 0;
    for (std::int64_t c1 = 0; c1 < q; ++c1) {
      for (std::int64_t c2 = 0; c2 < q; ++c2) {
        auto v = count_A0_closed(q, c1, c2);
        ASSERT_EQ(v, oracle::triples(q, 0, q - 1, c1, c2)) << q << " " << c1 << " " << c2;
        ASSERT_EQ(v, count_A0_closed(q, md(-c1 - c2, q), c1));
        total += v;
      }
    }
    EXPECT_EQ(total, q * q * q);
    EXPECT_EQ(count_A0_closed(q, 0, 0), 4 * q - 3);
  }
  // larger primes against the O(q^2) brute path
  for (std::int64_t q : {97, 211}) {
    std::mt19937_64 rng(q);
    std::uniform_int_distribution<std::int64_t> pick(0, q - 1);
    for (int t = 0; t < 60; ++t) {
      auto c1 = pick(rng), c2 = pick(rng);
      ASSERT_EQ(count_A0_closed(q, c1, c2), count_A0_brute(q, c1, c2));
    }
  }
}

TEST(A0, TableMatchesPointwise) {
  auto t = a0_table(31);
  for (std::int64_t c1 = 0; c1 < 31; ++c1)
    for (std::int64_t c2 = 0; c2 < 31; ++c2)
      ASSERT_EQ(t[c1 * 31 + c2], count_A0_closed(31, c1, c2));
}

TEST(A0, HasseConsistency) {
  for (std::int64_t q : {101, 199}) {
    auto t = a0_table(q);
    for (std::int64_t c1 = 1; c1 < q; ++c1) {
      for (std::int64_t c2 = 1; c2 < q; ++c2) {
        if ((c1 + c2) % q == 0) continue;
        ASSERT_LE(std::abs(t[c1 * q + c2] - q), 2 * std::sqrt(q) + 4);
      }
    }
  }
}

TEST(Tables, SumsAndFullRange) {
  auto a = make_a_table(13, 6);
  auto a0 = make_a0_table(13);
  double sa = 0, sa0 = 0;
  for (double v : a.values) sa += v;
  for (double v : a0.values) sa0 += v;
  EXPECT_EQ(sa, 216.0);
  EXPECT_EQ(sa0, 2197.0);
  EXPECT_EQ(make_a_table(13, 13).values, a0.values);
  EXPECT_EQ(a.sidecar()["checksum"], 216u);
  EXPECT_EQ(a.sidecar()["kind"], "A");
  EXPECT_EQ(a0.csv().substr(0, 12), "c1,c2,value\n");
}

TEST(Delta, Examples) {
  EXPECT_NEAR(delta(7, 2, 0, 0), std::fabs(2.0 - 8.0 / 343.0 * 25.0), 1e-12);
  EXPECT_NEAR(delta(7, 2, 0, 0), 1.41691, 1e-5);
  EXPECT_EQ(delta(11, 11, 3, 4), 0.0);
}

TEST(Delta, SquareSumAgainstDirectLoop) {
  const std::int64_t q = 101, M = 20;
  const double lam = std::pow(20.0 / 101.0, 3);
  double direct = 0;
  auto roots = square_root_counts(q, M);
  for (std::int64_t c1 = 0; c1 < q; ++c1) {
    for (std::int64_t c2 = 0; c2 < q; ++c2) {
      double d = count_A(roots, M, c1, c2) - lam * count_A0_brute(q, c1, c2);
      direct += d * d;
    }
  }
  EXPECT_NEAR(delta_sq_sum(q, M), direct, 1e-9 * direct);
  auto t = make_delta_table(q, M);
  double s = 0;
  for (double v : t.values) s += v * v;
  EXPECT_NEAR(s, direct, 1e-9 * direct);
}

TEST(DeltaStar, MatchesNaive) {
  auto fast = delta_star_table(101, 0.5);
  auto slow = delta_star_naive(101, 0.5);
  double sf = 0, ss = 0;
  for (std::size_t i = 0; i < fast.values.size(); ++i) {
    ASSERT_NEAR(fast.values[i], slow.values[i], 1e-9);
    ASSERT_GE(fast.values[i], 0.0);
    sf += fast.values[i] * fast.values[i];
    ss += slow.values[i] * slow.values[i];
  }
  EXPECT_NEAR(sf, ss, 1e-9 * ss);
  EXPECT_GE(fast.at(0, 0), std::fabs(1.0 - count_A0_closed(101, 0, 0) / std::pow(101.0, 3)));
  EXPECT_THROW(delta_star_table(101, 0.8), Error);
}

TEST(DeltaStar, NaiveIsMaxOverM) {
  const std::int64_t q = 31;
  auto t = delta_star_naive(q, 0.3);
  const auto cutoff = delta_star_cutoff(q, 0.3);
  for (std::int64_t c1 : {0, 5, 17}) {
    for (std::int64_t c2 : {0, 3, 30}) {
      double best = 0;
      for (std::int64_t M = 1; M <= cutoff; ++M) best = std::max(best, delta(q, M, c1, c2));
      EXPECT_NEAR(t.at(c1, c2), best, 1e-12);
    }
  }
}

namespace {

// S(0, q) is the second moment of the complete counts
double s_zero_by_counts(std::int64_t q) {
  double s = 0;
  for (std::int64_t c1 = 0; c1 < q; ++c1)
    for (std::int64_t c2 = 0; c2 < q; ++c2) {
      double v = static_cast<double>(oracle::triples(q, 0, q - 1, c1, c2));
      s += v * v;
    }
  return s;
}

}  // namespace

TEST(ExpSum, Examples) {
  EXPECT_EQ(exp_sum_S_exact(Residues6{}, 3), 141);
  EXPECT_EQ(s_zero_by_counts(3), 141.0);
  EXPECT_EQ(exp_sum_S_exact(Residues6{3, 3, 3, 3, 3, 3}, 3), 141);
  auto e = exp_sum_S_enumerate(Residues6{1, 0, 0, 0, 0, 0}, 3);
  EXPECT_NEAR(e.imag(), 0.0, 1e-9);
  EXPECT_NEAR(e.real(), static_cast<double>(exp_sum_S_exact(Residues6{1, 0, 0, 0, 0, 0}, 3)), 1e-9);
  EXPECT_LE(std::abs(e), 4 * 27.0);
}

TEST(ExpSum, ZeroVectorIsSecondMoment) {
  for (std::int64_t q : {5, 7, 11}) {
    EXPECT_EQ(static_cast<double>(exp_sum_S_exact(Residues6{}, q)), s_zero_by_counts(q));
  }
}

TEST(ExpSum, ThreePathsAgree) {
  std::mt19937_64 rng(51);
  for (std::int64_t q : {3, 5, 7}) {
    std::uniform_int_distribution<std::int64_t> pick(-q, 2 * q);
    for (int t = 0; t < 8; ++t) {
      Residues6 b;
      for (auto& x : b) x = pick(rng);
      auto e = exp_sum_S_enumerate(b, q);
      ASSERT_NEAR(e.real(), static_cast<double>(exp_sum_S_exact(b, q)), 1e-6);
      ASSERT_NEAR(e.imag(), 0.0, 1e-6);
      auto quad = exp_sum_S_quadratic(b, q);
      ASSERT_NEAR(quad.real(), e.real(), 1e-6);
    }
  }
  for (std::int64_t q : {11, 31, 101, 1009}) {
    std::uniform_int_distribution<std::int64_t> pick(0, q - 1);
    for (int t = 0; t < 10; ++t) {
      Residues6 b;
      for (auto& x : b) x = pick(rng);
      if (t == 0) b = {pick(rng), 0, 0, pick(rng), 0, 0};
      auto fast = exp_sum_S(b, q);
      auto quad = exp_sum_S_quadratic(b, q);
      ASSERT_LE(std::abs(fast - quad), 1e-6 * std::pow(q, 3)) << q;
      Residues6 neg;
      for (int i = 0; i < 6; ++i) neg[i] = -b[i];
      auto conj = exp_sum_S(neg, q);
      ASSERT_NEAR(conj.real(), fast.real(), 1e-9);
      ASSERT_NEAR(conj.imag(), -fast.imag(), 1e-9);
    }
  }
}

TEST(FCount, Examples) {
  EXPECT_EQ(f_count(5, 1, 1, 1), 2);
  EXPECT_EQ(f_count(5, 1, 1, 2), 0);
  EXPECT_THROW(f_count(5, 3, 1, 1), Error);
}

TEST(FCount, AgainstEnumerationAndTotal) {
  for (std::int64_t q : {7, 13, 29}) {
    for (std::int64_t R = 1; 2 * R < q; R += 2) {
      std::int64_t total = 0;
      for (std::int64_t c1 = 0; c1 < q; ++c1) {
        for (std::int64_t c2 = 0; c2 < q; ++c2) {
          std::int64_t brute = 0;
          for (std::int64_t a = 1; a < q; ++a) {
            std::int64_t abar = oracle::inverse_by_euclid(a, q);
            for (std::int64_t r1 = -R; r1 <= R; ++r1)
              for (std::int64_t r2 = -R; r2 <= R; ++r2)
                if (r1 != 0 && r2 != 0 && md(abar * r1 - c1, q) == 0 && md(abar * r2 - c2, q) == 0)
                  ++brute;
          }
          auto v = f_count(q, R, c1, c2);
          ASSERT_EQ(v, brute);
          total += v;
        }
      }
      EXPECT_EQ(total, (q - 1) * 4 * R * R);
    }
  }
}

TEST(FRadius, FloorRounding) {
  EXPECT_EQ(f_radius(101, 0.5, 0.0, 10), static_cast<std::int64_t>(std::floor(std::pow(101.0, 0.6))));
}

TEST(BadSet, SymmetryAndDeterminism) {
  const std::int64_t q = 101;
  auto table = delta_star_table(q, 0.5);
  const auto R = f_radius(q, 0.5, 0.01, 10);
  for (std::int64_t a : {1, 2, 17, 50}) {
    EXPECT_NEAR(compute_D(a, table, R), compute_D(q - a, table, R), 1e-9 * compute_D(a, table, R));
  }
  auto b1 = bad_set(q, 0.5, 0.01, 10);
  set_worker_count(3);
  auto b2 = bad_set(q, 0.5, 0.01, 10);
  set_worker_count(0);
  EXPECT_EQ(b1.members, b2.members);
  EXPECT_EQ(b1.normalized_D, b2.normalized_D);
  EXPECT_LE(b1.members.size(), 101u);
  EXPECT_EQ(b1.R, R);
  for (std::size_t i = 0; i < b1.normalized_D.size(); ++i) {
    bool member = std::find(b1.members.begin(), b1.members.end(),
                            static_cast<std::int64_t>(i + 1)) != b1.members.end();
    EXPECT_EQ(member, b1.normalized_D[i] >= b1.threshold);
  }
  // threshold 1 when C eta = 0
  auto b0 = bad_set(q, 0.5, 0.0001, 0.0);
  EXPECT_DOUBLE_EQ(b0.threshold, 1.0);
}

TEST(SumA0OverBox, AgainstCellLoop) {
  for (std::int64_t q : {101, 211}) {
    for (std::int64_t a : {1, 7, 33}) {
      const std::int64_t abar = oracle::inverse_by_euclid(a, q);
      std::int64_t direct = 0;
      const std::int64_t lo1 = -20, hi1 = 13, lo2 = -5, hi2 = 30;
      for (std::int64_t r1 = lo1; r1 <= hi1; ++r1)
        for (std::int64_t r2 = lo2; r2 <= hi2; ++r2)
          if (r1 != 0 && r2 != 0 && r1 + r2 != 0)
            direct += count_A0_closed(q, md(abar * r1, q), md(abar * r2, q));
      EXPECT_EQ(sum_A0_over_box(q, a, lo1, hi1, lo2, hi2), direct);
    }
  }
}
