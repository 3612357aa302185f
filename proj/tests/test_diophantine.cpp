#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "corrlab/diophantine.hpp"
#include "oracles.hpp"

using namespace corrlab;

namespace {

std::vector<std::int64_t> head(const ContinuedFraction& cf, std::size_t n) {
  return {cf.quotients.begin(), cf.quotients.begin() + std::min(n, cf.quotients.size())};
}

// Independent check of a prime_denominator_approx answer: q prime in [N, 2N],
// ||q alpha|| under the threshold, and no smaller prime in [N, q) qualifies.
void check_approx(const AlphaValue& alpha, const oracle::Dec& exact,
                  std::int64_t N, double eta) {
  const double thr = std::pow(static_cast<double>(N), -(1.0 - eta));
  auto got = prime_denominator_approx(alpha, N, eta);
  std::int64_t first = -1;
  for (auto q : oracle::primes_by_trial(N, 2 * N)) {
    oracle::Dec qa = exact * q;
    if (std::fabs(oracle::signed_frac(qa)) >= thr) continue;
    oracle::Dec nearest = boost::multiprecision::round(qa);
    if (oracle::md(static_cast<std::int64_t>(nearest), q) == 0) continue;
    first = q;
    break;
  }
  if (first < 0) {
    EXPECT_FALSE(got.has_value()) << "N=" << N;
    return;
  }
  ASSERT_TRUE(got.has_value()) << "N=" << N;
  EXPECT_EQ(got->q, first);
  EXPECT_TRUE(got->q_prime);
  oracle::Dec qa = exact * first;
  EXPECT_EQ(got->a, static_cast<std::int64_t>(boost::multiprecision::round(qa)));
  EXPECT_NEAR(got->err, std::fabs(oracle::signed_frac(qa)) / first, 1e-15);
}

}  // namespace

TEST(ContinuedFraction, KnownExpansions) {
  auto g = continued_fraction(AlphaValue::golden());
  EXPECT_EQ(head(g, 20), std::vector<std::int64_t>(20, 1));
  auto s = continued_fraction(AlphaValue::sqrt_of(2));
  EXPECT_EQ(head(s, 20), std::vector<std::int64_t>(20, 2));
  auto r = continued_fraction(AlphaValue::rational(7, 16));
  EXPECT_EQ(r.quotients, (std::vector<std::int64_t>{2, 3, 2}));
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.convergents.back(), (std::pair<std::int64_t, std::int64_t>{7, 16}));
  auto p = continued_fraction(AlphaValue::pi_frac());
  EXPECT_EQ(head(p, 5), (std::vector<std::int64_t>{7, 15, 1, 292, 1}));
}

TEST(ContinuedFraction, ConvergentsAreBestApproximations) {
  for (int k : {2, 3, 5, 7, 11}) {
    auto cf = continued_fraction(AlphaValue::sqrt_of(k));
    ASSERT_GE(cf.convergents.size(), 10u);
    oracle::Dec frac = oracle::sqrt_dec(k) - boost::multiprecision::floor(oracle::sqrt_dec(k));
    for (std::size_t i = 0; i + 1 < cf.convergents.size(); ++i) {
      auto [p, q] = cf.convergents[i];
      oracle::Dec gap = boost::multiprecision::abs(frac - oracle::Dec(p) / q);
      oracle::Dec bound = oracle::Dec(1) / (oracle::Dec(q) * cf.convergents[i + 1].second);
      EXPECT_LT(gap, bound) << "sqrt " << k << " i=" << i;
    }
  }
}

TEST(ContinuedFraction, StopsAtPrecision) {
  auto coarse = continued_fraction(AlphaValue::sqrt_of(2, 64), 200);
  EXPECT_TRUE(coarse.truncated);
  EXPECT_LT(coarse.quotients.size(), 60u);
  for (auto a : coarse.quotients) EXPECT_EQ(a, 2);
}

TEST(PrimeApprox, SqrtTwoExample) {
  auto r = prime_denominator_approx(AlphaValue::sqrt_of(2), 20, 0.2);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->a, 41);
  EXPECT_EQ(r->q, 29);
  EXPECT_NEAR(r->err, 0.01219330881975 / 29, 1e-14);
}

TEST(PrimeApprox, RationalCases) {
  EXPECT_FALSE(prime_denominator_approx(AlphaValue::rational(1, 4), 50, 0.2).has_value());
  auto r = prime_denominator_approx(AlphaValue::rational(1, 101), 60, 0.2);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->a, 1);
  EXPECT_EQ(r->q, 101);
  EXPECT_EQ(r->err, 0.0);
}

TEST(PrimeApprox, AgainstDecimalOracle) {
  const oracle::Dec r2 = oracle::sqrt_dec(2), r3 = oracle::sqrt_dec(3);
  // golden and pi-frac are the fractional parts
  const oracle::Dec phi = (oracle::sqrt_dec(5) - 1) / 2, pi = oracle::pi_dec() - 3;
  for (std::int64_t N : {20, 57, 60, 100, 1000, 5000}) {
    for (double eta : {0.1, 0.2, 0.4}) {
      check_approx(AlphaValue::sqrt_of(2), r2, N, eta);
      check_approx(AlphaValue::sqrt_of(3), r3, N, eta);
      check_approx(AlphaValue::golden(), phi, N, eta);
      check_approx(AlphaValue::pi_frac(), pi, N, eta);
    }
  }
}

TEST(PrimeApprox, PiFinds113) {
  auto r = prime_denominator_approx(AlphaValue::pi_frac(), 100, 0.1);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->q, 113);
  EXPECT_EQ(r->a, 16);
}

TEST(PrimeApprox, Guards) {
  EXPECT_THROW(prime_denominator_approx(AlphaValue::sqrt_of(2), 1, 0.2), Error);
  EXPECT_THROW(prime_denominator_approx(AlphaValue::sqrt_of(2), 20, 0.0), Error);
  EXPECT_THROW(prime_denominator_approx(AlphaValue::sqrt_of(2), 20, 1.0), Error);
}

TEST(PartialQuotients, Examples) {
  auto g = partial_quotient_sum(AlphaValue::golden(), 100);
  EXPECT_EQ(g.index, 10);  // denominators 1, 2, 3, 5, ..., 89, then 144
  EXPECT_EQ(g.sum, 10);
  auto r = partial_quotient_sum(AlphaValue::rational(7, 16), 16);
  EXPECT_EQ(r.index, 3);
  EXPECT_EQ(r.sum, 7);
  EXPECT_EQ(partial_quotient_sum(AlphaValue::rational(7, 16), 6).sum, 2);
}

TEST(PartialQuotients, MonotoneInN) {
  auto alpha = AlphaValue::pi_frac();
  std::int64_t prev = 0;
  for (std::int64_t N = 1; N <= 100000; N = N * 3 + 1) {
    auto s = partial_quotient_sum(alpha, N).sum;
    EXPECT_GE(s, prev) << N;
    prev = s;
  }
  EXPECT_EQ(partial_quotient_sum(alpha, 33102).sum, 7 + 15 + 1 + 292);
  EXPECT_EQ(partial_quotient_sum(alpha, 33101).sum, 7 + 15 + 1);
}

TEST(PartialQuotients, PrecisionExhausted) {
  try {
    partial_quotient_sum(AlphaValue::sqrt_of(2, 64), std::int64_t{1} << 62);
    FAIL() << "expected a precision error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precision);
  }
}

TEST(Squarefree, Examples) {
  EXPECT_EQ(squarefree_part(1), 1);
  EXPECT_EQ(squarefree_part(12), 3);
  EXPECT_EQ(squarefree_part(8), 2);
  EXPECT_EQ(squarefree_part(45), 5);
  EXPECT_EQ(squarefree_part(1000003LL * 1000003LL), 1);
  EXPECT_EQ(squarefree_part(1000003LL * 999983LL), 1000003LL * 999983LL);
  EXPECT_THROW(squarefree_part(0), Error);
}

TEST(Squarefree, AgainstTrialDivision) {
  std::mt19937_64 rng(91);
  std::uniform_int_distribution<std::int64_t> dist(1, 2'000'000);
  for (int t = 0; t < 3000; ++t) {
    std::int64_t q = dist(rng), r = q, want = 1;
    for (std::int64_t p = 2; p <= r; ++p) {
      int e = 0;
      while (r % p == 0) {
        r /= p;
        ++e;
      }
      if (e & 1) want *= p;
      if (p * p > r && r > 1) {
        want *= r;
        break;
      }
    }
    EXPECT_EQ(squarefree_part(q), want) << q;
  }
}
