#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "corrlab/numeric.hpp"
#include "oracles.hpp"

using namespace corrlab;

TEST(SignedFrac, Examples) {
  EXPECT_DOUBLE_EQ(signed_frac(0.5).value, 0.5);
  EXPECT_DOUBLE_EQ(signed_frac(0.75).value, -0.25);
  EXPECT_DOUBLE_EQ(signed_frac(3.25).value, 0.25);
  EXPECT_DOUBLE_EQ(signed_frac(-0.5).value, 0.5);
  EXPECT_DOUBLE_EQ(signed_frac(-0.75).norm(), 0.25);
}

TEST(SignedFrac, IntegerShifts) {
  for (double x : {0.125, -0.375, 0.5, 0.0, 0.3125}) {
    for (int k = -5; k <= 5; ++k) {
      EXPECT_EQ(signed_frac(x + k).value, signed_frac(x).value) << x << " + " << k;
    }
  }
}

TEST(SignedFrac, RejectsNonFinite) {
  EXPECT_THROW(signed_frac(std::nan("")), Error);
  EXPECT_THROW(signed_frac(INFINITY), Error);
}

TEST(FracDilate, Rationals) {
  EXPECT_DOUBLE_EQ(frac_dilate(AlphaValue::rational(1, 3), 5).value, -1.0 / 3.0);
  EXPECT_DOUBLE_EQ(frac_dilate(AlphaValue::rational(1, 2), 7).value, 0.5);
  EXPECT_DOUBLE_EQ(frac_dilate(AlphaValue::rational(-1, 2), 7).value, 0.5);
  EXPECT_DOUBLE_EQ(frac_dilate(AlphaValue::rational(7, 3), -2).value, 1.0 / 3.0);
}

TEST(FracDilate, SqrtTwoAgainstDecimal) {
  auto a = AlphaValue::sqrt_of(2);
  EXPECT_NEAR(frac_dilate(a, 29).value, 0.01219330881975, 1e-12);
  const auto r2 = oracle::sqrt_dec(2);
  for (std::int64_t m : {1LL, 29LL, 12345LL, 99999989LL, 1000000007LL * 1000LL,
                         -77LL, (1LL << 62)}) {
    EXPECT_NEAR(frac_dilate(a, m).value, oracle::signed_frac(r2 * m), 1e-15) << m;
  }
}

TEST(FracDilate, NearestMultipleIncludesIntegerPart) {
  auto a = AlphaValue::sqrt_of(2);
  EXPECT_EQ(nearest_multiple(a, 29), 41);
  EXPECT_EQ(nearest_multiple(AlphaValue::rational(22, 7), 7), 22);
}

TEST(FracDilate, PrecisionGuard) {
  auto coarse = AlphaValue::sqrt_of(2, 48);
  EXPECT_NO_THROW(frac_dilate(coarse, 3));
  try {
    frac_dilate(coarse, std::int64_t{1} << 20);
    FAIL() << "guard did not trip";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precision);
    EXPECT_NE(std::string(e.what()).find("fractional bits"), std::string::npos);
  }
  EXPECT_THROW(frac_dilate(AlphaValue::sqrt_of(2), (std::int64_t{1} << 62) + 1), Error);
}

TEST(AlphaValue, Invariants) {
  auto r = AlphaValue::rational(6, 4);
  EXPECT_EQ(r.numerator(), 1);
  EXPECT_EQ(r.denominator(), 2);
  EXPECT_EQ(r.integer_part(), 1);
  EXPECT_EQ(r.error_bound(), 0.0);
  auto neg = AlphaValue::rational(-1, 3);
  EXPECT_EQ(neg.integer_part(), -1);
  EXPECT_EQ(neg.numerator(), 2);
  auto s = AlphaValue::sqrt_of(2);
  EXPECT_EQ(s.fractional_bits(), 256u);
  EXPECT_EQ(s.error_bound(), std::ldexp(1.0, -256));
  EXPECT_GE(s.frac_value(), 0.0);
  EXPECT_LT(s.frac_value(), 1.0);
  EXPECT_THROW(AlphaValue::rational(1, 0), Error);
  EXPECT_THROW(AlphaValue::sqrt_of(2, 5000), Error);
}

TEST(AlphaValue, SymbolicConstantsAgainstDecimal) {
  EXPECT_NEAR(AlphaValue::golden().frac_value(),
              static_cast<double>((oracle::sqrt_dec(5) - 1) / 2), 1e-16);
  EXPECT_NEAR(AlphaValue::pi_frac().frac_value(), static_cast<double>(oracle::pi_dec() - 3), 1e-16);
  // deep digits: pi * 10^15 mod 1
  const std::int64_t m = 1000000000000000LL;
  EXPECT_NEAR(frac_dilate(AlphaValue::pi_frac(), m).value,
              oracle::signed_frac((oracle::pi_dec() - 3) * m), 1e-14);
}

TEST(Legendre, Examples) {
  EXPECT_EQ(legendre_symbol(0, 7), 0);
  EXPECT_EQ(legendre_symbol(2, 7), 1);
  EXPECT_EQ(legendre_symbol(3, 7), -1);
  EXPECT_THROW(legendre_symbol(3, 9), Error);
  EXPECT_THROW(legendre_symbol(3, 2), Error);
}

TEST(Legendre, MatchesSquaresAndIsMultiplicative) {
  for (std::int64_t q : oracle::primes_by_trial(3, 53)) {
    LegendreTable table(q);
    for (std::int64_t a = -q; a < 2 * q; ++a) {
      ASSERT_EQ(legendre_symbol(a, q), oracle::legendre_by_squares(a, q));
      ASSERT_EQ(table(a), legendre_symbol(a, q));
    }
    for (std::int64_t a = 0; a < q; ++a) {
      for (std::int64_t b = 0; b < q; ++b) {
        ASSERT_EQ(legendre_symbol(a * b, q), legendre_symbol(a, q) * legendre_symbol(b, q));
      }
    }
  }
}

TEST(GaussSum, Examples) {
  auto g = gauss_sum(1, 5);
  EXPECT_NEAR(g.real(), 2.2360680, 1e-7);
  EXPECT_NEAR(g.imag(), 0.0, 1e-12);
  EXPECT_NEAR(gauss_sum(0, 7).real(), 7.0, 1e-12);
  auto h = gauss_sum(2, 7);
  EXPECT_NEAR(h.real(), 0.0, 1e-12);
  EXPECT_NEAR(h.imag(), std::sqrt(7.0), 1e-12);
}

TEST(GaussSum, ModulusAndCharacter) {
  for (std::int64_t q : oracle::primes_by_trial(3, 101)) {
    const auto g1 = gauss_sum(1, q);
    for (std::int64_t j = 0; j < q; ++j) {
      auto g = gauss_sum(j, q);
      auto ref = oracle::gauss_by_sum(j, q);
      ASSERT_NEAR(g.real(), static_cast<double>(ref.real()), 1e-9 * std::sqrt(q));
      ASSERT_NEAR(g.imag(), static_cast<double>(ref.imag()), 1e-9 * std::sqrt(q));
      if (j == 0) continue;
      ASSERT_NEAR(std::abs(g), std::sqrt(static_cast<double>(q)), 1e-9);
      auto ratio = g / g1;
      ASSERT_NEAR(ratio.real(), legendre_symbol(j, q), 1e-9);
      ASSERT_NEAR(ratio.imag(), 0.0, 1e-9);
    }
  }
}

TEST(Primes, Examples) {
  EXPECT_TRUE(is_prime(29));
  EXPECT_FALSE(is_prime(91));
  EXPECT_EQ(primes_in(20, 40), (std::vector<std::int64_t>{23, 29, 31, 37}));
  EXPECT_FALSE(is_prime(std::int64_t{-5}));
  EXPECT_THROW(is_prime(std::uint64_t{1} << 63), Error);
}

TEST(Primes, AgainstTrialDivision) {
  for (std::int64_t n = 0; n < 20000; ++n) ASSERT_EQ(is_prime(n), oracle::prime_by_trial(n)) << n;
  EXPECT_EQ(primes_in(1, 5000), oracle::primes_by_trial(1, 5000));
  EXPECT_EQ(primes_in(1000000, 1003000), oracle::primes_by_trial(1000000, 1003000));
}

TEST(Primes, LargeAndAdversarial) {
  EXPECT_TRUE(is_prime(std::uint64_t{2305843009213693951ULL}));  // 2^61 - 1
  EXPECT_TRUE(is_prime(std::uint64_t{9223372036854775783ULL}));  // largest below 2^63
  EXPECT_FALSE(is_prime(std::uint64_t{3215031751ULL}));          // strong pseudoprime to 2,3,5,7
  EXPECT_FALSE(is_prime(std::uint64_t{561}));
  EXPECT_FALSE(is_prime(std::uint64_t{3825123056546413051ULL}));
  EXPECT_FALSE(is_prime(std::uint64_t{1000000007ULL * 998244353ULL}));
}

TEST(ModInverse, Examples) {
  EXPECT_EQ(mod_inverse(2, 7), 4);
  EXPECT_EQ(mod_inverse(1, 13), 1);
  EXPECT_EQ(mod_inverse(5, 11), 9);
  EXPECT_THROW(mod_inverse(22, 11), Error);
}

TEST(ModInverse, InvolutionAndEuclid) {
  for (std::int64_t q : {3, 11, 101, 1009}) {
    for (std::int64_t a = 1; a < q; ++a) {
      std::int64_t inv = mod_inverse(a, q);
      ASSERT_EQ(inv, oracle::inverse_by_euclid(a, q));
      ASSERT_EQ(mod_inverse(inv, q), a);
    }
  }
}
