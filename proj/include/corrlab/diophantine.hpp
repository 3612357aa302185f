// Continued fractions, prime-denominator approximations, partial-quotient
// sums and square-free parts.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "corrlab/error.hpp"
#include "corrlab/numeric.hpp"

namespace corrlab {

struct RationalApprox {
  std::int64_t a = 0;
  std::int64_t q = 1;
  double err = 0.0;  // |alpha - a/q|
  bool q_prime = false;
};

struct ContinuedFraction {
  std::vector<std::int64_t> quotients;  // alpha_1, alpha_2, ...
  // p_n / q_n = [0; alpha_1, ..., alpha_n], n >= 1
  std::vector<std::pair<std::int64_t, std::int64_t>> convergents;
  bool complete = false;   // the expansion terminated (rational input)
  bool truncated = false;  // stopped before precision could flip a quotient
};

namespace detail {

inline bool push_quotient(ContinuedFraction& cf, const BigInt& a) {
  if (a > BigInt(std::int64_t{1} << 62)) return false;
  const auto ai = static_cast<std::int64_t>(a);
  std::int64_t p1 = 1, q1 = 0, p0 = 0, q0 = 1;  // n = -1 and n = 0
  if (!cf.convergents.empty()) {
    std::tie(p0, q0) = cf.convergents.back();
    if (cf.convergents.size() >= 2) {
      std::tie(p1, q1) = cf.convergents[cf.convergents.size() - 2];
    } else {
      p1 = 0;
      q1 = 1;
    }
  }
  i128 p = static_cast<i128>(ai) * p0 + p1;
  i128 q = static_cast<i128>(ai) * q0 + q1;
  if (q > (i128{1} << 62)) return false;
  cf.quotients.push_back(ai);
  cf.convergents.emplace_back(static_cast<std::int64_t>(p),
                              static_cast<std::int64_t>(q));
  return true;
}

}  // namespace detail

/// Expansion of the fractional part of alpha. For fixed-point alpha the
/// expansions of both ends of the certified interval are run together and
/// stop as soon as they disagree.
inline ContinuedFraction continued_fraction(const AlphaValue& alpha,
                                            std::size_t max_terms = 64) {
  ContinuedFraction cf;
  if (alpha.is_rational()) {
    BigInt num = alpha.numerator(), den = alpha.denominator();
    while (num != 0 && cf.quotients.size() < max_terms) {
      BigInt a = den / num;
      BigInt r = den - a * num;
      if (!detail::push_quotient(cf, a)) {
        cf.truncated = true;
        return cf;
      }
      den = num;
      num = r;
    }
    cf.complete = (num == 0);
    return cf;
  }
  const BigInt one = BigInt(1) << alpha.fractional_bits();
  BigInt n_lo = alpha.mantissa() - 1, d_lo = one;
  BigInt n_hi = alpha.mantissa() + 1, d_hi = one;
  if (n_lo <= 0 || n_hi >= one) {
    cf.truncated = true;
    return cf;
  }
  while (cf.quotients.size() < max_terms) {
    if (n_lo == 0 || n_hi == 0) {
      cf.truncated = true;
      return cf;
    }
    BigInt a_lo = d_lo / n_lo, a_hi = d_hi / n_hi;
    if (a_lo != a_hi) {
      cf.truncated = true;
      return cf;
    }
    if (!detail::push_quotient(cf, a_lo)) {
      cf.truncated = true;
      return cf;
    }
    BigInt r_lo = d_lo - a_lo * n_lo, r_hi = d_hi - a_hi * n_hi;
    d_lo = n_lo;
    n_lo = r_lo;
    d_hi = n_hi;
    n_hi = r_hi;
  }
  return cf;
}

/// First prime q in [N, 2N] with ||q alpha|| < N^{-(1-eta)}.
inline std::optional<RationalApprox> prime_denominator_approx(
    const AlphaValue& alpha, std::int64_t N, double eta) {
  require(N >= 2, "prime_denominator_approx: N must be at least 2");
  require(eta > 0.0 && eta < 1.0, "prime_denominator_approx: eta must lie in (0, 1)");
  require(2 * N < (std::int64_t{1} << 62), "prime_denominator_approx: N too large");
  const double threshold = std::pow(static_cast<double>(N), -(1.0 - eta));
  constexpr std::int64_t kBlock = 1 << 20;
  for (std::int64_t lo = N; lo <= 2 * N; lo += kBlock) {
    std::int64_t hi = std::min(2 * N, lo + kBlock - 1);
    for (std::int64_t q : primes_in(lo, hi)) {
      double dist = frac_dilate(alpha, q).norm();
      if (!(dist < threshold)) continue;
      std::int64_t a = nearest_multiple(alpha, q);
      if (mod_floor(a, q) == 0) continue;  // a/q would not have denominator q
      return RationalApprox{a, q, dist / static_cast<double>(q), true};
    }
  }
  return std::nullopt;
}

struct PartialQuotientSum {
  std::int64_t index = 0;  // i(N): q_{i(N)} <= N < q_{i(N)+1}
  std::int64_t sum = 0;    // alpha_1 + ... + alpha_{i(N)}
};

inline PartialQuotientSum partial_quotient_sum(const AlphaValue& alpha,
                                               std::int64_t N) {
  require(N >= 1, "partial_quotient_sum: N must be positive");
  auto cf = continued_fraction(alpha, 200);
  PartialQuotientSum out;
  for (std::size_t i = 0; i < cf.quotients.size(); ++i) {
    if (cf.convergents[i].second > N) return out;
    out.index = static_cast<std::int64_t>(i) + 1;
    out.sum += cf.quotients[i];
  }
  if (!cf.complete) {
    fail(ErrorKind::precision,
         "partial_quotient_sum: expansion exhausted the certified precision "
         "after " + std::to_string(cf.quotients.size()) +
             " quotients; rebuild alpha with more fractional bits");
  }
  return out;
}

/// Product of the primes dividing q to an odd power.
inline std::int64_t squarefree_part(std::int64_t q) {
  require(q >= 1, "squarefree_part: q must be positive");
  require_budget(q <= (std::int64_t{1} << 50), "squarefree_part: q above 2^50");
  std::int64_t result = 1, r = q;
  for (std::int64_t p = 2; p * p * p <= r; p += (p == 2 ? 1 : 2)) {
    int e = 0;
    while (r % p == 0) {
      r /= p;
      ++e;
    }
    if (e & 1) result *= p;
  }
  // r has at most two prime factors left: 1, p, p^2 or p p'
  if (r > 1) {
    auto s = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(r))));
    while (s * s > r) --s;
    while ((s + 1) * (s + 1) <= r) ++s;
    if (s * s != r) result *= r;
  }
  return result;
}

}  // namespace corrlab
