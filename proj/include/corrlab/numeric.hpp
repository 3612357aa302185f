// Scalar arithmetic: signed fractional parts, dilations with certified error,
// Legendre symbols, quadratic Gauss sums, 64-bit primality and inverses.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "corrlab/error.hpp"

namespace corrlab {

using BigInt = boost::multiprecision::cpp_int;
using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr unsigned kDefaultFractionalBits = 256;
inline constexpr unsigned kMaxFractionalBits = 4096;

// ---------------------------------------------------------------------------
// Modular helpers

inline std::int64_t mod_floor(std::int64_t a, std::int64_t q) {
  std::int64_t r = a % q;
  return r < 0 ? r + q : r;
}

inline std::int64_t mod_floor(i128 a, std::int64_t q) {
  i128 r = a % q;
  return static_cast<std::int64_t>(r < 0 ? r + q : r);
}

/// Representative of a mod q in (-q/2, q/2].
inline std::int64_t centered_residue(std::int64_t a, std::int64_t q) {
  std::int64_t r = mod_floor(a, q);
  return 2 * r > q ? r - q : r;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp,
                            std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Primality

/// Deterministic Miller-Rabin; the base set is exact for all n < 2^64.
inline bool is_prime(std::uint64_t n) {
  if (n >= (std::uint64_t{1} << 63)) {
    fail(ErrorKind::precondition, "is_prime: input must be below 2^63");
  }
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline bool is_prime(std::int64_t n) {
  if (n < 0) return false;
  return is_prime(static_cast<std::uint64_t>(n));
}

inline bool is_prime(int n) { return is_prime(static_cast<std::int64_t>(n)); }

/// All primes in [lo, hi], increasing. Segmented sieve for moderate hi,
/// Miller-Rabin per candidate beyond that.
inline std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi) {
  require(lo >= 0 && hi >= 0, "primes_in: bounds must be nonnegative");
  if (hi >= (std::int64_t{1} << 62)) {
    fail(ErrorKind::precondition, "primes_in: upper bound overflows");
  }
  std::vector<std::int64_t> out;
  if (hi < lo || hi < 2) return out;
  lo = std::max<std::int64_t>(lo, 2);
  require_budget(hi - lo <= 2'000'000'000, "primes_in: range too long");

  if (hi > 100'000'000'000'000LL) {
    for (std::int64_t n = lo; n <= hi; ++n) {
      if (is_prime(n)) out.push_back(n);
    }
    return out;
  }
  auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(hi)));
  while (root * root > hi) --root;
  while ((root + 1) * (root + 1) <= hi) ++root;
  std::vector<char> small(static_cast<std::size_t>(root) + 1, 1);
  std::vector<std::int64_t> base;
  for (std::int64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::int64_t j = i * i; j <= root; j += i) small[j] = 0;
  }
  constexpr std::int64_t kSegment = 1 << 20;
  std::vector<char> seg;
  for (std::int64_t s = lo; s <= hi; s += kSegment) {
    std::int64_t e = std::min(hi, s + kSegment - 1);
    seg.assign(static_cast<std::size_t>(e - s + 1), 1);
    for (std::int64_t p : base) {
      std::int64_t start = std::max(p * p, (s + p - 1) / p * p);
      for (std::int64_t j = start; j <= e; j += p) seg[j - s] = 0;
    }
    for (std::int64_t n = s; n <= e; ++n) {
      if (seg[n - s]) out.push_back(n);
    }
  }
  return out;
}

inline void require_odd_prime(std::int64_t q, const char* who) {
  if (q < 3 || q % 2 == 0 || !is_prime(q)) {
    fail(ErrorKind::precondition,
         std::string(who) + ": modulus " + std::to_string(q) +
             " is not an odd prime");
  }
}

/// Inverse of a modulo the prime q, in [1, q-1].
inline std::int64_t mod_inverse(std::int64_t a, std::int64_t q) {
  require(q >= 2 && is_prime(q), "mod_inverse: modulus must be prime");
  std::int64_t r = mod_floor(a, q);
  require(r != 0, "mod_inverse: q divides a");
  // extended Euclid on (r, q)
  std::int64_t old_r = r, cur_r = q, old_s = 1, cur_s = 0;
  while (cur_r != 0) {
    std::int64_t quot = old_r / cur_r;
    std::tie(old_r, cur_r) = std::pair{cur_r, old_r - quot * cur_r};
    std::tie(old_s, cur_s) = std::pair{cur_s, old_s - quot * cur_s};
  }
  return mod_floor(old_s, q);
}

// ---------------------------------------------------------------------------
// Legendre symbols and Gauss sums

/// (a/q) by Euler's criterion.
inline int legendre_symbol(std::int64_t a, std::int64_t q) {
  require_odd_prime(q, "legendre_symbol");
  auto r = static_cast<std::uint64_t>(mod_floor(a, q));
  if (r == 0) return 0;
  std::uint64_t e = powmod(r, static_cast<std::uint64_t>(q - 1) / 2,
                           static_cast<std::uint64_t>(q));
  return e == 1 ? 1 : -1;
}

/// Table of Legendre symbols for one prime, for inner loops.
class LegendreTable {
 public:
  explicit LegendreTable(std::int64_t q) : q_(q) {
    require_odd_prime(q, "LegendreTable");
    require_budget(q <= 200'000'000, "LegendreTable: modulus too large");
    chi_.assign(static_cast<std::size_t>(q), -1);
    chi_[0] = 0;
    for (std::int64_t x = 1; x <= (q - 1) / 2; ++x) {
      chi_[static_cast<std::size_t>(mulmod(x, x, q))] = 1;
    }
  }

  std::int64_t modulus() const { return q_; }
  int operator()(std::int64_t a) const {
    return chi_[static_cast<std::size_t>(mod_floor(a, q_))];
  }
  /// Unchecked lookup for a residue already in [0, q).
  int at(std::int64_t r) const { return chi_[static_cast<std::size_t>(r)]; }
  const std::vector<signed char>& data() const { return chi_; }

 private:
  std::int64_t q_;
  std::vector<signed char> chi_;
};

/// e_q(t) = exp(2 pi i t / q) for integer t.
inline std::complex<double> e_q(std::int64_t t, std::int64_t q) {
  double angle = 2.0 * std::numbers::pi * static_cast<double>(mod_floor(t, q)) /
                 static_cast<double>(q);
  return {std::cos(angle), std::sin(angle)};
}

/// sum_{x mod q} e_q(j x^2) by the closed form (j/q) eps_q sqrt(q).
inline std::complex<double> gauss_sum(std::int64_t j, std::int64_t q) {
  require_odd_prime(q, "gauss_sum");
  if (mod_floor(j, q) == 0) return {static_cast<double>(q), 0.0};
  double root = std::sqrt(static_cast<double>(q)) * legendre_symbol(j, q);
  if (q % 4 == 1) return {root, 0.0};
  return {0.0, root};
}

/// Same sum by direct summation over the q terms.
inline std::complex<double> gauss_sum_direct(std::int64_t j, std::int64_t q) {
  require_odd_prime(q, "gauss_sum_direct");
  std::complex<double> acc = 0.0;
  std::int64_t jr = mod_floor(j, q);
  for (std::int64_t x = 0; x < q; ++x) {
    acc += e_q(static_cast<std::int64_t>(
                   static_cast<i128>(jr) * mulmod(x, x, q) % q),
               q);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Signed fractional part

/// A real in (-1/2, 1/2]; ||x|| is |value|.
struct SignedFrac {
  double value = 0.0;

  double norm() const { return std::fabs(value); }
  friend bool operator==(const SignedFrac&, const SignedFrac&) = default;
};

/// x - round(x) with ties resolved towards +1/2.
inline SignedFrac signed_frac(double x) {
  if (!std::isfinite(x)) {
    fail(ErrorKind::precondition, "signed_frac: non-finite input");
  }
  double r = x - std::floor(x);  // [0, 1]
  if (r >= 1.0) r = 0.0;
  if (r > 0.5) r -= 1.0;
  return {r};
}

// ---------------------------------------------------------------------------
// AlphaValue

/// A dilation alpha = integer_part + v with v in [0,1), stored either as an
/// exact reduced fraction or as a fixed-point mantissa with error 2^-bits.
class AlphaValue {
 public:
  enum class Kind { rational, fixed_point };
  enum class Symbol { none, sqrt, golden, pi_frac };

  /// The rational 0.
  AlphaValue() = default;

  /// num/den, any sign of num; split into integer part and [0,1) remainder.
  static AlphaValue rational(std::int64_t num, std::int64_t den) {
    require(den >= 1, "AlphaValue: denominator must be positive");
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = 1;
    num /= g;
    den /= g;
    AlphaValue a;
    a.kind_ = Kind::rational;
    a.integer_part_ = (num >= 0) ? num / den : -((-num + den - 1) / den);
    a.num_ = num - a.integer_part_ * den;
    a.den_ = den;
    return a;
  }

  /// v = mantissa / 2^bits with mantissa in [0, 2^bits).
  static AlphaValue fixed_point(const BigInt& mantissa, unsigned bits,
                                std::int64_t integer_part = 0,
                                Symbol symbol = Symbol::none,
                                std::int64_t symbol_arg = 0) {
    require(bits >= 1 && bits <= kMaxFractionalBits,
            "AlphaValue: fractional bits must be in [1, 4096]");
    require(mantissa >= 0 && msb_or_zero(mantissa) < bits,
            "AlphaValue: mantissa out of range");
    AlphaValue a;
    a.kind_ = Kind::fixed_point;
    a.integer_part_ = integer_part;
    a.bits_ = bits;
    a.mantissa_ = mantissa;
    a.symbol_ = symbol;
    a.symbol_arg_ = symbol_arg;
    a.build_limbs();
    return a;
  }

  /// Fractional part of sqrt(k), truncated to `bits`.
  static AlphaValue sqrt_of(std::uint64_t k,
                            unsigned bits = kDefaultFractionalBits) {
    require(bits >= 1 && bits <= kMaxFractionalBits,
            "AlphaValue: fractional bits must be in [1, 4096]");
    BigInt scaled = BigInt(k) << (2 * bits);
    BigInt root = boost::multiprecision::sqrt(scaled);
    BigInt ip = root >> bits;
    BigInt mant = root - (ip << bits);
    return fixed_point(mant, bits, static_cast<std::int64_t>(ip), Symbol::sqrt,
                       static_cast<std::int64_t>(k));
  }

  /// phi - 1 = (sqrt 5 - 1)/2.
  static AlphaValue golden(unsigned bits = kDefaultFractionalBits) {
    require(bits >= 1 && bits <= kMaxFractionalBits,
            "AlphaValue: fractional bits must be in [1, 4096]");
    BigInt root = boost::multiprecision::sqrt(BigInt(5) << (2 * bits));
    BigInt mant = (root - (BigInt(1) << bits)) >> 1;
    return fixed_point(mant, bits, 0, Symbol::golden);
  }

  /// pi - 3 via Machin's formula.
  static AlphaValue pi_frac(unsigned bits = kDefaultFractionalBits) {
    require(bits >= 1 && bits <= kMaxFractionalBits,
            "AlphaValue: fractional bits must be in [1, 4096]");
    const unsigned guard = 64;
    const unsigned work = bits + guard;
    auto arctan_inv = [work](std::uint64_t x) {
      BigInt one = BigInt(1) << work;
      BigInt term = one / x;
      BigInt sum = term;
      BigInt x2 = BigInt(x) * x;
      for (std::uint64_t k = 1; term != 0; ++k) {
        term /= x2;
        BigInt t = term / (2 * k + 1);
        if (k & 1) {
          sum -= t;
        } else {
          sum += t;
        }
      }
      return sum;
    };
    BigInt pi = 16 * arctan_inv(5) - 4 * arctan_inv(239);
    // round to `bits` fractional bits
    BigInt rounded = (pi + (BigInt(1) << (guard - 1))) >> guard;
    BigInt mant = rounded - (BigInt(3) << bits);
    return fixed_point(mant, bits, 0, Symbol::pi_frac);
  }

  /// Uniform random v in [0,1) at the given precision.
  template <class Rng>
  static AlphaValue random(Rng& rng, unsigned bits = kDefaultFractionalBits) {
    BigInt mant = 0;
    unsigned filled = 0;
    while (filled < bits) {
      std::uint64_t w = rng();
      unsigned take = std::min(64u, bits - filled);
      if (take < 64) w &= (std::uint64_t{1} << take) - 1;
      mant = (mant << take) | BigInt(w);
      filled += take;
    }
    return fixed_point(mant, bits);
  }

  Kind kind() const { return kind_; }
  Symbol symbol() const { return symbol_; }
  std::int64_t symbol_arg() const { return symbol_arg_; }
  bool is_rational() const { return kind_ == Kind::rational; }
  std::int64_t integer_part() const { return integer_part_; }
  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  const BigInt& mantissa() const { return mantissa_; }
  unsigned fractional_bits() const { return bits_; }

  /// Certified bound on |stored v - true v|.
  double error_bound() const {
    return kind_ == Kind::rational ? 0.0
                                   : std::ldexp(1.0, -static_cast<int>(bits_));
  }

  /// v as a double (rounded).
  double frac_value() const {
    if (kind_ == Kind::rational) {
      return static_cast<double>(num_) / static_cast<double>(den_);
    }
    return top_fraction(limbs_);
  }

  long double full_value() const {
    if (kind_ == Kind::rational) {
      return static_cast<long double>(integer_part_) +
             static_cast<long double>(num_) / static_cast<long double>(den_);
    }
    return static_cast<long double>(integer_part_) + top_fraction(limbs_);
  }

  std::string describe() const {
    switch (symbol_) {
      case Symbol::sqrt: return "sqrt:" + std::to_string(symbol_arg_);
      case Symbol::golden: return "golden";
      case Symbol::pi_frac: return "pi-frac";
      case Symbol::none: break;
    }
    if (kind_ == Kind::rational) {
      return "rational:" + std::to_string(integer_part_ * den_ + num_) + "/" +
             std::to_string(den_);
    }
    return "fixed:" + std::to_string(bits_) + "bits";
  }

  // Fixed-point internals: mantissa left-aligned into 64-bit limbs
  // (little-endian), total width 64 * limbs.size().
  const std::vector<std::uint64_t>& limbs() const { return limbs_; }

  static double top_fraction(const std::vector<std::uint64_t>& limbs) {
    // value = limbs / 2^(64 n); use the top two limbs
    if (limbs.empty()) return 0.0;
    double hi = static_cast<double>(limbs.back()) * 0x1p-64;
    double lo = limbs.size() > 1
                    ? static_cast<double>(limbs[limbs.size() - 2]) * 0x1p-128
                    : 0.0;
    return hi + lo;
  }

 private:
  static unsigned msb_or_zero(const BigInt& v) {
    return v == 0 ? 0 : static_cast<unsigned>(boost::multiprecision::msb(v));
  }

  void build_limbs() {
    const unsigned n = (bits_ + 63) / 64;
    BigInt aligned = mantissa_ << (64 * n - bits_);
    limbs_.assign(n, 0);
    for (unsigned i = 0; i < n; ++i) {
      limbs_[i] = static_cast<std::uint64_t>(aligned & 0xFFFFFFFFFFFFFFFFull);
      aligned >>= 64;
    }
  }

  Kind kind_ = Kind::rational;
  Symbol symbol_ = Symbol::none;
  std::int64_t symbol_arg_ = 0;
  std::int64_t integer_part_ = 0;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  unsigned bits_ = 0;
  BigInt mantissa_ = 0;
  std::vector<std::uint64_t> limbs_;
};

namespace detail {

/// limbs * m mod 2^(64 n), in place into out.
inline void mul_limbs(const std::vector<std::uint64_t>& limbs, std::uint64_t m,
                      std::vector<std::uint64_t>& out) {
  out.resize(limbs.size());
  u128 carry = 0;
  for (std::size_t i = 0; i < limbs.size(); ++i) {
    u128 p = static_cast<u128>(limbs[i]) * m + carry;
    out[i] = static_cast<std::uint64_t>(p);
    carry = p >> 64;
  }
}

inline void negate_limbs(std::vector<std::uint64_t>& v) {
  // two's complement mod 2^(64 n)
  bool carry = true;
  for (auto& w : v) {
    w = ~w;
    if (carry) {
      ++w;
      carry = (w == 0);
    }
  }
}

inline bool limbs_zero(const std::vector<std::uint64_t>& v) {
  return std::all_of(v.begin(), v.end(), [](std::uint64_t w) { return w == 0; });
}

inline void check_guard(const AlphaValue& alpha, long double magnitude) {
  if (alpha.is_rational()) return;
  long double err =
      std::ldexp(1.0L, -static_cast<int>(alpha.fractional_bits())) * magnitude;
  if (!(err < std::ldexp(1.0L, -40))) {
    fail(ErrorKind::precision,
         "precision guard: alpha carries " +
             std::to_string(alpha.fractional_bits()) +
             " fractional bits, too few for multiplier " +
             std::to_string(static_cast<double>(magnitude)) +
             "; rebuild alpha with more fractional bits");
  }
}

}  // namespace detail

/// {alpha * m} in [0, 1).
inline double frac_dilate_unsigned(const AlphaValue& alpha, std::int64_t m) {
  require(m >= -(std::int64_t{1} << 62) && m <= (std::int64_t{1} << 62),
          "frac_dilate: |m| must be at most 2^62");
  detail::check_guard(alpha, std::fabs(static_cast<long double>(m)));
  if (alpha.is_rational()) {
    std::int64_t r = mod_floor(
        static_cast<i128>(alpha.numerator()) * m, alpha.denominator());
    return static_cast<double>(r) / static_cast<double>(alpha.denominator());
  }
  thread_local std::vector<std::uint64_t> buf;
  std::uint64_t mag = m < 0 ? static_cast<std::uint64_t>(-m)
                            : static_cast<std::uint64_t>(m);
  detail::mul_limbs(alpha.limbs(), mag, buf);
  if (m < 0) detail::negate_limbs(buf);
  double v = AlphaValue::top_fraction(buf);
  if (v >= 1.0) v = std::nextafter(1.0, 0.0);
  return v;
}

/// {alpha * m}_sgn with absolute error at most alpha.error_bound() * |m|.
inline SignedFrac frac_dilate(const AlphaValue& alpha, std::int64_t m) {
  require(m >= -(std::int64_t{1} << 62) && m <= (std::int64_t{1} << 62),
          "frac_dilate: |m| must be at most 2^62");
  detail::check_guard(alpha, std::fabs(static_cast<long double>(m)));
  if (alpha.is_rational()) {
    const std::int64_t den = alpha.denominator();
    std::int64_t r = mod_floor(static_cast<i128>(alpha.numerator()) * m, den);
    if (2 * static_cast<i128>(r) > den) r -= den;
    return {static_cast<double>(r) / static_cast<double>(den)};
  }
  thread_local std::vector<std::uint64_t> buf;
  std::uint64_t mag = m < 0 ? static_cast<std::uint64_t>(-m)
                            : static_cast<std::uint64_t>(m);
  detail::mul_limbs(alpha.limbs(), mag, buf);
  if (m < 0) detail::negate_limbs(buf);
  // exact tie test: fraction == 1/2
  const std::uint64_t half = std::uint64_t{1} << 63;
  bool above_half = buf.back() > half ||
                    (buf.back() == half &&
                     !std::all_of(buf.begin(), buf.end() - 1,
                                  [](std::uint64_t w) { return w == 0; }));
  if (!above_half) return {AlphaValue::top_fraction(buf)};
  detail::negate_limbs(buf);
  return {-AlphaValue::top_fraction(buf)};
}

/// The integer n with m * alpha - n = {m * alpha}_sgn (alpha including its
/// integer part).
inline std::int64_t nearest_multiple(const AlphaValue& alpha, std::int64_t m) {
  detail::check_guard(alpha, std::fabs(static_cast<long double>(m)));
  if (alpha.is_rational()) {
    const std::int64_t den = alpha.denominator();
    i128 full = static_cast<i128>(alpha.integer_part()) * den + alpha.numerator();
    i128 prod = full * m;
    std::int64_t r = mod_floor(prod, den);
    if (2 * static_cast<i128>(r) > den) r -= den;
    return static_cast<std::int64_t>((prod - r) / den);
  }
  BigInt prod = alpha.mantissa() * BigInt(m < 0 ? -m : m);
  if (m < 0) prod = -prod;
  const unsigned bits = alpha.fractional_bits();
  BigInt one = BigInt(1) << bits;
  // floor division for possibly negative prod
  BigInt whole = prod >= 0 ? BigInt(prod >> bits)
                           : BigInt(-((-prod + one - 1) >> bits));
  BigInt rem = prod - whole * one;
  if (2 * rem > one) whole += 1;
  return static_cast<std::int64_t>(whole) + alpha.integer_part() * m;
}

}  // namespace corrlab
