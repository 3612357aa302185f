// Independent reference computations for the test suite. Nothing here calls
// into corrlab; everything is brute force or decimal arithmetic.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace oracle {

using Dec = boost::multiprecision::cpp_dec_float_100;

inline bool prime_by_trial(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}

inline std::vector<std::int64_t> primes_by_trial(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t n = lo; n <= hi; ++n) {
    if (prime_by_trial(n)) out.push_back(n);
  }
  return out;
}

inline std::int64_t md(std::int64_t a, std::int64_t q) { return ((a % q) + q) % q; }

inline int legendre_by_squares(std::int64_t a, std::int64_t q) {
  a = md(a, q);
  if (a == 0) return 0;
  for (std::int64_t x = 1; x < q; ++x) {
    if (x * x % q == a) return 1;
  }
  return -1;
}

inline std::int64_t inverse_by_euclid(std::int64_t a, std::int64_t q) {
  std::int64_t r0 = q, r1 = md(a, q), s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t t = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - t * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - t * s1);
  }
  return md(s0, q);
}

inline std::complex<long double> gauss_by_sum(std::int64_t j, std::int64_t q) {
  const long double two_pi = 6.283185307179586476925286766559L;
  std::complex<long double> s = 0;
  for (std::int64_t x = 0; x < q; ++x) {
    long double t = static_cast<long double>(md(j * x % q * x, q)) / q;
    s += std::polar(1.0L, two_pi * t);
  }
  return s;
}

/// {x}_sgn of a high-precision decimal, as a double.
inline double signed_frac(const Dec& x) {
  Dec r = x - boost::multiprecision::floor(x);  // [0, 1)
  if (r > Dec(0.5)) r -= 1;
  return static_cast<double>(r);
}

inline Dec sqrt_dec(int k) { return boost::multiprecision::sqrt(Dec(k)); }
inline Dec pi_dec() { return boost::math::constants::pi<Dec>(); }

/// Brute count of (x, y, z) in [lo, hi]^3 with x^2 - y^2 = c1, y^2 - z^2 = c2 mod q.
inline std::int64_t triples(std::int64_t q, std::int64_t lo, std::int64_t hi,
                            std::int64_t c1, std::int64_t c2) {
  std::int64_t n = 0;
  for (std::int64_t x = lo; x <= hi; ++x)
    for (std::int64_t y = lo; y <= hi; ++y)
      for (std::int64_t z = lo; z <= hi; ++z)
        if (md(x * x - y * y - c1, q) == 0 && md(y * y - z * z - c2, q) == 0) ++n;
  return n;
}

/// Ordered distinct k-tuples from `pts` whose consecutive signed gaps, scaled
/// by N/L, satisfy `inside`; returns the weighted count divided by N.
template <class Kernel>
double correlation(const std::vector<double>& pts, double L, int k, Kernel g) {
  const std::size_t n = pts.size();
  const double scale = static_cast<double>(n) / L;
  auto sgn = [](double d) {
    double r = d - std::floor(d);
    return r > 0.5 ? r - 1.0 : r;
  };
  double total = 0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k));
  std::vector<double> w(static_cast<std::size_t>(k - 1));
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == k) {
      for (int i = 0; i + 1 < k; ++i) w[i] = scale * sgn(pts[idx[i]] - pts[idx[i + 1]]);
      total += g(w);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      bool used = false;
      for (int j = 0; j < depth; ++j) used |= idx[j] == i;
      if (used) continue;
      idx[depth] = i;
      self(self, depth + 1);
    }
  };
  rec(rec, 0);
  return total / static_cast<double>(n);
}

/// E over a uniform arc start of (#points in an arc of length h)^k, by
/// splitting the circle at every arc-start where the count changes.
inline double window_moment(std::vector<double> pts, double h, int k) {
  std::vector<double> cuts{0.0, 1.0};
  for (double x : pts) {
    cuts.push_back(x);
    double y = x - h;
    cuts.push_back(y - std::floor(y));
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    if (b <= a) continue;
    double y = 0.5 * (a + b);
    int c = 0;
    for (double x : pts) {
      double d = x - y;
      d -= std::floor(d);
      if (d < h) ++c;
    }
    total += (b - a) * std::pow(static_cast<double>(c), k);
  }
  return total;
}

}  // namespace oracle
