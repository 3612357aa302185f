// End-to-end experiments: the modular sandwich around R_3, the A0 main term,
// and the Fourier-coefficient obstruction computation.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <unordered_map>
#include <vector>

#include "corrlab/correlations.hpp"
#include "corrlab/diophantine.hpp"
#include "corrlab/error.hpp"
#include "corrlab/kernels.hpp"
#include "corrlab/modcount.hpp"
#include "corrlab/numeric.hpp"
#include "corrlab/report.hpp"
#include "corrlab/sequences.hpp"

namespace corrlab {

// ---------------------------------------------------------------------------
// Sandwich

struct IntRange {
  std::int64_t lo = 0, hi = -1;
  bool empty() const { return lo > hi; }
  std::int64_t size() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(std::int64_t r) const { return lo <= r && r <= hi; }
};

struct SandwichBox {
  double s1 = -1, t1 = 1, s2 = -1, t2 = 1;

  bool degenerate() const { return !(s1 < t1) || !(s2 < t2); }

  /// Integer r-ranges of S- (shrunk) and S+ (fattened).
  static IntRange shrunk(double s, double t, double scale, double delta) {
    return {static_cast<std::int64_t>(std::ceil(s * scale + delta)),
            static_cast<std::int64_t>(std::floor(t * scale - delta))};
  }
  static IntRange fattened(double s, double t, double scale, double delta) {
    return {static_cast<std::int64_t>(std::ceil(s * scale - delta)),
            static_cast<std::int64_t>(std::floor(t * scale + delta))};
  }
};

struct SandwichOptions {
  bool with_main_term = false;
};

struct SandwichReport {
  std::string alpha;
  std::int64_t a = 0, q = 0, N = 0;
  double L = 0, eta = 0, beta = 0;
  SandwichBox box;
  double delta = 0;  // N^2 / q^{1-eta}
  IntRange minus1, minus2, plus1, plus2;
  std::int64_t lower_count = 0, upper_count = 0, r3_count = 0;
  double lower = 0, r3 = 0, upper = 0;
  std::optional<double> main_term_lower, main_term_upper;
  double expected_cells = 0;  // (t1-s1)(t2-s2) q^2 L^2 / N^2
  bool diophantine_ok = false;
  bool relationship_ok = false;

  bool preconditions_held() const { return diophantine_ok && relationship_ok; }
  bool chain_holds() const { return lower <= r3 && r3 <= upper; }

  Json to_json() const {
    Json j{{"alpha", alpha}, {"a", a}, {"q", q}, {"N", N}, {"L", L},
           {"eta", eta}, {"beta", beta},
           {"box", {box.s1, box.t1, box.s2, box.t2}},
           {"delta", delta},
           {"S_minus", {{minus1.lo, minus1.hi}, {minus2.lo, minus2.hi}}},
           {"S_plus", {{plus1.lo, plus1.hi}, {plus2.lo, plus2.hi}}},
           {"cells_minus", minus1.size() * minus2.size()},
           {"cells_plus", plus1.size() * plus2.size()},
           {"expected_cells", expected_cells},
           {"lower", lower}, {"r3", r3}, {"upper", upper},
           {"diophantine_ok", diophantine_ok},
           {"relationship_ok", relationship_ok},
           {"chain_holds", chain_holds()}};
    if (main_term_lower) j["main_term_lower"] = *main_term_lower;
    if (main_term_upper) j["main_term_upper"] = *main_term_upper;
    return j;
  }
};

/// sum over (r1, r2) in I1 x I2, r1 r2 != 0, r1 + r2 != 0 of
/// A(N, q, abar r1, abar r2), counted directly as triples: with
/// u_x = a x^2 mod q the cell of (x, y, z) is r1 = {u_x - u_y}, r2 = {u_y - u_z}
/// (centered residues). Needs 2N < q so that x -> u_x is injective.
inline std::int64_t sandwich_count(std::int64_t a, std::int64_t q,
                                   std::int64_t N, IntRange I1, IntRange I2) {
  require(2 * N < q, "sandwich_count: need 2N < q");
  if (I1.empty() || I2.empty()) return 0;
  std::vector<std::int64_t> u(static_cast<std::size_t>(N));
  for (std::int64_t x = 1; x <= N; ++x) {
    u[x - 1] = static_cast<std::int64_t>(
        static_cast<i128>(mod_floor(a, q)) * mulmod(x, x, q) % q);
  }
  std::sort(u.begin(), u.end());
  std::vector<std::int64_t> ext;
  ext.reserve(3 * u.size());
  for (auto v : u) ext.push_back(v - q);
  for (auto v : u) ext.push_back(v);
  for (auto v : u) ext.push_back(v + q);
  auto count_in = [&](std::int64_t lo, std::int64_t hi) -> std::int64_t {
    if (lo > hi) return 0;
    auto b = std::lower_bound(ext.begin(), ext.end(), lo);
    auto e = std::upper_bound(ext.begin(), ext.end(), hi);
    return static_cast<std::int64_t>(e - b);
  };
  // offsets d = u_x - u_y; x1 needs d in I1, x3 needs -d in I2
  const IntRange both{std::max(I1.lo, -I2.hi), std::min(I1.hi, -I2.lo)};
  std::int64_t total = 0;
  for (std::int64_t uy : u) {
    std::int64_t c1 = count_in(uy + I1.lo, uy + I1.hi) - (I1.contains(0) ? 1 : 0);
    std::int64_t c3 = count_in(uy - I2.hi, uy - I2.lo) - (I2.contains(0) ? 1 : 0);
    std::int64_t ov = count_in(uy + both.lo, uy + both.hi) - (both.contains(0) ? 1 : 0);
    total += c1 * c3 - ov;
  }
  return total;
}

/// Reference for sandwich_count: cell-by-cell sum of count_A.
inline std::int64_t sandwich_count_cells(std::int64_t a, std::int64_t q,
                                         std::int64_t N, IntRange I1,
                                         IntRange I2) {
  require_budget(I1.size() * I2.size() * N <= 400'000'000,
                 "sandwich_count_cells: too many cells");
  auto roots = square_root_counts(q, N);
  const std::int64_t abar = mod_inverse(a, q);
  std::int64_t total = 0;
  for (std::int64_t r1 = I1.lo; r1 <= I1.hi; ++r1) {
    for (std::int64_t r2 = I2.lo; r2 <= I2.hi; ++r2) {
      if (r1 == 0 || r2 == 0 || r1 + r2 == 0) continue;
      total += count_A(roots, N, mod_floor(static_cast<i128>(abar) * r1, q),
                       mod_floor(static_cast<i128>(abar) * r2, q));
    }
  }
  return total;
}

inline double infer_beta(std::int64_t N, double L) {
  return 1.0 - std::log(L) / std::log(static_cast<double>(N));
}

inline SandwichReport sandwich_bounds(const AlphaValue& alpha,
                                      const RationalApprox& approx,
                                      std::int64_t N, double L, double eta,
                                      const SandwichBox& box,
                                      const SandwichOptions& opt = {}) {
  require(N >= 2, "sandwich_bounds: N must be at least 2");
  require(L > 0.0 && L <= static_cast<double>(N), "sandwich_bounds: L must lie in (0, N]");
  require(eta > 0.0 && eta < 1.0, "sandwich_bounds: eta must lie in (0, 1)");
  const std::int64_t q = approx.q;
  require(is_prime(q), "sandwich_bounds: q must be prime");
  require(mod_floor(approx.a, q) != 0, "sandwich_bounds: q divides a");

  SandwichReport rep;
  rep.alpha = alpha.describe();
  rep.a = approx.a;
  rep.q = q;
  rep.N = N;
  rep.L = L;
  rep.eta = eta;
  rep.box = box;
  rep.beta = infer_beta(N, L);
  const double qd = static_cast<double>(q), Nd = static_cast<double>(N);

  // |alpha - a/q| = |q alpha - a| / q, with q alpha - a split exactly
  const double gap = static_cast<double>(nearest_multiple(alpha, q) - approx.a) +
                     frac_dilate(alpha, q).value;
  rep.diophantine_ok = std::fabs(gap) / qd <= std::pow(qd, -(2.0 - eta));
  const double Q = std::pow(Nd, (2.0 + rep.beta) / 2.0 + 10.0 * eta);
  rep.relationship_ok = Q <= qd && qd <= 2.0 * Q;

  if (box.degenerate()) return rep;

  rep.delta = Nd * Nd / std::pow(qd, 1.0 - eta);
  const double scale = qd * L / Nd;
  rep.minus1 = SandwichBox::shrunk(box.s1, box.t1, scale, rep.delta);
  rep.minus2 = SandwichBox::shrunk(box.s2, box.t2, scale, rep.delta);
  rep.plus1 = SandwichBox::fattened(box.s1, box.t1, scale, rep.delta);
  rep.plus2 = SandwichBox::fattened(box.s2, box.t2, scale, rep.delta);
  for (const IntRange& r : {rep.plus1, rep.plus2}) {
    require(2 * std::max(std::llabs(r.lo), std::llabs(r.hi)) < q,
            "sandwich_bounds: fattened box reaches beyond (-q/2, q/2)");
  }
  rep.expected_cells = (box.t1 - box.s1) * (box.t2 - box.s2) * qd * qd * L * L / (Nd * Nd);

  rep.lower_count = sandwich_count(approx.a, q, N, rep.minus1, rep.minus2);
  rep.upper_count = sandwich_count(approx.a, q, N, rep.plus1, rep.plus2);
  rep.lower = static_cast<double>(rep.lower_count) / Nd;
  rep.upper = static_cast<double>(rep.upper_count) / Nd;

  auto ps = dilated_points(alpha, 2, N);
  auto r3 = triple_correlation(ps, L, TestKernel::box2d(box.s1, box.t1, box.s2, box.t2));
  rep.r3 = r3.value;
  rep.r3_count = r3.contributing;

  if (opt.with_main_term) {
    const double w = Nd * Nd / (qd * qd * qd);
    auto sum_box = [&](IntRange a1, IntRange a2) {
      if (a1.empty() || a2.empty()) return 0.0;
      return static_cast<double>(
          sum_A0_over_box(q, approx.a, a1.lo, a1.hi, a2.lo, a2.hi));
    };
    rep.main_term_lower = w * sum_box(rep.minus1, rep.minus2);
    rep.main_term_upper = w * sum_box(rep.plus1, rep.plus2);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Diophantine counts

namespace detail {

inline std::vector<std::int64_t> powers(std::int64_t N, int d) {
  require(d >= 1, "powers: d must be positive");
  require(std::pow(static_cast<long double>(N), d) < std::ldexp(1.0L, 62),
          "powers: N^d exceeds 2^62");
  std::vector<std::int64_t> p(static_cast<std::size_t>(N) + 1, 0);
  for (std::int64_t x = 1; x <= N; ++x) {
    std::int64_t v = 1;
    for (int e = 0; e < d; ++e) v *= x;
    p[x] = v;
  }
  return p;
}

}  // namespace detail

/// #{distinct x in [1,N]^k : sum_i a_i (x_i^d - x_{i+1}^d) = ell}, k = 2, 3.
inline std::int64_t diophantine_count(const std::vector<std::int64_t>& a, int d,
                                      int k, std::int64_t N, std::int64_t ell) {
  require(k == 2 || k == 3, "diophantine_count: k must be 2 or 3");
  require(static_cast<int>(a.size()) == k - 1,
          "diophantine_count: a must have k - 1 entries");
  require(N >= 1, "diophantine_count: N must be positive");
  require_budget(std::pow(static_cast<double>(N), std::min(k, 3)) <= 1e9 &&
                     N <= 100'000,
                 "diophantine_count: N too large");
  const auto p = detail::powers(N, d);
  std::unordered_map<std::int64_t, std::int64_t> index;  // x^d -> x
  index.reserve(static_cast<std::size_t>(2 * N));
  for (std::int64_t x = 1; x <= N; ++x) index.emplace(p[x], x);
  auto lookup = [&](i128 v) -> std::int64_t {
    if (v <= 0 || v > (i128{1} << 62)) return 0;
    auto it = index.find(static_cast<std::int64_t>(v));
    return it == index.end() ? 0 : it->second;
  };

  std::int64_t count = 0;
  if (k == 2) {
    const std::int64_t a1 = a[0];
    if (a1 == 0) return ell == 0 ? N * (N - 1) : 0;
    if (ell % a1 != 0) return 0;
    const std::int64_t diff = ell / a1;  // x1^d - x2^d
    if (diff == 0) return 0;
    for (std::int64_t x2 = 1; x2 <= N; ++x2) {
      if (lookup(static_cast<i128>(p[x2]) + diff)) ++count;
    }
    return count;
  }
  // k = 3: a1 x1^d - a2 x3^d = ell + (a1 - a2) x2^d
  const std::int64_t a1 = a[0], a2 = a[1];
  for (std::int64_t x2 = 1; x2 <= N; ++x2) {
    const i128 rhs = static_cast<i128>(ell) + static_cast<i128>(a1 - a2) * p[x2];
    if (a2 == 0) {
      if (a1 == 0) {
        if (rhs == 0) count += (N - 1) * (N - 2);
        continue;
      }
      if (rhs % a1 != 0) continue;
      std::int64_t x1 = lookup(rhs / a1);
      if (x1 && x1 != x2) count += N - 2;  // any x3 distinct from x1, x2
      continue;
    }
    for (std::int64_t x1 = 1; x1 <= N; ++x1) {
      if (x1 == x2) continue;
      i128 t = static_cast<i128>(a1) * p[x1] - rhs;  // a2 x3^d
      if (t % a2 != 0) continue;
      std::int64_t x3 = lookup(t / a2);
      if (x3 && x3 != x1 && x3 != x2) ++count;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// Obstruction

struct ObstructionOptions {
  std::int64_t truncation = 0;  // |a|_inf bound; 0 picks a default
  double epsilon = 0.1;         // rho = N^{d+1+eps} / L
  std::int64_t ell_lo = 0, ell_hi = -1;  // coefficient window; empty: +-rho
  std::int64_t grid = 4096;     // alpha-grid size for the quadrature side
  bool with_quadrature = true;
  double tail_target = 1e-9;
};

struct ObstructionReport {
  int d = 0, k = 0;
  std::int64_t N = 0;
  double L = 0;
  std::string kernel;
  std::int64_t truncation = 0;
  double tail_bound = 0;       // bound on the dropped part of sum |ghat|
  bool tail_target_met = false;
  std::map<std::int64_t, std::complex<double>> coefficients;  // ell -> c_ell
  double parseval_lhs = 0;     // sum_{ell != 0} |c_ell|^2
  double parseval_rhs = 0;     // alpha-grid variance
  // sum over nonzero classes mod grid of |sum of c_ell in the class|^2; this
  // is what the grid actually sees
  double parseval_lhs_aliased = 0;
  double mean_coefficient = 0; // c_0
  double grid_mean = 0;
  std::int64_t grid = 0;
  double spike = 0;            // R at alpha = 0
  double spike_expected = 0;   // (N)_k / N g(0)

  Json to_json() const {
    Json coeffs = Json::array();
    for (const auto& [l, c] : coefficients) coeffs.push_back({l, c.real(), c.imag()});
    return {{"d", d}, {"k", k}, {"N", N}, {"L", L}, {"kernel", kernel},
            {"truncation", truncation}, {"tail_bound", tail_bound},
            {"tail_target_met", tail_target_met},
            {"c0", mean_coefficient}, {"parseval_lhs", parseval_lhs},
            {"parseval_rhs", parseval_rhs},
            {"parseval_lhs_aliased", parseval_lhs_aliased}, {"grid", grid},
            {"grid_mean", grid_mean}, {"spike", spike},
            {"spike_expected", spike_expected}, {"coefficients", coeffs}};
  }
};

namespace detail {

inline double aliased_norm(const std::vector<std::pair<std::int64_t, std::complex<double>>>& c,
                           std::int64_t G) {
  std::map<std::int64_t, std::complex<double>> folded;
  for (const auto& [l, v] : c) folded[mod_floor(l, G)] += v;
  CompensatedSum s;
  for (const auto& [r, v] : folded) {
    if (r != 0) s += std::norm(v);
  }
  return s.value();
}

}  // namespace detail

inline double falling_factorial(std::int64_t N, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v *= static_cast<double>(N - i);
  return v;
}

/// R_k^d(alpha) by the direct evaluators of the correlation module.
inline double correlation_at(const AlphaValue& alpha, int d, int k,
                             std::int64_t N, double L, const TestKernel& kernel) {
  auto ps = dilated_points(alpha, d, N);
  CorrelationOptions opt{true};
  if (k == 2) return pair_correlation(ps, L, kernel, opt).value;
  if (k == 3) return triple_correlation(ps, L, kernel, opt).value;
  return generic_correlation(ps, L, k, kernel).value;
}

/// (1/G) sum_j R(j/G) and (1/G) sum_j (R(j/G) - mean)^2.
inline std::pair<double, double> grid_variance(int d, int k, std::int64_t N,
                                               double L, const TestKernel& kernel,
                                               std::int64_t G) {
  require(G >= 1, "grid_variance: grid must be positive");
  auto parts = parallel_chunks<std::vector<double>>(
      0, static_cast<std::size_t>(G), 16, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> v;
        for (std::size_t j = lo; j < hi; ++j) {
          v.push_back(correlation_at(
              AlphaValue::rational(static_cast<std::int64_t>(j), G), d, k, N, L, kernel));
        }
        return v;
      });
  std::vector<double> values;
  for (auto& p : parts) values.insert(values.end(), p.begin(), p.end());
  CompensatedSum s;
  for (double v : values) s += v;
  const double mean = s.value() / static_cast<double>(G);
  CompensatedSum s2;
  for (double v : values) s2 += (v - mean) * (v - mean);
  return {mean, s2.value() / static_cast<double>(G)};
}

inline ObstructionReport obstruction_coefficients(int d, int k, double L,
                                                  std::int64_t N,
                                                  const TestKernel& kernel,
                                                  const ObstructionOptions& opt = {}) {
  require(k == 2 || k == 3, "obstruction_coefficients: k must be 2 or 3");
  require(kernel.arity() == k - 1, "obstruction_coefficients: kernel arity must be k - 1");
  require(kernel.has_fourier(), "obstruction_coefficients: kernel needs a closed-form transform");
  require(N >= k && L > 0.0, "obstruction_coefficients: need N >= k and L > 0");
  ObstructionReport rep;
  rep.d = d;
  rep.k = k;
  rep.N = N;
  rep.L = L;
  rep.kernel = kernel.name();
  const double Nd = static_cast<double>(N);
  const double rho = std::pow(Nd, d + 1 + opt.epsilon) / L;
  rep.truncation = opt.truncation > 0
                       ? opt.truncation
                       : static_cast<std::int64_t>(std::ceil(
                             std::pow(Nd, 1.0 + opt.epsilon) / (L * (k - 1))));
  const std::int64_t A = rep.truncation;
  const double step = L / Nd;  // xi = step * a

  // Tail of sum |ghat| outside the box, from |ghat(xi)| <= C / (pi xi)^2
  // per coordinate (triangle: C = 1; box side: |ghat| <= 1/(pi |xi|)).
  {
    double retained = 0.0;
    double tail = 0.0;
    if (kernel.shape() == TestKernel::Shape::triangle) {
      for (std::int64_t a = -A; a <= A; ++a) retained += std::abs(kernel.fourier({step * a}));
      double x = step * (static_cast<double>(A) + 0.5);
      tail = 2.0 / (std::numbers::pi * std::numbers::pi * step * x);
    } else {
      // box sides decay like 1/xi: the absolute tail diverges
      retained = 1.0;
      tail = std::numeric_limits<double>::infinity();
    }
    rep.tail_bound = tail / std::max(retained, 1e-300);
    rep.tail_target_met = rep.tail_bound < opt.tail_target;
  }

  std::int64_t ell_lo = opt.ell_lo, ell_hi = opt.ell_hi;
  if (ell_lo > ell_hi) {
    ell_hi = static_cast<std::int64_t>(std::floor(rho));
    ell_lo = -ell_hi;
  }
  const double pref = std::pow(L, k - 1) / std::pow(Nd, k);

  if (k == 2) {
    // c_ell = L/N^2 sum_a #{x1 != x2 : a (x1^d - x2^d) = ell} ghat(L a / N)
    const auto p = detail::powers(N, d);
    std::map<std::int64_t, std::int64_t> diff_count;  // D -> #{x1 != x2}
    for (std::int64_t x1 = 1; x1 <= N; ++x1) {
      for (std::int64_t x2 = 1; x2 <= N; ++x2) {
        if (x1 != x2) ++diff_count[p[x1] - p[x2]];
      }
    }
    std::unordered_map<std::int64_t, std::complex<double>> c;
    c.reserve(static_cast<std::size_t>(2 * A) * diff_count.size() + 1);
    for (std::int64_t a = -A; a <= A; ++a) {
      std::complex<double> gh = kernel.fourier({step * static_cast<double>(a)});
      for (const auto& [D, cnt] : diff_count) {
        c[a * D] += pref * static_cast<double>(cnt) * gh;
      }
    }
    std::vector<std::pair<std::int64_t, std::complex<double>>> sorted(c.begin(), c.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    CompensatedSum lhs;
    for (const auto& [l, v] : sorted) {
      if (l == 0) {
        rep.mean_coefficient = v.real();
        continue;
      }
      lhs += std::norm(v);
      if (l >= ell_lo && l <= ell_hi && v != 0.0) rep.coefficients[l] = v;
    }
    rep.parseval_lhs = lhs.value();
    if (opt.with_quadrature) rep.parseval_lhs_aliased = detail::aliased_norm(sorted, opt.grid);
  } else {
    require_budget(ell_hi - ell_lo <= 200 && A <= 20,
                   "obstruction_coefficients: k = 3 coefficient window too large");
    for (std::int64_t l = ell_lo; l <= ell_hi; ++l) {
      std::complex<double> acc = 0.0;
      for (std::int64_t a1 = -A; a1 <= A; ++a1) {
        for (std::int64_t a2 = -A; a2 <= A; ++a2) {
          std::int64_t n = diophantine_count({a1, a2}, d, 3, N, l);
          if (n) acc += static_cast<double>(n) * kernel.fourier({step * a1, step * a2});
        }
      }
      acc *= pref;
      if (l == 0) rep.mean_coefficient = acc.real();
      if (acc != 0.0) rep.coefficients[l] = acc;
    }
    CompensatedSum lhs;
    for (const auto& [l, v] : rep.coefficients) {
      if (l != 0) lhs += std::norm(v);
    }
    rep.parseval_lhs = lhs.value();  // restricted to the window
    if (opt.with_quadrature) {
      rep.parseval_lhs_aliased = detail::aliased_norm(
          std::vector<std::pair<std::int64_t, std::complex<double>>>(rep.coefficients.begin(),
                                                                     rep.coefficients.end()),
          opt.grid);
    }
  }

  double g0 = 0.0;
  {
    std::vector<double> zero(static_cast<std::size_t>(k - 1), 0.0);
    g0 = kernel(std::span<const double>(zero));
  }
  rep.spike_expected = falling_factorial(N, k) / Nd * g0;
  rep.spike = correlation_at(AlphaValue::rational(0, 1), d, k, N, L, kernel);

  if (opt.with_quadrature) {
    rep.grid = opt.grid;
    auto [mean, var] = grid_variance(d, k, N, L, kernel, opt.grid);
    rep.grid_mean = mean;
    rep.parseval_rhs = var;
  }
  return rep;
}

struct GrowthReport {
  std::vector<std::int64_t> Ns;
  std::vector<double> variances;
  double exponent = 0;  // least-squares slope of log variance against log N
  double expected = 0;  // 2(k - 1)
};

inline GrowthReport variance_growth(int d, int k, double L,
                                    const std::vector<std::int64_t>& Ns,
                                    const TestKernel& kernel, std::int64_t G) {
  require(Ns.size() >= 2, "variance_growth: need at least two values of N");
  GrowthReport rep;
  rep.Ns = Ns;
  rep.expected = 2.0 * (k - 1);
  for (auto N : Ns) rep.variances.push_back(grid_variance(d, k, N, L, kernel, G).second);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(Ns.size());
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    double x = std::log(static_cast<double>(Ns[i])), y = std::log(rep.variances[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return rep;
}

}  // namespace corrlab
