// Counting triples (x, y, z) with x^2 - y^2 = c1 and y^2 - z^2 = c2 mod q:
// truncated counts A, complete counts A0, the errors Delta and Delta*, the
// six-variable sums S(b, q), f-counts and the D / Bad-set machinery.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "corrlab/error.hpp"
#include "corrlab/numeric.hpp"
#include "corrlab/parallel.hpp"
#include "corrlab/report.hpp"

namespace corrlab {

// ---------------------------------------------------------------------------
// Square-root counts and A

/// table[r] = #{1 <= m <= M : m^2 = r mod q}.
inline std::vector<std::int64_t> square_root_counts(std::int64_t q,
                                                    std::int64_t M) {
  require(q >= 1, "square_root_counts: q must be positive");
  require(M >= 0 && M <= q, "square_root_counts: need 0 <= M <= q");
  require_budget(q <= 400'000'000, "square_root_counts: q too large");
  std::vector<std::int64_t> cnt(static_cast<std::size_t>(q), 0);
  for (std::int64_t m = 1; m <= M; ++m) {
    ++cnt[mulmod(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(m),
                 static_cast<std::uint64_t>(q))];
  }
  return cnt;
}

/// A(M, q, c1, c2) from precomputed square-root counts.
inline std::int64_t count_A(const std::vector<std::int64_t>& roots,
                            std::int64_t M, std::int64_t c1, std::int64_t c2) {
  const auto q = static_cast<std::int64_t>(roots.size());
  const std::int64_t a = mod_floor(c1, q), b = mod_floor(c2, q);
  std::int64_t total = 0;
  for (std::int64_t y = 1; y <= M; ++y) {
    auto y2 = static_cast<std::int64_t>(
        mulmod(static_cast<std::uint64_t>(y), static_cast<std::uint64_t>(y),
               static_cast<std::uint64_t>(q)));
    std::int64_t u = y2 + a;
    if (u >= q) u -= q;
    std::int64_t v = y2 - b;
    if (v < 0) v += q;
    total += roots[static_cast<std::size_t>(u)] * roots[static_cast<std::size_t>(v)];
  }
  return total;
}

inline std::int64_t count_A(std::int64_t q, std::int64_t M, std::int64_t c1,
                            std::int64_t c2) {
  require(M >= 0 && M <= q, "count_A: need 0 <= M <= q");
  return count_A(square_root_counts(q, M), M, c1, c2);
}

inline std::int64_t count_A0_brute(std::int64_t q, std::int64_t c1,
                                   std::int64_t c2) {
  require_odd_prime(q, "count_A0_brute");
  require_budget(q <= 499, "count_A0_brute: q above 499");
  if (q <= 31) {
    // plain triple loop
    const std::int64_t a = mod_floor(c1, q), b = mod_floor(c2, q);
    std::int64_t total = 0;
    for (std::int64_t x = 1; x <= q; ++x) {
      for (std::int64_t y = 1; y <= q; ++y) {
        if (mod_floor(x * x - y * y, q) != a) continue;
        for (std::int64_t z = 1; z <= q; ++z) {
          total += (mod_floor(y * y - z * z, q) == b);
        }
      }
    }
    return total;
  }
  return count_A(q, q, c1, c2);
}

// ---------------------------------------------------------------------------
// Closed form for A0

namespace detail {

/// H(c1, c2) = sum_{l=2}^{q-1} chi(l (l - 1) (l c2 + c1)).
inline std::int64_t h_sum(const LegendreTable& chi, std::int64_t c1,
                          std::int64_t c2) {
  const std::int64_t q = chi.modulus();
  const std::int64_t a = mod_floor(c1, q), b = mod_floor(c2, q);
  std::int64_t total = 0;
  std::int64_t lin = mod_floor(2 * b + a, q);  // l c2 + c1 at l = 2
  for (std::int64_t l = 2; l < q; ++l) {
    total += chi.at(static_cast<std::int64_t>(
                 mulmod(static_cast<std::uint64_t>(l * (l - 1) % q),
                        static_cast<std::uint64_t>(lin),
                        static_cast<std::uint64_t>(q))));
    lin += b;
    if (lin >= q) lin -= q;
  }
  return total;
}

struct A0Constants {
  std::int64_t kappa_deg;
  std::int64_t kappa_non;
};

/// Additive constants of the closed form, fixed by brute force at q = 3.
inline const A0Constants& a0_constants() {
  static const A0Constants k = [] {
    const std::int64_t q = 3;
    LegendreTable chi(q);
    A0Constants c{};
    // (0, 1) is single-degenerate: 2q + kappa - chi(-c2)
    c.kappa_deg = count_A0_brute(q, 0, 1) - 2 * q + chi(-1);
    // (1, 1) is non-degenerate: q + kappa + H
    c.kappa_non = count_A0_brute(q, 1, 1) - q - h_sum(chi, 1, 1);
    return c;
  }();
  return k;
}

}  // namespace detail

/// Closed-form A0 for one prime; the Legendre table is built once.
class A0Evaluator {
 public:
  explicit A0Evaluator(std::int64_t q) : chi_(q) {}

  std::int64_t q() const { return chi_.modulus(); }
  const LegendreTable& chi() const { return chi_; }

  std::int64_t operator()(std::int64_t c1, std::int64_t c2) const {
    const std::int64_t q = chi_.modulus();
    const auto& k = detail::a0_constants();
    const std::int64_t a = mod_floor(c1, q), b = mod_floor(c2, q);
    if (a == 0 && b == 0) return 4 * q - 3;
    if (a == 0) return 2 * q + k.kappa_deg - chi_(-b);
    if (b == 0) return 2 * q + k.kappa_deg - chi_(a);
    if ((a + b) % q == 0) return 2 * q + k.kappa_deg - chi_(b);
    return q + k.kappa_non + detail::h_sum(chi_, a, b);
  }

 private:
  LegendreTable chi_;
};

inline std::int64_t count_A0_closed(std::int64_t q, std::int64_t c1,
                                    std::int64_t c2) {
  return A0Evaluator(q)(c1, c2);
}

/// Dense closed-form table, index c1 * q + c2.
inline std::vector<std::int64_t> a0_table(std::int64_t q) {
  require_odd_prime(q, "a0_table");
  require_budget(q <= 4096, "a0_table: q above 4096");
  A0Evaluator eval(q);
  const auto& chi = eval.chi();
  const auto& k = detail::a0_constants();
  const auto qs = static_cast<std::size_t>(q);
  std::vector<std::int64_t> table(qs * qs);
  // weight_l = chi(l (l - 1)) for l = 2..q-1
  std::vector<int> weight(qs, 0);
  for (std::int64_t l = 2; l < q; ++l) weight[l] = chi.at(l * (l - 1) % q);
  const auto& raw = chi.data();

  parallel_chunks<int>(0, qs, 8, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::int64_t> lc(qs);
    for (std::size_t b = lo; b < hi; ++b) {
      const auto c2 = static_cast<std::int64_t>(b);
      for (std::int64_t l = 0; l < q; ++l) lc[l] = l * c2 % q;
      for (std::int64_t c1 = 0; c1 < q; ++c1) {
        std::int64_t value;
        if (c1 == 0 || c2 == 0 || (c1 + c2) % q == 0) {
          value = eval(c1, c2);
        } else {
          std::int64_t h = 0;
          for (std::int64_t l = 2; l < q; ++l) {
            std::int64_t t = lc[l] + c1;
            if (t >= q) t -= q;
            h += weight[l] * raw[static_cast<std::size_t>(t)];
          }
          value = q + k.kappa_non + h;
        }
        table[static_cast<std::size_t>(c1) * qs + b] = value;
      }
    }
    return 0;
  });
  return table;
}

// ---------------------------------------------------------------------------
// Truncated count tables

/// Counts A(M, q, c1, c2) for all cells, dense when q^2 is small.
class ATable {
 public:
  ATable(std::int64_t q, std::int64_t M) : q_(q), M_(M) {
    require(q >= 3, "ATable: q must be at least 3");
    require(M >= 1 && M <= q, "ATable: need 1 <= M <= q");
    require_budget(M <= 2000, "ATable: M above 2000");
    dense_ = q * q <= (std::int64_t{1} << 24);
    if (dense_) dense_counts_.assign(static_cast<std::size_t>(q * q), 0);
    std::vector<std::int64_t> sq(static_cast<std::size_t>(M) + 1);
    for (std::int64_t m = 1; m <= M; ++m) {
      sq[m] = static_cast<std::int64_t>(mulmod(m, m, q));
    }
    for (std::int64_t y = 1; y <= M; ++y) {
      for (std::int64_t x = 1; x <= M; ++x) {
        std::int64_t c1 = sq[x] - sq[y];
        if (c1 < 0) c1 += q;
        for (std::int64_t z = 1; z <= M; ++z) {
          std::int64_t c2 = sq[y] - sq[z];
          if (c2 < 0) c2 += q;
          add(c1, c2, 1);
        }
      }
    }
  }

  std::int64_t q() const { return q_; }
  std::int64_t M() const { return M_; }

  std::int64_t at(std::int64_t c1, std::int64_t c2) const {
    c1 = mod_floor(c1, q_);
    c2 = mod_floor(c2, q_);
    if (dense_) return dense_counts_[static_cast<std::size_t>(c1 * q_ + c2)];
    auto it = sparse_.find(c1 * q_ + c2);
    return it == sparse_.end() ? 0 : it->second;
  }

  /// f(c1, c2, count) over cells with count > 0, in (c1, c2) order.
  template <class F>
  void for_each_nonzero(F&& f) const {
    if (dense_) {
      for (std::int64_t i = 0; i < q_ * q_; ++i) {
        std::int64_t v = dense_counts_[static_cast<std::size_t>(i)];
        if (v) f(i / q_, i % q_, v);
      }
      return;
    }
    std::vector<std::pair<std::int64_t, std::int64_t>> cells(sparse_.begin(),
                                                             sparse_.end());
    std::sort(cells.begin(), cells.end());
    for (auto [key, v] : cells) f(key / q_, key % q_, v);
  }

 private:
  void add(std::int64_t c1, std::int64_t c2, std::int64_t v) {
    if (dense_) {
      dense_counts_[static_cast<std::size_t>(c1 * q_ + c2)] += v;
    } else {
      sparse_[c1 * q_ + c2] += v;
    }
  }

  std::int64_t q_, M_;
  bool dense_ = true;
  std::vector<std::int64_t> dense_counts_;
  std::unordered_map<std::int64_t, std::int64_t> sparse_;
};

// ---------------------------------------------------------------------------
// Delta

inline double delta(std::int64_t q, std::int64_t M, std::int64_t c1,
                    std::int64_t c2) {
  require(M >= 0 && M <= q, "delta: need 0 <= M <= q");
  const double lam = std::pow(static_cast<double>(M) / static_cast<double>(q), 3);
  double a = static_cast<double>(count_A(q, M, c1, c2));
  double a0 = static_cast<double>(count_A0_closed(q, c1, c2));
  return std::fabs(a - lam * a0);
}

/// sum over all cells of Delta^2, given the closed-form A0 table.
inline double delta_sq_sum(std::int64_t q, std::int64_t M,
                           const std::vector<std::int64_t>& a0) {
  require(static_cast<std::int64_t>(a0.size()) == q * q,
          "delta_sq_sum: A0 table size mismatch");
  ATable table(q, M);
  const long double lam =
      std::pow(static_cast<long double>(M) / static_cast<long double>(q), 3);
  long double hit = 0.0L, hit_a0_sq = 0.0L, all_a0_sq = 0.0L;
  for (std::int64_t v : a0) all_a0_sq += static_cast<long double>(v) * v;
  table.for_each_nonzero([&](std::int64_t c1, std::int64_t c2, std::int64_t A) {
    long double b = static_cast<long double>(a0[static_cast<std::size_t>(c1 * q + c2)]);
    long double d = static_cast<long double>(A) - lam * b;
    hit += d * d;
    hit_a0_sq += b * b;
  });
  return static_cast<double>(hit + lam * lam * (all_a0_sq - hit_a0_sq));
}

inline double delta_sq_sum(std::int64_t q, std::int64_t M) {
  return delta_sq_sum(q, M, a0_table(q));
}

// ---------------------------------------------------------------------------
// Congruence tables

enum class TableKind { A, A0, delta, delta_star };

inline const char* to_string(TableKind k) {
  switch (k) {
    case TableKind::A: return "A";
    case TableKind::A0: return "A0";
    case TableKind::delta: return "delta";
    case TableKind::delta_star: return "delta-star";
  }
  return "?";
}

struct CongruenceTable {
  std::int64_t q = 0;
  std::int64_t M = 0;
  TableKind kind = TableKind::A0;
  // dense, index c1 * q + c2
  std::vector<double> values;

  double at(std::int64_t c1, std::int64_t c2) const {
    return values[static_cast<std::size_t>(mod_floor(c1, q) * q + mod_floor(c2, q))];
  }

  bool integer_kind() const {
    return kind == TableKind::A || kind == TableKind::A0;
  }

  /// Integer kinds: sum of values mod 2^64. Real kinds: sum of the IEEE bit
  /// patterns mod 2^64.
  std::uint64_t checksum() const {
    std::uint64_t s = 0;
    for (double v : values) {
      if (integer_kind()) {
        s += static_cast<std::uint64_t>(static_cast<std::int64_t>(v));
      } else {
        s += std::bit_cast<std::uint64_t>(v);
      }
    }
    return s;
  }

  /// A tables are written sparse (zero cells omitted); the other kinds list
  /// every cell.
  std::string csv() const {
    std::ostringstream out;
    out << "c1,c2,value\n";
    for (std::int64_t c1 = 0; c1 < q; ++c1) {
      for (std::int64_t c2 = 0; c2 < q; ++c2) {
        double v = values[static_cast<std::size_t>(c1 * q + c2)];
        if (v == 0.0 && kind == TableKind::A) continue;
        out << c1 << ',' << c2 << ',';
        if (integer_kind()) {
          out << static_cast<std::int64_t>(v);
        } else {
          out << format_real(v);
        }
        out << '\n';
      }
    }
    return out.str();
  }

  Json sidecar() const {
    return {{"q", q}, {"M", M}, {"kind", to_string(kind)},
            {"checksum", checksum()}};
  }
};

inline CongruenceTable make_a_table(std::int64_t q, std::int64_t M) {
  require_odd_prime(q, "make_a_table");
  require_budget(q <= 4096, "make_a_table: q above 4096");
  CongruenceTable t{q, M, TableKind::A, std::vector<double>(static_cast<std::size_t>(q * q), 0.0)};
  ATable a(q, M);
  a.for_each_nonzero([&](std::int64_t c1, std::int64_t c2, std::int64_t v) {
    t.values[static_cast<std::size_t>(c1 * q + c2)] = static_cast<double>(v);
  });
  return t;
}

inline CongruenceTable make_a0_table(std::int64_t q) {
  auto raw = a0_table(q);
  CongruenceTable t{q, q, TableKind::A0, {}};
  t.values.assign(raw.begin(), raw.end());
  return t;
}

inline CongruenceTable make_delta_table(std::int64_t q, std::int64_t M) {
  auto a0 = a0_table(q);
  ATable a(q, M);
  const double lam = std::pow(static_cast<double>(M) / static_cast<double>(q), 3);
  CongruenceTable t{q, M, TableKind::delta, std::vector<double>(a0.size())};
  for (std::int64_t c1 = 0; c1 < q; ++c1) {
    for (std::int64_t c2 = 0; c2 < q; ++c2) {
      std::size_t i = static_cast<std::size_t>(c1 * q + c2);
      t.values[i] = std::fabs(static_cast<double>(a.at(c1, c2)) -
                              lam * static_cast<double>(a0[i]));
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Delta*

inline std::int64_t delta_star_cutoff(std::int64_t q, double beta) {
  require(beta > 0.0 && beta < 0.75, "delta_star: beta must lie in (0, 3/4)");
  return static_cast<std::int64_t>(
      std::floor(std::pow(static_cast<double>(q), 2.0 / (2.0 + beta)) + 1e-9));
}

/// max over 1 <= M <= floor(q^{2/(2+beta)}) of Delta(q, M, c1, c2), built
/// incrementally: step M adds the triples whose largest coordinate is M.
/// Between two touches A is constant while (M/q)^3 A0 grows, so |A - t A0|
/// is convex along the run and only its endpoints need evaluating.
inline CongruenceTable delta_star_table(std::int64_t q, double beta) {
  require_odd_prime(q, "delta_star_table");
  const std::int64_t mmax = delta_star_cutoff(q, beta);
  require_budget(mmax <= 5000, "delta_star_table: cutoff above 5000");
  require_budget(q <= 4096, "delta_star_table: q above 4096");
  require(mmax >= 1 && mmax <= q, "delta_star_table: empty M range");
  const auto a0 = a0_table(q);
  const auto cells = static_cast<std::size_t>(q * q);
  std::vector<std::int64_t> A(cells, 0);
  std::vector<std::int32_t> run_start(cells, 1), touched(cells, 0);
  std::vector<double> best(cells, 0.0);
  const double qd = static_cast<double>(q);

  auto value_at = [&](std::size_t i, std::int64_t M) {
    double lam = std::pow(static_cast<double>(M) / qd, 3);
    return std::fabs(static_cast<double>(A[i]) - lam * static_cast<double>(a0[i]));
  };
  auto close_run = [&](std::size_t i, std::int64_t last) {
    std::int64_t first = run_start[i];
    if (first > last) return;
    best[i] = std::max({best[i], value_at(i, first), value_at(i, last)});
  };

  std::vector<std::int64_t> sq(static_cast<std::size_t>(mmax) + 1);
  for (std::int64_t m = 1; m <= mmax; ++m) sq[m] = static_cast<std::int64_t>(mulmod(m, m, q));
  std::vector<std::size_t> hits;
  for (std::int64_t M = 1; M <= mmax; ++M) {
    hits.clear();
    auto add = [&](std::int64_t x, std::int64_t y, std::int64_t z) {
      std::int64_t c1 = sq[x] - sq[y];
      if (c1 < 0) c1 += q;
      std::int64_t c2 = sq[y] - sq[z];
      if (c2 < 0) c2 += q;
      std::size_t i = static_cast<std::size_t>(c1 * q + c2);
      if (touched[i] != M) {
        touched[i] = static_cast<std::int32_t>(M);
        close_run(i, M - 1);
        run_start[i] = static_cast<std::int32_t>(M);
      }
      ++A[i];
    };
    for (std::int64_t u = 1; u <= M; ++u) {
      for (std::int64_t v = 1; v <= M; ++v) add(M, u, v);
    }
    for (std::int64_t x = 1; x < M; ++x) {
      for (std::int64_t z = 1; z <= M; ++z) add(x, M, z);
    }
    for (std::int64_t x = 1; x < M; ++x) {
      for (std::int64_t y = 1; y < M; ++y) add(x, y, M);
    }
  }
  for (std::size_t i = 0; i < cells; ++i) close_run(i, mmax);
  return {q, mmax, TableKind::delta_star, std::move(best)};
}

/// Reference: recompute every cell at every M.
inline CongruenceTable delta_star_naive(std::int64_t q, double beta) {
  require_odd_prime(q, "delta_star_naive");
  const std::int64_t mmax = delta_star_cutoff(q, beta);
  require_budget(mmax <= 400 && q <= 1024, "delta_star_naive: too large");
  const auto a0 = a0_table(q);
  CongruenceTable t{q, mmax, TableKind::delta_star,
                    std::vector<double>(static_cast<std::size_t>(q * q), 0.0)};
  for (std::int64_t M = 1; M <= mmax; ++M) {
    auto roots = square_root_counts(q, M);
    const double lam = std::pow(static_cast<double>(M) / static_cast<double>(q), 3);
    for (std::int64_t c1 = 0; c1 < q; ++c1) {
      for (std::int64_t c2 = 0; c2 < q; ++c2) {
        std::size_t i = static_cast<std::size_t>(c1 * q + c2);
        double d = std::fabs(static_cast<double>(count_A(roots, M, c1, c2)) -
                             lam * static_cast<double>(a0[i]));
        t.values[i] = std::max(t.values[i], d);
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Exponential sums S(b, q)

using Residues6 = std::array<std::int64_t, 6>;

/// S(b, q) as an exact integer: the j = 0, k = 0 and j = k blocks in closed
/// form plus the generic block q((q-1)R - (q-2-R)).
inline std::int64_t exp_sum_S_exact(const Residues6& b_in, std::int64_t q) {
  require_odd_prime(q, "exp_sum_S");
  require_budget(q <= 10'000, "exp_sum_S: q above 10^4");
  Residues6 b;
  for (int i = 0; i < 6; ++i) b[i] = mod_floor(b_in[i], q);
  auto sq = [&](int i) { return b[i] * b[i] % q; };
  const std::int64_t q2 = q * q, q3 = q2 * q, q4 = q2 * q2;
  const bool zero = std::all_of(b.begin(), b.end(), [](std::int64_t v) { return v == 0; });

  // block with variables (u, v) free of the quadratic phase
  auto block = [&](int u, int v, std::int64_t phase, bool rest_zero) {
    if (b[u] != 0 || b[v] != 0) return std::int64_t{0};
    std::int64_t s = rest_zero ? q4 : 0;
    s += (mod_floor(phase, q) == 0) ? q3 - q2 : -q2;
    return s;
  };
  const std::int64_t U = -sq(1) + sq(2) + sq(4) - sq(5);
  const std::int64_t V = -sq(0) + sq(1) + sq(3) - sq(4);
  const std::int64_t W = -sq(0) + sq(2) + sq(3) - sq(5);
  std::int64_t total = block(0, 3, U, zero) + block(2, 5, V, zero) +
                       block(1, 4, W, zero) - (zero ? 2 * q4 : 0);

  // generic j, k: with k = l j the inner sum over j vanishes unless
  // l(l-1)(b1^2-b4^2) + l(b2^2-b5^2) + (l-1)(b6^2-b3^2) = 0
  const std::int64_t P = mod_floor(sq(0) - sq(3), q);
  const std::int64_t Q = mod_floor(sq(1) - sq(4), q);
  const std::int64_t T = mod_floor(sq(5) - sq(2), q);
  std::int64_t R = 0;
  for (std::int64_t l = 2; l < q; ++l) {
    std::int64_t f = (l * (l - 1) % q * P + l * Q + (l - 1) * T) % q;
    R += (f == 0);
  }
  total += q * ((q - 1) * R - (q - 2 - R));
  return total;
}

inline std::complex<double> exp_sum_S(const Residues6& b, std::int64_t q) {
  return {static_cast<double>(exp_sum_S_exact(b, q)), 0.0};
}

/// Reference: double loop over (j, k) with the six one-variable sums in
/// closed form; O(q^2).
inline std::complex<double> exp_sum_S_quadratic(const Residues6& b,
                                                std::int64_t q) {
  require_odd_prime(q, "exp_sum_S_quadratic");
  require_budget(q <= 2000, "exp_sum_S_quadratic: q above 2000");
  std::vector<std::complex<double>> gauss(static_cast<std::size_t>(q));
  for (std::int64_t c = 0; c < q; ++c) gauss[c] = gauss_sum(c, q);
  std::vector<std::int64_t> inv4(static_cast<std::size_t>(q), 0);
  for (std::int64_t c = 1; c < q; ++c) inv4[c] = mod_inverse(4 * c, q);
  auto one = [&](std::int64_t c, std::int64_t bb) -> std::complex<double> {
    c = mod_floor(c, q);
    bb = mod_floor(bb, q);
    if (c == 0) return bb == 0 ? std::complex<double>(static_cast<double>(q), 0) : 0.0;
    std::int64_t ph = static_cast<std::int64_t>(
        static_cast<i128>(q - bb * bb % q) * inv4[c] % q);
    return gauss[c] * e_q(ph, q);
  };
  std::complex<double> total = 0.0;
  for (std::int64_t j = 0; j < q; ++j) {
    for (std::int64_t k = 0; k < q; ++k) {
      total += one(j, b[0]) * one(k - j, b[1]) * one(-k, b[2]) *
               one(-j, b[3]) * one(j - k, b[4]) * one(k, b[5]);
    }
  }
  return total / static_cast<double>(q * q);
}

/// Reference: all q^6 tuples satisfying both congruences (q <= 7).
inline std::complex<double> exp_sum_S_enumerate(const Residues6& b,
                                                std::int64_t q) {
  require_odd_prime(q, "exp_sum_S_enumerate");
  require_budget(q <= 7, "exp_sum_S_enumerate: q above 7");
  std::complex<double> total = 0.0;
  std::int64_t v[6];
  for (v[0] = 0; v[0] < q; ++v[0])
    for (v[1] = 0; v[1] < q; ++v[1])
      for (v[2] = 0; v[2] < q; ++v[2])
        for (v[3] = 0; v[3] < q; ++v[3])
          for (v[4] = 0; v[4] < q; ++v[4])
            for (v[5] = 0; v[5] < q; ++v[5]) {
              auto s = [&](int i) { return v[i] * v[i]; };
              if (mod_floor(s(0) - s(1) - s(3) + s(4), q) != 0) continue;
              if (mod_floor(s(1) - s(2) - s(4) + s(5), q) != 0) continue;
              std::int64_t ph = 0;
              for (int i = 0; i < 6; ++i) ph += b[i] * v[i];
              total += e_q(ph, q);
            }
  return total;
}

// ---------------------------------------------------------------------------
// f-counts, D and Bad sets

inline std::int64_t f_radius(std::int64_t q, double beta, double eta, double C) {
  double e = (2.0 - beta) / (2.0 + beta) + C * eta;
  return static_cast<std::int64_t>(
      std::floor(std::pow(static_cast<double>(q), e) + 1e-9));
}

/// #{(a, r1, r2) : 1 <= a <= q, q does not divide a, r1 r2 != 0, |r_i| <= R,
/// abar r_i = c_i mod q}.
inline std::int64_t f_count(std::int64_t q, std::int64_t R, std::int64_t c1,
                            std::int64_t c2) {
  require(is_prime(q), "f_count: q must be prime");
  require(R >= 1 && 2 * R < q, "f_count: need 1 <= R < q/2");
  c1 = mod_floor(c1, q);
  c2 = mod_floor(c2, q);
  if (c1 == 0 || c2 == 0) return 0;
  // r1 fixes a = r1 / c1, and then r2 = a c2
  const std::int64_t ratio = static_cast<std::int64_t>(
      mulmod(static_cast<std::uint64_t>(c2),
             static_cast<std::uint64_t>(mod_inverse(c1, q)),
             static_cast<std::uint64_t>(q)));
  std::int64_t count = 0;
  for (std::int64_t r1 = -R; r1 <= R; ++r1) {
    if (r1 == 0) continue;
    std::int64_t r2 = centered_residue(
        static_cast<std::int64_t>(static_cast<i128>(mod_floor(r1, q)) * ratio % q), q);
    if (r2 != 0 && r2 >= -R && r2 <= R) ++count;
  }
  return count;
}

/// sum over 0 < |r1|, |r2| <= R of Delta*(q, abar r1, abar r2).
inline double compute_D(std::int64_t a, const CongruenceTable& delta_star,
                        std::int64_t R) {
  const std::int64_t q = delta_star.q;
  require(delta_star.kind == TableKind::delta_star,
          "compute_D: need a delta-star table");
  require(R >= 1 && 2 * R < q, "compute_D: need 1 <= R < q/2");
  const std::int64_t abar = mod_inverse(a, q);
  CompensatedSum s;
  for (std::int64_t r1 = -R; r1 <= R; ++r1) {
    if (r1 == 0) continue;
    const std::int64_t c1 = mod_floor(static_cast<i128>(abar) * r1, q);
    for (std::int64_t r2 = -R; r2 <= R; ++r2) {
      if (r2 == 0) continue;
      s += delta_star.at(c1, mod_floor(static_cast<i128>(abar) * r2, q));
    }
  }
  return s.value();
}

inline double compute_D(std::int64_t a, std::int64_t q, double beta, double eta,
                        double C) {
  return compute_D(a, delta_star_table(q, beta), f_radius(q, beta, eta, C));
}

struct BadSetResult {
  std::int64_t q = 0;
  double beta = 0, eta = 0, C = 0;
  std::int64_t R = 0;
  double threshold = 0;  // q^{-C eta}
  std::vector<std::int64_t> members;
  std::vector<double> normalized_D;  // D q^{(-6+4 beta)/(2+beta)} for a = 1..q-1
};

inline BadSetResult bad_set(std::int64_t q, double beta, double eta, double C) {
  require_odd_prime(q, "bad_set");
  require_budget(q <= 401, "bad_set: q above 401");
  BadSetResult res{q, beta, eta, C, f_radius(q, beta, eta, C), 0.0, {}, {}};
  require(res.R >= 1 && 2 * res.R < q, "bad_set: radius R must satisfy 1 <= R < q/2");
  const double qd = static_cast<double>(q);
  res.threshold = std::pow(qd, -C * eta);
  const double norm = std::pow(qd, (-6.0 + 4.0 * beta) / (2.0 + beta));
  auto table = delta_star_table(q, beta);
  for (std::int64_t a = 1; a < q; ++a) {
    double v = compute_D(a, table, res.R) * norm;
    res.normalized_D.push_back(v);
    if (v >= res.threshold) res.members.push_back(a);
  }
  return res;
}

// ---------------------------------------------------------------------------
// A0 summed over an r-box

/// sum of A0(q, abar r1, abar r2) over r1 in [lo1, hi1], r2 in [lo2, hi2]
/// with r1 r2 != 0 and r1 + r2 != 0. Every such cell is non-degenerate, so
/// the sum is (q + kappa) * cells + sum H, and sum H is collected per l via
/// prefix sums of the Legendre symbol.
inline std::int64_t sum_A0_over_box(std::int64_t q, std::int64_t a,
                                    std::int64_t lo1, std::int64_t hi1,
                                    std::int64_t lo2, std::int64_t hi2) {
  require_odd_prime(q, "sum_A0_over_box");
  require(2 * std::max({std::llabs(lo1), std::llabs(hi1), std::llabs(lo2),
                        std::llabs(hi2)}) < q,
          "sum_A0_over_box: ranges must lie inside (-q/2, q/2)");
  if (lo1 > hi1 || lo2 > hi2) return 0;
  LegendreTable chi(q);
  const auto& k = detail::a0_constants();
  const std::int64_t abar = mod_inverse(a, q);
  const int chi_abar = chi(abar);
  // prefix[t] = sum_{u < t} chi(u)
  std::vector<std::int64_t> prefix(static_cast<std::size_t>(q) + 1, 0);
  for (std::int64_t u = 0; u < q; ++u) prefix[u + 1] = prefix[u] + chi.at(u);
  const std::int64_t len1 = hi1 - lo1 + 1;
  auto range_sum = [&](std::int64_t start) {
    // sum of chi over start, ..., start + len1 - 1 (mod q)
    std::int64_t s = mod_floor(start, q);
    std::int64_t e = s + len1;
    if (e <= q) return prefix[e] - prefix[s];
    return prefix[q] - prefix[s] + prefix[e - q];
  };

  auto parts = parallel_chunks<std::int64_t>(
      2, static_cast<std::size_t>(q), 256, [&](std::size_t lo, std::size_t hi) {
        std::int64_t acc = 0;
        for (std::size_t li = lo; li < hi; ++li) {
          const auto l = static_cast<std::int64_t>(li);
          int w = chi.at(l * (l - 1) % q);
          if (w == 0) continue;
          std::int64_t inner = 0;
          std::int64_t start = mod_floor(static_cast<i128>(l) * lo2 + lo1, q);
          for (std::int64_t r2 = lo2; r2 <= hi2; ++r2) {
            inner += range_sum(start);
            start += l;
            if (start >= q) start -= q;
          }
          acc += w * inner;
        }
        return acc;
      });
  std::int64_t h_box = 0;
  for (auto p : parts) h_box += p;
  h_box *= chi_abar;

  // remove the three excluded lines, where H has closed forms
  std::int64_t cells = len1 * (hi2 - lo2 + 1);
  const bool has0_1 = lo1 <= 0 && 0 <= hi1, has0_2 = lo2 <= 0 && 0 <= hi2;
  std::int64_t removed = 0;
  if (has0_1) {  // r1 = 0: H = -chi(-abar r2)
    for (std::int64_t r2 = lo2; r2 <= hi2; ++r2) {
      ++removed;
      if (r2 != 0) h_box += chi(-abar * r2);
    }
  }
  if (has0_2) {  // r2 = 0: H = -chi(abar r1)
    for (std::int64_t r1 = lo1; r1 <= hi1; ++r1) {
      if (r1 == 0) continue;
      ++removed;
      h_box += chi(abar * r1);
    }
  }
  // r1 = -r2 != 0: H = -chi(-abar r1)
  for (std::int64_t r1 = std::max(lo1, -hi2); r1 <= std::min(hi1, -lo2); ++r1) {
    if (r1 == 0) continue;
    ++removed;
    h_box += chi(-abar * r1);
  }
  cells -= removed;
  return cells * (q + k.kappa_non) + h_box;
}

}  // namespace corrlab
