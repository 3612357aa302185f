// k-level correlation sums R_k(ps, L, g): windowed evaluators for k = 2, 3,
// a brute-force reference for any k, and the window-moment identities.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "corrlab/error.hpp"
#include "corrlab/kernels.hpp"
#include "corrlab/parallel.hpp"
#include "corrlab/report.hpp"
#include "corrlab/sequences.hpp"

namespace corrlab {

struct CorrelationOptions {
  // allow supports wider than the wrap-safe window; falls back to per-center
  // full scans
  bool relaxed_guard = false;
};

struct CorrelationResult {
  int k = 0;
  std::int64_t N = 0;
  double L = 0.0;
  std::string kernel;
  double value = 0.0;
  std::int64_t contributing = 0;  // ordered tuples with nonzero kernel value

  Json to_json(double expected = std::nan("")) const {
    Json j{{"k", k}, {"N", N}, {"L", L}, {"kernel", kernel}, {"value", value}};
    if (std::isfinite(expected)) {
      j["expected"] = expected;
      j["ratio"] = expected != 0.0 ? value / expected : std::nan("");
    }
    j["contributing"] = contributing;
    return j;
  }
};

namespace detail {

/// {a - b}_sgn for a, b in [0, 1).
inline double sgn_diff(double a, double b) {
  double d = a - b;
  if (d > 0.5) {
    d -= 1.0;
  } else if (d <= -0.5) {
    d += 1.0;
  }
  return d;
}

inline constexpr double kFringe = 1e-12;

/// The points shifted by -1, 0, +1, concatenated; index e maps to e mod n.
class ExtendedPoints {
 public:
  explicit ExtendedPoints(const PointSet& ps) : n_(ps.size()) {
    ext_.reserve(3 * n_);
    for (double x : ps.points()) ext_.push_back(x - 1.0);
    for (double x : ps.points()) ext_.push_back(x);
    for (double x : ps.points()) ext_.push_back(x + 1.0);
  }

  std::size_t n() const { return n_; }
  double operator[](std::size_t e) const { return ext_[e]; }
  std::size_t original(std::size_t e) const { return e % n_; }

  std::size_t lower(double value) const {
    return static_cast<std::size_t>(
        std::lower_bound(ext_.begin(), ext_.end(), value) - ext_.begin());
  }
  std::size_t upper(double value) const {
    return static_cast<std::size_t>(
        std::upper_bound(ext_.begin(), ext_.end(), value) - ext_.begin());
  }

  /// Counts indices j != center whose offset {x_j - x_center}_sgn lies in
  /// [a, b] according to `pred`, which receives that offset. Elements safely
  /// inside the range are counted by position; the thin fringe is checked
  /// with `pred` itself, so the result equals a full scan with `pred`.
  template <class Pred>
  std::int64_t count_offsets(std::size_t center, double a, double b,
                             Pred&& pred) const {
    const double v = ext_[n_ + center];
    if (a - kFringe > b + kFringe) return 0;
    std::size_t out_lo = lower(v + a - kFringe);
    std::size_t out_hi = upper(v + b + kFringe);
    std::size_t in_lo = out_lo, in_hi = out_lo;
    if (a + kFringe <= b - kFringe) {
      in_lo = lower(v + a + kFringe);
      in_hi = std::max(in_lo, upper(v + b - kFringe));
    }
    std::int64_t count = static_cast<std::int64_t>(in_hi - in_lo);
    if (n_ + center >= in_lo && n_ + center < in_hi) --count;
    auto scan = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t e = lo; e < hi; ++e) {
        std::size_t j = original(e);
        if (j == center) continue;
        double off = sgn_diff(ext_[n_ + j], v);
        if (std::fabs(off - (ext_[e] - v)) > 0.25) continue;  // other copy
        if (pred(off)) ++count;
      }
    };
    scan(out_lo, in_lo);
    scan(in_hi, out_hi);
    return count;
  }

 private:
  std::size_t n_;
  std::vector<double> ext_;
};

inline void check_window_guard(const TestKernel& kernel, double L, double n,
                               const CorrelationOptions& opt, const char* who) {
  double width = kernel.support_radius() * L / n;
  if (width > 0.5 && !opt.relaxed_guard) {
    fail(ErrorKind::precondition,
         std::string(who) + ": kernel support times L/N is " +
             std::to_string(width) + ", above the wrap-safe limit 1/2");
  }
}

struct PartialSum {
  CompensatedSum value;
  std::int64_t contributing = 0;
};

inline constexpr std::size_t kCenterChunk = 512;

}  // namespace detail

/// R_2: (1/N) sum over ordered distinct pairs of g((N/L){v_x - v_y}_sgn).
inline CorrelationResult pair_correlation(const PointSet& ps, double L,
                                          const TestKernel& kernel,
                                          const CorrelationOptions& opt = {}) {
  require(kernel.arity() == 1, "pair_correlation: kernel must have arity 1");
  require(!ps.empty(), "pair_correlation: empty point set");
  require(L > 0.0, "pair_correlation: L must be positive");
  const double n = static_cast<double>(ps.size());
  detail::check_window_guard(kernel, L, n, opt, "pair_correlation");
  const double scale = n / L;
  const double h = L / n;
  CorrelationResult res{2, ps.n(), L, kernel.name(), 0.0, 0};
  if (kernel.empty_support()) return res;

  const bool wide = kernel.support_radius() * h > 0.5;
  detail::ExtendedPoints ext(ps);
  const auto& x = ps.points();

  auto parts = parallel_chunks<detail::PartialSum>(
      0, ps.size(), detail::kCenterChunk, [&](std::size_t lo, std::size_t hi) {
        detail::PartialSum part;
        for (std::size_t i = lo; i < hi; ++i) {
          if (kernel.is_box()) {
            // w = scale * {x_i - x_j} = -scale * offset(j)
            auto pred = [&](double off) {
              return kernel.coordinate_inside(0, -scale * off);
            };
            std::int64_t c = 0;
            if (wide) {
              for (std::size_t j = 0; j < x.size(); ++j) {
                if (j != i && pred(detail::sgn_diff(x[j], x[i]))) ++c;
              }
            } else {
              c = ext.count_offsets(i, -kernel.hi()[0] * h, -kernel.lo()[0] * h,
                                    pred);
            }
            part.value += static_cast<double>(c);
            part.contributing += c;
            continue;
          }
          auto visit = [&](std::size_t j) {
            double w[1] = {scale * detail::sgn_diff(x[i], x[j])};
            double g = kernel(std::span<const double>(w, 1));
            if (g != 0.0) {
              part.value += g;
              ++part.contributing;
            }
          };
          if (wide) {
            for (std::size_t j = 0; j < x.size(); ++j) {
              if (j != i) visit(j);
            }
            continue;
          }
          const double r = kernel.support_radius() * h + detail::kFringe;
          std::size_t e_lo = ext.lower(x[i] - r), e_hi = ext.upper(x[i] + r);
          for (std::size_t e = e_lo; e < e_hi; ++e) {
            std::size_t j = ext.original(e);
            if (j == i) continue;
            if (std::fabs(detail::sgn_diff(x[j], x[i]) - (ext[e] - x[i])) > 0.25) {
              continue;
            }
            visit(j);
          }
        }
        return part;
      });
  detail::PartialSum total;
  for (auto& p : parts) {
    total.value += p.value;
    total.contributing += p.contributing;
  }
  res.value = total.value.value() / n;
  res.contributing = total.contributing;
  return res;
}

namespace detail {

/// Pyramid: g depends only on the spread of the triple, so each unordered
/// triple is visited once from its leftmost point and weighted by 6.
inline CorrelationResult triple_pyramid(const PointSet& ps, double L) {
  const std::size_t n = ps.size();
  const double h = L / static_cast<double>(n);
  const auto& x = ps.points();
  auto parts = parallel_chunks<PartialSum>(
      0, n, kCenterChunk, [&](std::size_t lo, std::size_t hi) {
        PartialSum part;
        for (std::size_t p = lo; p < hi; ++p) {
          std::int64_t r = 0;  // points already passed in the window
          for (std::size_t step = 1; step < n; ++step) {
            std::size_t qi = p + step;
            double xq = qi < n ? x[qi] : x[qi - n] + 1.0;
            double d = xq - x[p];
            if (d >= h) break;
            if (r > 0) {
              part.value += static_cast<double>(r) * (1.0 - d / h);
              part.contributing += r;
            }
            ++r;
          }
        }
        return part;
      });
  PartialSum total;
  for (auto& p : parts) {
    total.value += p.value;
    total.contributing += p.contributing;
  }
  CorrelationResult res{3, ps.n(), L, "pyramid", 0.0, 0};
  res.value = 6.0 * total.value.value() / static_cast<double>(n);
  res.contributing = 6 * total.contributing;
  return res;
}

}  // namespace detail

/// R_3: (1/N) sum over ordered distinct triples of
/// g((N/L){v1 - v2}_sgn, (N/L){v2 - v3}_sgn).
inline CorrelationResult triple_correlation(const PointSet& ps, double L,
                                            const TestKernel& kernel,
                                            const CorrelationOptions& opt = {});

/// Brute force over all ordered distinct k-tuples.
inline CorrelationResult generic_correlation(const PointSet& ps, double L,
                                             int k, const TestKernel& kernel) {
  require(k >= 2 && k <= 5, "generic_correlation: k must be in [2, 5]");
  require(kernel.arity() == k - 1,
          "generic_correlation: kernel arity must equal k - 1");
  require(!ps.empty(), "generic_correlation: empty point set");
  require(L > 0.0, "generic_correlation: L must be positive");
  const std::size_t n = ps.size();
  require_budget(std::pow(static_cast<double>(n), k) <= 1e8,
                 "generic_correlation: N^k exceeds 1e8");
  const double scale = static_cast<double>(n) / L;
  const auto& x = ps.points();
  CorrelationResult res{k, ps.n(), L, kernel.name(), 0.0, 0};
  if (kernel.empty_support()) return res;

  auto parts = parallel_chunks<detail::PartialSum>(
      0, n, 64, [&](std::size_t lo, std::size_t hi) {
        detail::PartialSum part;
        std::vector<std::size_t> idx(static_cast<std::size_t>(k));
        std::vector<double> w(static_cast<std::size_t>(k - 1));
        // depth-first over positions 1..k-1, pruning box coordinates early
        auto rec = [&](auto&& self, int pos) -> void {
          if (pos == k) {
            double g = kernel(std::span<const double>(w));
            if (g != 0.0) {
              part.value += g;
              ++part.contributing;
            }
            return;
          }
          for (std::size_t j = 0; j < n; ++j) {
            bool dup = false;
            for (int t = 0; t < pos; ++t) dup |= (idx[static_cast<std::size_t>(t)] == j);
            if (dup) continue;
            idx[static_cast<std::size_t>(pos)] = j;
            double wi = scale * detail::sgn_diff(x[idx[static_cast<std::size_t>(pos - 1)]], x[j]);
            if (kernel.is_box() &&
                !kernel.coordinate_inside(static_cast<std::size_t>(pos - 1), wi)) {
              continue;
            }
            w[static_cast<std::size_t>(pos - 1)] = wi;
            self(self, pos + 1);
          }
        };
        for (std::size_t i = lo; i < hi; ++i) {
          idx[0] = i;
          rec(rec, 1);
        }
        return part;
      });
  detail::PartialSum total;
  for (auto& p : parts) {
    total.value += p.value;
    total.contributing += p.contributing;
  }
  res.value = total.value.value() / static_cast<double>(n);
  res.contributing = total.contributing;
  return res;
}

inline CorrelationResult triple_correlation(const PointSet& ps, double L,
                                            const TestKernel& kernel,
                                            const CorrelationOptions& opt) {
  require(kernel.arity() == 2, "triple_correlation: kernel must have arity 2");
  require(!ps.empty(), "triple_correlation: empty point set");
  require(L > 0.0, "triple_correlation: L must be positive");
  const double n = static_cast<double>(ps.size());
  detail::check_window_guard(kernel, L, n, opt, "triple_correlation");
  const double scale = n / L;
  const double h = L / n;
  CorrelationResult res{3, ps.n(), L, kernel.name(), 0.0, 0};
  if (kernel.empty_support() || ps.size() < 3) return res;

  const bool wide = kernel.support_radius() * h > 0.5;
  if (kernel.shape() == TestKernel::Shape::pyramid) {
    if (wide) return generic_correlation(ps, L, 3, kernel);
    return detail::triple_pyramid(ps, L);
  }

  // Box: with x2 as the center, x1 and x3 range independently over window
  // counts c1, c3; indices valid in both roles are subtracted once.
  detail::ExtendedPoints ext(ps);
  const auto& x = ps.points();
  const double s1 = kernel.lo()[0], t1 = kernel.hi()[0];
  const double s2 = kernel.lo()[1], t2 = kernel.hi()[1];
  auto parts = parallel_chunks<std::int64_t>(
      0, ps.size(), detail::kCenterChunk, [&](std::size_t lo, std::size_t hi) {
        std::int64_t acc = 0;
        for (std::size_t i = lo; i < hi; ++i) {
          // offset = {x_j - x_i}_sgn; as x1: w1 = scale * offset,
          // as x3: w2 = scale * {x_i - x_j}_sgn = -scale * offset
          auto as_x1 = [&](double off) {
            return kernel.coordinate_inside(0, scale * off);
          };
          auto as_x3 = [&](double off) {
            return kernel.coordinate_inside(1, -scale * off);
          };
          auto both = [&](double off) { return as_x1(off) && as_x3(off); };
          std::int64_t c1 = 0, c3 = 0, overlap = 0;
          if (wide) {
            for (std::size_t j = 0; j < x.size(); ++j) {
              if (j == i) continue;
              double off = detail::sgn_diff(x[j], x[i]);
              bool a = as_x1(off), b = as_x3(off);
              c1 += a;
              c3 += b;
              overlap += a && b;
            }
          } else {
            c1 = ext.count_offsets(i, s1 * h, t1 * h, as_x1);
            c3 = ext.count_offsets(i, -t2 * h, -s2 * h, as_x3);
            overlap = ext.count_offsets(i, std::max(s1 * h, -t2 * h),
                                        std::min(t1 * h, -s2 * h), both);
          }
          acc += c1 * c3 - overlap;
        }
        return acc;
      });
  std::int64_t total = 0;
  for (auto p : parts) total += p;
  res.value = static_cast<double>(total) / n;
  res.contributing = total;
  return res;
}

/// Both sides of E W^2 = L + L R_2(f) and E W^3 = L + 3L R_2(f) + L R_3(g).
inline ExperimentReport moment_identity_report(const PointSet& ps, double L,
                                               double rel_tol = 1e-9) {
  require(!ps.empty(), "moment_identity_report: empty point set");
  const double n = static_cast<double>(ps.size());
  require(L > 0.0 && L <= n / 2.0,
          "moment_identity_report: L must lie in (0, N/2]");
  double ew1 = window_moment(ps, L, 1);
  double ew2 = window_moment(ps, L, 2);
  double ew3 = window_moment(ps, L, 3);
  double r2 = pair_correlation(ps, L, TestKernel::triangle()).value;
  double r3 = triple_correlation(ps, L, TestKernel::pyramid()).value;

  ExperimentReport rep;
  rep.experiment = "moment_identity";
  rep.inputs = {{"N", ps.n()}, {"L", L}};
  rep.compare("E W", ew1, L, rel_tol);
  rep.compare("E W^2", ew2, L + L * r2, rel_tol);
  rep.compare("E W^3", ew3, L + 3.0 * L * r2 + L * r3, rel_tol);
  rep.extra = {{"R2_triangle", r2}, {"R3_pyramid", r3}};
  return rep;
}

}  // namespace corrlab
