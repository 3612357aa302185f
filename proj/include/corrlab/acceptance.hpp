// The invariant suite run by `corrlab verify` and by the acceptance test.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "corrlab/correlations.hpp"
#include "corrlab/diophantine.hpp"
#include "corrlab/kernels.hpp"
#include "corrlab/modcount.hpp"
#include "corrlab/numeric.hpp"
#include "corrlab/pipeline.hpp"
#include "corrlab/sequences.hpp"

namespace corrlab {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace acceptance {

inline std::string fmt(const char* f, double a, double b = 0, double c = 0,
                       double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

inline CriterionResult start(int id, std::string title) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  return r;
}

inline CriterionResult a0_exactness() {
  auto r = start(1, "A0 closed form equals enumeration, primes 3..23");
  std::int64_t cells = 0, bad = 0;
  for (std::int64_t q : primes_in(3, 23)) {
    A0Evaluator closed(q);
    for (std::int64_t c1 = 0; c1 < q; ++c1) {
      for (std::int64_t c2 = 0; c2 < q; ++c2) {
        ++cells;
        if (closed(c1, c2) != count_A0_brute(q, c1, c2)) ++bad;
      }
    }
  }
  const bool spots = count_A0_closed(3, 0, 0) == 9 && count_A0_closed(3, 0, 1) == 4 &&
                     count_A0_closed(3, 1, 1) == 0;
  r.pass = bad == 0 && spots;
  r.detail = std::to_string(cells) + " cells, " + std::to_string(bad) +
             " mismatches, spot rows " + (spots ? "ok" : "wrong");
  return r;
}

inline CriterionResult hasse() {
  auto r = start(2, "|A0 - q| <= 2 sqrt(q) + 4 off the degenerate lines, q <= 199");
  double worst = 0;  // largest |A0 - q| / (2 sqrt q + 4)
  std::int64_t worst_q = 0;
  for (std::int64_t q : primes_in(3, 199)) {
    auto t = a0_table(q);
    const double bound = 2.0 * std::sqrt(static_cast<double>(q)) + 4.0;
    for (std::int64_t c1 = 1; c1 < q; ++c1) {
      for (std::int64_t c2 = 1; c2 < q; ++c2) {
        if ((c1 + c2) % q == 0) continue;
        double v = std::fabs(static_cast<double>(t[c1 * q + c2] - q)) / bound;
        if (v > worst) {
          worst = v;
          worst_q = q;
        }
      }
    }
  }
  r.pass = worst <= 1.0;
  r.detail = fmt("max |A0-q|/(2sqrt(q)+4) = %.4f (q = %.0f)", worst,
                 static_cast<double>(worst_q));
  return r;
}

inline CriterionResult gauss() {
  auto r = start(3, "Gauss sums: closed form vs direct, primes 3..101");
  double worst = 0;
  for (std::int64_t q : primes_in(3, 101)) {
    const double tol = 1e-9 * std::sqrt(static_cast<double>(q));
    for (std::int64_t j = 0; j < q; ++j) {
      worst = std::max(worst, std::abs(gauss_sum(j, q) - gauss_sum_direct(j, q)) / tol);
    }
  }
  r.pass = worst <= 1.0;
  r.detail = fmt("max gap / (1e-9 sqrt q) = %.3g", worst);
  return r;
}

inline CriterionResult variance_bounds() {
  auto r = start(4, "sum of Delta^2 against (log q)^3 M^3 + (log q)^6 q^2");
  double max_ratio = 0;
  int lower_checked = 0, lower_failed = 0;
  for (std::int64_t q : {101, 211, 401, 809}) {
    auto a0 = a0_table(q);
    const double qd = static_cast<double>(q), lq = std::log(qd);
    for (double e : {0.3, 0.5, 0.66}) {
      auto M = static_cast<std::int64_t>(std::ceil(std::pow(qd, e)));
      const double Md = static_cast<double>(M);
      const double s = delta_sq_sum(q, M, a0);
      const double ub = std::pow(lq, 3) * Md * Md * Md + std::pow(lq, 6) * qd * qd;
      max_ratio = std::max(max_ratio, s / ub);
      if (Md <= 0.2 * std::pow(qd, 2.0 / 3.0)) {
        ++lower_checked;
        if (s < 0.1 * Md * Md * Md) ++lower_failed;
      }
    }
  }
  r.pass = max_ratio <= 50.0 && lower_failed == 0;
  r.detail = fmt("max ratio %.3g; lower bound held in %.0f of %.0f cases", max_ratio,
                 lower_checked - lower_failed, lower_checked);
  return r;
}

inline CriterionResult moment_identities() {
  auto r = start(5, "E W^2 and E W^3 against R2(triangle), R3(pyramid)");
  std::mt19937_64 rng(505);
  std::uniform_int_distribution<std::int64_t> pickN(10, 2000);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int failed = 0;
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const std::int64_t N = pickN(rng);
    PointSet ps;
    if (i % 2 == 0) {
      std::vector<double> xs(static_cast<std::size_t>(N));
      for (auto& x : xs) x = unit(rng);
      ps = PointSet::from_values(std::move(xs));
    } else {
      ps = dilated_points(AlphaValue::random(rng), 1 + i % 3, N);
    }
    const double L = std::max(1e-3, unit(rng)) * static_cast<double>(N) / 2.0;
    auto rep = moment_identity_report(ps, L);
    for (const auto& row : rep.rows) worst = std::max(worst, row.rel_gap);
    if (!rep.passed()) ++failed;
  }
  r.pass = failed == 0;
  r.detail = fmt("200 point sets, %.0f failed, worst relative gap %.2e", failed, worst);
  return r;
}

inline CriterionResult pair_asymptotic() {
  auto r = start(6, "R2(box[-1,1]) near 2L, N = 5e4, L = N^0.6");
  std::mt19937_64 rng(606);
  const std::int64_t N = 50000;
  const double L = std::pow(static_cast<double>(N), 0.6);
  int inside = 0;
  double lo = 1e9, hi = 0;
  for (int i = 0; i < 10; ++i) {
    auto ps = dilated_points(AlphaValue::random(rng), 2, N);
    double ratio = pair_correlation(ps, L, TestKernel::box1d(-1, 1)).value / (2 * L);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    if (ratio >= 0.9 && ratio <= 1.1) ++inside;
  }
  r.pass = inside >= 9;
  r.detail = fmt("%.0f of 10 within 10%%, R2/2L in [%.4f, %.4f]", inside, lo, hi);
  return r;
}

inline CriterionResult triple_asymptotic() {
  auto r = start(7, "R3(box[-1,1]^2) near 4L^2, N = 3e4, L = N^0.35");
  std::mt19937_64 rng(707);
  const std::int64_t N = 30000;
  const double L = std::pow(static_cast<double>(N), 0.35);
  int inside = 0;
  double lo = 1e9, hi = 0;
  for (int i = 0; i < 5; ++i) {
    auto ps = dilated_points(AlphaValue::random(rng), 2, N);
    double ratio =
        triple_correlation(ps, L, TestKernel::box2d(-1, 1, -1, 1)).value / (4 * L * L);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    if (ratio >= 0.85 && ratio <= 1.15) ++inside;
  }
  r.pass = inside >= 4;
  r.detail = fmt("%.0f of 5 within 15%%, R3/4L^2 in [%.4f, %.4f]", inside, lo, hi);
  return r;
}

inline CriterionResult exponential_sums() {
  auto r = start(8, "S(b, q): fast path vs quadratic oracle and full enumeration");
  std::mt19937_64 rng(808);
  double worst = 0;
  for (std::int64_t q : {11, 31, 101}) {
    std::uniform_int_distribution<std::int64_t> pick(0, q - 1);
    const double tol = 1e-6 * std::pow(static_cast<double>(q), 3);
    for (int i = 0; i < 50; ++i) {
      Residues6 b;
      for (auto& x : b) x = pick(rng);
      worst = std::max(worst, std::abs(exp_sum_S(b, q) - exp_sum_S_quadratic(b, q)) / tol);
    }
  }
  int exact_bad = 0, exact_total = 0;
  for (std::int64_t q : {3, 5, 7}) {
    std::uniform_int_distribution<std::int64_t> pick(0, q - 1);
    for (int i = 0; i < 12; ++i) {
      Residues6 b{};
      if (i > 0) {
        for (auto& x : b) x = pick(rng);
      }
      auto e = exp_sum_S_enumerate(b, q);
      ++exact_total;
      if (std::fabs(e.real() - static_cast<double>(exp_sum_S_exact(b, q))) > 1e-6 ||
          std::fabs(e.imag()) > 1e-6) {
        ++exact_bad;
      }
    }
  }
  const bool s0 = exp_sum_S_exact(Residues6{}, 3) == 141;
  r.pass = worst <= 1.0 && exact_bad == 0 && s0;
  r.detail = fmt("max gap / (1e-6 q^3) = %.2e; enumeration mismatches %.0f of %.0f",
                 worst, exact_bad, exact_total) +
             (s0 ? "; S(0,3) = 141" : "; S(0,3) wrong");
  return r;
}

inline CriterionResult sandwich_chain() {
  auto r = start(9, "lower <= R3 <= upper on generated sandwich instances");
  std::mt19937_64 rng(2024);
  int generated = 0, valid = 0, violations = 0;
  const double eta = 0.05;
  for (int i = 0; i < 5; ++i) {
    const auto alpha = AlphaValue::random(rng);
    for (std::int64_t N : {500, 1000}) {
      for (int s = 0; s <= 8; ++s) {
        const double L = std::pow(static_cast<double>(N), 0.7 - 0.05 * s);
        const double beta = infer_beta(N, L);
        const auto Q = static_cast<std::int64_t>(
            std::ceil(std::pow(static_cast<double>(N), (2 + beta) / 2 + 10 * eta)));
        auto approx = prime_denominator_approx(alpha, Q, eta);
        if (!approx) continue;
        ++generated;
        auto rep = sandwich_bounds(alpha, *approx, N, L, eta, SandwichBox{});
        if (!rep.preconditions_held()) continue;
        ++valid;
        if (!rep.chain_holds()) ++violations;
      }
    }
  }
  // exact rationals: every gap is a multiple of 1/q, and R3 is recounted from
  // all ordered triples
  int exact = 0, exact_bad = 0;
  const std::int64_t q = 101, N = 10;
  const double L = 3;
  const auto box = TestKernel::box2d(-1, 1, -1, 1);
  for (std::int64_t a : {1, 2, 3, 5, 17, 50, 77, 100}) {
    const auto alpha = AlphaValue::rational(a, q);
    auto rep = sandwich_bounds(alpha, RationalApprox{a, q, 0.0, true}, N, L, eta,
                               SandwichBox{});
    const double brute = generic_correlation(dilated_points(alpha, 2, N), L, 3, box).value;
    const bool ok = rep.chain_holds() && std::fabs(brute - rep.r3) <= 1e-12 &&
                    rep.lower_count == sandwich_count_cells(a, q, N, rep.minus1, rep.minus2) &&
                    rep.upper_count == sandwich_count_cells(a, q, N, rep.plus1, rep.plus2);
    ++exact;
    if (!ok) ++exact_bad;
  }
  r.pass = valid > 0 && violations == 0 && exact_bad == 0;
  r.detail = fmt("%.0f generated, %.0f met both preconditions, %.0f violations; ",
                 generated, valid, violations) +
             fmt("%.0f exact instances, %.0f mismatches", exact, exact_bad);
  return r;
}

inline CriterionResult diophantine_search() {
  auto r = start(10, "prime-denominator approximations");
  auto a = prime_denominator_approx(AlphaValue::sqrt_of(2), 20, 0.2);
  auto b = prime_denominator_approx(AlphaValue::pi_frac(), 100, 0.3);
  auto c = prime_denominator_approx(AlphaValue::rational(1, 4), 20, 0.2);
  const bool ok_a = a && a->q == 29;
  const bool ok_b = b && b->q == 113;
  r.pass = ok_a && ok_b && !c;
  r.detail = std::string("sqrt 2 -> ") + (a ? std::to_string(a->q) : "none") +
             ", pi -> " + (b ? std::to_string(b->q) : "none") + ", 1/4 -> " +
             (c ? std::to_string(c->q) : "none");
  return r;
}

inline CriterionResult obstruction() {
  auto r = start(11, "spike, Parseval and variance growth");
  ObstructionOptions opt;
  opt.truncation = 1000;
  opt.grid = 65536;
  auto rep = obstruction_coefficients(2, 2, 2.0, 50, TestKernel::triangle(), opt);
  const double spike3 =
      correlation_at(AlphaValue::rational(0, 1), 2, 3, 20, 2.0, TestKernel::box2d(-1, 1, -1, 1));
  const double spike3_expected = falling_factorial(20, 3) / 20.0;
  const bool spikes = std::fabs(rep.spike - rep.spike_expected) <= 1e-12 * rep.spike_expected &&
                      std::fabs(spike3 - spike3_expected) <= 1e-12 * spike3_expected;
  const double parseval = rep.parseval_lhs / rep.parseval_rhs;
  auto growth = variance_growth(2, 3, 1.0, {32, 64, 128},
                                TestKernel::box2d(-1, 1, -1, 1), 4096);
  const bool growth_ok = std::fabs(growth.exponent - growth.expected) <= 0.1 * growth.expected;
  r.pass = spikes && std::fabs(parseval - 1.0) <= 0.1 && growth_ok;
  r.detail = std::string(spikes ? "spikes exact" : "spike mismatch") +
             fmt("; Parseval lhs/rhs %.4f; growth exponent %.3f (target %.0f)", parseval,
                 growth.exponent, growth.expected);
  return r;
}

inline CriterionResult poisson_baseline(std::uint64_t seed = 12) {
  auto r = start(12, "window counts of uniform points against Po(2)");
  auto dist = simulate_counts(10000, 2.0, 100000, seed);
  const double tv = dist.tv_to_poisson(2.0);
  std::mt19937_64 rng(1212);
  std::uniform_real_distribution<double> pick(0.01, 50.0);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const double L = pick(rng);
    worst = std::max(worst, std::fabs(poisson_moment(L, 2) - (L + L * L)) / (L + L * L));
  }
  r.pass = tv <= 0.02 && worst <= 1e-12;
  r.detail = fmt("TV distance %.4f; worst relative gap of E Po(L)^2 %.1e", tv, worst);
  return r;
}

}  // namespace acceptance

inline const std::vector<std::function<CriterionResult()>>& acceptance_criteria() {
  static const std::vector<std::function<CriterionResult()>> all{
      acceptance::a0_exactness, acceptance::hasse,
      acceptance::gauss, acceptance::variance_bounds,
      acceptance::moment_identities, acceptance::pair_asymptotic,
      acceptance::triple_asymptotic, acceptance::exponential_sums,
      acceptance::sandwich_chain, acceptance::diophantine_search,
      acceptance::obstruction, [] { return acceptance::poisson_baseline(); }};
  return all;
}

/// Runs one criterion; library errors count as a failure with the message as
/// detail.
inline CriterionResult run_criterion(int id) {
  const auto& all = acceptance_criteria();
  require(id >= 1 && id <= static_cast<int>(all.size()),
          "run_criterion: unknown criterion " + std::to_string(id));
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = all[static_cast<std::size_t>(id - 1)]();
  } catch (const std::exception& e) {
    r.id = id;
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::string format_criterion(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "criterion %2d: %s ", r.id, r.pass ? "PASS" : "FAIL");
  char tail[32];
  std::snprintf(tail, sizeof tail, " [%.1fs]", r.seconds);
  return head + r.title + " | " + r.detail + tail;
}

}  // namespace corrlab
