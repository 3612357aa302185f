// Dilated point sets, discrepancy, exact window-count moments and the
// random-model baseline.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "corrlab/error.hpp"
#include "corrlab/numeric.hpp"
#include "corrlab/parallel.hpp"

namespace corrlab {

struct Provenance {
  AlphaValue alpha;
  int d = 1;
  std::int64_t N = 0;
};

/// Sorted fractional parts in [0,1).
class PointSet {
 public:
  PointSet() = default;

  /// Reduces each value mod 1 and sorts.
  static PointSet from_values(std::vector<double> values) {
    for (double& v : values) {
      require(std::isfinite(v), "PointSet: non-finite value");
      v -= std::floor(v);
      if (v >= 1.0) v = 0.0;
    }
    std::sort(values.begin(), values.end());
    PointSet ps;
    ps.points_ = std::move(values);
    return ps;
  }

  static PointSet with_provenance(std::vector<double> sorted_values,
                                  Provenance prov) {
    PointSet ps;
    ps.points_ = std::move(sorted_values);
    ps.provenance_ = std::move(prov);
    return ps;
  }

  std::size_t size() const { return points_.size(); }
  std::int64_t n() const { return static_cast<std::int64_t>(points_.size()); }
  bool empty() const { return points_.empty(); }
  double operator[](std::size_t i) const { return points_[i]; }
  const std::vector<double>& points() const { return points_; }
  const std::optional<Provenance>& provenance() const { return provenance_; }

  /// Common circular shift; provenance is dropped.
  PointSet shifted(double s) const {
    std::vector<double> v(points_);
    for (double& x : v) x += s;
    return from_values(std::move(v));
  }

 private:
  std::vector<double> points_;
  std::optional<Provenance> provenance_;
};

/// {alpha n^d}, n = 1..N, sorted.
inline PointSet dilated_points(const AlphaValue& alpha, int d, std::int64_t N) {
  require(d >= 1, "dilated_points: d must be at least 1");
  require(N >= 1, "dilated_points: N must be positive");
  // largest multiplier is N^d
  const long double top = std::pow(static_cast<long double>(N), d);
  if (top > std::ldexp(1.0L, 62)) {
    fail(ErrorKind::precondition, "dilated_points: N^d exceeds 2^62");
  }
  detail::check_guard(alpha, top);

  std::vector<double> values(static_cast<std::size_t>(N));
  auto chunks = parallel_chunks<int>(
      0, static_cast<std::size_t>(N), 4096, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
          std::int64_t n = static_cast<std::int64_t>(i) + 1;
          std::int64_t m = 1;
          for (int e = 0; e < d; ++e) m *= n;
          values[i] = frac_dilate_unsigned(alpha, m);
        }
        return 0;
      });
  (void)chunks;
  std::sort(values.begin(), values.end());
  return PointSet::with_provenance(std::move(values), Provenance{alpha, d, N});
}

/// Extreme discrepancy by the sorted-order formula.
inline double discrepancy(const PointSet& ps) {
  require(!ps.empty(), "discrepancy: empty point set");
  const double n = static_cast<double>(ps.size());
  double hi = -2.0, lo = 2.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    double t = static_cast<double>(i + 1) / n - ps[i];
    hi = std::max(hi, t);
    lo = std::min(lo, t);
  }
  return 1.0 / n + hi - lo;
}

/// E_Y W^k where W(y) counts points in [y, y + L/n) mod 1.
inline double window_moment(const PointSet& ps, double L, int k) {
  require(!ps.empty(), "window_moment: empty point set");
  require(k >= 1, "window_moment: k must be positive");
  const double n = static_cast<double>(ps.size());
  require(L > 0.0 && L <= n, "window_moment: L must lie in (0, n]");
  const double h = L / n;
  if (h >= 1.0) return std::pow(n, k);

  // events strictly inside (0,1): +1 when y passes x - h, -1 when y passes x
  std::vector<std::pair<double, int>> events;
  events.reserve(2 * ps.size());
  std::int64_t w = 0;
  for (double x : ps.points()) {
    if (x > 0.0 && x <= h) ++w;
    if (x > 0.0) events.emplace_back(x, -1);
    double entry = x - h;
    if (entry < 0.0) entry += 1.0;
    if (entry > 0.0 && entry < 1.0) events.emplace_back(entry, +1);
  }
  std::sort(events.begin(), events.end());

  CompensatedSum acc;
  double prev = 0.0;
  std::size_t i = 0;
  while (i < events.size()) {
    double pos = events[i].first;
    acc += std::pow(static_cast<double>(w), k) * (pos - prev);
    while (i < events.size() && events[i].first == pos) w += events[i++].second;
    prev = pos;
  }
  acc += std::pow(static_cast<double>(w), k) * (1.0 - prev);
  return acc.value();
}

/// E X^k for X ~ Po(L), through Stirling numbers of the second kind.
inline double poisson_moment(double L, int k) {
  require(k >= 1 && k <= 30, "poisson_moment: k must be in [1, 30]");
  require(L >= 0.0, "poisson_moment: L must be nonnegative");
  std::vector<long double> row{1.0L};  // S(0, .)
  for (int m = 1; m <= k; ++m) {
    std::vector<long double> next(static_cast<std::size_t>(m) + 1, 0.0L);
    for (int j = 1; j <= m; ++j) {
      long double carry = (j <= m - 1) ? j * row[static_cast<std::size_t>(j)] : 0.0L;
      next[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j - 1)] + carry;
    }
    row = std::move(next);
  }
  long double sum = 0.0L, power = 1.0L;
  for (int j = 1; j <= k; ++j) {
    power *= L;
    sum += row[static_cast<std::size_t>(j)] * power;
  }
  return static_cast<double>(sum);
}

inline double poisson_pmf(double L, std::int64_t k) {
  if (k < 0) return 0.0;
  return std::exp(static_cast<double>(k) * std::log(L) - L -
                  std::lgamma(static_cast<double>(k) + 1.0));
}

// ---------------------------------------------------------------------------
// Random model

/// splitmix64 keyed by (seed, stream); one stream per simulated sample.
class SplitMix64 {
 public:
  SplitMix64(std::uint64_t seed, std::uint64_t stream)
      : state_(seed ^ mix(stream + 0x632be59bd9b4e019ull)) {}

  std::uint64_t operator()() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1p-53; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

struct CountDistribution {
  std::int64_t N = 0;
  double L = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> counts;  // counts[k] = #samples with Z = k

  double prob(std::size_t k) const {
    return k < counts.size() ? static_cast<double>(counts[k]) /
                                   static_cast<double>(samples)
                             : 0.0;
  }
  double moment(int order) const {
    CompensatedSum s;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      s += std::pow(static_cast<double>(k), order) * prob(k);
    }
    return s.value();
  }
  /// Total-variation distance to Po(lambda).
  double tv_to_poisson(double lambda) const {
    CompensatedSum diff, seen;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      double p = poisson_pmf(lambda, static_cast<std::int64_t>(k));
      diff += std::fabs(prob(k) - p);
      seen += p;
    }
    // Poisson mass beyond the observed support
    double tail = std::max(0.0, 1.0 - seen.value());
    return 0.5 * (diff.value() + tail);
  }
  std::string csv() const {
    std::ostringstream out;
    out << "k,count,prob\n";
    char buf[64];
    for (std::size_t k = 0; k < counts.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17e", prob(k));
      out << k << ',' << counts[k] << ',' << buf << '\n';
    }
    return out.str();
  }
};

/// Z = #{n <= N : X_n in [Y, Y + L/N) mod 1} over `samples` realizations.
inline CountDistribution simulate_counts(std::int64_t N, double L,
                                         std::int64_t samples,
                                         std::uint64_t seed) {
  require(N >= 1, "simulate_counts: N must be positive");
  require(samples >= 1, "simulate_counts: samples must be positive");
  require(L > 0.0 && L <= static_cast<double>(N),
          "simulate_counts: L must lie in (0, N]");
  const double h = L / static_cast<double>(N);
  using Hist = std::vector<std::int64_t>;
  auto parts = parallel_chunks<Hist>(
      0, static_cast<std::size_t>(samples), 1024,
      [&](std::size_t lo, std::size_t hi) {
        Hist hist;
        for (std::size_t s = lo; s < hi; ++s) {
          SplitMix64 rng(seed, s);
          double y = rng.uniform();
          std::int64_t z = 0;
          for (std::int64_t i = 0; i < N; ++i) {
            double t = rng.uniform() - y;
            if (t < 0.0) t += 1.0;
            z += (t < h);
          }
          if (hist.size() <= static_cast<std::size_t>(z)) hist.resize(z + 1, 0);
          ++hist[static_cast<std::size_t>(z)];
        }
        return hist;
      });
  CountDistribution dist{N, L, samples, seed, {}};
  for (const Hist& h2 : parts) {
    if (dist.counts.size() < h2.size()) dist.counts.resize(h2.size(), 0);
    for (std::size_t k = 0; k < h2.size(); ++k) dist.counts[k] += h2[k];
  }
  return dist;
}

}  // namespace corrlab
