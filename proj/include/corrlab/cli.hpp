// Command-line surface: alpha specs, run configuration, artifact writers.
#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corrlab/acceptance.hpp"
#include "corrlab/correlations.hpp"
#include "corrlab/diophantine.hpp"
#include "corrlab/error.hpp"
#include "corrlab/kernels.hpp"
#include "corrlab/modcount.hpp"
#include "corrlab/numeric.hpp"
#include "corrlab/parallel.hpp"
#include "corrlab/pipeline.hpp"
#include "corrlab/report.hpp"
#include "corrlab/sequences.hpp"

namespace corrlab {

// ---------------------------------------------------------------------------
// alpha specs

namespace detail {

// The string constructor of BigInt reads a leading 0 as octal.
inline BigInt decimal(const std::string& digits) {
  BigInt v = 0;
  for (char ch : digits) v = v * 10 + (ch - '0');
  return v;
}

class SpecCursor {
 public:
  // `s` is the slice being read, starting `offset` characters into `full`
  SpecCursor(std::string s, const std::string& full, std::size_t offset = 0)
      : s_(std::move(s)), full_(full), offset_(offset) {}

  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }
  std::string digits() {
    std::size_t start = pos_;
    while (!done() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("expected a digit");
    return s_.substr(start, pos_ - start);
  }
  BigInt integer() {
    bool neg = accept('-');
    if (!neg) accept('+');
    BigInt v = decimal(digits());
    return neg ? BigInt(-v) : v;
  }
  std::int64_t small_integer(std::int64_t lo, std::int64_t hi) {
    std::size_t at = pos_;
    BigInt v = integer();
    if (v < lo || v > hi) {
      pos_ = at;
      error("integer out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<std::int64_t>(v);
  }
  void finish() {
    if (!done()) error("unexpected trailing input");
  }
  [[noreturn]] void error(const std::string& what) const {
    error_at(pos_, what);
  }
  [[noreturn]] void error_at(std::size_t pos, const std::string& what) const {
    fail(ErrorKind::parse, "parse_alpha_spec: " + what + " at position " +
                               std::to_string(offset_ + pos) + " in '" + full_ + "'");
  }

 private:
  std::string s_;
  const std::string& full_;
  std::size_t offset_;
  std::size_t pos_ = 0;
};

inline bool fits_i64(const BigInt& v) {
  return v >= BigInt(std::numeric_limits<std::int64_t>::min()) &&
         v <= BigInt(std::numeric_limits<std::int64_t>::max());
}

/// num/den exactly when both fit in 64 bits, otherwise truncated to `bits`.
inline AlphaValue rational_or_fixed(const BigInt& num, const BigInt& den, unsigned bits) {
  if (fits_i64(num) && fits_i64(den)) {
    return AlphaValue::rational(static_cast<std::int64_t>(num),
                                static_cast<std::int64_t>(den));
  }
  BigInt ip = num / den;
  if (num < 0 && ip * den != num) ip -= 1;  // floor
  require(fits_i64(ip), "parse_alpha_spec: integer part does not fit in 64 bits");
  BigInt rem = num - ip * den;
  return AlphaValue::fixed_point((rem << bits) / den, bits, static_cast<std::int64_t>(ip));
}

}  // namespace detail

/// rational:a/q | dec:x.y | sqrt:k | golden | pi-frac | cf:a0,a1,... with an
/// optional "@bits" precision suffix.
inline AlphaValue parse_alpha_spec(const std::string& spec,
                                   unsigned default_bits = kDefaultFractionalBits) {
  unsigned bits = default_bits;
  std::string body = spec;
  if (auto at = spec.find('@'); at != std::string::npos) {
    body = spec.substr(0, at);
    std::string tail = spec.substr(at + 1);
    detail::SpecCursor c(tail, spec, at + 1);
    BigInt b = c.integer();
    c.finish();
    if (b < 1) c.error_at(0, "precision must be positive");
    if (b > kMaxFractionalBits) {
      fail(ErrorKind::precision, "parse_alpha_spec: precision request of " + b.str() +
                                     " bits exceeds the 4096-bit limit");
    }
    bits = static_cast<unsigned>(b);
  }
  require(bits >= 1, "parse_alpha_spec: precision must be positive");
  if (bits > kMaxFractionalBits) {
    fail(ErrorKind::precision, "parse_alpha_spec: precision request of " +
                                   std::to_string(bits) + " bits exceeds the 4096-bit limit");
  }

  const auto colon = body.find(':');
  const std::string head = body.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : body.substr(colon + 1);
  auto read_rest = [&](auto&& f) {
    detail::SpecCursor c(rest, spec, colon + 1);
    return f(c);
  };

  if (colon == std::string::npos) {
    if (body == "golden") return AlphaValue::golden(bits);
    if (body == "pi-frac") return AlphaValue::pi_frac(bits);
    fail(ErrorKind::parse, "parse_alpha_spec: unknown alpha kind '" + body +
                               "' at position 0 in '" + spec + "'");
  }
  if (head == "rational") {
    return read_rest([&](detail::SpecCursor& c) {
      BigInt num = c.integer();
      c.expect('/');
      BigInt den = c.integer();
      c.finish();
      if (den <= 0) c.error("denominator must be positive");
      return detail::rational_or_fixed(num, den, bits);
    });
  }
  if (head == "dec") {
    return read_rest([&](detail::SpecCursor& c) {
      bool neg = c.accept('-');
      if (!neg) c.accept('+');
      std::string whole = c.peek() == '.' ? "0" : c.digits();
      std::string frac;
      if (c.accept('.')) frac = c.digits();
      c.finish();
      BigInt num = detail::decimal(whole + frac), den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      if (neg) num = -num;
      return detail::rational_or_fixed(num, den, bits);
    });
  }
  if (head == "sqrt") {
    return read_rest([&](detail::SpecCursor& c) {
      std::int64_t k = c.small_integer(0, std::numeric_limits<std::int64_t>::max());
      c.finish();
      return AlphaValue::sqrt_of(static_cast<std::uint64_t>(k), bits);
    });
  }
  if (head == "cf") {
    return read_rest([&](detail::SpecCursor& c) {
      // [a0; a1, a2, ...] by the convergent recurrence
      BigInt p0 = 1, q0 = 0, p1 = c.integer(), q1 = 1;
      while (c.accept(',')) {
        std::size_t at = c.pos();
        BigInt a = c.integer();
        if (a < 1) c.error_at(at, "partial quotients after the first must be positive");
        BigInt p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
      }
      c.finish();
      return detail::rational_or_fixed(p1, q1, bits);
    });
  }
  fail(ErrorKind::parse, "parse_alpha_spec: unknown alpha kind '" + head +
                             "' at position 0 in '" + spec + "'");
}

/// "box:s,t", "box:s1,t1,s2,t2", "triangle" or "pyramid".
inline TestKernel parse_kernel_spec(const std::string& spec) {
  if (spec == "triangle") return TestKernel::triangle();
  if (spec == "pyramid") return TestKernel::pyramid();
  if (spec.rfind("box:", 0) == 0) {
    std::vector<double> v;
    std::stringstream in(spec.substr(4));
    std::string item;
    while (std::getline(in, item, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        fail(ErrorKind::parse, "parse_kernel_spec: bad number '" + item + "' in '" + spec + "'");
      }
    }
    if (v.size() == 2) return TestKernel::box1d(v[0], v[1]);
    if (v.size() == 4) return TestKernel::box2d(v[0], v[1], v[2], v[3]);
    fail(ErrorKind::parse, "parse_kernel_spec: a box needs 2 or 4 bounds in '" + spec + "'");
  }
  fail(ErrorKind::parse, "parse_kernel_spec: unknown kernel '" + spec + "'");
}

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& what) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::istringstream one(item);
    T v{};
    if (!(one >> v) || !one.eof()) {
      fail(ErrorKind::parse, what + ": bad list entry '" + item + "' in '" + text + "'");
    }
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// output

/// JSON text with every real in exponent notation.
inline void write_json(std::ostream& out, const Json& j, int indent = 2, int depth = 0) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::number_float: {
      double x = j.get<double>();
      out << (std::isfinite(x) ? format_real(x) : "null");
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ',' << nl;
        first = false;
        out << (indent > 0 ? pad : "") << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write_json(out, it.value(), indent, depth + 1);
      }
      out << nl << (indent > 0 ? close : "") << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // arrays of scalars stay on one line
      bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      out << '[' << (flat ? "" : nl);
      bool first = true;
      for (const auto& e : j) {
        if (!first) out << ',' << (flat ? "" : nl);
        first = false;
        if (!flat && indent > 0) out << pad;
        write_json(out, e, flat ? 0 : indent, depth + 1);
      }
      out << (flat ? "" : nl) << (flat || indent == 0 ? "" : close) << ']';
      return;
    }
    default:
      out << j.dump();
  }
}

inline std::string json_text(const Json& j, int indent = 2) {
  std::ostringstream s;
  write_json(s, j, indent);
  return s.str();
}

// ---------------------------------------------------------------------------
// configuration

struct RunConfig {
  std::string command;
  std::string kind;  // modcount table kind
  std::string alpha = "sqrt:2";
  std::int64_t N = 1000, q = 101, M = 10, seed = 1, samples = 10000, grid = 4096,
               truncation = 0;
  int d = 2, k = 2;
  double L = 1.0, eta = 0.05, beta = 0.5, C = 10.0, epsilon = 0.1;
  unsigned bits = kDefaultFractionalBits;
  std::string kernel;  // empty: command default
  std::string box = "-1,1,-1,1";
  std::string b = "0,0,0,0,0,0";
  std::string Ns;  // obstruction growth sizes
  std::string criteria;  // verify subset
  bool main_term = false;
  std::string out;
  std::string format = "json";
  unsigned threads = 0;
  std::string config_file;

  /// Keys that influence the result of `command`; worker count and output
  /// path are left out so that artifacts compare byte for byte.
  std::vector<std::string> relevant_keys() const {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"points", {"alpha", "bits", "d", "N"}},
        {"discrepancy", {"alpha", "bits", "d", "N"}},
        {"moments", {"alpha", "bits", "d", "N", "L", "k"}},
        {"pair", {"alpha", "bits", "d", "N", "L", "kernel"}},
        {"triple", {"alpha", "bits", "d", "N", "L", "kernel"}},
        {"modcount", {"kind", "q", "M", "beta", "eta", "C", "b"}},
        {"variance", {"q", "M"}},
        {"approx", {"alpha", "bits", "N", "eta"}},
        {"sandwich", {"alpha", "bits", "N", "L", "eta", "box", "main-term"}},
        {"obstruction", {"d", "k", "N", "L", "kernel", "grid", "truncation", "epsilon", "Ns"}},
        {"simulate", {"N", "L", "samples", "seed"}},
        {"verify", {"criteria"}},
    };
    auto it = keys.find(command);
    return it == keys.end() ? std::vector<std::string>{} : it->second;
  }

  Json value_of(const std::string& key) const {
    if (key == "alpha") return alpha;
    if (key == "bits") return bits;
    if (key == "kind") return kind;
    if (key == "N") return N;
    if (key == "q") return q;
    if (key == "M") return M;
    if (key == "seed") return seed;
    if (key == "samples") return samples;
    if (key == "grid") return grid;
    if (key == "truncation") return truncation;
    if (key == "d") return d;
    if (key == "k") return k;
    if (key == "L") return L;
    if (key == "eta") return eta;
    if (key == "beta") return beta;
    if (key == "C") return C;
    if (key == "epsilon") return epsilon;
    if (key == "kernel") return kernel;
    if (key == "box") return box;
    if (key == "b") return b;
    if (key == "Ns") return Ns;
    if (key == "criteria") return criteria;
    if (key == "main-term") return main_term;
    return nullptr;
  }

  Json to_json() const {
    Json j{{"command", command}};
    for (const auto& key : relevant_keys()) j[key] = value_of(key);
    j["format"] = format;
    return j;
  }
};

/// Parses a flat key=value file; blank lines and lines starting with '#' are
/// skipped.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::parse, "config: cannot open '" + path + "'");
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
      fail(ErrorKind::parse, "config: expected key=value at " + path + ":" + std::to_string(lineno));
    }
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

// ---------------------------------------------------------------------------
// commands

struct CommandOutput {
  Json result;
  std::string csv;  // table body; empty: flattened result
  std::optional<Json> sidecar;
};

namespace detail {

inline std::string flatten_csv(const Json& j) {
  std::ostringstream out;
  out << "key,value\n";
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_primitive()) continue;
    out << it.key() << ',';
    if (it.value().is_string()) {
      out << it.value().get<std::string>();
    } else {
      write_json(out, it.value(), 0);
    }
    out << '\n';
  }
  return out.str();
}

inline Residues6 parse_residues(const std::string& text) {
  auto v = parse_list<std::int64_t>(text, "modcount");
  require(v.size() == 6, "modcount: --b needs six residues");
  Residues6 b;
  std::copy(v.begin(), v.end(), b.begin());
  return b;
}

inline CommandOutput table_output(const CongruenceTable& t) {
  CommandOutput o;
  o.sidecar = t.sidecar();
  Json cells = Json::array();
  for (std::int64_t c1 = 0; c1 < t.q; ++c1) {
    for (std::int64_t c2 = 0; c2 < t.q; ++c2) {
      double v = t.at(c1, c2);
      if (v == 0.0 && t.kind == TableKind::A) continue;
      if (t.integer_kind()) {
        cells.push_back({c1, c2, static_cast<std::int64_t>(v)});
      } else {
        cells.push_back({c1, c2, v});
      }
    }
  }
  o.result = *o.sidecar;
  o.result["cells"] = std::move(cells);
  o.csv = t.csv();
  return o;
}

inline CommandOutput run_modcount(const RunConfig& c) {
  if (c.kind == "a0") return table_output(make_a0_table(c.q));
  if (c.kind == "a") return table_output(make_a_table(c.q, c.M));
  if (c.kind == "delta") return table_output(make_delta_table(c.q, c.M));
  if (c.kind == "delta-star") return table_output(delta_star_table(c.q, c.beta));
  CommandOutput o;
  if (c.kind == "bad") {
    auto r = bad_set(c.q, c.beta, c.eta, c.C);
    o.result = {{"q", r.q}, {"beta", r.beta}, {"eta", r.eta}, {"C", r.C}, {"R", r.R},
                {"threshold", r.threshold}, {"size", r.members.size()},
                {"members", r.members}};
    std::ostringstream csv;
    csv << "a,normalized_D,bad\n";
    for (std::size_t i = 0; i < r.normalized_D.size(); ++i) {
      csv << i + 1 << ',' << format_real(r.normalized_D[i]) << ','
          << (r.normalized_D[i] >= r.threshold ? 1 : 0) << '\n';
    }
    o.csv = csv.str();
    return o;
  }
  if (c.kind == "expsum") {
    auto b = parse_residues(c.b);
    o.result = {{"q", c.q}, {"b", b}, {"S", exp_sum_S_exact(b, c.q)}};
    return o;
  }
  fail(ErrorKind::precondition, "modcount: unknown kind '" + c.kind + "'");
}

inline TestKernel kernel_or(const RunConfig& c, const char* fallback) {
  return parse_kernel_spec(c.kernel.empty() ? fallback : c.kernel);
}

inline CommandOutput run_command(const RunConfig& c) {
  CommandOutput o;
  const auto alpha = [&] { return parse_alpha_spec(c.alpha, c.bits); };
  if (c.command == "points") {
    auto a = alpha();
    auto ps = dilated_points(a, c.d, c.N);
    o.result = {{"alpha", a.describe()}, {"d", c.d}, {"N", c.N}, {"points", ps.points()}};
    std::ostringstream csv;
    csv << "i,x\n";
    for (std::size_t i = 0; i < ps.size(); ++i) csv << i << ',' << format_real(ps[i]) << '\n';
    o.csv = csv.str();
  } else if (c.command == "discrepancy") {
    auto a = alpha();
    o.result = {{"alpha", a.describe()}, {"d", c.d}, {"N", c.N},
                {"discrepancy", discrepancy(dilated_points(a, c.d, c.N))}};
  } else if (c.command == "moments") {
    require(c.k >= 1, "moments: k must be positive");
    auto a = alpha();
    auto ps = dilated_points(a, c.d, c.N);
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "order,window_moment,poisson_moment\n";
    for (int j = 1; j <= c.k; ++j) {
      double w = window_moment(ps, c.L, j), p = poisson_moment(c.L, j);
      rows.push_back({{"order", j}, {"window_moment", w}, {"poisson_moment", p}});
      csv << j << ',' << format_real(w) << ',' << format_real(p) << '\n';
    }
    o.result = {{"alpha", a.describe()}, {"N", c.N}, {"L", c.L}, {"moments", rows}};
    o.csv = csv.str();
  } else if (c.command == "pair" || c.command == "triple") {
    const bool pair = c.command == "pair";
    auto kernel = kernel_or(c, pair ? "box:-1,1" : "box:-1,1,-1,1");
    auto ps = dilated_points(alpha(), c.d, c.N);
    auto r = pair ? pair_correlation(ps, c.L, kernel) : triple_correlation(ps, c.L, kernel);
    o.result = r.to_json(std::pow(c.L, pair ? 1 : 2) * kernel.integral());
  } else if (c.command == "modcount") {
    o = run_modcount(c);
  } else if (c.command == "variance") {
    const double qd = static_cast<double>(c.q), Md = static_cast<double>(c.M), lq = std::log(qd);
    const double s = delta_sq_sum(c.q, c.M);
    const double shape = std::pow(lq, 3) * Md * Md * Md + std::pow(lq, 6) * qd * qd;
    const bool applies = Md <= 0.2 * std::pow(qd, 2.0 / 3.0);
    o.result = {{"q", c.q}, {"M", c.M}, {"delta_sq_sum", s}, {"upper_shape", shape},
                {"ratio", s / shape}, {"lower_bound", 0.1 * Md * Md * Md},
                {"lower_bound_applies", applies},
                {"lower_bound_holds", s >= 0.1 * Md * Md * Md}};
  } else if (c.command == "approx") {
    auto a = alpha();
    auto r = prime_denominator_approx(a, c.N, c.eta);
    auto cf = continued_fraction(a, 24);
    o.result = {{"alpha", a.describe()}, {"N", c.N}, {"eta", c.eta}, {"found", r.has_value()}};
    if (r) {
      o.result["a"] = r->a;
      o.result["q"] = r->q;
      o.result["err"] = r->err;
    }
    o.result["quotients"] = cf.quotients;
  } else if (c.command == "sandwich") {
    auto a = alpha();
    auto bx = parse_list<double>(c.box, "sandwich");
    require(bx.size() == 4, "sandwich: --box needs four bounds");
    const double beta = infer_beta(c.N, c.L);
    const double Q = std::ceil(std::pow(static_cast<double>(c.N), (2 + beta) / 2 + 10 * c.eta));
    require_budget(Q < 1e15, "sandwich: denominator range beyond 1e15");
    auto approx = prime_denominator_approx(a, static_cast<std::int64_t>(Q), c.eta);
    require(approx.has_value(), "sandwich: no prime q in [Q, 2Q] with ||q alpha|| small enough");
    SandwichOptions opt;
    opt.with_main_term = c.main_term;
    o.result = sandwich_bounds(a, *approx, c.N, c.L, c.eta, SandwichBox{bx[0], bx[1], bx[2], bx[3]},
                               opt)
                   .to_json();
  } else if (c.command == "obstruction") {
    auto kernel = kernel_or(c, c.k == 2 ? "triangle" : "box:-1,1,-1,1");
    ObstructionOptions opt;
    opt.truncation = c.truncation;
    opt.grid = c.grid;
    opt.epsilon = c.epsilon;
    auto r = obstruction_coefficients(c.d, c.k, c.L, c.N, kernel, opt);
    o.result = r.to_json();
    std::ostringstream csv;
    csv << "ell,re,im\n";
    for (const auto& [l, v] : r.coefficients) {
      csv << l << ',' << format_real(v.real()) << ',' << format_real(v.imag()) << '\n';
    }
    o.csv = csv.str();
    if (!c.Ns.empty()) {
      auto g = variance_growth(c.d, c.k, c.L, parse_list<std::int64_t>(c.Ns, "obstruction"),
                               kernel, c.grid);
      o.result["growth"] = {{"N", g.Ns}, {"variance", g.variances},
                            {"exponent", g.exponent}, {"expected", g.expected}};
    }
  } else if (c.command == "simulate") {
    require(c.seed >= 0, "simulate: seed must be non-negative");
    auto dist = simulate_counts(c.N, c.L, c.samples, static_cast<std::uint64_t>(c.seed));
    o.result = {{"N", c.N}, {"L", c.L}, {"samples", c.samples}, {"seed", c.seed},
                {"tv_to_poisson", dist.tv_to_poisson(c.L)}, {"counts", dist.counts}};
    o.csv = dist.csv();
  } else {
    fail(ErrorKind::precondition, "unknown command '" + c.command + "'");
  }
  return o;
}

inline std::filesystem::path sidecar_path(const std::string& out) {
  std::filesystem::path p(out);
  return p.replace_extension(".sidecar.json");
}

inline void write_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json_text(Json{{"error", {{"kind", kind}, {"message", message}}}}, 0) << '\n';
}

inline int exit_code(ErrorKind k) { return k == ErrorKind::budget ? 3 : 2; }

}  // namespace detail

/// Executes one configured command. Returns the process exit status.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.threads > 0) set_worker_count(c.threads);
    require(c.format == "json" || c.format == "csv", "format must be csv or json");
    std::ostringstream body;
    int status = 0;
    std::optional<Json> sidecar;
    if (c.command == "verify") {
      std::vector<int> ids;
      if (c.criteria.empty()) {
        for (int i = 1; i <= static_cast<int>(acceptance_criteria().size()); ++i) ids.push_back(i);
      } else {
        ids = parse_list<int>(c.criteria, "verify");
      }
      Json rows = Json::array();
      std::ostringstream csv;
      csv << "criterion,pass,title,detail\n";
      for (int id : ids) {
        auto r = run_criterion(id);
        err << format_criterion(r) << '\n';
        if (!r.pass) status = 4;
        rows.push_back({{"criterion", r.id}, {"pass", r.pass}, {"title", r.title},
                        {"detail", r.detail}});
        csv << r.id << ',' << (r.pass ? "true" : "false") << ",\"" << r.title << "\",\""
            << r.detail << "\"\n";
      }
      Json doc{{"config", c.to_json()}, {"result", {{"passed", status == 0}, {"criteria", rows}}}};
      if (c.format == "json") {
        body << json_text(doc) << '\n';
      } else {
        body << "# config: " << json_text(c.to_json(), 0) << '\n' << csv.str();
      }
    } else {
      auto o = detail::run_command(c);
      sidecar = o.sidecar;
      if (c.format == "json") {
        body << json_text(Json{{"config", c.to_json()}, {"result", o.result}}) << '\n';
      } else {
        body << "# config: " << json_text(c.to_json(), 0) << '\n'
             << (o.csv.empty() ? detail::flatten_csv(o.result) : o.csv);
      }
    }
    if (c.out.empty() || c.out == "-") {
      out << body.str();
    } else {
      std::ofstream f(c.out, std::ios::binary);
      if (!f) fail(ErrorKind::precondition, "cannot write '" + c.out + "'");
      f << body.str();
      if (sidecar && c.format == "csv") {
        std::ofstream s(detail::sidecar_path(c.out), std::ios::binary);
        s << json_text(*sidecar) << '\n';
      }
    }
    return status;
  } catch (const Error& e) {
    detail::write_error(err, to_string(e.kind()), e.what());
    return detail::exit_code(e.kind());
  } catch (const std::exception& e) {
    detail::write_error(err, "internal", e.what());
    return 2;
  }
}

// ---------------------------------------------------------------------------
// argument parsing

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "points", "discrepancy", "moments", "pair", "triple", "modcount",
      "variance", "approx", "sandwich", "obstruction", "simulate", "verify"};
  return names;
}

/// Parses argv into `config`. Returns -1 to continue, or an exit status
/// (help output, argument errors).
inline int parse_arguments(int argc, const char* const* argv, RunConfig& c,
                           std::ostream& out, std::ostream& err) {
  CLI::App app{"corrlab: correlations of dilated sequences and modular counting", "corrlab"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.add_option("--out", c.out, "output path (default stdout)");
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", c.config_file, "flat key=value file; flags win");
  app.add_option("--threads", c.threads, "worker threads (default: CORRLAB_THREADS or 1)");

  std::map<std::string, CLI::App*> subs;
  auto sub = [&](const std::string& name, const std::string& help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    subs[name] = s;
    return s;
  };
  auto alpha = [&](CLI::App* s) {
    s->add_option("--alpha", c.alpha, "rational:a/q, dec:x, sqrt:k, golden, pi-frac, cf:a0,a1,...");
    s->add_option("--bits", c.bits, "fractional bits for irrational alpha");
  };
  for (const char* name : {"points", "discrepancy"}) {
    auto* s = sub(name, std::string(name) == "points" ? "sorted {alpha n^d}"
                                                      : "discrepancy of {alpha n^d}");
    alpha(s);
    s->add_option("--d", c.d);
    s->add_option("--N", c.N);
  }
  {
    auto* s = sub("moments", "window-count moments against Po(L)");
    alpha(s);
    s->add_option("--d", c.d);
    s->add_option("--N", c.N);
    s->add_option("--L", c.L);
    s->add_option("--k", c.k, "highest moment");
  }
  for (const char* name : {"pair", "triple"}) {
    auto* s = sub(name, std::string(name) == "pair" ? "pair correlation R2" : "triple correlation R3");
    alpha(s);
    s->add_option("--d", c.d);
    s->add_option("--N", c.N);
    s->add_option("--L", c.L);
    s->add_option("--kernel", c.kernel, "box:s,t | box:s1,t1,s2,t2 | triangle | pyramid");
  }
  {
    auto* s = sub("modcount", "congruence tables: a0, a, delta, delta-star, bad, expsum");
    s->add_option("kind", c.kind)->required()->check(
        CLI::IsMember({"a0", "a", "delta", "delta-star", "bad", "expsum"}));
    s->add_option("--q", c.q);
    s->add_option("--M", c.M);
    s->add_option("--beta", c.beta);
    s->add_option("--eta", c.eta);
    s->add_option("--C", c.C);
    s->add_option("--b", c.b, "six residues for expsum");
  }
  {
    auto* s = sub("variance", "sum of Delta^2 against its bounds");
    s->add_option("--q", c.q);
    s->add_option("--M", c.M);
  }
  {
    auto* s = sub("approx", "prime-denominator approximation in [N, 2N]");
    alpha(s);
    s->add_option("--N", c.N);
    s->add_option("--eta", c.eta);
  }
  {
    auto* s = sub("sandwich", "modular lower and upper bounds for R3");
    alpha(s);
    s->add_option("--N", c.N);
    s->add_option("--L", c.L);
    s->add_option("--eta", c.eta);
    s->add_option("--box", c.box, "s1,t1,s2,t2");
    s->add_flag("--main-term", c.main_term, "also sum A0 over the boxes");
  }
  {
    auto* s = sub("obstruction", "Fourier coefficients in alpha and the rational spike");
    s->add_option("--d", c.d);
    s->add_option("--k", c.k);
    s->add_option("--N", c.N);
    s->add_option("--L", c.L);
    s->add_option("--kernel", c.kernel);
    s->add_option("--grid", c.grid);
    s->add_option("--truncation", c.truncation);
    s->add_option("--epsilon", c.epsilon);
    s->add_option("--Ns", c.Ns, "comma list of N for the variance growth fit");
  }
  {
    auto* s = sub("simulate", "window counts of uniform random points");
    s->add_option("--N", c.N);
    s->add_option("--L", c.L);
    s->add_option("--samples", c.samples);
    s->add_option("--seed", c.seed);
  }
  {
    auto* s = sub("verify", "run the invariant suite");
    s->add_option("--criteria", c.criteria, "comma list of criterion numbers");
  }

  std::vector<std::string> args(argv, argv + argc);
  // config file entries go right after the subcommand so later flags win
  std::string config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  try {
    if (!config_path.empty()) {
      auto kv = read_config_file(config_path);
      std::size_t at = 0;
      CLI::App* chosen = nullptr;
      for (std::size_t i = 1; i < args.size() && !chosen; ++i) {
        if (auto it = subs.find(args[i]); it != subs.end()) {
          chosen = it->second;
          at = i + 1;
        }
      }
      std::vector<std::string> injected;
      for (const auto& [key, value] : kv) {
        if (key == "command" || key == "config") continue;
        const std::string flag = "--" + key;
        bool known_here = (chosen && chosen->get_option_no_throw(flag)) ||
                          app.get_option_no_throw(flag);
        if (known_here) {
          injected.push_back(flag + "=" + value);
          continue;
        }
        bool known_elsewhere = false;
        for (const auto& [name, s] : subs) known_elsewhere |= s->get_option_no_throw(flag) != nullptr;
        if (!known_elsewhere) fail(ErrorKind::parse, "config: unknown key '" + key + "'");
      }
      if (chosen) args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), injected.begin(),
                              injected.end());
    }
    std::vector<const char*> ptrs;
    for (const auto& a : args) ptrs.push_back(a.c_str());
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    detail::write_error(err, "parse", e.what());
    return 2;
  } catch (const Error& e) {
    detail::write_error(err, to_string(e.kind()), e.what());
    return detail::exit_code(e.kind());
  }
  for (const auto& [name, s] : subs) {
    if (s->parsed()) c.command = name;
  }
  return -1;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  int status = parse_arguments(argc, argv, c, out, err);
  if (status >= 0) return status;
  return run(c, out, err);
}

}  // namespace corrlab
