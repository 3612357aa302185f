// ExperimentReport: inputs, computed statistics, references and verdicts.
#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace corrlab {

using Json = nlohmann::ordered_json;

/// Reals in exponent notation with 17 significant digits.
inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

struct ReportRow {
  std::string name;
  double computed = 0.0;
  double reference = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  bool pass = true;
  std::string note;
};

struct ExperimentReport {
  std::string experiment;
  Json inputs = Json::object();
  std::vector<ReportRow> rows;
  Json extra = Json::object();

  /// Adds a computed-vs-reference row; pass when rel_gap <= rel_tol.
  ReportRow& compare(std::string name, double computed, double reference,
                     double rel_tol, std::string note = {}) {
    ReportRow r;
    r.name = std::move(name);
    r.computed = computed;
    r.reference = reference;
    r.abs_gap = std::fabs(computed - reference);
    double scale = std::max(std::fabs(reference), 1e-300);
    r.rel_gap = r.abs_gap / scale;
    r.pass = r.rel_gap <= rel_tol || r.abs_gap == 0.0;
    r.note = std::move(note);
    rows.push_back(std::move(r));
    return rows.back();
  }

  ReportRow& check(std::string name, bool ok, std::string note = {}) {
    ReportRow r;
    r.name = std::move(name);
    r.computed = ok ? 1.0 : 0.0;
    r.reference = 1.0;
    r.pass = ok;
    r.note = std::move(note);
    rows.push_back(std::move(r));
    return rows.back();
  }

  bool passed() const {
    for (const auto& r : rows) {
      if (!r.pass) return false;
    }
    return true;
  }

  Json to_json() const {
    Json j;
    j["experiment"] = experiment;
    j["inputs"] = inputs;
    Json arr = Json::array();
    for (const auto& r : rows) {
      arr.push_back({{"name", r.name},
                     {"computed", r.computed},
                     {"reference", r.reference},
                     {"abs_gap", r.abs_gap},
                     {"rel_gap", r.rel_gap},
                     {"pass", r.pass},
                     {"note", r.note}});
    }
    j["rows"] = arr;
    if (!extra.empty()) j["extra"] = extra;
    j["passed"] = passed();
    return j;
  }

  std::string to_csv() const {
    std::ostringstream out;
    out << "name,computed,reference,abs_gap,rel_gap,pass\n";
    for (const auto& r : rows) {
      out << r.name << ',' << format_real(r.computed) << ','
          << format_real(r.reference) << ',' << format_real(r.abs_gap) << ','
          << format_real(r.rel_gap) << ',' << (r.pass ? "true" : "false")
          << '\n';
    }
    return out.str();
  }
};

}  // namespace corrlab
