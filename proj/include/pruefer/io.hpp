#pragma once

// JSON/CSV serialization of potentials and reports. JSON output is
// deterministic: object keys keep insertion order and every floating-point
// value is written with 17 significant digits (non-finite values as null).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pruefer/bounds.hpp"
#include "pruefer/errors.hpp"
#include "pruefer/lemma_audit.hpp"
#include "pruefer/oracle.hpp"
#include "pruefer/potential.hpp"
#include "pruefer/prufer.hpp"
#include "pruefer/sensitivity.hpp"
#include "pruefer/spectrum.hpp"

namespace pruefer::io {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Number formatting and deterministic dump
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void dump(const Json& j, std::ostream& os, int indent, int depth) {
  const auto newline = [&](int d) {
    os << '\n';
    for (int k = 0; k < indent * d; ++k) os << ' ';
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        os << Json(it.key()).dump() << ": ";
        dump(it.value(), os, indent, depth + 1);
      }
      newline(depth);
      os << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        dump(v, os, indent, depth + 1);
      }
      newline(depth);
      os << ']';
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace detail

inline void dump_json(const Json& j, std::ostream& os) {
  detail::dump(j, os, 2, 0);
  os << '\n';
}

inline std::string dump_json(const Json& j) {
  std::ostringstream os;
  dump_json(j, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Potential specs
// ---------------------------------------------------------------------------

namespace detail {

inline double number_field(const Json& j, const char* field) {
  if (!j.contains(field)) throw InputError(std::string("missing field '") + field + "'");
  const Json& v = j.at(field);
  if (!v.is_number()) throw InputError(std::string("field '") + field + "' must be a number");
  return v.get<double>();
}

inline Node parse_node(const Json& v, std::size_t k) {
  const std::string where = "nodes[" + std::to_string(k) + "]";
  if (v.is_array()) {
    if (v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw InputError("field '" + where + "' must be [x, value]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }
  if (v.is_object()) {
    try {
      return {number_field(v, "x"), number_field(v, "value")};
    } catch (const InputError& e) {
      throw InputError("field '" + where + "': " + e.what());
    }
  }
  throw InputError("field '" + where + "' must be [x, value] or {\"x\": .., \"value\": ..}");
}

}  // namespace detail

inline PotentialSpec parse_potential_spec(const Json& j) {
  if (!j.is_object()) throw InputError("potential spec must be a JSON object");
  if (!j.contains("kind")) throw InputError("missing field 'kind'");
  if (!j.at("kind").is_string()) throw InputError("field 'kind' must be a string");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return ConstantPotential{detail::number_field(j, "c")};
  if (kind == "sine_bump") {
    return SineBump{detail::number_field(j, "base"), detail::number_field(j, "amplitude")};
  }
  if (kind == "piecewise_linear") {
    if (!j.contains("nodes")) throw InputError("missing field 'nodes'");
    const Json& nodes = j.at("nodes");
    if (!nodes.is_array()) throw InputError("field 'nodes' must be an array");
    PiecewiseLinear pl;
    for (std::size_t k = 0; k < nodes.size(); ++k) pl.nodes.push_back(detail::parse_node(nodes[k], k));
    return pl;
  }
  if (kind == "polynomial") {
    if (!j.contains("coefficients")) throw InputError("missing field 'coefficients'");
    const Json& c = j.at("coefficients");
    if (!c.is_array()) throw InputError("field 'coefficients' must be an array");
    Polynomial poly;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (!c[k].is_number()) {
        throw InputError("field 'coefficients[" + std::to_string(k) + "]' must be a number");
      }
      poly.coefficients.push_back(c[k].get<double>());
    }
    return poly;
  }
  throw InputError("field 'kind': unknown potential kind '" + kind + "'");
}

/// Parses and validates a potential from JSON text; errors name the offending field.
inline Potential parse_potential(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return Potential(parse_potential_spec(j));
}

inline Potential load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open potential file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_potential(ss.str());
}

inline Json to_json(const PotentialSpec& spec) {
  Json j;
  j["kind"] = kind_name(spec);
  std::visit(
      [&j](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantPotential>) {
          j["c"] = s.c;
        } else if constexpr (std::is_same_v<T, SineBump>) {
          j["base"] = s.base;
          j["amplitude"] = s.amplitude;
        } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
          Json nodes = Json::array();
          for (const Node& n : s.nodes) nodes.push_back(Json::array({n.x, n.value}));
          j["nodes"] = nodes;
        } else {
          j["coefficients"] = s.coefficients;
        }
      },
      spec);
  return j;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json to_json(const ShapeReport& s) {
  Json j;
  j["shape"] = shape_name(s.shape);
  j["x0"] = s.x0;
  j["q_sup"] = s.q_sup;
  j["q0"] = s.q0;
  j["q1"] = s.q1;
  j["qmin"] = s.qmin;
  return j;
}

inline Json to_json(const HypothesisReport& h) {
  Json j;
  j["nonnegative"] = h.nonnegative;
  j["nonnegative_margin"] = h.nonnegative_margin;
  j["single_barrier"] = h.single_barrier;
  j["shape"] = shape_name(h.shape);
  j["x0"] = h.x0;
  j["q_x0"] = h.q_x0;
  j["qstar"] = h.qstar;
  j["sup_abs_dq"] = h.sup_abs_dq;
  j["deriv_bound_ok"] = h.deriv_bound_ok;
  j["deriv_margin"] = h.deriv_margin;
  j["eligibility_threshold"] = h.eligibility_threshold;
  j["all_pairs_condition"] = h.all_pairs_condition;
  j["all_pairs_margin"] = h.all_pairs_margin;
  j["all_hold"] = h.all_hold();
  return j;
}

inline Json to_json(const Eigenvalue& e) {
  Json j;
  j["n"] = e.n;
  j["z"] = e.z;
  j["lambda"] = e.lambda;
  j["residual"] = e.residual;
  return j;
}

inline Json to_json(const std::vector<Eigenvalue>& eigs) {
  Json j = Json::array();
  for (const auto& e : eigs) j.push_back(to_json(e));
  return j;
}

inline Json to_json(const PairCheck& c) {
  Json j;
  j["n"] = c.n;
  j["m"] = c.m;
  j["ratio"] = c.ratio;
  j["bound"] = c.bound;
  j["bound_kind"] = bound_kind_name(c.bound_kind);
  j["eligible"] = c.eligible;
  j["margin"] = c.margin;
  return j;
}

inline Json to_json(const BoundReport& r) {
  Json j;
  j["potential_id"] = r.potential_id;
  j["kind"] = bound_kind_name(r.kind);
  j["n_max"] = r.n_max;
  j["applicable"] = r.applicable;
  j["eligible_count"] = r.eligible_count();
  j["all_eligible_pass"] = r.all_eligible_pass;
  j["min_margin_eligible"] = r.min_margin_eligible;
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  j["checks"] = checks;
  return j;
}

inline Json to_json(const MonotonicityScan& s) {
  Json j;
  j["x0"] = s.x0;
  j["threshold_z"] = s.threshold_z;
  j["hypothesis_set"] = hypothesis_set_name(s.hypothesis_set);
  j["hypotheses_hold"] = s.hypotheses_hold;
  j["min_value"] = s.min_value;
  j["argmin_z"] = s.argmin_z;
  Json v = Json::array();
  for (const auto& [z, value] : s.violations) v.push_back(Json::array({z, value}));
  j["violations"] = v;
  j["z_grid"] = s.z_grid;
  j["theta_dot"] = s.theta_dot_values;
  j["theta_dot_fd"] = s.theta_dot_fd;
  j["discrepancy"] = s.discrepancy;
  return j;
}

inline Json to_json(const AuditResult& r) {
  Json j;
  j["lemma_id"] = lemma_name(r.lemma_id);
  j["case"] = r.case_label;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["margin"] = r.margin;
  j["pass"] = r.pass;
  j["status"] = status_name(r.status);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline Json to_json(const AuditReport& r) {
  Json j;
  j["cases_run"] = r.cases_run;
  j["all_pass"] = r.all_pass();
  j["max_equality_residual"] = r.max_equality_residual();
  Json results = Json::array();
  for (const auto& a : r.results) results.push_back(to_json(a));
  j["results"] = results;
  Json skipped = Json::array();
  for (const auto& s : r.skipped) {
    Json e;
    e["case"] = s.case_label;
    e["status"] = "skipped";
    e["reason"] = s.reason;
    skipped.push_back(e);
  }
  j["skipped"] = skipped;
  return j;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// One CSV row; doubles with 17 significant digits, text fields quoted when needed.
class CsvRow {
 public:
  CsvRow& operator<<(double v) { return add(std::isfinite(v) ? format_double(v) : std::string()); }
  CsvRow& operator<<(int v) { return add(std::to_string(v)); }
  CsvRow& operator<<(std::size_t v) { return add(std::to_string(v)); }
  CsvRow& operator<<(bool v) { return add(v ? "true" : "false"); }
  CsvRow& operator<<(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return add(std::string(s));
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return add(q + "\"");
  }
  CsvRow& operator<<(const char* s) { return *this << std::string_view(s); }
  CsvRow& operator<<(const std::string& s) { return *this << std::string_view(s); }

  const std::string& str() const noexcept { return line_; }

 private:
  CsvRow& add(const std::string& field) {
    if (!first_) line_ += ',';
    first_ = false;
    line_ += field;
    return *this;
  }
  std::string line_;
  bool first_ = true;
};

inline std::ostream& operator<<(std::ostream& os, const CsvRow& r) { return os << r.str() << '\n'; }

inline void write_csv(std::ostream& os, const std::vector<Eigenvalue>& eigs) {
  os << "n,z,lambda,residual\n";
  for (const auto& e : eigs) os << (CsvRow() << e.n << e.z << e.lambda << e.residual);
}

inline void write_csv_header_pairs(std::ostream& os) {
  os << "n,m,ratio,bound,bound_kind,eligible,margin\n";
}

inline void write_csv_rows(std::ostream& os, const BoundReport& r) {
  for (const auto& c : r.checks) {
    os << (CsvRow() << c.n << c.m << c.ratio << c.bound << bound_kind_name(c.bound_kind) << c.eligible
                    << c.margin);
  }
}

inline void write_csv(std::ostream& os, const BoundReport& r) {
  write_csv_header_pairs(os);
  write_csv_rows(os, r);
}

inline void write_csv(std::ostream& os, const MonotonicityScan& s) {
  os << "z,theta_dot_integral,theta_dot_fd,discrepancy\n";
  for (std::size_t k = 0; k < s.z_grid.size(); ++k) {
    CsvRow row;
    row << s.z_grid[k] << s.theta_dot_values[k];
    if (k < s.theta_dot_fd.size()) {
      row << s.theta_dot_fd[k] << s.discrepancy[k];
    } else {
      row << "" << "";
    }
    os << row;
  }
}

inline void write_csv(std::ostream& os, const AuditReport& r) {
  os << "lemma_id,case,lhs,rhs,margin,status\n";
  for (const auto& a : r.results) {
    os << (CsvRow() << lemma_name(a.lemma_id) << a.case_label << a.lhs << a.rhs << a.margin
                    << status_name(a.status));
  }
  for (const auto& s : r.skipped) {
    os << (CsvRow() << "" << s.case_label << "" << "" << "" << "skipped");
  }
}

/// Trajectory dump for debugging: columns x, phi, log_r at the stored samples.
inline void write_trajectory_csv(std::ostream& os, const PruferTrajectory& t) {
  os << "x,phi,log_r\n";
  for (const PruferState& s : t.samples()) os << (CsvRow() << s.x << s.phi << s.log_r);
}

}  // namespace pruefer::io
