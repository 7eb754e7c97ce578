// SPDX-License-Identifier: Apache-2.0
//
// JSON files: matrices ({n, re, im}), suite configurations and suite reports.
#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "amm/verify.hpp"

namespace amm {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Matrix files

/// Doubles are written as shortest round-trip decimals (at most 17 significant digits).
inline Json matrix_to_json(const Matrix& a) {
  require_square(a, "matrix_to_json");
  const std::size_t n = a.size();
  Json re = Json::array(), im = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    Json r = Json::array(), c = Json::array();
    for (std::size_t j = 0; j < n; ++j) {
      r.push_back(a(i, j).real());
      c.push_back(a(i, j).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  Json out;
  out["n"] = n;
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

namespace detail {

inline bool is_count(const Json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

inline void read_part(const Json& arr, const char* key, std::size_t n, Matrix& a, bool imag) {
  if (!arr.is_array() || arr.size() != n) throw InvalidInput(std::string("matrix file: '") + key + "' must have n rows");
  for (std::size_t i = 0; i < n; ++i) {
    const Json& row = arr[i];
    if (!row.is_array() || row.size() != n)
      throw InvalidInput(std::string("matrix file: row ") + std::to_string(i) + " of '" + key + "' must have n entries");
    for (std::size_t j = 0; j < n; ++j) {
      if (!row[j].is_number()) throw InvalidInput(std::string("matrix file: non-numeric entry in '") + key + "'");
      const double v = row[j].get<double>();
      if (!std::isfinite(v)) throw InvalidInput(std::string("matrix file: non-finite entry in '") + key + "'");
      if (imag)
        a(i, j).imag(v);
      else
        a(i, j).real(v);
    }
  }
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw InvalidInput(what + ": " + e.what());
  }
}

}  // namespace detail

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("matrix file: expected an object");
  if (!j.contains("n") || !detail::is_count(j["n"]) || j["n"].get<std::size_t>() < 1)
    throw InvalidInput("matrix file: 'n' must be a positive integer");
  if (!j.contains("re") || !j.contains("im")) throw InvalidInput("matrix file: 're' and 'im' are required");
  const std::size_t n = j["n"].get<std::size_t>();
  Matrix a(n);
  detail::read_part(j["re"], "re", n, a, false);
  detail::read_part(j["im"], "im", n, a, true);
  return a;
}

inline std::string matrix_to_string(const Matrix& a) { return matrix_to_json(a).dump() + "\n"; }

inline Matrix matrix_from_string(const std::string& text) {
  return matrix_from_json(detail::parse_json(text, "matrix file"));
}

inline Matrix read_matrix(const std::string& path) {
  try {
    return matrix_from_string(detail::read_text(path));
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
  if (!out) throw InvalidInput("write failed for '" + path + "'");
}

inline void write_matrix(const std::string& path, const Matrix& a) { write_text(path, matrix_to_string(a)); }

// ---------------------------------------------------------------------------
// Norm names: operator, frobenius, trace, kyfan(k)

inline NormKind norm_from_string(const std::string& s) {
  if (s == "operator") return NormKind::operator_norm();
  if (s == "frobenius") return NormKind::frobenius();
  if (s == "trace") return NormKind::trace();
  if (s.rfind("kyfan(", 0) == 0 && s.size() > 7 && s.back() == ')') {
    const std::string digits = s.substr(6, s.size() - 7);
    if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos && digits.size() < 6) {
      const int k = std::stoi(digits);
      if (k >= 1) return NormKind::kyfan(k);
    }
  }
  throw InvalidParameter("unknown norm '" + s + "' (expected operator, frobenius, trace or kyfan(k))");
}

// ---------------------------------------------------------------------------
// Suite configuration

namespace detail {

inline const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw InvalidParameter(where + ": missing '" + key + "'");
  return obj[key];
}

inline double number_field(const Json& obj, const char* key, const std::string& where) {
  const Json& v = field(obj, key, where);
  if (!v.is_number()) throw InvalidParameter(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

inline std::uint64_t unsigned_field(const Json& obj, const char* key, const std::string& where) {
  const Json& v = field(obj, key, where);
  if (!is_count(v)) throw InvalidParameter(where + ": '" + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

inline MonotoneFunction function_field(const Json& v, const std::string& where) {
  if (!v.is_object() || !v.contains("name") || !v["name"].is_string())
    throw InvalidParameter(where + ": function must be an object with a 'name'");
  const std::string name = v["name"].get<std::string>();
  double param = 0.5;
  if (v.contains("param")) {
    if (!v["param"].is_number()) throw InvalidParameter(where + ": function 'param' must be a number");
    param = v["param"].get<double>();
  } else if (name != "uniform") {
    throw InvalidParameter(where + ": function '" + name + "' needs 'param'");
  }
  try {
    return catalog(name, param);
  } catch (const InvalidParameter& e) {
    throw InvalidParameter(where + ": " + e.what());
  }
}

}  // namespace detail

/// One entry of a suite configuration's "checks" list; checked with the same rules as run_check.
inline CheckConfig check_config_from_json(const Json& c, std::size_t position, int default_order = verify_quad_order) {
  std::string where = "checks[" + std::to_string(position) + "]";
  if (!c.is_object()) throw InvalidParameter(where + ": expected an object");
  const Json& idv = detail::field(c, "id", where);
  if (!idv.is_string()) throw InvalidParameter(where + ": 'id' must be a string");
  CheckConfig cfg;
  cfg.id = idv.get<std::string>();
  const CheckInfo& info = check_info(cfg.id);  // unknown id -> InvalidParameter naming it
  where += " (" + cfg.id + ")";

  EnsembleSpec& e = cfg.ensemble;
  e.dim = detail::unsigned_field(c, "dim", where);
  e.alpha_max = detail::number_field(c, "alpha_max", where);
  e.m = detail::number_field(c, "m", where);
  e.M = detail::number_field(c, "M", where);
  e.count = detail::unsigned_field(c, "count", where);
  e.seed = detail::unsigned_field(c, "seed", where);
  try {
    e.validate();
  } catch (const Error& err) {
    throw InvalidParameter(where + ": " + err.what());
  }

  CheckParams& p = cfg.params;
  p.quad_order = default_order;
  if (c.contains("function")) p.f = detail::function_field(c["function"], where);
  if (c.contains("g")) p.g = detail::function_field(c["g"], where);
  if (c.contains("map")) {
    const Json& m = c["map"];
    if (!m.is_object() || !m.contains("variant") || !m["variant"].is_string())
      throw InvalidParameter(where + ": map must be an object with a 'variant'");
    MapSpec spec;
    spec.kind = map_kind_from_string(m["variant"].get<std::string>());
    if (m.contains("seed")) spec.seed = detail::unsigned_field(m, "seed", where + ".map");
    if (m.contains("dims")) {
      const Json& d = m["dims"];
      if (detail::is_count(d)) {
        spec.dim_out = d.get<std::size_t>();
      } else if (d.is_array() && d.size() == 2 && detail::is_count(d[0]) && detail::is_count(d[1])) {
        if (d[0].get<std::size_t>() != e.dim) throw InvalidParameter(where + ": map input dimension must equal dim");
        spec.dim_out = d[1].get<std::size_t>();
      } else {
        throw InvalidParameter(where + ": map 'dims' must be an integer or [dim_in, dim_out]");
      }
    }
    p.map = spec;
  }
  if (c.contains("norm")) {
    if (!c["norm"].is_string()) throw InvalidParameter(where + ": 'norm' must be a string");
    p.norm = norm_from_string(c["norm"].get<std::string>());
  }
  if (c.contains("t")) p.t = detail::number_field(c, "t", where);
  if (c.contains("s")) p.s = detail::number_field(c, "s", where);
  if (c.contains("quad_order")) p.quad_order = static_cast<int>(detail::unsigned_field(c, "quad_order", where));
  if (info.needs_f && !p.f) throw InvalidParameter(where + ": requires 'function'");
  if (info.needs_g && !p.g) throw InvalidParameter(where + ": requires 'g'");
  try {
    detail::validate_params(info, p);
    if (p.map) random_map(e.dim, p.map->dim_out.value_or(default_output_dim(p.map->kind, e.dim)), p.map->kind, p.map->seed);
  } catch (const InvalidParameter& err) {
    throw InvalidParameter(where + ": " + err.what());
  }
  return cfg;
}

inline std::vector<CheckConfig> suite_from_json(const Json& j, int default_order = verify_quad_order) {
  if (!j.is_object() || !j.contains("checks") || !j["checks"].is_array())
    throw InvalidParameter("suite config: expected an object with a 'checks' array");
  std::vector<CheckConfig> out;
  for (std::size_t i = 0; i < j["checks"].size(); ++i) out.push_back(check_config_from_json(j["checks"][i], i, default_order));
  return out;
}

inline std::vector<CheckConfig> read_suite(const std::string& path, int default_order = verify_quad_order) {
  const std::string text = detail::read_text(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw InvalidParameter(path + ": " + e.what());
  }
  return suite_from_json(j, default_order);
}

// ---------------------------------------------------------------------------
// Reports

inline Json function_to_json(const MonotoneFunction& f) {
  Json j;
  j["name"] = f.name;
  if (f.name != "uniform") j["param"] = f.param;
  return j;
}

inline Json check_params_to_json(const CheckConfig& c) {
  const EnsembleSpec& e = c.ensemble;
  const CheckParams& p = c.params;
  Json j;
  j["dim"] = e.dim;
  j["alpha_max"] = e.alpha_max;
  j["m"] = e.m;
  j["M"] = e.M;
  j["count"] = e.count;
  j["seed"] = e.seed;
  if (p.f) j["function"] = function_to_json(*p.f);
  if (p.g) j["g"] = function_to_json(*p.g);
  if (p.map) {
    Json m;
    m["variant"] = to_string(p.map->kind);
    if (p.map->dim_out) m["dims"] = Json::array({e.dim, *p.map->dim_out});
    m["seed"] = p.map->seed;
    j["map"] = std::move(m);
  }
  if (p.norm) j["norm"] = p.norm->name();
  if (p.t) j["t"] = *p.t;
  if (p.s) j["s"] = *p.s;
  j["quad_order"] = p.quad_order;
  return j;
}

struct ReportOptions {
  bool timing = false;
};

/// Fixed key order. Non-finite margins (only possible on error) are written as null.
inline Json report_to_json(const std::vector<CheckReport>& reports, const ReportOptions& opt = {}) {
  Json checks = Json::array();
  std::size_t passed = 0, errors = 0;
  for (const CheckReport& r : reports) {
    Json j;
    j["id"] = r.check;
    j["params"] = check_params_to_json({r.check, r.ensemble, r.params});
    j["samples"] = r.samples;
    if (std::isfinite(r.min_margin) && !r.error)
      j["min_margin"] = r.min_margin;
    else
      j["min_margin"] = nullptr;
    j["worst_index"] = r.worst_index;
    j["pass"] = r.pass;
    j["flagged"] = r.flagged;
    if (r.error) j["error"] = *r.error;
    if (opt.timing) j["elapsed_ms"] = r.elapsed_ms;
    passed += r.pass ? 1 : 0;
    errors += r.error ? 1 : 0;
    checks.push_back(std::move(j));
  }
  Json summary;
  summary["checks"] = reports.size();
  summary["passed"] = passed;
  summary["failed"] = reports.size() - passed;
  summary["errors"] = errors;
  summary["all_pass"] = passed == reports.size();
  Json out;
  out["schema"] = "amm-suite-report/1";
  out["checks"] = std::move(checks);
  out["summary"] = std::move(summary);
  return out;
}

inline std::string report_to_string(const std::vector<CheckReport>& reports, const ReportOptions& opt = {}) {
  return report_to_json(reports, opt).dump(2) + "\n";
}

}  // namespace amm
