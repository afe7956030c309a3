#include "vvc/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace vvc {

using nlohmann::json;

VectorField FieldSpec::build() const {
  if (kind == FieldKind::closed_form_example) {
    return make_example_field(M, a, sign, L);
  }
  return make_tabulated_field(grid, f_values);
}

json FieldSpec::to_json() const {
  json j;
  if (kind == FieldKind::closed_form_example) {
    j["kind"] = "example5";
    j["M"] = M;
    j["a"] = a;
    j["sign"] = (sign == Sign::plus) ? "+" : "-";
    j["L"] = L;
  } else {
    j["kind"] = "tabulated";
    j["grid"] = grid;
    j["f_values"] = f_values;
  }
  return j;
}

FieldSpec FieldSpec::from_json(const json& j) {
  FieldSpec s;
  const std::string kind = j.value("kind", "example5");
  if (kind == "example5" || kind == "closed_form_example") {
    s.kind = FieldKind::closed_form_example;
    if (!j.contains("M") || !j.contains("a") || !j.contains("L"))
      throw ConfigError("field: example kind requires M, a, L");
    s.M = j.at("M").get<double>();
    s.a = j.at("a").get<double>();
    s.L = j.at("L").get<double>();
    const std::string sg = j.value("sign", "-");
    if (sg == "+")
      s.sign = Sign::plus;
    else if (sg == "-")
      s.sign = Sign::minus;
    else
      throw ConfigError("field: sign must be '+' or '-'");
  } else if (kind == "tabulated") {
    s.kind = FieldKind::tabulated;
    if (!j.contains("grid") || !j.contains("f_values"))
      throw ConfigError("field: tabulated kind requires grid and f_values");
    s.grid = j.at("grid").get<std::vector<double>>();
    s.f_values = j.at("f_values").get<std::vector<double>>();
  } else {
    throw ConfigError("field: unknown kind '" + kind + "'");
  }
  return s;
}

namespace {

RunConfig config_from_json(const json& j) {
  RunConfig c;
  if (j.contains("field")) c.field = FieldSpec::from_json(j.at("field"));
  if (j.contains("eps")) c.eps = j.at("eps").get<std::vector<double>>();
  c.T = j.value("T", -1.0);
  c.out_dir = j.value("out", std::string("out"));
  if (j.contains("spectrum")) {
    const json& s = j.at("spectrum");
    c.k_max = s.value("k_max", c.k_max);
    c.lambda_max = s.value("lambda_max", 0.0);
    c.n_grid = s.value("n", static_cast<std::size_t>(0));
    if (s.contains("k_set")) c.k_set = s.at("k_set").get<std::vector<std::size_t>>();
    if (s.contains("dump_eigenfunctions"))
      c.dump_eigenfunctions = s.at("dump_eigenfunctions").get<std::vector<std::size_t>>();
  }
  if (j.contains("modules")) {
    const json& m = j.at("modules");
    c.do_weyl = m.value("weyl", true);
    c.do_gap = m.value("gap", true);
    c.do_localization = m.value("localization", true);
  }
  if (j.contains("control")) {
    const json& s = j.at("control");
    c.N_trunc = s.value("N_trunc", c.N_trunc);
    c.m_fraction = s.value("m", -1.0);
    c.T_factor = s.value("T_factor", 1.2);
  }
  if (j.contains("cost_scan")) {
    c.K_modes = j.at("cost_scan").value("K_modes", c.K_modes);
  }
  c.B_max = j.value("B_max", -1.0);
  c.seed = j.value("seed", 20240501u);
  return c;
}

}  // namespace

json RunConfig::to_json() const {
  json j;
  j["field"] = field.to_json();
  j["eps"] = eps;
  j["T"] = T;
  j["out"] = out_dir;
  j["spectrum"] = {{"k_max", k_max}, {"lambda_max", lambda_max}, {"n", n_grid},
                   {"k_set", k_set}};
  j["modules"] = {{"weyl", do_weyl}, {"gap", do_gap}, {"localization", do_localization}};
  j["control"] = {{"N_trunc", N_trunc}, {"m", m_fraction}, {"T_factor", T_factor}};
  j["cost_scan"] = {{"K_modes", K_modes}};
  j["B_max"] = B_max;
  j["seed"] = seed;
  if (!preset.empty()) j["preset"] = preset;
  return j;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // recover line/column from the byte offset
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < e.byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  c.eps = {0.08, 0.06, 0.045, 0.034, 0.025};
  if (name == "example5-minus") {
    c.field = FieldSpec{FieldKind::closed_form_example, 1.0, 2.0, 2.0, Sign::minus, {}, {}};
  } else if (name == "example5-plus") {
    c.field = FieldSpec{FieldKind::closed_form_example, 1.0, 2.0, 2.0, Sign::plus, {}, {}};
  } else if (name == "example5-flat") {
    // degenerate a = 0 case; rejected by the assumption checks by design
    c.field = FieldSpec{FieldKind::closed_form_example, 1.0, 0.0, 2.0, Sign::plus, {}, {}};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

std::vector<std::string> preset_names() {
  return {"example5-minus", "example5-plus", "example5-flat"};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (!columns.empty())
    for (const auto& c : columns)
      if (c.size() != columns.front().size())
        throw std::invalid_argument("write_csv: ragged columns");
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "'");
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t cidx = 0; cidx < columns.size(); ++cidx)
      out << (cidx ? "," : "") << format_double(columns[cidx][r]);
    out << "\n";
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_text: cannot open '" + path + "'");
  out << text;
}

json base_manifest(const RunConfig& cfg) {
  json m;
  m["tool"] = "vvc";
  m["version"] = "0.1.0";
  m["field"] = cfg.field.to_json();
  // the example family lives on a symmetric interval internally; outputs use
  // [0,L] with the minimum shifted to L/2
  m["interval_convention"] = "[0,L]; example family centered, shift = L/2";
  m["eps"] = cfg.eps;
  m["T"] = cfg.T;
  m["seed"] = cfg.seed;
  m["tolerances"] = {{"quadrature_abs", 1e-10},
                     {"root_x", 1e-12},
                     {"assumption_grid", 4096},
                     {"critical_point_dV", 1e-10}};
  return m;
}

}  // namespace vvc
