#pragma once

#include <map>
#include <string>
#include <vector>

#include "vvc/field.hpp"

#include <json.hpp>

namespace vvc {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct FieldSpec {
  FieldKind kind = FieldKind::closed_form_example;
  double M = 1.0, a = 2.0, L = 2.0;
  Sign sign = Sign::minus;
  std::vector<double> grid, f_values;

  VectorField build() const;
  nlohmann::json to_json() const;
  static FieldSpec from_json(const nlohmann::json& j);
};

struct RunConfig {
  FieldSpec field;
  std::vector<double> eps;
  double T = -1.0;           // negative: command picks its default
  std::string out_dir = "out";
  std::string preset;
  // spectrum
  std::size_t k_max = 48;
  double lambda_max = 0.0;   // 0: 4 * max V
  std::size_t n_grid = 0;    // 0: resolution rule
  bool do_weyl = true;
  bool do_gap = true;
  bool do_localization = true;
  std::vector<std::size_t> k_set{0, 3, 10};
  std::vector<std::size_t> dump_eigenfunctions;
  // control
  std::size_t N_trunc = 12;
  double m_fraction = -1.0;  // negative: optimizer choice
  double T_factor = 1.2;     // T = T_factor * T16 when T unset
  // cost scan
  std::size_t K_modes = 16;
  double B_max = -1.0;
  unsigned seed = 20240501;

  nlohmann::json to_json() const;
};

// Throws ConfigError with line/column on malformed input.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);
RunConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

// CSV with %.17g formatting; columns must share a length.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

void write_text(const std::string& path, const std::string& text);

// Run manifest shared by all commands: field, interval convention, grids,
// tolerances.  Deterministic (no timestamps).
nlohmann::json base_manifest(const RunConfig& cfg);

std::string format_double(double v);

}  // namespace vvc
