#pragma once

// Run configuration for the command-line tool. Config files are INI-style:
//
//   [run]       kind, out, workers
//   [curve]     kind = circle | ellipse | fourier; radius; semi_major, semi_minor;
//               x_cos, x_sin, y_cos, y_sin (comma-separated coefficients)
//   [sampling]  density
//   [grid]      n1d, boundary, ns, nu, nu_check
//   [params]    a, beta, betas, beta_range, gamma_plus, variant, n, operator,
//               form, strip, eigenfunction, export_matrix
//
// `#` and `;` start comments. Command-line flags override file values.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deltaloop/curve.hpp"
#include "deltaloop/operator1d.hpp"
#include "deltaloop/strip.hpp"

namespace deltaloop::cli {

// Invalid configuration; `line` is 0 when the problem has no single source line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct IniEntry {
  std::string value;
  int line = 0;
};

using IniSection = std::map<std::string, IniEntry>;
using IniFile = std::map<std::string, IniSection>;

IniFile parse_ini(std::istream& in, const std::string& source);

enum class Kind { geometry, spectrum_1d, transverse, bracket, strip, sweep_thm1, sweep_thm2, count };

const std::vector<std::string>& kind_names();
std::optional<Kind> parse_kind(const std::string& name);
std::string to_string(Kind k);

enum class Variants { plus, minus, both };

struct RunConfig {
  std::string source = "<command line>";
  std::optional<Kind> kind;
  std::filesystem::path out = "out";
  std::size_t workers = 1;

  std::optional<CurveSpec> curve;
  std::size_t density = 2000;

  std::size_t n1d = 1024;
  Boundary boundary = Boundary::periodic;
  StripGrid strip_grid;
  std::size_t nu_check = 2000;

  std::optional<double> a;
  std::vector<double> betas;
  std::optional<double> gamma_plus;
  Variants variants = Variants::both;
  std::size_t n = 5;
  std::string op = "S";  // spectrum-1d: S or U
  StripForm form = StripForm::exact;
  bool strip_in_sweep = false;
  std::size_t eigenfunction = 0;  // strip: export x,y,psi for this index when > 0
  bool export_matrix = false;

  // Line of each key in the file, for diagnostics ("section.key").
  std::map<std::string, int> lines;

  // Kind-specific required keys and ranges; throws ConfigError.
  void validate() const;
};

// Reads every known key; unknown sections or keys are errors.
RunConfig load_config(std::istream& in, const std::string& source, std::size_t default_workers);
RunConfig load_config(const std::filesystem::path& path, std::size_t default_workers);

// "40, 80,160" -> {40, 80, 160}; throws std::invalid_argument.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace deltaloop::cli
