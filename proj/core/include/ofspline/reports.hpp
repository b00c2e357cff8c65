#pragma once

// Parameter studies behind the command-line tool and their CSV output.

#include "ofspline/poisson.hpp"
#include "ofspline/spectrum.hpp"
#include "ofspline/subspace.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ofspline {

enum class Command { Spectrum, Spectrum2D, Poisson1D, Poisson2D, Convergence, BasisDump };

Command parse_command(const std::string& name);
SpaceKind parse_space_kind(const std::string& name);
BoundaryType parse_boundary(const std::string& name);

struct StudyConfig {
  Command command = Command::Spectrum;
  SpaceKind kind = SpaceKind::Optimal;
  std::vector<int> degrees{3};
  std::vector<int> dims{16};
  std::optional<int> elements;  // basis-dump on a given number of elements
  BoundaryType bc = BoundaryType::Dirichlet;
  bool correct = false;
  std::string preset = "sin2pi";
  int wavenumber = 1;
  std::uint64_t seed = 20240601;
};

/// Throws ConfigError when the configuration violates a module precondition.
/// Builds every requested space, so it also catches invalid dimensions.
void validate(const StudyConfig& config);

struct CsvReport {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;  // empty cells are nullopt
};

/// Comma-separated, header row, LF line endings, 17 significant digits.
void write_csv(std::ostream& os, const CsvReport& report);
std::string to_csv(const CsvReport& report);
CsvReport read_csv(std::istream& is);

struct StudyResult {
  CsvReport report;
  std::vector<std::string> summary;  // "key: value" lines
};

/// One row per mode: l, omega_exact, omega_h, rel_err_freq, rel_err_eigfun, bound.
StudyResult run_spectrum_study(const StudyConfig& config);
/// One row per mode (l1, l2, ...), sorted by exact frequency.
StudyResult run_spectrum2d_study(const StudyConfig& config);
/// Rows p, n, h, err_l2, err_h1, order_l2, order_h1 over the degree and dimension lists.
StudyResult run_poisson1d_study(const StudyConfig& config);
StudyResult run_poisson2d_study(const StudyConfig& config);
/// Poisson study in the dimension the preset lives in (2D for ex75).
StudyResult run_convergence_study(const StudyConfig& config);

struct BasisDump {
  CsvReport extraction;  // row, c0, c1, ...
  CsvReport samples;     // x, order, b1, ..., bn at 201 uniform points
};

BasisDump basis_dump(const StudyConfig& config);

/// Least-squares slope of log(err) against log(h).
double fitted_order(const std::vector<double>& h, const std::vector<double>& err);

/// gnuplot script plotting a spectrum CSV (semi-log) or convergence CSV (log-log).
std::string spectrum_plot_script(const std::string& csv_path, bool two_d);
std::string convergence_plot_script(const std::string& csv_path, const std::vector<int>& degrees);

}  // namespace ofspline
