#include "ofspline/reports.hpp"

#include "ofspline/error.hpp"
#include "ofspline/presets.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace ofspline {

Command parse_command(const std::string& name) {
  if (name == "spectrum") return Command::Spectrum;
  if (name == "spectrum2d") return Command::Spectrum2D;
  if (name == "poisson1d") return Command::Poisson1D;
  if (name == "poisson2d") return Command::Poisson2D;
  if (name == "convergence") return Command::Convergence;
  if (name == "basis-dump") return Command::BasisDump;
  throw ConfigError("unknown subcommand '" + name + "'");
}

SpaceKind parse_space_kind(const std::string& name) {
  if (name == "full") return SpaceKind::Full;
  if (name == "optimal") return SpaceKind::Optimal;
  if (name == "reduced") return SpaceKind::ReducedUniform;
  throw ConfigError("unknown space '" + name + "' (expected full, optimal or reduced)");
}

BoundaryType parse_boundary(const std::string& name) {
  if (name == "dirichlet") return BoundaryType::Dirichlet;
  if (name == "neumann") return BoundaryType::Neumann;
  if (name == "mixed") return BoundaryType::Mixed;
  throw ConfigError("unknown boundary type '" + name + "' (expected dirichlet, neumann or mixed)");
}

namespace {

constexpr int kMaxDegree = 20;

bool is_two_d_preset(const std::string& name) { return name == "ex75"; }

bool poisson_is_2d(const StudyConfig& c) {
  return c.command == Command::Poisson2D || (c.command == Command::Convergence && is_two_d_preset(c.preset));
}

void require_single(const std::vector<int>& v, const char* what) {
  if (v.size() != 1) throw ConfigError(std::string("this subcommand takes a single ") + what);
}

std::optional<double> order_between(double h0, double h1, double e0, double e1) {
  if (!(e0 > 0.0) || !(e1 > 0.0) || h0 == h1) return std::nullopt;
  return std::log(e0 / e1) / std::log(h0 / h1);
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

void validate(const StudyConfig& c) {
  if (c.degrees.empty()) throw ConfigError("no degree given");
  for (const int p : c.degrees) {
    if (p < 1 || p > kMaxDegree) throw ConfigError(fmt::format("degree {} outside [1, {}]", p, kMaxDegree));
  }
  if (c.command != Command::BasisDump || !c.elements) {
    if (c.dims.empty()) throw ConfigError("no dimension given");
    for (const int n : c.dims) {
      if (n < 1) throw ConfigError(fmt::format("dimension {} must be positive", n));
    }
  }
  switch (c.command) {
    case Command::Spectrum:
    case Command::Spectrum2D:
      require_single(c.degrees, "degree");
      require_single(c.dims, "dimension");
      if (c.correct) throw ConfigError("--correct applies to Poisson studies only");
      (void)make_space(c.kind, c.degrees[0], c.dims[0], c.bc);
      return;
    case Command::BasisDump: {
      require_single(c.degrees, "degree");
      if (c.kind == SpaceKind::Full) throw ConfigError("basis-dump needs an optimal or reduced space");
      if (c.elements) {
        if (c.bc != BoundaryType::Dirichlet) throw ConfigError("--elements is available for Dirichlet spaces only");
        (void)make_space_from_elements(c.kind, c.degrees[0], *c.elements);
      } else {
        require_single(c.dims, "dimension");
        (void)make_space(c.kind, c.degrees[0], c.dims[0], c.bc);
      }
      return;
    }
    case Command::Poisson1D:
    case Command::Poisson2D:
    case Command::Convergence: {
      if (c.bc != BoundaryType::Dirichlet) throw ConfigError("Poisson studies support Dirichlet conditions only");
      const bool two_d = poisson_is_2d(c);
      const auto names = two_d ? preset_names_2d() : preset_names_1d();
      if (std::find(names.begin(), names.end(), c.preset) == names.end()) {
        throw ConfigError(fmt::format("preset '{}' is not available in {}D", c.preset, two_d ? 2 : 1));
      }
      if (c.preset == "custom" && c.wavenumber < 1) throw ConfigError("wavenumber must be a positive integer");
      for (const int p : c.degrees) {
        for (const int n : c.dims) {
          const auto spec = make_space(c.kind, p, n, c.bc);
          if (c.correct && spec.n_el <= p + 1) {
            throw ConfigError(fmt::format("correction needs more than p + 1 elements (p = {}, n = {})", p, n));
          }
        }
      }
      return;
    }
  }
}

void write_csv(std::ostream& os, const CsvReport& report) {
  for (std::size_t i = 0; i < report.header.size(); ++i) os << (i ? "," : "") << report.header[i];
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (row[i]) os << format_number(*row[i]);
    }
    os << '\n';
  }
}

std::string to_csv(const CsvReport& report) {
  std::ostringstream os;
  write_csv(os, report);
  return os.str();
}

CsvReport read_csv(std::istream& is) {
  CsvReport report;
  std::string line;
  const auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = s.find(',', start);
      cells.push_back(s.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return cells;
  };
  if (!std::getline(is, line)) throw ConfigError("read_csv: empty input");
  report.header = split(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::optional<double>> row;
    for (const auto& cell : split(line)) {
      if (cell.empty()) {
        row.emplace_back();
        continue;
      }
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) throw ConfigError("read_csv: bad number '" + cell + "'");
      row.emplace_back(v);
    }
    if (row.size() != report.header.size()) throw ConfigError("read_csv: row length does not match the header");
    report.rows.push_back(std::move(row));
  }
  return report;
}

StudyResult run_spectrum_study(const StudyConfig& config) {
  validate(config);
  const auto spec = make_space(config.kind, config.degrees[0], config.dims[0], config.bc);
  const auto spectrum = spectrum_1d(spec);
  const auto report = mode_errors(spec, spectrum);
  StudyResult out;
  out.report.header = {"l", "omega_exact", "omega_h", "rel_err_freq", "rel_err_eigfun", "bound"};
  double max_err = 0.0;
  for (const auto& m : report.modes) {
    out.report.rows.push_back({m.l1, m.omega_exact, m.omega_h, m.rel_err_freq, m.rel_err_eigfun, m.bound});
    if (m.omega_exact > 0.0) max_err = std::max(max_err, m.rel_err_freq);
  }
  out.summary.push_back(fmt::format("space: {} p={} n={} bc={} elements={}", to_string(spec.kind), spec.p, spec.n,
                                    to_string(spec.bc), spec.n_el));
  out.summary.push_back(spec.n > 2 * spec.p ? fmt::format("outliers: {}", outlier_count(report))
                                            : std::string("outliers: n/a (needs n > 2p)"));
  out.summary.push_back("max_rel_err_freq: " + format_number(max_err));
  return out;
}

StudyResult run_spectrum2d_study(const StudyConfig& config) {
  validate(config);
  const auto spec = make_space(config.kind, config.degrees[0], config.dims[0], config.bc);
  const auto spectrum = spectrum_2d(spec, spec);
  const auto report = mode_errors_2d(spec, spec, spectrum);
  StudyResult out;
  out.report.header = {"l1", "l2", "omega_exact", "omega_h", "rel_err_freq", "rel_err_eigfun", "bound"};
  double max_err = 0.0;
  for (const auto& m : report.modes) {
    out.report.rows.push_back({m.l1, m.l2, m.omega_exact, m.omega_h, m.rel_err_freq, m.rel_err_eigfun, m.bound});
    if (m.omega_exact > 0.0) max_err = std::max(max_err, m.rel_err_freq);
  }
  out.summary.push_back(fmt::format("space: {} p={} n={}x{} bc={}", to_string(spec.kind), spec.p, spec.n, spec.n,
                                    to_string(spec.bc)));
  out.summary.push_back(spec.n > 2 * spec.p ? fmt::format("outliers: {}", outlier_count(report))
                                            : std::string("outliers: n/a (needs n > 2p)"));
  out.summary.push_back("max_rel_err_freq: " + format_number(max_err));
  return out;
}

namespace {

StudyResult run_poisson_study(const StudyConfig& config, bool two_d) {
  validate(config);
  StudyResult out;
  out.report.header = {"p", "n", "h", "err_l2", "err_h1", "order_l2", "order_h1"};
  std::optional<ManufacturedProblem1D> prob1;
  std::optional<ManufacturedProblem2D> prob2;
  if (two_d) {
    prob2 = preset_2d(config.preset, config.wavenumber);
    spot_check(*prob2, config.seed);
  } else {
    prob1 = preset_1d(config.preset, config.wavenumber);
    spot_check(*prob1, config.seed);
  }
  for (const int p : config.degrees) {
    std::vector<double> hs;
    std::vector<double> l2;
    std::vector<double> h1;
    for (const int n : config.dims) {
      const auto spec = make_space(config.kind, p, n, config.bc);
      ErrorNorms err;
      if (two_d) {
        err = solve_poisson_2d(spec, spec, *prob2, config.correct).error.value();
      } else {
        err = solve_poisson_1d(spec, *prob1, config.correct).error.value();
      }
      std::optional<double> o2;
      std::optional<double> o1;
      if (!hs.empty()) {
        o2 = order_between(hs.back(), spec.h, l2.back(), err.l2);
        o1 = order_between(hs.back(), spec.h, h1.back(), err.h1);
      }
      out.report.rows.push_back({p, n, spec.h, err.l2, err.h1, o2, o1});
      hs.push_back(spec.h);
      l2.push_back(err.l2);
      h1.push_back(err.h1);
    }
    if (hs.size() >= 2) {
      const auto& last = out.report.rows.back();
      out.summary.push_back(fmt::format("p={} final order_l2: {} order_h1: {} fitted_l2: {} fitted_h1: {}", p,
                                        last[5] ? format_number(*last[5]) : "n/a",
                                        last[6] ? format_number(*last[6]) : "n/a",
                                        format_number(fitted_order(hs, l2)), format_number(fitted_order(hs, h1))));
    }
  }
  return out;
}

}  // namespace

StudyResult run_poisson1d_study(const StudyConfig& config) { return run_poisson_study(config, false); }
StudyResult run_poisson2d_study(const StudyConfig& config) { return run_poisson_study(config, true); }

StudyResult run_convergence_study(const StudyConfig& config) {
  return run_poisson_study(config, is_two_d_preset(config.preset));
}

BasisDump basis_dump(const StudyConfig& config) {
  validate(config);
  const int p = config.degrees[0];
  const auto spec = config.elements ? make_space_from_elements(config.kind, p, *config.elements)
                                    : make_space(config.kind, p, config.dims[0], config.bc);
  BasisDump dump;
  const auto& e = spec.extraction;
  dump.extraction.header.push_back("row");
  for (int c = 0; c < e.cols(); ++c) dump.extraction.header.push_back(fmt::format("c{}", c));
  for (int r = 0; r < e.rows(); ++r) {
    std::vector<std::optional<double>> row{static_cast<double>(r + 1)};
    for (int c = 0; c < e.cols(); ++c) row.emplace_back(e(r, c));
    dump.extraction.rows.push_back(std::move(row));
  }
  dump.samples.header = {"x", "order"};
  for (int k = 1; k <= spec.n; ++k) dump.samples.header.push_back(fmt::format("b{}", k));
  for (int order = 0; order <= p; order += 2) {
    for (int i = 0; i <= 200; ++i) {
      const double x = i / 200.0;
      const auto vals = eval_reduced_basis(spec, x, order);
      std::vector<std::optional<double>> row{x, static_cast<double>(order)};
      for (int k = 0; k < spec.n; ++k) row.emplace_back(vals(order, k));
      dump.samples.rows.push_back(std::move(row));
    }
  }
  return dump;
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2) throw ConfigError("fitted_order: need at least two samples");
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    sx += std::log(h[i]);
    sy += std::log(err[i]);
  }
  const double mx = sx / static_cast<double>(h.size());
  const double my = sy / static_cast<double>(h.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(err[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::string spectrum_plot_script(const std::string& csv_path, bool two_d) {
  const int off = two_d ? 1 : 0;
  const std::string x = two_d ? "0" : "1";
  return fmt::format(
      "set datafile separator ','\n"
      "set key autotitle columnhead\n"
      "set logscale y\n"
      "set format y '10^{{%L}}'\n"
      "set xlabel '{}'\n"
      "set ylabel 'relative error'\n"
      "plot '{}' using {}:{} with points title 'frequency', \\\n"
      "     '' using {}:{} with points title 'eigenfunction (L2)', \\\n"
      "     '' using {}:{} with lines title 'bound'\n",
      two_d ? "mode (ascending exact frequency)" : "l", csv_path, x, 4 + off, x, 5 + off, x, 6 + off);
}

std::string convergence_plot_script(const std::string& csv_path, const std::vector<int>& degrees) {
  std::string s =
      "set datafile separator ','\n"
      "set key autotitle columnhead\n"
      "set logscale xy\n"
      "set xlabel 'n'\n"
      "set ylabel 'error'\n"
      "plot ";
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const int p = degrees[i];
    if (i) s += ", \\\n     ";
    s += fmt::format("'{0}' using 2:($1=={1} ? $4 : 1/0) with linespoints title 'L2, p={1}', \\\n"
                     "     '{0}' using 2:($1=={1} ? $5 : 1/0) with linespoints title 'H1, p={1}'",
                     csv_path, p);
  }
  return s + "\n";
}

}  // namespace ofspline
