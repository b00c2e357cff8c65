// Command-line front end for the spectrum, Poisson and basis studies.
//
//   ofspline spectrum --space full --degree 5 --dim 100 --bc dirichlet
//   ofspline convergence --preset ex73 --degree 5 --dims 16,32,64,128 --correct on
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include "ofspline/error.hpp"
#include "ofspline/reports.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <utility>

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ofspline::ConfigError("cannot open '" + path + "' for writing");
  os << text;
}

std::string sibling(const std::string& out, const std::string& suffix) {
  std::filesystem::path p(out);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spline Galerkin spectra and Poisson studies on the unit interval and square"};
  app.require_subcommand(1);

  std::string space = "optimal";
  std::string bc = "dirichlet";
  std::string correct = "off";
  std::string preset = "sin2pi";
  std::string out;
  int degree = 3;
  std::vector<int> degrees;
  int dim = 16;
  std::vector<int> dims;
  int elements = 0;
  int wavenumber = 1;
  std::uint64_t seed = 20240601;
  bool plot = false;

  app.add_option("--space", space, "trial space")->check(CLI::IsMember({"full", "optimal", "reduced"}));
  auto* deg_opt = app.add_option("--degree", degree, "spline degree");
  app.add_option("--degrees", degrees, "comma-separated degree list")->delimiter(',')->excludes(deg_opt);
  auto* dim_opt = app.add_option("--dim", dim, "space dimension per direction");
  auto* dims_opt = app.add_option("--dims", dims, "comma-separated dimension list")->delimiter(',')->excludes(dim_opt);
  app.add_option("--elements", elements, "basis-dump: number of elements (Dirichlet)")
      ->excludes(dim_opt)
      ->excludes(dims_opt);
  app.add_option("--bc", bc, "boundary conditions")->check(CLI::IsMember({"dirichlet", "neumann", "mixed"}));
  app.add_option("--correct", correct, "boundary data correction")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--preset", preset, "manufactured problem: sin2pi, ex73, ex75, custom");
  app.add_option("--wavenumber", wavenumber, "custom preset: u = sin(K pi x)");
  app.add_option("--seed", seed, "seed for the preset spot checks");
  app.add_option("--out", out, "CSV output path (default: stdout)");
  app.add_flag("--plot", plot, "also write a gnuplot script next to --out");

  const std::pair<const char*, const char*> subcommands[] = {
      {"spectrum", "discrete frequencies and mode errors on [0, 1]"},
      {"spectrum2d", "tensor-product spectrum on the unit square"},
      {"poisson1d", "Galerkin solve of -u'' = f"},
      {"poisson2d", "Galerkin solve of -laplace(u) = f by fast diagonalization"},
      {"convergence", "error table and orders over --dims for each degree"},
      {"basis-dump", "extraction matrix and sampled basis functions"},
  };
  for (const auto& [name, description] : subcommands) app.add_subcommand(name, description)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    using namespace ofspline;
    StudyConfig config;
    config.command = parse_command(app.get_subcommands().front()->get_name());
    config.kind = parse_space_kind(space);
    config.bc = parse_boundary(bc);
    config.degrees = degrees.empty() ? std::vector<int>{degree} : degrees;
    config.dims = dims.empty() ? std::vector<int>{dim} : dims;
    if (elements > 0) config.elements = elements;
    config.correct = correct == "on";
    config.preset = preset;
    config.wavenumber = wavenumber;
    config.seed = seed;
    if (plot && out.empty()) throw ConfigError("--plot needs --out");

    if (config.command == Command::BasisDump) {
      const auto dump = basis_dump(config);
      if (out.empty()) {
        write_csv(std::cout, dump.extraction);
      } else {
        write_file(out, to_csv(dump.extraction));
        const auto samples = sibling(out, "_samples.csv");
        write_file(samples, to_csv(dump.samples));
        std::cerr << "samples: " << samples << '\n';
      }
      return 0;
    }

    StudyResult result;
    switch (config.command) {
      case Command::Spectrum: result = run_spectrum_study(config); break;
      case Command::Spectrum2D: result = run_spectrum2d_study(config); break;
      case Command::Poisson1D: result = run_poisson1d_study(config); break;
      case Command::Poisson2D: result = run_poisson2d_study(config); break;
      case Command::Convergence: result = run_convergence_study(config); break;
      case Command::BasisDump: break;
    }
    if (out.empty()) {
      write_csv(std::cout, result.report);
    } else {
      write_file(out, to_csv(result.report));
      if (plot) {
        const bool spectrum = config.command == Command::Spectrum || config.command == Command::Spectrum2D;
        const auto script = sibling(out, ".gp");
        write_file(script, spectrum ? spectrum_plot_script(out, config.command == Command::Spectrum2D)
                                    : convergence_plot_script(out, config.degrees));
      }
    }
    auto& log = out.empty() ? std::cerr : std::cout;
    for (const auto& line : result.summary) log << line << '\n';
    return 0;
  } catch (const ofspline::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ofspline::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  }
}
