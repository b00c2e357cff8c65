#pragma once

// Manufactured problems selectable by name:
//   sin2pi  u = sin(2 pi x) (1D), sin(2 pi x1) sin(2 pi x2) (2D)
//   ex73    u = 1 - 15x/16 - 1/(x+1)^4 (1D)
//   ex75    u = x1 (1 - cos(2 pi x1)) (1 - e^x2) (1 - e^(1-x2)) (2D)
//   custom  u = sin(K pi x) (1D), sin(K pi x1) sin(K pi x2) (2D), K = wavenumber

#include "ofspline/poisson.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ofspline {

std::vector<std::string> preset_names_1d();
std::vector<std::string> preset_names_2d();

/// Throws ConfigError for unknown names or a non-positive integer wavenumber.
ManufacturedProblem1D preset_1d(std::string_view name, int wavenumber = 1);
ManufacturedProblem2D preset_2d(std::string_view name, int wavenumber = 1);

/// Checks -u'' = f (resp. -Laplace(u) = f) at 20 pseudo-random points, relative
/// tolerance 1e-8. Throws NumericalError on mismatch.
void spot_check(const ManufacturedProblem1D& prob, std::uint64_t seed);
void spot_check(const ManufacturedProblem2D& prob, std::uint64_t seed);

}  // namespace ofspline
