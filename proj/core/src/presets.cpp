#include "ofspline/presets.hpp"

#include "ofspline/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace ofspline {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

// d^k/dx^k sin(w x)
double sin_derivative(double w, int k, double x) { return std::pow(w, k) * std::sin(w * x + k * kPi / 2.0); }

ManufacturedProblem1D sine_1d(std::string name, int wavenumber) {
  const double w = wavenumber * kPi;
  ManufacturedProblem1D prob;
  prob.name = std::move(name);
  prob.u = [w](double x) { return std::sin(w * x); };
  prob.du = [w](double x) { return w * std::cos(w * x); };
  prob.u_deriv = [w](int k, double x) { return sin_derivative(w, k, x); };
  prob.f = [w](double x) { return w * w * std::sin(w * x); };
  prob.f_deriv = [w](int k, double x) { return w * w * sin_derivative(w, k, x); };
  return prob;
}

ManufacturedProblem1D rational_1d() {
  ManufacturedProblem1D prob;
  prob.name = "ex73";
  prob.u = [](double x) { return 1.0 - 15.0 / 16.0 * x - std::pow(x + 1.0, -4); };
  prob.du = [](double x) { return -15.0 / 16.0 + 4.0 * std::pow(x + 1.0, -5); };
  prob.u_deriv = [](int k, double x) {
    double v = (k % 2 == 0 ? -1.0 : 1.0) * std::pow(x + 1.0, -4 - k);
    for (int j = 4; j < 4 + k; ++j) v *= j;
    if (k == 0) v += 1.0 - 15.0 / 16.0 * x;
    if (k == 1) v -= 15.0 / 16.0;
    return v;
  };
  prob.f = [](double x) { return 20.0 * std::pow(x + 1.0, -6); };
  prob.f_deriv = [](int k, double x) {
    double v = 20.0 * std::pow(x + 1.0, -6 - k);
    for (int j = 6; j < 6 + k; ++j) v *= -j;
    return v;
  };
  return prob;
}

ManufacturedProblem2D sine_2d(std::string name, int wavenumber) {
  const double w = wavenumber * kPi;
  ManufacturedProblem2D prob;
  prob.name = std::move(name);
  prob.u_deriv = [w](int a1, int a2, double x1, double x2) {
    return sin_derivative(w, a1, x1) * sin_derivative(w, a2, x2);
  };
  prob.f = [w](double x1, double x2) { return 2.0 * w * w * std::sin(w * x1) * std::sin(w * x2); };
  prob.f_deriv = [w](int a1, int a2, double x1, double x2) {
    return 2.0 * w * w * sin_derivative(w, a1, x1) * sin_derivative(w, a2, x2);
  };
  return prob;
}

// g(x) = x (1 - cos(a x)), a = 2 pi
double g_derivative(int k, double x) {
  const double a = 2.0 * kPi;
  double v = -(x * std::pow(a, k) * std::cos(a * x + k * kPi / 2.0));
  if (k > 0) v -= k * std::pow(a, k - 1) * std::cos(a * x + (k - 1) * kPi / 2.0);
  if (k == 0) v += x;
  if (k == 1) v += 1.0;
  return v;
}

// w(x) = (1 - e^x)(1 - e^(1-x))
double w_derivative(int k, double x) {
  double v = -std::exp(x) - (k % 2 == 0 ? 1.0 : -1.0) * std::exp(1.0 - x);
  if (k == 0) v += 1.0 + kE;
  return v;
}

ManufacturedProblem2D product_2d() {
  ManufacturedProblem2D prob;
  prob.name = "ex75";
  prob.u_deriv = [](int a1, int a2, double x1, double x2) { return g_derivative(a1, x1) * w_derivative(a2, x2); };
  prob.f = [](double x1, double x2) {
    const double a = 2.0 * kPi;
    const double g = x1 * (1.0 - std::cos(a * x1));
    const double g2 = 2.0 * a * std::sin(a * x1) + a * a * x1 * std::cos(a * x1);
    const double w = (1.0 - std::exp(x2)) * (1.0 - std::exp(1.0 - x2));
    const double w2 = -std::exp(x2) - std::exp(1.0 - x2);
    return -(g2 * w + g * w2);
  };
  prob.f_deriv = [](int a1, int a2, double x1, double x2) {
    return -(g_derivative(a1 + 2, x1) * w_derivative(a2, x2) + g_derivative(a1, x1) * w_derivative(a2 + 2, x2));
  };
  return prob;
}

void check_wavenumber(int wavenumber) {
  if (wavenumber < 1) throw ConfigError("custom preset: wavenumber must be a positive integer");
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(b)); }

}  // namespace

std::vector<std::string> preset_names_1d() { return {"sin2pi", "ex73", "custom"}; }
std::vector<std::string> preset_names_2d() { return {"sin2pi", "ex75", "custom"}; }

ManufacturedProblem1D preset_1d(std::string_view name, int wavenumber) {
  if (name == "sin2pi") return sine_1d("sin2pi", 2);
  if (name == "ex73") return rational_1d();
  if (name == "custom") {
    check_wavenumber(wavenumber);
    return sine_1d("custom", wavenumber);
  }
  throw ConfigError("unknown 1D preset '" + std::string(name) + "'");
}

ManufacturedProblem2D preset_2d(std::string_view name, int wavenumber) {
  if (name == "sin2pi") return sine_2d("sin2pi", 2);
  if (name == "ex75") return product_2d();
  if (name == "custom") {
    check_wavenumber(wavenumber);
    return sine_2d("custom", wavenumber);
  }
  throw ConfigError("unknown 2D preset '" + std::string(name) + "'");
}

void spot_check(const ManufacturedProblem1D& prob, std::uint64_t seed) {
  if (!prob.u_deriv) return;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double x = dist(rng);
    if (!close(-prob.u_deriv(2, x), prob.f(x))) {
      throw NumericalError("preset '" + prob.name + "': -u'' != f at x = " + std::to_string(x));
    }
    if (prob.u && !close(prob.u_deriv(0, x), prob.u(x))) {
      throw NumericalError("preset '" + prob.name + "': inconsistent u at x = " + std::to_string(x));
    }
  }
}

void spot_check(const ManufacturedProblem2D& prob, std::uint64_t seed) {
  if (!prob.u_deriv) return;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double x1 = dist(rng);
    const double x2 = dist(rng);
    const double lap = prob.u_deriv(2, 0, x1, x2) + prob.u_deriv(0, 2, x1, x2);
    if (!close(-lap, prob.f(x1, x2))) {
      throw NumericalError("preset '" + prob.name + "': -Laplace(u) != f at (" + std::to_string(x1) + ", " +
                           std::to_string(x2) + ")");
    }
  }
}

}  // namespace ofspline
