#include "oracles.hpp"

#include "ofspline/error.hpp"
#include "ofspline/spectrum.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ofspline;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("small generalized eigenproblems") {
  Eigen::MatrixXd s(1, 1);
  s << 2.0;
  CHECK(generalized_eigen_sym(s, Eigen::MatrixXd::Identity(1, 1)).values(0) == doctest::Approx(2.0));
  Eigen::MatrixXd t(2, 2);
  t << 2, -1, -1, 2;
  const auto e = generalized_eigen_sym(t, Eigen::MatrixXd::Identity(2, 2));
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(3.0));
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(generalized_eigen_sym(t, indefinite), NumericalError);
}

TEST_CASE("eigensolver agrees with the Jacobi oracle on random pencils") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    const auto s = oracle::random_symmetric(n, rng);
    const auto m = oracle::random_spd(n, rng);
    const auto ours = generalized_eigen_sym(s, m).values;
    const auto ref = oracle::jacobi_generalized(s, m);
    const double scale = ref.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) CHECK(std::abs(ours(i) - ref(i)) <= 1e-11 * scale);
  }
}

TEST_CASE("exact frequencies") {
  CHECK(exact_frequencies(BoundaryType::Dirichlet, 1) == std::vector<double>{kPi});
  CHECK(exact_frequencies(BoundaryType::Neumann, 2) == std::vector<double>{0.0, kPi});
  CHECK(exact_frequencies(BoundaryType::Mixed, 1) == std::vector<double>{kPi / 2});
  CHECK_THROWS_AS(exact_frequencies(BoundaryType::Dirichlet, 0), ConfigError);
}

TEST_CASE("linear elements follow the discrete dispersion relation") {
  for (const int n_el : {4, 9, 32}) {
    const auto s = make_space(SpaceKind::Full, 1, n_el - 1, BoundaryType::Dirichlet);
    const auto sp = spectrum_1d(s);
    const double h = 1.0 / n_el;
    for (int l = 1; l < n_el; ++l) {
      const double c = std::cos(l * kPi * h);
      const double lam = 6.0 / (h * h) * (1.0 - c) / (2.0 + c);
      CHECK(sp.eigenvalues(l - 1) == doctest::Approx(lam).epsilon(1e-10));
    }
  }
}

TEST_CASE("spectrum invariants: residual, M-orthonormality, sign") {
  for (const auto kind : {SpaceKind::Full, SpaceKind::Optimal}) {
    for (const auto bc : {BoundaryType::Dirichlet, BoundaryType::Neumann, BoundaryType::Mixed}) {
      const auto s = make_space(kind, 4, 30, bc);
      const auto sp = spectrum_1d(s);
      const Eigen::MatrixXd st = assemble_stiffness(s).to_dense();
      const Eigen::MatrixXd m = assemble_mass(s).to_dense();
      const double snorm = st.norm();
      for (int l = 0; l < s.n; ++l) {
        const Eigen::VectorXd v = sp.vectors.col(l);
        CHECK((st * v - sp.eigenvalues(l) * m * v).norm() <= 1e-9 * snorm);
      }
      const Eigen::MatrixXd g = sp.vectors.transpose() * m * sp.vectors;
      CHECK((g - Eigen::MatrixXd::Identity(s.n, s.n)).cwiseAbs().maxCoeff() <= 1e-9);
      for (int l = 1; l < s.n; ++l) CHECK(sp.eigenvalues(l) >= sp.eigenvalues(l - 1));
      // aligned with the exact eigenfunction: small L2 errors for low modes
      const auto r = mode_errors(s, sp);
      for (int l = 0; l < 5; ++l) CHECK(r.modes[static_cast<std::size_t>(l)].rel_err_eigfun < 0.05);
    }
  }
}

TEST_CASE("discrete frequencies overestimate") {
  const auto s = make_space(SpaceKind::Optimal, 1, 4, BoundaryType::Dirichlet);
  const auto r = mode_errors(s, spectrum_1d(s));
  CHECK(r.modes.size() == 4);
  for (const auto& m : r.modes) {
    CHECK(m.omega_h >= m.omega_exact);
    CHECK(m.rel_err_freq >= -1e-9);
  }
  for (const auto kind : {SpaceKind::Full, SpaceKind::Optimal}) {
    for (const auto bc : {BoundaryType::Dirichlet, BoundaryType::Neumann, BoundaryType::Mixed}) {
      for (int p = 1; p <= 6; ++p) {
        const auto sp = make_space(kind, p, 40, bc);
        for (const auto& m : mode_errors(sp, spectrum_1d(sp)).modes) {
          if (m.omega_exact > 0.0) CHECK(m.rel_err_freq >= -1e-9);
        }
      }
    }
  }
}

TEST_CASE("Neumann zero mode") {
  for (const auto kind : {SpaceKind::Full, SpaceKind::Optimal}) {
    const auto s = make_space(kind, 3, 20, BoundaryType::Neumann);
    const auto sp = spectrum_1d(s);
    CHECK(sp.frequencies(0) <= 1e-6 * sp.frequencies(1));
    const auto r = mode_errors(s, sp);
    CHECK(r.modes[0].omega_exact == 0.0);
    CHECK(r.modes[0].rel_err_freq == sp.frequencies(0));
    CHECK(r.modes[0].rel_err_eigfun < 1e-10);
  }
}

TEST_CASE("frequency bounds") {
  const double q = std::pow(1.0 / 201.0, 6);
  CHECK(eigval_upper_bound(1, 200, 5, BoundaryType::Dirichlet) == doctest::Approx(q / (1 - q)).epsilon(1e-12));
  CHECK(eigval_upper_bound(1, 200, 5, BoundaryType::Dirichlet) == doctest::Approx(1.5e-14).epsilon(0.05));
  for (const auto bc : {BoundaryType::Dirichlet, BoundaryType::Neumann, BoundaryType::Mixed}) {
    const double b = eigval_upper_bound(50, 50, 3, bc);
    CHECK(std::isfinite(b));
    CHECK(b > 0.0);
  }
  CHECK_THROWS_AS(eigval_upper_bound(51, 50, 3, BoundaryType::Dirichlet), ConfigError);
  CHECK_FALSE(eigval_sharp_bound(48, 50, 2, BoundaryType::Dirichlet).has_value());
  CHECK_FALSE(eigval_sharp_bound(1, 50, 2, BoundaryType::Neumann).has_value());
  const auto sharp = eigval_sharp_bound(2, 50, 8, BoundaryType::Dirichlet);
  REQUIRE(sharp.has_value());
  CHECK(*sharp > 0.0);
  CHECK(*sharp < eigval_upper_bound(2, 50, 8, BoundaryType::Dirichlet) * 10);
}

TEST_CASE("optimal spaces satisfy the frequency bound") {
  for (const auto bc : {BoundaryType::Dirichlet, BoundaryType::Neumann, BoundaryType::Mixed}) {
    for (int p = 1; p <= 4; ++p) {
      const auto s = make_space(SpaceKind::Optimal, p, 30, bc);
      for (const auto& m : mode_errors(s, spectrum_1d(s)).modes) {
        if (m.omega_exact > 0.0) CHECK(m.rel_err_freq <= m.bound + 1e-9);
      }
    }
  }
}

TEST_CASE("Pythagorean eigenvalue error identity") {
  for (const auto bc : {BoundaryType::Dirichlet, BoundaryType::Neumann, BoundaryType::Mixed}) {
    const auto s = make_space(SpaceKind::Optimal, 3, 40, bc);
    const auto sp = spectrum_1d(s);
    const auto r = mode_errors(s, sp);
    for (int l = 2; l <= 38; l += 4) {
      const auto& m = r.modes[static_cast<std::size_t>(l - 1)];
      const double lhs = m.rel_err_deriv * m.rel_err_deriv;
      const double rhs = m.rel_err_eigfun * m.rel_err_eigfun +
                         (sp.eigenvalues(l - 1) - m.omega_exact * m.omega_exact) / (m.omega_exact * m.omega_exact);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
    }
  }
}

TEST_CASE("frequency errors decrease with the degree") {
  double previous = 1.0;
  for (int p = 1; p <= 7; ++p) {
    const auto s = make_space(SpaceKind::Optimal, p, 20, BoundaryType::Dirichlet);
    const double e = mode_errors(s, spectrum_1d(s)).modes[9].rel_err_freq;
    CHECK(e < previous);
    previous = e;
  }
}

TEST_CASE("outlier counting") {
  const auto full1 = make_space(SpaceKind::Full, 1, 40, BoundaryType::Dirichlet);
  CHECK(outlier_count(mode_errors(full1, spectrum_1d(full1))) == 0);
  const auto full5 = make_space(SpaceKind::Full, 5, 25, BoundaryType::Dirichlet);
  CHECK(outlier_count(mode_errors(full5, spectrum_1d(full5))) == 4);
  const auto small = make_space(SpaceKind::Optimal, 5, 10, BoundaryType::Dirichlet);
  CHECK_THROWS_AS(outlier_count(mode_errors(small, spectrum_1d(small))), ConfigError);
}

TEST_CASE("tensor-product spectrum") {
  const auto s1 = make_space(SpaceKind::Optimal, 3, 12, BoundaryType::Dirichlet);
  const auto s2 = make_space(SpaceKind::Full, 2, 9, BoundaryType::Dirichlet);
  const auto sp = spectrum_2d(s1, s2);
  REQUIRE(sp.modes.size() == 12u * 9u);
  CHECK(sp.modes[0].l1 == 1);
  CHECK(sp.modes[0].l2 == 1);
  CHECK(sp.modes[0].omega_sq_exact == doctest::Approx(2 * kPi * kPi));
  for (std::size_t i = 0; i < sp.modes.size(); ++i) {
    const auto& m = sp.modes[i];
    CHECK(m.omega_sq_h == sp.dir1.eigenvalues(m.l1 - 1) + sp.dir2.eigenvalues(m.l2 - 1));
    if (i > 0) CHECK(sp.modes[i - 1].omega_sq_exact <= m.omega_sq_exact);
  }
  const auto r = mode_errors_2d(s1, s2, sp);
  const auto r1 = mode_errors(s1, sp.dir1);
  const auto r2 = mode_errors(s2, sp.dir2);
  for (const auto& m : r.modes) {
    CHECK(m.rel_err_freq >= -1e-9);
    const auto& a = r1.modes[static_cast<std::size_t>(m.l1 - 1)];
    const auto& b = r2.modes[static_cast<std::size_t>(m.l2 - 1)];
    const double wa = a.omega_exact * a.omega_exact;
    const double wb = b.omega_exact * b.omega_exact;
    const double combined = std::sqrt((std::pow(1 + a.rel_err_freq, 2) * wa + std::pow(1 + b.rel_err_freq, 2) * wb) /
                                      (wa + wb));
    CHECK(1 + m.rel_err_freq == doctest::Approx(combined).epsilon(1e-12));
  }
}

TEST_CASE("tensor eigenfunction errors agree with brute-force quadrature") {
  const auto s1 = make_space(SpaceKind::Optimal, 3, 8, BoundaryType::Dirichlet);
  const auto s2 = make_space(SpaceKind::Full, 2, 7, BoundaryType::Mixed);
  const auto sp = spectrum_2d(s1, s2);
  const auto r = mode_errors_2d(s1, s2, sp);
  std::vector<double> x1, w1, x2, w2;
  oracle::brute_quadrature(s1.breaks, 3, x1, w1);
  oracle::brute_quadrature(s2.breaks, 3, x2, w2);
  const double h = 1e-6;
  for (const std::size_t idx : {std::size_t{0}, std::size_t{5}, std::size_t{17}, r.modes.size() - 1}) {
    const auto& m = r.modes[idx];
    // u_h = a_h(x1) b_h(x2), recursion-evaluated
    auto ah = [&](double x) {
      double v = 0.0;
      for (int k = 0; k < s1.n; ++k) v += sp.dir1.vectors(k, m.l1 - 1) * oracle::reduced_basis(s1, k, x);
      return v;
    };
    auto bh = [&](double x) {
      double v = 0.0;
      for (int k = 0; k < s2.n; ++k) v += sp.dir2.vectors(k, m.l2 - 1) * oracle::reduced_basis(s2, k, x);
      return v;
    };
    std::vector<double> av, ad, bv, bd;
    for (const double x : x1) {
      av.push_back(ah(x));
      ad.push_back((ah(x + h) - ah(x - h)) / (2 * h));
    }
    for (const double x : x2) {
      bv.push_back(bh(x));
      bd.push_back((bh(x + h) - bh(x - h)) / (2 * h));
    }
    double e0 = 0.0;
    double e1 = 0.0;
    for (std::size_t i = 0; i < x1.size(); ++i) {
      for (std::size_t j = 0; j < x2.size(); ++j) {
        const double ua = exact_eigenfunction(s1.bc, m.l1, x1[i]);
        const double ub = exact_eigenfunction(s2.bc, m.l2, x2[j]);
        const double d0 = ua * ub - av[i] * bv[j];
        const double dx = exact_eigenfunction_d1(s1.bc, m.l1, x1[i]) * ub - ad[i] * bv[j];
        const double dy = ua * exact_eigenfunction_d1(s2.bc, m.l2, x2[j]) - av[i] * bd[j];
        e0 += w1[i] * w2[j] * d0 * d0;
        e1 += w1[i] * w2[j] * (dx * dx + dy * dy);
      }
    }
    CHECK(m.rel_err_eigfun == doctest::Approx(std::sqrt(e0)).epsilon(1e-6));
    CHECK(m.rel_err_deriv == doctest::Approx(std::sqrt(e1) / m.omega_exact).epsilon(1e-5));
  }
}

TEST_CASE("no outliers in optimal tensor spaces, some in full ones") {
  const auto opt = make_space(SpaceKind::Optimal, 3, 20, BoundaryType::Dirichlet);
  CHECK(outlier_count(mode_errors_2d(opt, opt, spectrum_2d(opt, opt))) == 0);
  const auto full = make_space(SpaceKind::Full, 3, 20, BoundaryType::Dirichlet);
  CHECK(outlier_count(mode_errors_2d(full, full, spectrum_2d(full, full))) > 0);
}
