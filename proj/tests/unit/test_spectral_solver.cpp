#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tcsim/spectral_solver.hpp"
#include "tcsim/units.hpp"

using namespace tcsim;

namespace {

Potential cosine(double ej) {
  return [ej](double x) { return ej * (1.0 - std::cos(x)); };
}

}  // namespace

TEST_CASE("transmon levels agree with the charge basis") {
  const double ec = 0.2;
  for (const double ratio : {20.0, 50.0, 500.0}) {
    CAPTURE(ratio);
    const double ej = ratio * ec;
    const auto ref = oracle::transmon_charge_basis(ej, ec, 40, 5);
    const auto s = diagonalize_subsystem(cosine(ej), ec, PhaseGrid::with_points(32), 5);
    for (int k = 0; k < 5; ++k) CHECK(std::abs(s.eigenvalues(k) - ref(k)) < 1e-6);
  }
}

TEST_CASE("grid and level limits") {
  CHECK_THROWS_AS(diagonalize_subsystem(cosine(10), 0.2, PhaseGrid::with_points(16), 5), std::invalid_argument);
  CHECK(PhaseGrid::with_step(units::kPi / 16).points == 32);
  CHECK_THROWS(PhaseGrid::with_step(0.3));
  const auto g = PhaseGrid::with_points(32);
  CHECK(g.phase(0) == doctest::Approx(-units::kPi));
  CHECK(g.phase(16) == doctest::Approx(0.0));
}

TEST_CASE("fourier charges cover one period symmetrically") {
  CHECK(fourier_charge(0, 8) == 0);
  CHECK(fourier_charge(1, 8) == 1);
  CHECK(fourier_charge(4, 8) == 4);
  CHECK(fourier_charge(5, 8) == -3);
  CHECK(fourier_charge(7, 8) == -1);
}

TEST_CASE("charge operator on plane waves") {
  const auto g = PhaseGrid::with_points(16);
  Eigen::MatrixXcd v(16, 3);
  for (int j = 0; j < 16; ++j) {
    const double x = g.phase(j);
    v(j, 0) = std::polar(0.25, 2.0 * x);
    v(j, 1) = std::polar(0.25, -3.0 * x);
    v(j, 2) = std::polar(0.25, 8.0 * x);  // Nyquist
  }
  const auto n = charge_matrix_elements(v, g);
  CHECK(std::abs(n(0, 0) - 2.0) < 1e-12);
  CHECK(std::abs(n(1, 1) + 3.0) < 1e-12);
  CHECK(std::abs(n(2, 2)) < 1e-12);
  CHECK(std::abs(n(0, 1)) < 1e-12);
}

TEST_CASE("real eigenvectors have imaginary antisymmetric charge elements and alternating parity") {
  const auto s = diagonalize_subsystem(cosine(10.0), 0.2, PhaseGrid::with_points(32), 5);
  const Eigen::MatrixXcd& n = s.charge_elements;
  CHECK(n.real().cwiseAbs().maxCoeff() < 1e-12);
  CHECK((n + n.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  for (int k = 0; k < 5; ++k) CHECK(s.parity[k] == (k % 2 == 0 ? 1 : -1));
  // Transmon selection rule: n only connects levels of opposite parity.
  CHECK(std::abs(n(0, 2)) < 1e-12);
  CHECK(std::abs(n(0, 1)) > 0.1);
  CHECK(s.eigenvalues(0) == 0.0);
}

TEST_CASE("sign convention makes the leading large component positive") {
  Eigen::MatrixXd v(3, 2);
  v << -0.1, 0.5, -0.9, -0.5, 0.3, 0.1;
  fix_sign_convention(v);
  CHECK(v(1, 0) > 0);
  CHECK(v(0, 1) > 0);
  CHECK(v(1, 1) < 0);
}

TEST_CASE("harmonic limit") {
  // Small phase spread: levels approach sqrt(8 E_J E_C) - E_C (k^2 + k) / 2 spacing.
  const double ec = 0.1, ej = 100.0;
  const auto s = diagonalize_subsystem(cosine(ej), ec, PhaseGrid::with_points(64), 3);
  const double wp = std::sqrt(8.0 * ej * ec);
  CHECK(s.eigenvalues(1) == doctest::Approx(wp - ec).epsilon(2e-3));
  CHECK(s.eigenvalues(2) - 2 * s.eigenvalues(1) == doctest::Approx(-ec).epsilon(0.05));
}
