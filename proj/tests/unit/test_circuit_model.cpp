#include <doctest.h>

#include <cmath>
#include <random>

#include "tcsim/circuit_model.hpp"
#include "tcsim/units.hpp"

using namespace tcsim;

TEST_CASE("charging energy of one femtofarad") {
  CHECK(units::kChargingEnergyPerInverseFemtofarad == doctest::Approx(19.3701).epsilon(1e-5));
  CHECK(units::kJosephsonEnergyPerMicroampere == doctest::Approx(496.7).epsilon(1e-3));
}

TEST_CASE("Maxwell matrix rows sum to the capacitance to ground") {
  const auto p = CircuitParams::design();
  const auto c = build_capacitance_matrix(p);
  CHECK(c.basis == Basis::Node);
  CHECK((c.values - c.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::Matrix<double, 7, 1> ground = c.values.rowwise().sum();
  const double expected[7] = {p.cj1 + p.cj2, p.c2, p.c3, p.c4, p.c5, p.c6, p.cj9 + p.cj10};
  for (int i = 0; i < 7; ++i) CHECK(ground(i) == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("coupler coordinates preserve the kinetic energy") {
  const auto node = build_capacitance_matrix(CircuitParams::experiment());
  const auto mode = transform_to_coupler_modes(node);
  CHECK(mode.basis == Basis::Mode);
  CHECK_THROWS_AS(transform_to_coupler_modes(mode), std::invalid_argument);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 5; ++trial) {
    std::array<double, 7> m{};
    for (auto& x : m) x = g(rng);
    const auto n = mode_to_node_phases(m);
    const auto back = node_to_mode_phases(n);
    Eigen::Map<const Eigen::Matrix<double, 7, 1>> mv(m.data()), nv(n.data());
    CHECK(nv.dot(node.values * nv) == doctest::Approx(mv.dot(mode.values * mv)).epsilon(1e-12));
    for (int i = 0; i < 7; ++i) CHECK(back[i] == doctest::Approx(m[i]));
  }
}

TEST_CASE("isolated capacitor charging energy") {
  Eigen::Matrix<double, 7, 7> c = Eigen::Matrix<double, 7, 7>::Identity() * 80.0;
  const auto ec = inverse_capacitance_couplings({c, Basis::Node});
  CHECK(ec(0, 0) == doctest::Approx(19.3701 / 80.0).epsilon(1e-5));
  CHECK(ec(0, 1) == 0.0);
  Eigen::Matrix<double, 7, 7> singular = c;
  singular.row(3).setZero();
  singular.col(3).setZero();
  CHECK_THROWS_AS(inverse_capacitance_couplings({singular, Basis::Node}), NumericalError);
}

TEST_CASE("mode charging energies are symmetric and dominated by the diagonal") {
  const auto ec = mode_charging_energies(CircuitParams::design());
  CHECK((ec - ec.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  for (int i = 0; i < kNumModes; ++i)
    for (int j = 0; j < kNumModes; ++j)
      if (i != j) CHECK(std::abs(ec(i, j)) < ec(i, i));
  // Qubit islands sit on ~100 fF: E_C of a few hundred MHz.
  CHECK(ec(0, 0) > 0.1);
  CHECK(ec(0, 0) < 0.4);
}

TEST_CASE("SQUID effective energy") {
  CHECK(effective_squid_energy(10, 4, 0.0) == doctest::Approx(14));
  CHECK(effective_squid_energy(10, 4, 0.5) == doctest::Approx(6));
  CHECK(effective_squid_energy(5, 5, 0.25) == doctest::Approx(10 * std::cos(units::kPi / 4)));
  CHECK(effective_squid_energy(10, 4, 0.3) == doctest::Approx(effective_squid_energy(10, 4, -0.3)));
  CHECK(effective_squid_energy(10, 4, 0.3) == doctest::Approx(effective_squid_energy(10, 4, 1.3)));
}

TEST_CASE("reduced qubit potential matches brute-force minimisation") {
  const double series = 28.8, squid = 127.5;
  const auto u = qubit_potential(series, squid);
  for (const double x : {-2.9, -1.0, 0.0, 0.4, 1.7, 3.1}) {
    double best = 1e300;
    const int n = 200000;
    for (int k = 0; k <= n; ++k) {
      const double inner = -units::kPi + units::kTwoPi * k / n;
      best = std::min(best, series * (1 - std::cos(x - inner)) + squid * (1 - std::cos(inner)));
    }
    CAPTURE(x);
    CHECK(u(x) == doctest::Approx(best).epsilon(1e-8));
  }
  CHECK(u(0.7) == doctest::Approx(u(0.7 + units::kTwoPi)));
  CHECK(u(0.7) == doctest::Approx(u(-0.7)));
}

TEST_CASE("mode potential is the full potential minimised over the internal node") {
  const auto p = CircuitParams::experiment();
  const auto u = mode_potential(p, Mode::QubitA, {});
  for (const double x : {0.3, 0.9, 2.5}) {
    auto full = [&](double a) {
      const std::array<double, 7> ph{a, x, 0, 0, 0, 0, 0};
      return potential_energy(ph, {}, p);
    };
    CHECK(u(x) == doctest::Approx(full(golden_section_minimize(full, -0.5, x + 0.5))).epsilon(1e-10));
  }
  const std::array<double, 7> zero{};
  CHECK(potential_energy(zero, {}, p) == 0.0);
}

TEST_CASE("coupler middle mode follows the SQUID flux") {
  const auto p = CircuitParams::design();
  FluxConfig half;
  half.phi_c = 0.5;
  const auto u0 = mode_potential(p, Mode::CouplerMid, {});
  const auto u5 = mode_potential(p, Mode::CouplerMid, half);
  CHECK(u0(units::kPi) == doctest::Approx(2 * (p.ej(5) + p.ej(6))));
  CHECK(u5(units::kPi) == doctest::Approx(2 * std::abs(p.ej(5) - p.ej(6))));
}

TEST_CASE("validation") {
  auto p = CircuitParams::design();
  CHECK_NOTHROW(p.validate());
  CHECK(p.has_symmetric_junctions());
  CHECK_FALSE(CircuitParams::experiment().has_symmetric_junctions());
  p.c23 = -1;
  CHECK_THROWS_AS(p.validate(), InvalidParams);
  p = CircuitParams::design();
  p.ej(4) = 0;
  CHECK_THROWS_AS(build_capacitance_matrix(p), InvalidParams);
  p = CircuitParams::design();
  p.c26 = 0;
  CHECK_NOTHROW(p.validate());
}
