#include <doctest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "tcsim/composite_system.hpp"

using namespace tcsim;

namespace {

SubsystemSpectrum toy_mode(const Eigen::VectorXd& energies, const Eigen::MatrixXd& n_imag) {
  SubsystemSpectrum s;
  s.eigenvalues = energies;
  s.charge_elements = std::complex<double>(0, 1) * n_imag.cast<std::complex<double>>();
  s.parity.assign(energies.size(), 0);
  return s;
}

Eigen::MatrixXd antisymmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  return a - a.transpose();
}

}  // namespace

TEST_CASE("two-mode toy assembly equals the explicit Kronecker construction") {
  std::mt19937_64 rng(3);
  const int L = 3;
  const auto a = toy_mode(Eigen::Vector3d(0, 5.1, 10.0), antisymmetric(L, rng));
  const auto b = toy_mode(Eigen::Vector3d(0, 4.7, 9.2), antisymmetric(L, rng));
  Eigen::Matrix2d ec;
  ec << 0.2, 0.013, 0.013, 0.25;

  const Eigen::MatrixXd h = assemble_full_hamiltonian({&a, &b}, ec, L);

  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(L, L);
  const Eigen::MatrixXcd ea = a.eigenvalues.cast<std::complex<double>>().asDiagonal();
  const Eigen::MatrixXcd eb = b.eigenvalues.cast<std::complex<double>>().asDiagonal();
  const Eigen::MatrixXcd ref = Eigen::kroneckerProduct(ea, id).eval() + Eigen::kroneckerProduct(id, eb).eval() +
                               8.0 * ec(0, 1) *
                                   Eigen::kroneckerProduct(a.charge_elements, b.charge_elements).eval();
  CHECK(ref.imag().cwiseAbs().maxCoeff() < 1e-14);
  CHECK((h - ref.real()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("labels and basis indices") {
  CHECK(label_to_string({1, 0, 0, 1, 0}) == "eg010");
  CHECK(label_to_string({2, 3, 0, 0, 1}) == "fh001");
  CHECK(label_to_string({0, 1, 0}) == "010");
  CHECK(parse_label("gf000") == Label{0, 2, 0, 0, 0});
  CHECK(parse_label("102") == Label{1, 0, 2});
  CHECK_THROWS_AS(parse_label("gx000"), std::invalid_argument);
  CHECK(basis_index({1, 0, 0, 0, 0}, 4) == 256);
  CHECK(basis_index({0, 0, 0, 0, 3}, 4) == 3);
  for (int i : {0, 17, 511, 1023}) CHECK(basis_index(basis_digits(i, 5, 4), 4) == i);
}

TEST_CASE("sector-wise diagonalisation equals the full problem") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  const int n = 40;
  std::vector<int> sector(n);
  for (int i = 0; i < n; ++i) sector[i] = (i * 7) % 3;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (sector[i] == sector[j]) h(i, j) = h(j, i) = g(rng) + (i == j ? 0.3 * i : 0.0);
  const auto full = linalg::eigh(h);
  const auto split = eigh_by_sector(h, 12, sector);
  CHECK((split.values - full.values.head(12)).cwiseAbs().maxCoeff() < 1e-12);
  for (int k = 0; k < 12; ++k) {
    const Eigen::VectorXd v = split.vectors.col(k);
    CHECK((h * v - split.values(k) * v).norm() < 1e-10);
  }
}

TEST_CASE("uncoupled modes: exact labels and no ZZ") {
  const int L = 3;
  Eigen::VectorXd d(243);
  const double f[5] = {5.0, 5.3, 11.0, 7.0, 12.0};
  const double anh[5] = {-0.2, -0.21, -0.05, -0.1, -0.05};
  for (int i = 0; i < 243; ++i) {
    const auto digits = basis_digits(i, 5, L);
    d(i) = 0;
    for (int m = 0; m < 5; ++m) d(i) += f[m] * digits[m] + 0.5 * anh[m] * digits[m] * (digits[m] - 1);
  }
  const auto s = diagonalize_and_label(d.asDiagonal(), 5, L, 30);
  CHECK(zz_strength(s) == doctest::Approx(0.0).scale(1.0));
  CHECK(s.energy({0, 1, 0, 0, 0}) == doctest::Approx(5.3));
  CHECK(s.energy({0, 0, 0, 1, 0}) == doctest::Approx(7.0));
  CHECK_FALSE(s.labeling_warning);
  CHECK_THROWS_WITH_AS(s.energy({0, 0, 2, 2, 2}), doctest::Contains("not among the labeled levels"), NumericalError);
}

TEST_CASE("greedy labeling resolves a permuted near-identity") {
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(4, 4);
  v.col(0).swap(v.col(2));
  const double c = std::cos(0.3), s = std::sin(0.3);
  Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(4, 4);
  rot(0, 0) = c;
  rot(0, 1) = -s;
  rot(1, 0) = s;
  rot(1, 1) = c;
  v = rot * v;
  const auto lab = assign_labels(v);
  CHECK(lab == std::vector<int>{2, 1, 0, 3});
}

TEST_CASE("parity sectors leave the spectrum unchanged") {
  ModelOptions o;
  o.levels = 3;
  o.kept_states = 30;
  const auto p = CircuitParams::experiment();
  FluxConfig f;
  f.phi_c = 0.3;
  const auto spectra = build_mode_spectra(p, f, o.grid, o.levels);
  const auto h = assemble_full_hamiltonian(spectra, o.levels);
  const auto plain = diagonalize_and_label(h, 5, 3, 30);
  const auto fast = composite_spectrum(p, f, o);
  CHECK((plain.eigenvalues - fast.eigenvalues).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(zz_strength(plain) == doctest::Approx(zz_strength(fast)).epsilon(1e-8));
}

TEST_CASE("ZZ is even and periodic in the coupler flux") {
  ModelOptions o;
  o.levels = 4;
  const auto p = CircuitParams::experiment();
  const auto z = zz_curve(p, {0.2, -0.2, 1.2}, o, 2);
  CHECK(z.zeta_mhz[0] == doctest::Approx(z.zeta_mhz[1]).epsilon(1e-8));
  CHECK(z.zeta_mhz[0] == doctest::Approx(z.zeta_mhz[2]).epsilon(1e-8));
  const auto zz_serial = zz_curve(p, {0.2}, o, 1);
  CHECK(zz_serial.zeta_mhz[0] == z.zeta_mhz[0]);
}

TEST_CASE("coupler tunable mode is lowest at half flux") {
  ModelOptions o;
  const auto p = CircuitParams::design();
  const auto c = coupler_spectrum(p, flux_grid(0.0, 0.5, 6), o, 2, 1);
  const auto it = std::find(c.labels.begin(), c.labels.end(), "010");
  REQUIRE(it != c.labels.end());
  const auto col = c.energies.col(it - c.labels.begin());
  for (int i = 1; i < 6; ++i) CHECK(col(i) < col(i - 1));
  CHECK(coupler_tunable_frequency(p, 0.5, o) == doctest::Approx(col(5)).epsilon(1e-9));
}

TEST_CASE("isolated qubit transitions") {
  const auto t = qubit_transitions(CircuitParams::experiment(), Mode::QubitA, {}, PhaseGrid::with_points(32));
  CHECK(t.f01 > 6.0);
  CHECK(t.f01 < 7.0);
  CHECK(t.alpha < -0.1);
  CHECK(t.alpha > -0.2);
  CHECK_THROWS(qubit_transitions(CircuitParams::experiment(), Mode::CouplerMid, {}, PhaseGrid::with_points(32)));
}
