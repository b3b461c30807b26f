#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "tcsim/clifford.hpp"

using namespace tcsim;

TEST_CASE("24 distinct elements, each a round trip of its word") {
  for (int i = 0; i < kNumCliffords; ++i) {
    CHECK(clifford_index(word_matrix(clifford_word(i))) == i);
    CHECK(clifford_index(clifford_matrix(i)) == i);
    const auto& m = clifford_matrix(i);
    CHECK((m.adjoint() * m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
  for (int i = 0; i < kNumCliffords; ++i)
    for (int j = 0; j < i; ++j) CHECK(clifford_index(clifford_matrix(i)) != clifford_index(clifford_matrix(j)));
}

TEST_CASE("group closure and Pauli normaliser") {
  for (int i = 0; i < kNumCliffords; ++i)
    for (int j = 0; j < kNumCliffords; ++j) CHECK(clifford_index(clifford_matrix(i) * clifford_matrix(j)) >= 0);
  Eigen::Matrix2cd x, z;
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  for (int i = 0; i < kNumCliffords; ++i) {
    const auto& c = clifford_matrix(i);
    for (const auto& p : {x, z}) {
      const Eigen::Matrix2cd q = c * p * c.adjoint();
      // q must be +-X, +-Y or +-Z: traceless with unit-modulus entries pattern
      CHECK(std::abs(q.trace()) < 1e-12);
      CHECK(std::abs(std::abs(q(0, 0)) + std::abs(q(0, 1)) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("every word uses two physical X90 pulses and quarter-turn virtual Z") {
  CHECK(kX90PerClifford == 2);
  for (int i = 0; i < kNumCliffords; ++i)
    for (int q : clifford_word(i).quarter_turns) {
      CHECK(q >= 0);
      CHECK(q < 4);
    }
  Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  CHECK(clifford_index(id) >= 0);
  Eigen::Matrix2cd t = Eigen::Matrix2cd::Identity();
  t(1, 1) = std::polar(1.0, M_PI / 4);
  CHECK(clifford_index(t) == -1);
}

TEST_CASE("uniform sampling") {
  std::mt19937_64 rng(12345);
  const int n = 24 * 10000;
  std::vector<int> counts(kNumCliffords, 0);
  for (int i = 0; i < n; ++i) ++counts[sample_clifford(rng)];
  const double mean = n / 24.0;
  const double sigma = std::sqrt(n * (1.0 / 24) * (23.0 / 24));
  for (int c : counts) CHECK(std::abs(c - mean) < 3 * sigma * 1.5);
  double chi2 = 0;
  for (int c : counts) chi2 += (c - mean) * (c - mean) / mean;
  CHECK(chi2 < 49.7);  // 99.9% quantile for 23 degrees of freedom
}
