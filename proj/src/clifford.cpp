#include "tcsim/clifford.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "tcsim/units.hpp"

namespace tcsim {

namespace {

using cd = std::complex<double>;

Eigen::Matrix2cd rz(int quarter) {
  const double phi = quarter * units::kPi / 2.0;
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::polar(1.0, -phi / 2.0);
  m(1, 1) = std::polar(1.0, phi / 2.0);
  return m;
}

Eigen::Matrix2cd x90() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  m << cd(s, 0), cd(0, -s), cd(0, -s), cd(s, 0);
  return m;
}

bool equal_up_to_phase(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  // |Tr(a^dagger b)| = 2 for equal unitaries up to phase
  return std::abs(std::abs((a.adjoint() * b).trace()) - 2.0) < 1e-9;
}

struct Table {
  std::vector<CliffordWord> words;
  std::vector<Eigen::Matrix2cd> matrices;
};

const Table& table() {
  static const Table t = [] {
    Table out;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) {
          const CliffordWord w{{a, b, c}};
          const Eigen::Matrix2cd m = word_matrix(w);
          bool seen = false;
          for (const auto& existing : out.matrices) seen = seen || equal_up_to_phase(existing, m);
          if (!seen) {
            out.words.push_back(w);
            out.matrices.push_back(m);
          }
        }
    if (out.words.size() != kNumCliffords) throw std::logic_error("Clifford enumeration is incomplete");
    return out;
  }();
  return t;
}

}  // namespace

Eigen::Matrix2cd word_matrix(const CliffordWord& w) {
  return rz(w.quarter_turns[0]) * x90() * rz(w.quarter_turns[1]) * x90() * rz(w.quarter_turns[2]);
}

const CliffordWord& clifford_word(int index) { return table().words.at(index); }

const Eigen::Matrix2cd& clifford_matrix(int index) { return table().matrices.at(index); }

int clifford_index(const Eigen::Matrix2cd& u) {
  const auto& t = table();
  for (int i = 0; i < kNumCliffords; ++i)
    if (equal_up_to_phase(t.matrices[i], u)) return i;
  return -1;
}

int sample_clifford(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, kNumCliffords - 1);
  return pick(rng);
}

}  // namespace tcsim
