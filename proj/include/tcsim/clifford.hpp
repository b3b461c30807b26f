#pragma once

// Single-qubit Clifford group as words Rz(a) X90 Rz(b) X90 Rz(c) with a, b, c
// multiples of pi/2: two physical X90 pulses, three virtual Z rotations.

#include <array>
#include <random>

#include <Eigen/Dense>

namespace tcsim {

struct CliffordWord {
  std::array<int, 3> quarter_turns{};  // a, b, c in units of pi/2
};

/// Number of group elements.
inline constexpr int kNumCliffords = 24;

/// 2x2 unitary of a word, Rz(a) X90 Rz(b) X90 Rz(c) (rightmost acts first).
Eigen::Matrix2cd word_matrix(const CliffordWord& word);

/// Canonical word of element `index` (the lexicographically first word).
const CliffordWord& clifford_word(int index);
/// Matrix of element `index` (that of its canonical word).
const Eigen::Matrix2cd& clifford_matrix(int index);
/// Index of a unitary equal to a Clifford up to global phase; -1 otherwise.
int clifford_index(const Eigen::Matrix2cd& u);

/// Physical X90 pulses in every canonical word.
inline constexpr int kX90PerClifford = 2;

/// Uniform element index.
int sample_clifford(std::mt19937_64& rng);

}  // namespace tcsim
