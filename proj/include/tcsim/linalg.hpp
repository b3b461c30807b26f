#pragma once

// Thin LAPACK wrappers for the dense symmetric eigenproblems that dominate the
// run time. Eigen handles everything small.

#include <Eigen/Dense>

namespace tcsim::linalg {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

/// All eigenpairs of a real symmetric matrix (divide and conquer).
SymmetricEigen eigh(const Eigen::MatrixXd& a);

/// The `count` lowest eigenpairs (MRRR). Only the lower triangle is read.
SymmetricEigen eigh_lowest(const Eigen::MatrixXd& a, int count);

/// True when the LAPACK backend passes a one-time accuracy probe. Otherwise
/// the functions below fall back to Eigen's solver.
bool lapack_usable();

/// Eigenvalues only.
Eigen::VectorXd eigvalsh(const Eigen::MatrixXd& a);

}  // namespace tcsim::linalg
