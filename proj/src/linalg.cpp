#include "tcsim/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <string>
#include <vector>

#include "tcsim/circuit_model.hpp"

namespace tcsim::linalg {

namespace {

void check(lapack_int info, const char* routine) {
  if (info != 0) {
    throw NumericalError(std::string(routine) + " failed with info = " + std::to_string(info));
  }
}

SymmetricEigen lapack_eigh(const Eigen::MatrixXd& a) {
  const auto n = static_cast<lapack_int>(a.rows());
  SymmetricEigen out;
  out.vectors = a;
  out.values.resize(n);
  if (n == 0) return out;
  check(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n, out.values.data()), "dsyevd");
  return out;
}

SymmetricEigen lapack_eigh_lowest(const Eigen::MatrixXd& a, int count) {
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXd work = a;
  std::vector<double> w(n);
  SymmetricEigen out;
  out.vectors.resize(n, count);
  std::vector<lapack_int> support(2 * static_cast<size_t>(count));
  lapack_int found = 0;
  check(LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, work.data(), n, 0.0, 0.0, 1, count, 0.0, &found,
                       w.data(), out.vectors.data(), n, support.data()),
        "dsyevr");
  if (found != count) throw NumericalError("dsyevr returned fewer eigenpairs than requested");
  out.values = Eigen::Map<Eigen::VectorXd>(w.data(), count);
  return out;
}

SymmetricEigen eigen_eigh(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

double residual(const Eigen::MatrixXd& a, const SymmetricEigen& e) {
  const auto k = e.values.size();
  const double r = (a * e.vectors - e.vectors * e.values.asDiagonal()).cwiseAbs().maxCoeff();
  const double o = (e.vectors.transpose() * e.vectors - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
  return std::max(r / std::max(1.0, a.cwiseAbs().maxCoeff()), o);
}

// Some optimized LAPACK builds pick CPU-specific kernels that return garbage
// on virtualized hosts. Check once on a matrix large enough to reach the
// blocked code paths.
bool probe_lapack() {
  const int n = 400;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = std::sin(0.37 * (i + 1) * (j + 2)) + (i == j ? i * 0.01 : 0.0);
  try {
    return residual(a, lapack_eigh(a)) < 1e-9 && residual(a, lapack_eigh_lowest(a, 20)) < 1e-9;
  } catch (const NumericalError&) {
    return false;
  }
}

}  // namespace

bool lapack_usable() {
  static const bool ok = [] {
    const bool good = probe_lapack();
    if (!good) {
      std::cerr << "warning: LAPACK eigensolver failed its self-check; falling back to Eigen "
                   "(slow). Setting OPENBLAS_CORETYPE=Haswell usually fixes this.\n";
    }
    return good;
  }();
  return ok;
}

SymmetricEigen eigh(const Eigen::MatrixXd& a) {
  if (a.rows() > 0 && !lapack_usable()) return eigen_eigh(a);
  return lapack_eigh(a);
}

SymmetricEigen eigh_lowest(const Eigen::MatrixXd& a, int count) {
  const auto n = static_cast<lapack_int>(a.rows());
  count = std::clamp(count, 0, static_cast<int>(n));
  SymmetricEigen out;
  if (count == 0) return out;
  if (count == n) return eigh(a);
  if (!lapack_usable()) {
    auto full = eigen_eigh(a);
    return {full.values.head(count), full.vectors.leftCols(count)};
  }
  return lapack_eigh_lowest(a, count);
}

Eigen::VectorXd eigvalsh(const Eigen::MatrixXd& a) {
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXd work = a;
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  if (!lapack_usable()) return eigen_eigh(a).values;
  check(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data()), "dsyevd");
  return w;
}

}  // namespace tcsim::linalg
