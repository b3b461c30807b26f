#include "tcsim/sparse_hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tcsim {

Eigen::MatrixXd CsrMatrix::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, rows);
  for (int r = 0; r < rows; ++r)
    for (int p = row_ptr[r]; p < row_ptr[r + 1]; ++p) m(r, col[p]) += val[p];
  return m;
}

CsrMatrix CsrMatrix::from_dense(const Eigen::MatrixXd& m, double drop) {
  CsrMatrix out;
  out.rows = static_cast<int>(m.rows());
  out.row_ptr.push_back(0);
  for (int r = 0; r < out.rows; ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (std::abs(m(r, c)) > drop || (drop == 0.0 && m(r, c) != 0.0)) {
        out.col.push_back(c);
        out.val.push_back(m(r, c));
      }
    }
    out.row_ptr.push_back(static_cast<int>(out.col.size()));
  }
  return out;
}

std::pair<double, double> CsrMatrix::spectral_bounds() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int r = 0; r < rows; ++r) {
    double d = 0.0, radius = 0.0;
    for (int p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
      if (col[p] == r)
        d += val[p];
      else
        radius += std::abs(val[p]);
    }
    lo = std::min(lo, d - radius);
    hi = std::max(hi, d + radius);
  }
  return {lo, hi};
}

namespace {

constexpr double kPatternDrop = 1e-13;

}  // namespace

FluxHamiltonian::FluxHamiltonian(const CircuitParams& params, const PhaseGrid& grid, int levels, double phi_q1,
                                 double phi_q2)
    : params_(params), grid_(grid), levels_(levels), qubit_flux_{phi_q1, phi_q2, 0.0} {
  charging_ = mode_charging_energies(params);
  for (int i = 0; i < kNumModes; ++i)
    fixed_.push_back(mode_spectrum(params, static_cast<Mode>(i), qubit_flux_, charging_, grid, levels));
  dim_ = 1;
  for (int i = 0; i < kNumModes; ++i) dim_ *= levels;

  const int L = levels;
  std::vector<int> stride(kNumModes);
  stride[kNumModes - 1] = 1;
  for (int i = kNumModes - 2; i >= 0; --i) stride[i] = stride[i + 1] * L;

  // Middle-mode couplings are allowed wherever the zero-flux charge operator
  // can be nonzero: between levels of opposite parity, or everywhere if the
  // parity is undefined.
  const auto& mid0 = fixed_[kMid];
  auto mid_link = [&](int x, int y) {
    if (static_cast<int>(mid0.parity.size()) >= L && mid0.parity[x] != 0 && mid0.parity[y] != 0)
      return mid0.parity[x] != mid0.parity[y];
    return true;
  };

  std::vector<std::vector<std::pair<int, double>>> rows(dim_);
  for (int r = 0; r < dim_; ++r) {
    const Label d = basis_digits(r, kNumModes, L);
    auto& row = rows[r];
    double diag = 0.0;
    for (int i = 0; i < kNumModes; ++i)
      if (i != kMid) diag += fixed_[i].eigenvalues(d[i]);
    row.push_back({r, diag});
    for (int i = 0; i < kNumModes; ++i) {
      for (int j = i + 1; j < kNumModes; ++j) {
        const double g = 8.0 * charging_(i, j);
        const auto& ni = fixed_[i].charge_elements;
        const auto& nj = fixed_[j].charge_elements;
        for (int a = 0; a < L; ++a) {
          for (int b = 0; b < L; ++b) {
            const int c = r + (a - d[i]) * stride[i] + (b - d[j]) * stride[j];
            if (i == kMid || j == kMid) {
              const int other = (i == kMid) ? j : i;
              const int x = d[kMid], y = (i == kMid) ? a : b;
              const int ox = d[other], oy = (i == kMid) ? b : a;
              const auto& no = fixed_[other].charge_elements;
              if (mid_link(x, y) && std::abs(no(ox, oy)) > kPatternDrop) row.push_back({c, 0.0});
              continue;
            }
            const double v = g * (ni(d[i], a).real() * nj(d[j], b).real() - ni(d[i], a).imag() * nj(d[j], b).imag());
            if (std::abs(v) > kPatternDrop) row.push_back({c, v});
          }
        }
      }
    }
  }

  pattern_.rows = dim_;
  pattern_.row_ptr.assign(1, 0);
  for (auto& row : rows) {
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!pattern_.col.empty() && static_cast<int>(pattern_.col.size()) > pattern_.row_ptr.back() &&
          pattern_.col.back() == row[k].first) {
        pattern_.val.back() += row[k].second;
      } else {
        pattern_.col.push_back(row[k].first);
        pattern_.val.push_back(row[k].second);
      }
    }
    pattern_.row_ptr.push_back(static_cast<int>(pattern_.col.size()));
  }

  auto slot = [&](int r, int c) {
    const auto begin = pattern_.col.begin() + pattern_.row_ptr[r];
    const auto end = pattern_.col.begin() + pattern_.row_ptr[r + 1];
    const auto it = std::lower_bound(begin, end, c);
    return (it != end && *it == c) ? static_cast<int>(it - pattern_.col.begin()) : -1;
  };
  diag_slot_.resize(dim_);
  mid_slot_.assign(static_cast<std::size_t>(dim_) * (kNumModes - 1) * L * L, -1);
  for (int r = 0; r < dim_; ++r) {
    diag_slot_[r] = slot(r, r);
    const Label d = basis_digits(r, kNumModes, L);
    int partner = 0;
    for (int j = 0; j < kNumModes; ++j) {
      if (j == kMid) continue;
      for (int a = 0; a < L; ++a)
        for (int b = 0; b < L; ++b) {
          const int c = r + (a - d[kMid]) * stride[kMid] + (b - d[j]) * stride[j];
          mid_slot_[((static_cast<std::size_t>(r) * (kNumModes - 1) + partner) * L + a) * L + b] = slot(r, c);
        }
      ++partner;
    }
  }
}

SubsystemSpectrum FluxHamiltonian::mid_spectrum(double phi_c) const {
  FluxConfig f = qubit_flux_;
  f.phi_c = phi_c;
  return mode_spectrum(params_, Mode::CouplerMid, f, charging_, grid_, levels_);
}

void FluxHamiltonian::fill(const SubsystemSpectrum& mid, CsrMatrix& h) const {
  const int L = levels_;
  if (mid.eigenvalues.size() < L) throw std::invalid_argument("middle-mode spectrum has too few levels");
  if (h.rows != dim_ || h.col.size() != pattern_.col.size()) h = pattern_;
  std::copy(pattern_.val.begin(), pattern_.val.end(), h.val.begin());

  const Eigen::MatrixXd re_m = mid.charge_elements.topLeftCorner(L, L).real();
  const Eigen::MatrixXd im_m = mid.charge_elements.topLeftCorner(L, L).imag();
  for (int r = 0; r < dim_; ++r) {
    const Label d = basis_digits(r, kNumModes, L);
    h.val[diag_slot_[r]] += mid.eigenvalues(d[kMid]);
    int partner = 0;
    for (int j = 0; j < kNumModes; ++j) {
      if (j == kMid) continue;
      const double g = 8.0 * charging_(kMid, j);
      const auto& nj = fixed_[j].charge_elements;
      for (int a = 0; a < L; ++a) {
        for (int b = 0; b < L; ++b) {
          const double v = g * (re_m(d[kMid], a) * nj(d[j], b).real() - im_m(d[kMid], a) * nj(d[j], b).imag());
          const int s = mid_slot_[((static_cast<std::size_t>(r) * (kNumModes - 1) + partner) * L + a) * L + b];
          if (s >= 0) {
            h.val[s] += v;
          } else if (std::abs(v) > 1e-10) {
            throw NumericalError("coupler coupling outside the precomputed sparsity pattern");
          }
        }
      }
      ++partner;
    }
  }
}

CsrMatrix FluxHamiltonian::matrix(const SubsystemSpectrum& mid) const {
  CsrMatrix h = pattern_;
  fill(mid, h);
  return h;
}

Eigen::MatrixXd FluxHamiltonian::dense(const SubsystemSpectrum& mid) const {
  std::vector<const SubsystemSpectrum*> subs;
  for (int i = 0; i < kNumModes; ++i) subs.push_back(i == kMid ? &mid : &fixed_[i]);
  return assemble_full_hamiltonian(subs, Eigen::MatrixXd(charging_), levels_);
}

std::vector<int> FluxHamiltonian::sectors(const SubsystemSpectrum& mid) const {
  std::vector<const SubsystemSpectrum*> subs;
  for (int i = 0; i < kNumModes; ++i) subs.push_back(i == kMid ? &mid : &fixed_[i]);
  return product_parity(subs, levels_);
}

}  // namespace tcsim
