#include "tcsim/circuit_model.hpp"

#include <cmath>
#include <string>

#include "tcsim/units.hpp"

namespace tcsim {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidParams(std::string(name) + " must be strictly positive, got " + std::to_string(v));
  }
}

void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw InvalidParams(std::string(name) + " must be non-negative, got " + std::to_string(v));
  }
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

}  // namespace

void CircuitParams::validate() const {
  for (int j = 1; j <= 10; ++j) {
    const std::string name = "EJ" + std::to_string(j);
    require_positive(ej(j), name.c_str());
  }
  require_positive(c2, "C2");
  require_positive(c3, "C3");
  require_positive(c4, "C4");
  require_positive(c5, "C5");
  require_positive(c6, "C6");
  require_positive(cj1, "CJ1");
  require_positive(cj2, "CJ2");
  require_positive(cj3, "CJ3");
  require_positive(cj8, "CJ8");
  require_positive(cj9, "CJ9");
  require_positive(cj10, "CJ10");
  require_positive(c23, "C23");
  require_non_negative(c26, "C26");
  require_positive(c34, "C34");
  require_non_negative(c35, "C35");
  require_positive(c45, "C45");
  require_positive(c56, "C56");
}

bool CircuitParams::has_symmetric_junctions(double rel_tol) const {
  return close(ej(1), ej(10), rel_tol) && close(ej(2), ej(9), rel_tol) && close(ej(3), ej(8), rel_tol) &&
         close(ej(4), ej(7), rel_tol);
}

CircuitParams CircuitParams::design() {
  CircuitParams p;
  p.josephson_energies = {124.2, 43.5, 17.4, 124.2, 79.5, 129.1, 124.2, 17.4, 43.5, 124.2};
  p.c2 = 75.6;
  p.c3 = 47.2;
  p.c4 = 144.0;
  p.c5 = 46.5;
  p.c6 = 75.9;
  p.cj1 = 11.1;
  p.cj2 = 3.9;
  p.cj3 = 1.5;
  p.cj8 = 1.5;
  p.cj9 = 3.9;
  p.cj10 = 11.1;
  p.c23 = 9.0;
  p.c26 = 0.015;
  p.c34 = 13.0;
  p.c35 = 0.005;
  p.c45 = 13.0;
  p.c56 = 9.5;
  return p;
}

CircuitParams CircuitParams::experiment() {
  CircuitParams p = design();
  p.josephson_energies = {104.4, 23.1, 28.8, 159.8, 191.5, 117.0, 159.8, 29.3, 23.5, 106.1};
  return p;
}

CapacitanceMatrix build_capacitance_matrix(const CircuitParams& p) {
  p.validate();
  const double cj12 = p.cj1 + p.cj2;
  const double cj910 = p.cj9 + p.cj10;

  Eigen::Matrix<double, 7, 7> c = Eigen::Matrix<double, 7, 7>::Zero();
  c(0, 0) = cj12 + p.cj3;
  c(1, 1) = p.c2 + p.cj3 + p.c23 + p.c26;
  c(2, 2) = p.c3 + p.c23 + p.c34 + p.c35;
  c(3, 3) = p.c4 + p.c34 + p.c45;
  c(4, 4) = p.c5 + p.c45 + p.c35 + p.c56;
  c(5, 5) = p.c6 + p.c56 + p.c26 + p.cj8;
  c(6, 6) = p.cj8 + cj910;

  auto mutual = [&](int a, int b, double v) {
    c(a - 1, b - 1) = -v;
    c(b - 1, a - 1) = -v;
  };
  mutual(1, 2, p.cj3);
  mutual(2, 3, p.c23);
  mutual(2, 6, p.c26);
  mutual(3, 4, p.c34);
  mutual(3, 5, p.c35);
  mutual(4, 5, p.c45);
  mutual(5, 6, p.c56);
  mutual(6, 7, p.cj8);

  Eigen::LLT<Eigen::Matrix<double, 7, 7>> llt(c);
  if (llt.info() != Eigen::Success) {
    throw InvalidParams("capacitance matrix is not positive definite");
  }
  return {c, Basis::Node};
}

Eigen::Matrix<double, 7, 7> coupler_mode_transform() {
  Eigen::Matrix<double, 7, 7> t = Eigen::Matrix<double, 7, 7>::Zero();
  t(0, 0) = 1;
  t(1, 1) = 1;
  t(2, 2) = 1;  // phi3 = mid + left
  t(2, 3) = 1;
  t(3, 2) = 1;  // phi4 = mid
  t(4, 2) = 1;  // phi5 = mid - right
  t(4, 4) = -1;
  t(5, 5) = 1;
  t(6, 6) = 1;
  return t;
}

CapacitanceMatrix transform_to_coupler_modes(const CapacitanceMatrix& node) {
  if (node.basis != Basis::Node) {
    throw std::invalid_argument("transform_to_coupler_modes expects a node-basis matrix");
  }
  const auto t = coupler_mode_transform();
  return {t.transpose() * node.values * t, Basis::Mode};
}

std::array<double, 7> node_to_mode_phases(std::span<const double, 7> n) {
  return {n[0], n[1], n[3], n[2] - n[3], n[3] - n[4], n[5], n[6]};
}

std::array<double, 7> mode_to_node_phases(std::span<const double, 7> m) {
  Eigen::Map<const Eigen::Matrix<double, 7, 1>> mv(m.data());
  const Eigen::Matrix<double, 7, 1> nv = coupler_mode_transform() * mv;
  std::array<double, 7> out{};
  for (int i = 0; i < 7; ++i) out[i] = nv(i);
  return out;
}

Eigen::Matrix<double, 7, 7> inverse_capacitance_couplings(const CapacitanceMatrix& c) {
  Eigen::FullPivLU<Eigen::Matrix<double, 7, 7>> lu(c.values);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) {
    throw NumericalError("capacitance matrix is singular: degenerate circuit");
  }
  Eigen::Matrix<double, 7, 7> inv = lu.inverse();
  inv = 0.5 * (inv + inv.transpose()).eval();
  return units::kChargingEnergyPerInverseFemtofarad * inv;
}

Eigen::Matrix<double, 5, 5> mode_charging_energies(const CircuitParams& params) {
  const auto ec = inverse_capacitance_couplings(transform_to_coupler_modes(build_capacitance_matrix(params)));
  Eigen::Matrix<double, 5, 5> out;
  for (int i = 0; i < kNumModes; ++i)
    for (int j = 0; j < kNumModes; ++j) out(i, j) = ec(kModeCoordinate[i], kModeCoordinate[j]);
  return out;
}

Eigen::Matrix3d coupler_charging_energies(const CircuitParams& params) {
  const auto mode = transform_to_coupler_modes(build_capacitance_matrix(params));
  // left, mid, right in mode-coordinate indices
  const std::array<int, 3> idx = {3, 2, 4};
  Eigen::Matrix3d block;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) block(i, j) = mode.values(idx[i], idx[j]);
  Eigen::Matrix3d inv = block.inverse();
  return units::kChargingEnergyPerInverseFemtofarad * 0.5 * (inv + inv.transpose());
}

double effective_squid_energy(double ej_a, double ej_b, double phi) {
  const double x = units::kPi * phi;
  const double sum = ej_a + ej_b;
  const double diff = ej_a - ej_b;
  // |(Ea+Eb) cos x sqrt(1 + d^2 tan^2 x)| written without the tan singularity.
  const double c = std::cos(x);
  const double s = std::sin(x);
  return std::sqrt(sum * sum * c * c + diff * diff * s * s);
}

double potential_energy(std::span<const double, 7> ph, const FluxConfig& f, const CircuitParams& p) {
  using units::kTwoPi;
  const double phi1 = ph[0], phi2 = ph[1], mid = ph[2], left = ph[3], right = ph[4], phi6 = ph[5],
               phi7 = ph[6];
  auto term = [](double e, double x) { return e * (1.0 - std::cos(x)); };
  return term(p.ej(1), phi1) + term(p.ej(2), phi1 - kTwoPi * f.phi_q1) + term(p.ej(3), phi2 - phi1) +
         term(p.ej(4), left) + term(p.ej(5), mid) + term(p.ej(6), mid - kTwoPi * f.phi_c) +
         term(p.ej(7), right) + term(p.ej(8), phi6 - phi7) + term(p.ej(9), phi7) +
         term(p.ej(10), phi7 - kTwoPi * f.phi_q2);
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

Potential qubit_potential(double ej_series, double ej_squid) {
  return [ej_series, ej_squid](double phi) {
    // Wrap to [-pi, pi); the stack potential is 2pi-periodic in the island phase.
    const double x = std::remainder(phi, units::kTwoPi);
    auto stack = [&](double inner) {
      return ej_series * (1.0 - std::cos(x - inner)) + ej_squid * (1.0 - std::cos(inner));
    };
    if (x == 0.0) return 0.0;
    const double lo = std::min(0.0, x);
    const double hi = std::max(0.0, x);
    // Coarse bracket first so the golden section starts in the right basin.
    constexpr int kScan = 16;
    int best = 0;
    double best_val = stack(lo);
    for (int k = 1; k <= kScan; ++k) {
      const double v = stack(lo + (hi - lo) * k / kScan);
      if (v < best_val) {
        best_val = v;
        best = k;
      }
    }
    const double step = (hi - lo) / kScan;
    const double a = std::max(lo, lo + (best - 1) * step);
    const double b = std::min(hi, lo + (best + 1) * step);
    return stack(golden_section_minimize(stack, a, b, 1e-10));
  };
}

Potential mode_potential(const CircuitParams& p, Mode mode, const FluxConfig& f) {
  switch (mode) {
    case Mode::QubitA:
      return qubit_potential(p.ej(3), effective_squid_energy(p.ej(1), p.ej(2), f.phi_q1));
    case Mode::QubitB:
      return qubit_potential(p.ej(8), effective_squid_energy(p.ej(10), p.ej(9), f.phi_q2));
    case Mode::CouplerLeft: {
      const double e = p.ej(4);
      return [e](double x) { return e * (1.0 - std::cos(x)); };
    }
    case Mode::CouplerMid: {
      const double e = effective_squid_energy(p.ej(5), p.ej(6), f.phi_c);
      return [e](double x) { return e * (1.0 - std::cos(x)); };
    }
    case Mode::CouplerRight: {
      const double e = p.ej(7);
      return [e](double x) { return e * (1.0 - std::cos(x)); };
    }
  }
  throw std::invalid_argument("unknown mode");
}

}  // namespace tcsim
