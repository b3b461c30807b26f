#include "tcsim/pulse_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tcsim/kernels/kernels.hpp"
#include "tcsim/parallel.hpp"
#include "tcsim/units.hpp"

namespace tcsim {

using cd = std::complex<double>;

void FluxPulse::validate() const {
  if (!std::isfinite(amplitude)) throw std::invalid_argument("pulse amplitude must be finite");
  if (!(edge_duration > 0.0)) throw std::invalid_argument("edge duration must be positive");
  if (!(total_duration >= 2.0 * edge_duration))
    throw std::invalid_argument("total duration must be at least twice the edge duration");
}

double hann_edge(double amplitude, double edge, double t) {
  return amplitude * 0.5 * (1.0 - std::cos(units::kPi * t / edge));
}

double FluxPulse::value(double t) const {
  validate();
  if (!(t >= 0.0 && t <= total_duration)) throw std::out_of_range("time outside the pulse");
  if (t < edge_duration) return hann_edge(amplitude, edge_duration, t);
  if (t > total_duration - edge_duration) return hann_edge(amplitude, edge_duration, total_duration - t);
  return amplitude;
}

void ChebyshevPropagator::apply(const CsrMatrix& h, double t, StateBlock& psi) {
  const auto& k = kernels::active();
  const int rows = static_cast<int>(psi.rows());
  const int width = static_cast<int>(psi.cols());
  if (rows != h.rows) throw std::invalid_argument("state and Hamiltonian sizes differ");
  const auto [lo, hi] = h.spectral_bounds();
  const double center = 0.5 * (hi + lo);
  const double radius = std::max(0.5 * (hi - lo), 1e-12);
  const double x = units::kTwoPi * t * radius;
  const std::size_t n = static_cast<std::size_t>(rows) * width;

  t0_ = psi;
  t1_.resize(rows, width);
  t2_.resize(rows, width);
  acc_.setZero(rows, width);
  auto raw = [](StateBlock& m) { return reinterpret_cast<double*>(m.data()); };
  const auto view = h.view();

  k.caxpy(n, std::cyl_bessel_j(0.0, x), 0.0, raw(t0_), raw(acc_));
  k.chebyshev(view, width, 1.0 / radius, -center / radius, 0.0, raw(t0_), nullptr, raw(t1_));
  // 2 (-i)^m J_m(x)
  auto coefficient = [&](int m) {
    const double j = 2.0 * std::cyl_bessel_j(static_cast<double>(m), x);
    switch (m % 4) {
      case 0: return cd(j, 0.0);
      case 1: return cd(0.0, -j);
      case 2: return cd(-j, 0.0);
      default: return cd(0.0, j);
    }
  };
  cd c = coefficient(1);
  k.caxpy(n, c.real(), c.imag(), raw(t1_), raw(acc_));

  int m = 1;
  int small = 0;
  while (small < 2) {
    ++m;
    k.chebyshev(view, width, 2.0 / radius, -2.0 * center / radius, -1.0, raw(t1_), raw(t0_), raw(t2_));
    c = coefficient(m);
    k.caxpy(n, c.real(), c.imag(), raw(t2_), raw(acc_));
    std::swap(t0_, t1_);
    std::swap(t1_, t2_);
    if (m > x && std::abs(c) < 1e-16)
      ++small;
    else
      small = 0;
    if (m > 10000) throw NumericalError("Chebyshev series did not converge");
  }
  last_terms_ = m + 1;
  psi = std::polar(1.0, -units::kTwoPi * t * center) * acc_;
}

Eigen::MatrixXd basis_transfer(const Eigen::MatrixXd& to, const Eigen::MatrixXd& from) {
  const Eigen::MatrixXd o = to.transpose() * from;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(o, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

void rotate_mid_mode(const Eigen::MatrixXd& r, int levels, StateBlock& psi) {
  const int L = levels;
  const int width = static_cast<int>(psi.cols());
  const int outer = static_cast<int>(psi.rows()) / (L * L);
  Eigen::MatrixXcd tmp(L, width);
  for (int o = 0; o < outer; ++o) {
    for (int right = 0; right < L; ++right) {
      for (int m = 0; m < L; ++m) tmp.row(m) = psi.row((o * L + m) * L + right);
      const Eigen::MatrixXcd out = r * tmp;
      for (int m = 0; m < L; ++m) psi.row((o * L + m) * L + right) = out.row(m);
    }
  }
}

namespace {

double wrap_pi(double x) {
  double w = std::remainder(x, units::kTwoPi);
  if (w <= -units::kPi) w += units::kTwoPi;
  return w;
}

void check_norms(const StateBlock& psi, double tol) {
  for (Eigen::Index c = 0; c < psi.cols(); ++c) {
    if (std::abs(psi.col(c).norm() - 1.0) > tol)
      throw NumericalError("norm drift above tolerance; reduce the time step");
  }
}

}  // namespace

double conditional_phase_raw(const Matrix4c& u) {
  return wrap_pi(std::arg(u(3, 3)) - std::arg(u(2, 2)) - std::arg(u(1, 1)) + std::arg(u(0, 0)));
}

GateResult evaluate_block(const Matrix4c& raw, const FluxPulse& pulse) {
  GateResult r;
  r.pulse = pulse;
  r.raw_unitary = raw;
  r.computational_unitary = remove_single_qubit_phases(raw);
  r.theta = conditional_phase_raw(raw);
  r.target_population = target_population(raw);
  r.leakage_error = leakage_error(raw);
  r.fidelity = ptm_fidelity(raw, cz_matrix());
  return r;
}

CzSimulator::CzSimulator(const CircuitParams& params, const DynamicsOptions& options)
    : params_(params), options_(options), ham_(params, options.grid, options.levels) {
  if (!(options.edge_step > 0.0)) throw std::invalid_argument("edge step must be positive");
  const auto& mid0 = ham_.fixed_mode(Mode::CouplerMid);
  dressed_ = diagonalize_and_label(ham_.dense(mid0), kNumModes, options.levels, ham_.dim(), ham_.sectors(mid0));
  comp_.resize(ham_.dim(), 4);
  const Label comp_labels[4] = {{0, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}};
  for (int i = 0; i < 4; ++i) {
    const auto s = dressed_.find(comp_labels[i]);
    if (!s) throw NumericalError("computational state " + label_to_string(comp_labels[i]) + " not found");
    comp_index_(i) = *s;
    comp_.col(i) = dressed_.eigenvectors.col(*s);
  }
}

Eigen::Vector4d CzSimulator::computational_energies() const {
  Eigen::Vector4d e;
  for (int i = 0; i < 4; ++i) e(i) = dressed_.eigenvalues(comp_index_(i));
  return e;
}

void CzSimulator::run_edge(double amplitude, double edge, bool rising, StateBlock& psi, SubsystemSpectrum& mid,
                           ChebyshevPropagator& prop) const {
  const int steps = std::max(1, static_cast<int>(std::lround(edge / options_.edge_step)));
  const double dt = edge / steps;
  CsrMatrix h;
  for (int s = 0; s < steps; ++s) {
    const int k = rising ? s : steps - 1 - s;
    const double flux = hann_edge(amplitude, edge, (k + 0.5) * dt);
    SubsystemSpectrum next = ham_.mid_spectrum(flux);
    rotate_mid_mode(basis_transfer(next.eigenvectors, mid.eigenvectors), options_.levels, psi);
    mid = std::move(next);
    ham_.fill(mid, h);
    prop.apply(h, dt, psi);
  }
  check_norms(psi, options_.norm_tolerance);
  SubsystemSpectrum end = ham_.mid_spectrum(rising ? amplitude : 0.0);
  rotate_mid_mode(basis_transfer(end.eigenvectors, mid.eigenvectors), options_.levels, psi);
  mid = std::move(end);
}

GateFamily CzSimulator::family(double amplitude, double edge) const {
  StateBlock psi = comp_.cast<cd>();
  SubsystemSpectrum mid = ham_.fixed_mode(Mode::CouplerMid);
  ChebyshevPropagator prop;
  run_edge(amplitude, edge, true, psi, mid, prop);
  const auto eig = eigh_by_sector(ham_.dense(mid), ham_.dim(), ham_.sectors(mid));
  Eigen::MatrixXcd coeff = eig.vectors.transpose().cast<cd>() * Eigen::MatrixXcd(psi);
  return GateFamily(amplitude, edge, eig.values, std::move(coeff));
}

GateFamily::GateFamily(double amplitude, double edge, Eigen::VectorXd energies, Eigen::MatrixXcd coefficients)
    : amplitude_(amplitude), edge_(edge), energies_(std::move(energies)), coefficients_(std::move(coefficients)) {}

Matrix4c GateFamily::block(double plateau) const {
  if (!(plateau >= 0.0)) throw std::invalid_argument("plateau time must be non-negative");
  Eigen::VectorXcd ph(energies_.size());
  for (Eigen::Index k = 0; k < energies_.size(); ++k) ph(k) = std::polar(1.0, -units::kTwoPi * energies_(k) * plateau);
  return coefficients_.transpose() * ph.asDiagonal() * coefficients_;
}

GateResult GateFamily::evaluate(double plateau) const {
  return evaluate_block(block(plateau), FluxPulse{amplitude_, plateau + 2.0 * edge_, edge_});
}

double calibrate_gate_duration(const GateFamily& family, const CalibrationOptions& opt) {
  if (opt.solution < 1) throw std::invalid_argument("solution index starts at 1");
  const double span = opt.max_duration - 2.0 * family.edge();
  if (!(span > 0.0)) throw NumericalError("duration cap is shorter than the two edges");
  const int samples = static_cast<int>(std::ceil(span / opt.phase_step));
  const double step = span / samples;
  auto theta = [&](double tp) { return conditional_phase_raw(family.block(tp)); };

  double t_prev = 0.0;
  double raw_prev = theta(0.0);
  double unwrapped_prev = raw_prev;
  int found = 0;
  for (int s = 1; s <= samples; ++s) {
    const double t = s * step;
    const double raw = theta(t);
    const double unwrapped = unwrapped_prev + wrap_pi(raw - raw_prev);
    // crossings of odd multiples of pi between the two samples
    const double a = (unwrapped_prev - units::kPi) / units::kTwoPi;
    const double b = (unwrapped - units::kPi) / units::kTwoPi;
    const int lo_n = static_cast<int>(std::floor(std::min(a, b)));
    const int hi_n = static_cast<int>(std::floor(std::max(a, b)));
    std::vector<int> crossings;
    for (int q = lo_n + 1; q <= hi_n; ++q) crossings.push_back(q);
    if (b < a) std::reverse(crossings.begin(), crossings.end());
    for (int q : crossings) {
      if (++found < opt.solution) continue;
      const double target = units::kPi + units::kTwoPi * q;
      double lo = t_prev, hi = t;
      const double base_raw = raw_prev, base = unwrapped_prev;
      auto f = [&](double tp) { return base + wrap_pi(theta(tp) - base_raw) - target; };
      const double f_lo = f(lo);
      while (hi - lo > opt.tolerance) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (f_lo < 0))
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi) + 2.0 * family.edge();
    }
    t_prev = t;
    raw_prev = raw;
    unwrapped_prev = unwrapped;
  }
  throw NumericalError("no theta = pi solution below " + std::to_string(opt.max_duration) + " ns");
}

GateResult CzSimulator::propagate(const FluxPulse& pulse, bool record, const std::vector<std::string>& tracked) const {
  pulse.validate();
  const int L = options_.levels;
  StateBlock psi = comp_.cast<cd>();
  const auto& mid0 = ham_.fixed_mode(Mode::CouplerMid);
  SubsystemSpectrum mid = mid0;
  ChebyshevPropagator prop;
  CsrMatrix h;

  Trajectories tr;
  std::vector<int> tracked_index;
  if (record) {
    for (const auto& name : tracked) {
      const auto s = dressed_.find(parse_label(name));
      if (!s) throw std::invalid_argument("level " + name + " is not a dressed level");
      tracked_index.push_back(*s);
      tr.labels.push_back(name);
    }
    tr.populations.assign(4, Eigen::MatrixXd());
    tr.peak_population = Eigen::VectorXd::Zero(dressed_.eigenvalues.size());
  }
  std::vector<std::vector<double>> rows(4);
  double unwrapped = 0.0, last_raw = 0.0;
  bool first_sample = true;

  auto sample = [&](double t) {
    StateBlock back = psi;
    if (options_.readout == ReadoutFrame::ZeroFlux)
      rotate_mid_mode(basis_transfer(mid0.eigenvectors, mid.eigenvectors), L, back);
    const Eigen::MatrixXcd amp = dressed_.eigenvectors.transpose().cast<cd>() * Eigen::MatrixXcd(back);
    Matrix4c u;
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) u(j, i) = amp(comp_index_(j), i);
    const double raw = conditional_phase_raw(u);
    unwrapped = first_sample ? raw : unwrapped + wrap_pi(raw - last_raw);
    last_raw = raw;
    first_sample = false;
    tr.time.push_back(t);
    tr.theta.push_back(unwrapped);
    tr.target_population.push_back(target_population(u));
    tr.leakage_error.push_back(leakage_error(u));
    double drift = 0.0;
    for (int i = 0; i < 4; ++i) drift = std::max(drift, std::abs(psi.col(i).norm() - 1.0));
    tr.max_norm_drift.push_back(drift);
    const Eigen::MatrixXd pop = amp.cwiseAbs2();
    for (int i = 0; i < 4; ++i) {
      for (int idx : tracked_index) rows[i].push_back(pop(idx, i));
      tr.peak_population = tr.peak_population.cwiseMax(pop.col(i));
    }
  };

  const double edge = pulse.edge_duration;
  const int steps = std::max(1, static_cast<int>(std::lround(edge / options_.edge_step)));
  const double dt = edge / steps;
  const int every = std::max(1, static_cast<int>(std::lround(options_.sample_interval / dt)));

  auto edge_pass = [&](bool rising, double t0) {
    for (int s = 0; s < steps; ++s) {
      const int k = rising ? s : steps - 1 - s;
      const double flux = hann_edge(pulse.amplitude, edge, (k + 0.5) * dt);
      SubsystemSpectrum next = ham_.mid_spectrum(flux);
      rotate_mid_mode(basis_transfer(next.eigenvectors, mid.eigenvectors), L, psi);
      mid = std::move(next);
      ham_.fill(mid, h);
      prop.apply(h, dt, psi);
      check_norms(psi, options_.norm_tolerance);
      if (record && ((s + 1) % every == 0 || s + 1 == steps)) sample(t0 + (s + 1) * dt);
    }
    SubsystemSpectrum end = ham_.mid_spectrum(rising ? pulse.amplitude : 0.0);
    rotate_mid_mode(basis_transfer(end.eigenvectors, mid.eigenvectors), L, psi);
    mid = std::move(end);
  };

  if (record) sample(0.0);
  edge_pass(true, 0.0);

  const double plateau = pulse.plateau_duration();
  if (plateau > 0.0) {
    const auto eig = eigh_by_sector(ham_.dense(mid), ham_.dim(), ham_.sectors(mid));
    const Eigen::MatrixXcd v = eig.vectors.cast<cd>();
    const Eigen::MatrixXcd c0 = v.transpose() * Eigen::MatrixXcd(psi);
    auto evolve = [&](double tp) {
      Eigen::VectorXcd ph(eig.values.size());
      for (Eigen::Index k = 0; k < ph.size(); ++k) ph(k) = std::polar(1.0, -units::kTwoPi * eig.values(k) * tp);
      psi = v * (ph.asDiagonal() * c0);
    };
    if (record) {
      const int n = static_cast<int>(std::floor(plateau / options_.sample_interval + 1e-9));
      for (int s = 1; s <= n; ++s) {
        evolve(s * options_.sample_interval);
        sample(edge + s * options_.sample_interval);
      }
    }
    evolve(plateau);
    check_norms(psi, options_.norm_tolerance);
  }

  edge_pass(false, edge + plateau);

  const Eigen::MatrixXcd out = comp_.transpose().cast<cd>() * Eigen::MatrixXcd(psi);
  GateResult r = evaluate_block(out, pulse);
  if (record) {
    const int n = static_cast<int>(tr.time.size());
    const int m = static_cast<int>(tracked_index.size());
    for (int i = 0; i < 4; ++i)
      tr.populations[i] = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          rows[i].data(), n, m);
    r.trajectories = std::move(tr);
  }
  return r;
}

std::vector<ScanPoint> fidelity_amplitude_scan(const CzSimulator& sim, const std::vector<double>& amplitudes,
                                               const std::vector<int>& solutions, double edge,
                                               const CalibrationOptions& options, int workers) {
  std::vector<ScanPoint> out(amplitudes.size() * solutions.size());
  parallel_for(amplitudes.size(), workers, [&](std::size_t a) {
    const GateFamily fam = sim.family(amplitudes[a], edge);
    for (std::size_t k = 0; k < solutions.size(); ++k) {
      ScanPoint& p = out[a * solutions.size() + k];
      p.amplitude = amplitudes[a];
      p.solution = solutions[k];
      CalibrationOptions o = options;
      o.solution = solutions[k];
      try {
        p.duration = calibrate_gate_duration(fam, o);
      } catch (const NumericalError&) {
        continue;
      }
      const GateResult g = fam.evaluate(p.duration - 2.0 * edge);
      p.found = true;
      p.theta = g.theta;
      p.fidelity = g.fidelity;
      p.target_population = g.target_population;
      p.leakage_error = g.leakage_error;
    }
  });
  return out;
}

}  // namespace tcsim
