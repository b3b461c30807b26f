#include "tcsim/ramsey.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "tcsim/circuit_model.hpp"
#include "tcsim/units.hpp"

namespace tcsim {

namespace {

using cd = std::complex<double>;
using units::kTwoPi;

struct LinearFit {
  Eigen::Vector3d coef;  // offset, cos, sin
  double sse = 0.0;
};

LinearFit fit_at(const std::vector<double>& t, const std::vector<double>& y, double f) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = std::cos(kTwoPi * f * t[i]);
    a(i, 2) = std::sin(kTwoPi * f * t[i]);
    b(i) = y[i];
  }
  LinearFit out;
  out.coef = a.completeOrthogonalDecomposition().solve(b);
  out.sse = (a * out.coef - b).squaredNorm();
  return out;
}

double nyquist(const std::vector<double>& t) { return 0.5 * (t.size() - 1) / (t.back() - t.front()); }

std::vector<double> checked_delays(const std::vector<double>& d) {
  if (d.size() < 4) throw std::invalid_argument("Ramsey needs at least 4 delays");
  if (!std::is_sorted(d.begin(), d.end()) || std::adjacent_find(d.begin(), d.end()) != d.end())
    throw std::invalid_argument("Ramsey delays must be strictly increasing");
  return d;
}

// Qubit-B Rx(pi/2) in the computational basis gg, ge, eg, ee.
Matrix4c half_pi_on_b() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd r;
  r << cd(s, 0), cd(0, -s), cd(0, -s), cd(s, 0);
  Matrix4c out = Matrix4c::Zero();
  out.block<2, 2>(0, 0) = r;
  out.block<2, 2>(2, 2) = r;
  return out;
}

RamseyTrace analyse(std::vector<double> delays, std::vector<double> pop, const RamseyOptions& options) {
  RamseyTrace trace;
  trace.fit = fit_sinusoid(delays, pop);
  trace.delay = std::move(delays);
  trace.population = std::move(pop);
  trace.frequency_mhz = 1e3 * trace.fit.frequency;
  trace.flagged = trace.fit.residual_rms > options.residual_limit;
  return trace;
}

}  // namespace

SinusoidFit fit_sinusoid(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 4) throw std::invalid_argument("sinusoid fit needs >= 4 paired samples");
  const double span = t.back() - t.front();
  if (!(span > 0.0)) throw std::invalid_argument("sinusoid fit needs increasing times");
  const double f_max = nyquist(t);
  const double df = 0.1 / span;
  double best_f = 0.0;
  double best_sse = fit_at(t, y, 0.0).sse;
  for (double f = df; f <= f_max; f += df) {
    const double sse = fit_at(t, y, f).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best_f = f;
    }
  }
  const double lo = std::max(0.0, best_f - df);
  const double hi = std::min(f_max, best_f + df);
  const double f = golden_section_minimize([&](double x) { return fit_at(t, y, x).sse; }, lo, hi, 1e-10 * f_max);
  const LinearFit lf = fit_at(t, y, f);
  SinusoidFit out;
  out.frequency = f;
  out.offset = lf.coef(0);
  out.amplitude = std::hypot(lf.coef(1), lf.coef(2));
  out.phase = std::atan2(-lf.coef(2), lf.coef(1));
  out.residual_rms = std::sqrt(lf.sse / static_cast<double>(t.size()));
  return out;
}

namespace {

std::vector<double> ramsey_populations(const CzSimulator& sim, const GateFamily* family, double amplitude,
                                       const std::vector<double>& delays, double f_offset_mhz, bool excited,
                                       double edge) {
  // Frame rotating at the non-interacting computational energies, so only
  // the conditional part of the evolution survives.
  const Eigen::Vector4d e = sim.computational_energies();
  const Eigen::Vector4d frame(e(0), e(1), e(2), e(1) + e(2) - e(0));
  const Matrix4c h = half_pi_on_b();
  Eigen::Vector4cd psi0 = Eigen::Vector4cd::Zero();
  psi0(excited ? 2 : 0) = 1.0;
  psi0 = h * psi0;
  const double f_offset = 1e-3 * f_offset_mhz;

  std::vector<double> pop;
  pop.reserve(delays.size());
  for (const double td : delays) {
    Matrix4c u;
    if (amplitude == 0.0) {
      u = Matrix4c::Zero();
      for (int i = 0; i < 4; ++i) u(i, i) = std::polar(1.0, -kTwoPi * e(i) * td);
    } else {
      if (td < 2.0 * edge) throw std::invalid_argument("Ramsey delay shorter than the two pulse edges");
      u = family->block(td - 2.0 * edge);
    }
    Eigen::Vector4cd psi = u * psi0;
    for (int i = 0; i < 4; ++i) {
      double phase = kTwoPi * frame(i) * td;
      if (i % 2 == 1) phase -= kTwoPi * f_offset * td;  // virtual Z on B
      psi(i) *= std::polar(1.0, phase);
    }
    psi = h * psi;
    pop.push_back(std::norm(psi(1)) + std::norm(psi(3)));
  }
  return pop;
}

void check_nyquist(const std::vector<double>& delays, double f_offset_mhz) {
  if (1e-3 * std::abs(f_offset_mhz) >= nyquist(delays))
    throw std::invalid_argument("delay grid too coarse: offset frequency is above Nyquist");
}

}  // namespace

RamseyTrace simulate_ramsey(const CzSimulator& sim, double amplitude, const std::vector<double>& delays,
                            double f_offset_mhz, bool control_excited, const RamseyOptions& options) {
  auto d = checked_delays(delays);
  check_nyquist(d, f_offset_mhz);
  GateFamily family;
  if (amplitude != 0.0) family = sim.family(amplitude, options.edge);
  auto pop = ramsey_populations(sim, &family, amplitude, d, f_offset_mhz, control_excited, options.edge);
  return analyse(std::move(d), std::move(pop), options);
}

RamseyZZ simulate_ramsey_zz(const CzSimulator& sim, double amplitude, const std::vector<double>& delays,
                            double f_offset_mhz, const RamseyOptions& options) {
  auto d = checked_delays(delays);
  check_nyquist(d, f_offset_mhz);
  GateFamily family;
  if (amplitude != 0.0) family = sim.family(amplitude, options.edge);
  RamseyZZ out;
  out.control_ground =
      analyse(d, ramsey_populations(sim, &family, amplitude, d, f_offset_mhz, false, options.edge), options);
  out.control_excited =
      analyse(d, ramsey_populations(sim, &family, amplitude, d, f_offset_mhz, true, options.edge), options);
  out.zz_mhz = out.control_excited.frequency_mhz - out.control_ground.frequency_mhz;
  return out;
}

}  // namespace tcsim
