#include "tcsim/benchmarking.hpp"

#include <gsl/gsl_blas.h>
#include <gsl/gsl_multifit_nlinear.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include "tcsim/circuit_model.hpp"
#include "tcsim/clifford.hpp"
#include "tcsim/parallel.hpp"
#include "tcsim/units.hpp"

namespace tcsim {

namespace {

using cd = std::complex<double>;
using Rho = Eigen::Matrix4cd;
constexpr double kDim = 4.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Matrix4c layer_unitary(const std::array<int, 2>& c) {
  return Eigen::kroneckerProduct(clifford_matrix(c[0]), clifford_matrix(c[1]));
}

// Single-qubit Kraus set embedded on qubit 0 (A) or 1 (B).
Matrix4c embed(const Eigen::Matrix2cd& k, int qubit) {
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  return qubit == 0 ? Matrix4c(Eigen::kroneckerProduct(k, id)) : Matrix4c(Eigen::kroneckerProduct(id, k));
}

void decay(Rho& rho, const NoiseModel& noise, double duration_ns) {
  for (int q = 0; q < 2; ++q) {
    const double t1 = noise.t1[q] * 1e3;
    const double t2 = noise.t2_star[q] * 1e3;
    const double gamma = -std::expm1(-duration_ns / t1);
    const double dephasing_rate = std::max(0.0, 1.0 / t2 - 0.5 / t1);
    const double flip = 0.5 * -std::expm1(-dephasing_rate * duration_ns);

    Eigen::Matrix2cd k0 = Eigen::Matrix2cd::Zero(), k1 = Eigen::Matrix2cd::Zero();
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - gamma);
    k1(0, 1) = std::sqrt(gamma);
    Rho out = embed(k0, q) * rho * embed(k0, q).adjoint() + embed(k1, q) * rho * embed(k1, q).adjoint();

    const Matrix4c z = embed(Eigen::Vector2cd(1.0, -1.0).asDiagonal(), q);
    rho = (1.0 - flip) * out + flip * z * out * z;
  }
}

void depolarize(Rho& rho, double p) {
  if (p == 1.0) return;
  rho = p * rho + (1.0 - p) * rho.trace() / kDim * Rho::Identity();
}

Eigen::Vector4d diagonal(const Rho& rho) {
  Eigen::Vector4d d;
  for (int i = 0; i < 4; ++i) d(i) = rho(i, i).real();
  return d;
}

Eigen::Vector4d sample(const Eigen::Vector4d& p, int shots, std::mt19937_64& rng) {
  Eigen::Vector4d counts = Eigen::Vector4d::Zero();
  int left = shots;
  double mass = 1.0;
  for (int i = 0; i < 3 && left > 0; ++i) {
    const double pi = std::clamp(p(i) / std::max(mass, 1e-300), 0.0, 1.0);
    std::binomial_distribution<int> draw(left, pi);
    const int k = draw(rng);
    counts(i) = k;
    left -= k;
    mass -= p(i);
  }
  counts(3) = left;
  return counts / shots;
}

struct LinearXeb {
  double cross = 0.0;   // <sum q pi>
  double square = 0.0;  // <sum pi^2>
};

double conditional_phase_raw_wrapped(const Matrix4c& u) {
  return std::arg(u(3, 3) * std::conj(u(1, 1)) * std::conj(u(2, 2)) * u(0, 0));
}

LinearXeb averages(const std::vector<XebCircuit>& circuits) {
  LinearXeb s;
  for (const auto& c : circuits) {
    s.cross += c.measured.dot(c.ideal);
    s.square += c.ideal.squaredNorm();
  }
  s.cross /= circuits.size();
  s.square /= circuits.size();
  return s;
}

}  // namespace

void NoiseModel::validate() const {
  for (int q = 0; q < 2; ++q) {
    if (!(t1[q] > 0.0) || !(t2_star[q] > 0.0)) throw std::invalid_argument("T1 and T2* must be positive");
    if (t2_star[q] > 2.0 * t1[q]) throw std::invalid_argument("T2* must not exceed 2 T1");
  }
  if (!(single_qubit_gate_time > 0.0) || !(cz_gate_time > 0.0))
    throw std::invalid_argument("gate times must be positive");
  if (!(depolarizing >= 0.0 && depolarizing <= 1.0)) throw std::invalid_argument("depolarizing must be in [0, 1]");
}

NoiseModel NoiseModel::noiseless() {
  NoiseModel n;
  n.decoherence = false;
  return n;
}

std::uint64_t circuit_seed(std::uint64_t root, int depth_index, int circuit_index) {
  return splitmix64(splitmix64(root) ^ splitmix64((static_cast<std::uint64_t>(depth_index) << 32) |
                                                  static_cast<std::uint32_t>(circuit_index)));
}

Eigen::Vector4d ideal_probabilities(const std::vector<std::array<int, 2>>& cliffords,
                                    const std::optional<Matrix4c>& gate) {
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(0) = 1.0;
  for (const auto& c : cliffords) {
    psi = layer_unitary(c) * psi;
    if (gate) psi = *gate * psi;
  }
  return psi.cwiseAbs2();
}

Eigen::Vector4d noisy_probabilities(const std::vector<std::array<int, 2>>& cliffords,
                                    const std::optional<Matrix4c>& gate, const NoiseModel& noise) {
  Rho rho = Rho::Zero();
  rho(0, 0) = 1.0;
  const double clifford_time = kX90PerClifford * noise.single_qubit_gate_time;
  for (const auto& c : cliffords) {
    const Matrix4c u = layer_unitary(c);
    rho = u * rho * u.adjoint();
    if (noise.decoherence) decay(rho, noise, clifford_time);
    if (gate) {
      Rho next = *gate * rho * gate->adjoint();
      const double lost = std::max(0.0, 1.0 - next.trace().real());
      rho = next + lost / kDim * Rho::Identity();
      if (noise.decoherence) decay(rho, noise, noise.cz_gate_time);
    }
    depolarize(rho, noise.depolarizing);
  }
  Eigen::Vector4d p = diagonal(rho).cwiseMax(0.0);
  return p / p.sum();
}

XebRun run_xeb(const XebOptions& options, const NoiseModel& noise,
               const std::optional<InterleavedGate>& interleaved) {
  if (options.depths.empty() || options.circuits < 1) throw std::invalid_argument("XEB needs depths and circuits");
  if (options.shots < 0) throw std::invalid_argument("shots must be >= 0");
  for (int m : options.depths)
    if (m < 1) throw std::invalid_argument("XEB depths must be positive");
  if (noise.decoherence) noise.validate();

  XebRun run;
  run.root_seed = options.seed;
  run.shots = options.shots;
  run.depths = options.depths;
  run.interleaved = interleaved;
  run.circuits.assign(options.depths.size(), std::vector<XebCircuit>(options.circuits));

  std::optional<Matrix4c> noisy_gate, ideal_gate;
  if (interleaved) {
    noisy_gate = interleaved->noisy;
    ideal_gate = interleaved->ideal;
  }
  const std::size_t per_depth = static_cast<std::size_t>(options.circuits);
  parallel_for(options.depths.size() * per_depth, options.workers, [&](std::size_t k) {
    const int d = static_cast<int>(k / per_depth);
    const int c = static_cast<int>(k % per_depth);
    XebCircuit& circ = run.circuits[d][c];
    circ.seed = circuit_seed(options.seed, d, c);
    std::mt19937_64 rng(circ.seed);
    circ.cliffords.resize(options.depths[d]);
    for (auto& layer : circ.cliffords) layer = {sample_clifford(rng), sample_clifford(rng)};
    circ.ideal = ideal_probabilities(circ.cliffords, ideal_gate);
    const Eigen::Vector4d q = noisy_probabilities(circ.cliffords, noisy_gate, noise);
    circ.measured = options.shots > 0 ? sample(q, options.shots, rng) : q;
  });
  return run;
}

std::vector<double> circuit_fidelities(const std::vector<XebCircuit>& circuits) {
  if (circuits.empty()) return {};
  const LinearXeb avg = averages(circuits);
  const double norm = kDim * avg.square - 1.0;
  std::vector<double> out;
  out.reserve(circuits.size());
  for (const auto& c : circuits) out.push_back((kDim * c.measured.dot(c.ideal) - 1.0) / norm);
  return out;
}

std::vector<double> depth_fidelities(const XebRun& run) {
  std::vector<double> out;
  for (const auto& circuits : run.circuits) {
    const LinearXeb avg = averages(circuits);
    out.push_back((kDim * avg.cross - 1.0) / (kDim * avg.square - 1.0));
  }
  return out;
}

namespace {

struct DecayData {
  const std::vector<int>* m;
  const std::vector<double>* y;
};

int decay_f(const gsl_vector* x, void* raw, gsl_vector* f) {
  const auto* d = static_cast<DecayData*>(raw);
  const double a = gsl_vector_get(x, 0), p = gsl_vector_get(x, 1);
  for (std::size_t i = 0; i < d->m->size(); ++i)
    gsl_vector_set(f, i, a * std::pow(p, (*d->m)[i]) - (*d->y)[i]);
  return GSL_SUCCESS;
}

int decay_df(const gsl_vector* x, void* raw, gsl_matrix* j) {
  const auto* d = static_cast<DecayData*>(raw);
  const double a = gsl_vector_get(x, 0), p = gsl_vector_get(x, 1);
  for (std::size_t i = 0; i < d->m->size(); ++i) {
    const int m = (*d->m)[i];
    gsl_matrix_set(j, i, 0, std::pow(p, m));
    gsl_matrix_set(j, i, 1, a * m * std::pow(p, m - 1));
  }
  return GSL_SUCCESS;
}

}  // namespace

DecayFit fit_decay(const std::vector<int>& depths, const std::vector<double>& values) {
  if (depths.size() != values.size()) throw std::invalid_argument("depths and values differ in length");
  if (depths.size() < 3) throw std::invalid_argument("decay fit needs at least 3 depths");
  const std::size_t n = depths.size();

  // Start from a log-linear fit over the positive points.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] <= 0.0) continue;
    const double x = depths[i], y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  double a0 = 1.0, p0 = 0.99;
  if (used >= 2 && used * sxx - sx * sx > 0.0) {
    const double s = (used * sxy - sx * sy) / (used * sxx - sx * sx);
    p0 = std::exp(s);
    a0 = std::exp((sy - s * sx) / used);
  }

  DecayData data{&depths, &values};
  gsl_multifit_nlinear_fdf fdf;
  fdf.f = decay_f;
  fdf.df = decay_df;
  fdf.fvv = nullptr;
  fdf.n = n;
  fdf.p = 2;
  fdf.params = &data;

  gsl_multifit_nlinear_parameters params = gsl_multifit_nlinear_default_parameters();
  gsl_multifit_nlinear_workspace* w = gsl_multifit_nlinear_alloc(gsl_multifit_nlinear_trust, &params, n, 2);
  double start[2] = {a0, p0};
  gsl_vector_view x0 = gsl_vector_view_array(start, 2);
  gsl_multifit_nlinear_init(&x0.vector, &fdf, w);
  int info = 0;
  gsl_multifit_nlinear_driver(200, 1e-14, 1e-14, 1e-14, nullptr, nullptr, &info, w);

  gsl_matrix* cov = gsl_matrix_alloc(2, 2);
  gsl_multifit_nlinear_covar(gsl_multifit_nlinear_jac(w), 0.0, cov);
  double chi2 = 0.0;
  gsl_blas_ddot(w->f, w->f, &chi2);
  const double scale = n > 2 ? chi2 / static_cast<double>(n - 2) : 0.0;

  DecayFit out;
  out.a = gsl_vector_get(w->x, 0);
  out.p = gsl_vector_get(w->x, 1);
  out.a_stderr = std::sqrt(std::max(0.0, scale * gsl_matrix_get(cov, 0, 0)));
  out.p_stderr = std::sqrt(std::max(0.0, scale * gsl_matrix_get(cov, 1, 1)));
  gsl_matrix_free(cov);
  gsl_multifit_nlinear_free(w);
  if (!std::isfinite(out.a) || !std::isfinite(out.p)) throw NumericalError("decay fit diverged");
  return out;
}

DecayFit fit_depolarization(const XebRun& run) { return fit_decay(run.depths, depth_fidelities(run)); }

InterleavedFidelity interleaved_fidelity(double p1, double p2, double s1, double s2) {
  if (!(p1 > 0.0)) throw std::invalid_argument("reference decay p1 must be positive");
  const double p = p2 / p1;
  const double sp = std::hypot(s2 / p1, p2 * s1 / (p1 * p1));
  return {p + (1.0 - p) / kDim, sp * (1.0 - 1.0 / kDim)};
}

SpecklePurity speckle_purity(const XebRun& run) {
  SpecklePurity out;
  for (const auto& circuits : run.circuits) {
    if (circuits.size() < 20) throw std::invalid_argument("speckle purity needs at least 20 circuits per depth");
    double num = 0.0, den = 0.0;
    for (const auto& c : circuits)
      for (int x = 0; x < 4; ++x) {
        const double q = c.measured(x);
        num += (q - 1.0 / kDim) * (q - 1.0 / kDim);
        if (run.shots > 1) num -= q * (1.0 - q) / (run.shots - 1);
        den += (c.ideal(x) - 1.0 / kDim) * (c.ideal(x) - 1.0 / kDim);
      }
    out.sqrt_purity.push_back(den > 0.0 ? std::sqrt(std::max(0.0, num / den)) : 0.0);
  }
  if (run.depths.size() >= 3) out.decay = fit_decay(run.depths, out.sqrt_purity);
  return out;
}

PhaseEstimate extract_conditional_phase(const XebRun& run, int grid_points) {
  if (grid_points < 8) throw std::invalid_argument("phase grid needs at least 8 points");
  // Linear cross-entropy scaled by the candidate's own speckle contrast; the
  // bare estimator favours candidates with larger contrast.
  double measured_contrast = 0.0;
  for (const auto& circuits : run.circuits)
    for (const auto& c : circuits) measured_contrast += kDim * c.measured.squaredNorm() - 1.0;
  auto objective = [&](double theta) {
    const std::optional<Matrix4c> gate = cphase_matrix(theta);
    double cross = 0.0, contrast = 0.0;
    for (const auto& circuits : run.circuits)
      for (const auto& c : circuits) {
        const Eigen::Vector4d p = ideal_probabilities(c.cliffords, gate);
        cross += kDim * c.measured.dot(p) - 1.0;
        contrast += kDim * p.squaredNorm() - 1.0;
      }
    return cross / std::sqrt(std::max(contrast * measured_contrast, 1e-300));
  };
  const double step = units::kTwoPi / grid_points;
  std::vector<double> values(grid_points);
  int best = 0;
  for (int i = 0; i < grid_points; ++i) {
    values[i] = objective(-units::kPi + i * step);
    if (values[i] > values[best]) best = i;
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  PhaseEstimate out;
  const double centre = -units::kPi + best * step;
  const double theta =
      golden_section_minimize([&](double t) { return -objective(t); }, centre - step, centre + step, 1e-4);
  // Report the branch nearest the nominal gate phase.
  double ref = run.interleaved ? conditional_phase_raw_wrapped(run.interleaved->ideal) : 0.0;
  if (ref < 0.0) ref += units::kTwoPi;
  out.theta = ref + std::remainder(theta - ref, units::kTwoPi);
  out.objective = objective(out.theta);
  std::size_t count = 0;
  for (const auto& circuits : run.circuits) count += circuits.size();
  out.flat = measured_contrast <= 1e-9 * static_cast<double>(count) || (*hi_it - *lo_it) < 1e-3;
  return out;
}

}  // namespace tcsim
