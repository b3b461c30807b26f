#include "tcsim/junction_fit.hpp"

#include <gsl/gsl_multimin.h>

#include <cmath>
#include <functional>
#include <limits>

#include "tcsim/units.hpp"

namespace tcsim {

double junction_area(double ej, double j) { return ej / (units::kJosephsonEnergyPerMicroampere * j); }

double josephson_energy(double area, double j) { return area * j * units::kJosephsonEnergyPerMicroampere; }

FitTargets predict_targets(const CircuitParams& p, const ModelOptions& model) {
  FitTargets t;
  const auto a = qubit_transitions(p, Mode::QubitA, {}, model.grid);
  const auto b = qubit_transitions(p, Mode::QubitB, {}, model.grid);
  t.f_a = a.f01;
  t.alpha_a = a.alpha;
  t.f_b = b.f01;
  t.alpha_b = b.alpha;
  t.zeta_zz_zero = zz_strength(composite_spectrum(p, {}, model));
  t.f_c_half = coupler_tunable_frequency(p, 0.5, model);
  return t;
}

namespace {

struct Minimum {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool converged = false;
};

// Nelder-Mead over log-scale factors; stops at `tol` simplex size or budget.
Minimum minimize(const std::function<double(const std::vector<double>&)>& f, std::size_t n, int budget,
                 double size_tol) {
  struct Ctx {
    const std::function<double(const std::vector<double>&)>* f;
    std::size_t n;
    int calls = 0;
    Minimum best;
  } ctx{&f, n, 0, {}};

  gsl_multimin_function fn;
  fn.n = n;
  fn.params = &ctx;
  fn.f = [](const gsl_vector* v, void* raw) {
    auto* c = static_cast<Ctx*>(raw);
    std::vector<double> x(c->n);
    for (std::size_t i = 0; i < c->n; ++i) x[i] = gsl_vector_get(v, i);
    ++c->calls;
    double y;
    try {
      y = (*c->f)(x);
    } catch (const NumericalError&) {
      y = std::numeric_limits<double>::max();
    }
    if (!std::isfinite(y)) y = std::numeric_limits<double>::max();
    if (y < c->best.value) {
      c->best.value = y;
      c->best.x = x;
    }
    return y;
  };

  gsl_vector* x0 = gsl_vector_calloc(n);
  gsl_vector* step = gsl_vector_alloc(n);
  gsl_vector_set_all(step, 0.05);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x0, step);
  while (ctx.calls < budget) {
    if (gsl_multimin_fminimizer_iterate(s)) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) == GSL_SUCCESS) {
      ctx.best.converged = true;
      break;
    }
  }
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(step);
  gsl_vector_free(x0);
  ctx.best.evaluations = ctx.calls;
  return ctx.best;
}

}  // namespace

FitResult fit_junction_areas(const FitTargets& targets, const CircuitParams& seed, const FitOptions& options) {
  seed.validate();
  const double ftol = options.frequency_tolerance;
  const double ztol = options.zz_tolerance;
  FitResult result;
  CircuitParams p = seed;
  const auto& grid = options.model.grid;

  // Qubit stages: x = log scale of (SQUID pair, series junction).
  auto qubit_stage = [&](int squid_a, int squid_b, int series, Mode mode, double f, double alpha) {
    const double a0 = p.ej(squid_a), b0 = p.ej(squid_b), s0 = p.ej(series);
    auto apply = [&](const std::vector<double>& x, CircuitParams& q) {
      q.ej(squid_a) = a0 * std::exp(x[0]);
      q.ej(squid_b) = b0 * std::exp(x[0]);
      q.ej(series) = s0 * std::exp(x[1]);
    };
    auto cost = [&](const std::vector<double>& x) {
      CircuitParams q = p;
      apply(x, q);
      const auto t = qubit_transitions(q, mode, {}, grid);
      const double r1 = (t.f01 - f) / ftol, r2 = (t.alpha - alpha) / ftol;
      return r1 * r1 + r2 * r2;
    };
    const Minimum m = minimize(cost, 2, options.max_evaluations, 1e-7);
    apply(m.x, p);
    result.evaluations += m.evaluations;
    return m.converged;
  };
  bool ok = qubit_stage(1, 2, 3, Mode::QubitA, targets.f_a, targets.alpha_a);
  ok = qubit_stage(10, 9, 8, Mode::QubitB, targets.f_b, targets.alpha_b) && ok;

  // Coupler stage: x = log scale of (J4 = J7, J5 + J6).
  {
    const double end0 = 0.5 * (p.ej(4) + p.ej(7));
    const double e5 = p.ej(5), e6 = p.ej(6);
    auto apply = [&](const std::vector<double>& x, CircuitParams& q) {
      q.ej(4) = q.ej(7) = end0 * std::exp(x[0]);
      q.ej(5) = e5 * std::exp(x[1]);
      q.ej(6) = e6 * std::exp(x[1]);
    };
    auto cost = [&](const std::vector<double>& x) {
      CircuitParams q = p;
      apply(x, q);
      const double z = zz_strength(composite_spectrum(q, {}, options.model));
      const double fc = coupler_tunable_frequency(q, 0.5, options.model);
      const double r1 = (z - targets.zeta_zz_zero) / ztol, r2 = (fc - targets.f_c_half) / ftol;
      return r1 * r1 + r2 * r2;
    };
    const Minimum m = minimize(cost, 2, options.max_evaluations, 1e-7);
    apply(m.x, p);
    result.evaluations += m.evaluations;
    ok = m.converged && ok;
  }

  result.params = p;
  for (int j = 1; j <= 10; ++j) result.areas[j - 1] = junction_area(p.ej(j), options.current_density);
  const FitTargets got = predict_targets(p, options.model);
  result.residuals = {
      {"f_a", targets.f_a, got.f_a, ftol},
      {"f_b", targets.f_b, got.f_b, ftol},
      {"alpha_a", targets.alpha_a, got.alpha_a, ftol},
      {"alpha_b", targets.alpha_b, got.alpha_b, ftol},
      {"zeta_zz_zero", targets.zeta_zz_zero, got.zeta_zz_zero, ztol},
      {"f_c_half", targets.f_c_half, got.f_c_half, ftol},
  };
  bool within = true;
  for (const auto& r : result.residuals) within = within && std::abs(r.achieved - r.target) <= r.tolerance;
  result.converged = ok && within;
  return result;
}

}  // namespace tcsim
