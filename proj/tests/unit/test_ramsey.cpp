#include <doctest.h>

#include <cmath>

#include "tcsim/ramsey.hpp"
#include "tcsim/units.hpp"

using namespace tcsim;

namespace {

const CzSimulator& table2() {
  static const CzSimulator sim(CircuitParams::experiment(), DynamicsOptions{});
  return sim;
}

std::vector<double> delays(double lo, double step, int n) {
  std::vector<double> d;
  for (int i = 0; i < n; ++i) d.push_back(lo + i * step);
  return d;
}

}  // namespace

TEST_CASE("sinusoid fit recovers a synthetic trace") {
  const auto t = delays(0.0, 2.0, 101);
  std::vector<double> y;
  for (double x : t) y.push_back(0.5 + 0.45 * std::cos(units::kTwoPi * 0.0123 * x + 0.7));
  const auto f = fit_sinusoid(t, y);
  CHECK(f.frequency == doctest::Approx(0.0123).epsilon(1e-9));
  CHECK(f.amplitude == doctest::Approx(0.45).epsilon(1e-9));
  CHECK(f.offset == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(f.phase == doctest::Approx(0.7).epsilon(1e-8));
  CHECK(f.residual_rms < 1e-8);
  CHECK_THROWS(fit_sinusoid({0, 1, 2}, {0, 1, 0}));
}

TEST_CASE("zero amplitude: only the virtual-Z winding remains" * doctest::timeout(300)) {
  const auto r = simulate_ramsey(table2(), 0.0, delays(0.0, 2.0, 101), 10.0, false);
  CHECK(r.frequency_mhz == doctest::Approx(10.0).epsilon(1e-6));
  CHECK_FALSE(r.flagged);
  for (double p : r.population) {
    CHECK(p >= -1e-12);
    CHECK(p <= 1 + 1e-12);
  }
}

TEST_CASE("zero amplitude: the Ramsey ZZ equals the static ZZ" * doctest::timeout(300)) {
  const auto r = simulate_ramsey_zz(table2(), 0.0, delays(0.0, 5.0, 201), 10.0);
  ModelOptions m;
  m.levels = table2().options().levels;
  const double zz = zz_strength(composite_spectrum(CircuitParams::experiment(), {}, m));
  CHECK(r.zz_mhz == doctest::Approx(zz).epsilon(0.05));
}

TEST_CASE("pulsed Ramsey ZZ follows the static curve" * doctest::timeout(600)) {
  const double flux = 0.25;
  const auto r = simulate_ramsey_zz(table2(), flux, delays(18.0, 2.0, 101), 10.0);
  ModelOptions m;
  m.levels = table2().options().levels;
  FluxConfig f;
  f.phi_c = flux;
  const double zz = zz_strength(composite_spectrum(CircuitParams::experiment(), f, m));
  CHECK(r.zz_mhz == doctest::Approx(zz).epsilon(0.10));
  CHECK_FALSE(r.control_ground.flagged);
  CHECK_FALSE(r.control_excited.flagged);
}

TEST_CASE("Ramsey preconditions") {
  CHECK_THROWS_AS(simulate_ramsey(table2(), 0.0, delays(0.0, 10.0, 20), 60.0, false), std::invalid_argument);
  CHECK_THROWS_AS(simulate_ramsey(table2(), 0.3, delays(0.0, 2.0, 20), 10.0, false), std::invalid_argument);
  CHECK_THROWS_AS(simulate_ramsey(table2(), 0.0, {1.0, 0.5, 2.0, 3.0}, 10.0, false), std::invalid_argument);
}
