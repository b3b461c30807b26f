// tcsim: spectra, ZZ curves, CZ gate simulation, XEB and junction fits for the
// transmon-coupler-transmon circuit.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tcsim/benchmarking.hpp"
#include "tcsim/composite_system.hpp"
#include "tcsim/junction_fit.hpp"
#include "tcsim/output.hpp"
#include "tcsim/parallel.hpp"
#include "tcsim/params_io.hpp"
#include "tcsim/pulse_dynamics.hpp"
#include "tcsim/ramsey.hpp"
#include "tcsim/units.hpp"

namespace {

using namespace tcsim;
using ojson = nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string params;
  std::string preset = "experiment";
  std::string out = "-";
  std::string format = "csv";
  std::uint64_t seed = 1;
  int workers = default_workers();
};

CircuitParams load(const Common& c) {
  if (!c.params.empty()) return load_params(c.params);
  return c.preset == "design" ? CircuitParams::design() : CircuitParams::experiment();
}

std::string params_source(const Common& c) { return c.params.empty() ? "preset:" + c.preset : c.params; }

void emit(const Common& c, const Table& t, const ojson& extra = {}) {
  if (c.format == "json") {
    ojson j = table_json(t);
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    write_output(c.out, j.dump(2) + "\n");
  } else {
    std::ostringstream s;
    write_csv(s, t);
    write_output(c.out, s.str());
  }
}

std::vector<double> grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw UsageError("grid step must be positive");
  if (hi < lo) throw UsageError("grid maximum is below its minimum");
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo + i * step);
  return g;
}

std::vector<double> explicit_or_grid(const std::vector<double>& values, double lo, double hi, double step) {
  if (values.empty()) return grid(lo, hi, step);
  if (!std::is_sorted(values.begin(), values.end())) throw UsageError("grid values must be sorted");
  return values;
}

ModelOptions model_options(int points, int levels, int kept) {
  if (points < 8 || levels < 2 || kept < 4) throw UsageError("grid points >= 8, levels >= 2, kept >= 4 required");
  ModelOptions m;
  m.grid = PhaseGrid::with_points(points);
  m.levels = levels;
  m.kept_states = kept;
  return m;
}

void add_common(CLI::App* sub, Common& c) {
  auto* p = sub->add_option("--params", c.params, "Parameter file (name = value unit)")->check(CLI::ExistingFile);
  sub->add_option("--preset", c.preset, "Built-in parameters when --params is absent")
      ->check(CLI::IsMember({"design", "experiment"}))
      ->excludes(p);
  sub->add_option("--out", c.out, "Output path, - for stdout");
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", c.seed, "Root seed");
  sub->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
  std::string system = "full";
  double flux_min = 0.0, flux_max = 0.5, flux_step = 1.0 / 256.0;
  std::vector<double> flux;
  int grid_points = 32, levels = 5, kept = 60, states = 20, max_excitations = 3;
};

void cmd_spectrum(const Common& c, const SpectrumArgs& a) {
  const CircuitParams p = load(c);
  const auto flux = explicit_or_grid(a.flux, a.flux_min, a.flux_max, a.flux_step);
  if (flux.empty()) throw UsageError("empty flux grid");
  const ModelOptions model = model_options(a.grid_points, a.levels, a.kept);

  Table t;
  t.meta = {{"params", params_source(c)}, {"system", a.system}, {"energies", "GHz above the ground state"}};
  t.columns = {"flux_phi0"};
  if (a.system == "coupler") {
    const CouplerLevels levels = coupler_spectrum(p, flux, model, a.max_excitations, c.workers);
    for (const auto& l : levels.labels) t.columns.push_back(l + "_ghz");
    for (std::size_t i = 0; i < flux.size(); ++i) {
      std::vector<double> row{flux[i]};
      for (Eigen::Index k = 0; k < levels.energies.cols(); ++k) row.push_back(levels.energies(i, k));
      t.rows.push_back(std::move(row));
    }
    emit(c, t);
    return;
  }

  std::vector<CompositeSpectrum> spectra(flux.size());
  parallel_for(flux.size(), c.workers, [&](std::size_t i) {
    FluxConfig f;
    f.phi_c = flux[i];
    spectra[i] = composite_spectrum(p, f, model);
  });
  const int n_states = std::min<int>(a.states, static_cast<int>(spectra.front().labels.size()));
  std::vector<Label> tracked(spectra.front().labels.begin(), spectra.front().labels.begin() + n_states);
  for (const auto& l : tracked) t.columns.push_back(label_to_string(l) + "_ghz");
  bool warned = false;
  for (std::size_t i = 0; i < flux.size(); ++i) {
    std::vector<double> row{flux[i]};
    for (const auto& l : tracked) {
      const auto s = spectra[i].find(l);
      row.push_back(s ? spectra[i].eigenvalues(*s) : std::nan(""));
    }
    warned = warned || spectra[i].labeling_warning;
    t.rows.push_back(std::move(row));
  }
  if (warned) std::cerr << "warning: weak label assignment for a computational state at some flux points\n";
  t.meta.emplace_back("labeling_warning", warned ? "true" : "false");
  emit(c, t);
}

// ---------------------------------------------------------------------- zz

struct ZzArgs {
  double flux_min = 0.0, flux_max = 0.5, flux_step = 1.0 / 256.0;
  std::vector<double> flux;
  int grid_points = 32, levels = 5, kept = 60;
  std::string method = "model";
  int dynamics_levels = 4;
  double edge = 9.0, delay_min = 18.0, delay_max = 218.0, delay_step = 2.0, offset_low = 10.0,
         offset_high = 50.0, offset_switch = 0.3;
};

void cmd_zz(const Common& c, const ZzArgs& a) {
  const CircuitParams p = load(c);
  const auto flux = explicit_or_grid(a.flux, a.flux_min, a.flux_max, a.flux_step);
  if (flux.empty()) throw UsageError("empty flux grid");
  Table t;
  t.meta = {{"params", params_source(c)}, {"method", a.method}};

  if (a.method == "model") {
    const ZZCurve curve = zz_curve(p, flux, model_options(a.grid_points, a.levels, a.kept), c.workers);
    t.columns = {"flux_phi0", "zeta_mhz", "labeling_warning"};
    bool warned = false;
    for (std::size_t i = 0; i < flux.size(); ++i) {
      t.rows.push_back({curve.flux[i], curve.zeta_mhz[i], curve.labeling_warning[i] ? 1.0 : 0.0});
      warned = warned || curve.labeling_warning[i];
    }
    if (warned) std::cerr << "warning: weak label assignment for a computational state at some flux points\n";
    emit(c, t);
    return;
  }

  DynamicsOptions dyn;
  dyn.grid = PhaseGrid::with_points(a.grid_points);
  dyn.levels = a.dynamics_levels;
  const CzSimulator sim(p, dyn);
  const auto delays = grid(a.delay_min, a.delay_max, a.delay_step);
  RamseyOptions ro;
  ro.edge = a.edge;
  std::vector<RamseyZZ> results(flux.size());
  std::vector<double> offsets(flux.size());
  parallel_for(flux.size(), c.workers, [&](std::size_t i) {
    offsets[i] = flux[i] < a.offset_switch ? a.offset_low : a.offset_high;
    results[i] = simulate_ramsey_zz(sim, flux[i], delays, offsets[i], ro);
  });
  t.meta.emplace_back("delays_ns", format_number(delays.front()) + ":" + format_number(a.delay_step) + ":" +
                                       format_number(delays.back()));
  t.columns = {"flux_phi0", "offset_mhz", "f_ground_mhz", "f_excited_mhz", "zeta_mhz", "fit_flagged"};
  for (std::size_t i = 0; i < flux.size(); ++i) {
    const auto& r = results[i];
    const bool flag = r.control_ground.flagged || r.control_excited.flagged;
    t.rows.push_back({flux[i], offsets[i], r.control_ground.frequency_mhz, r.control_excited.frequency_mhz, r.zz_mhz,
                      flag ? 1.0 : 0.0});
    if (flag) std::cerr << "warning: poor Ramsey fit at " << flux[i] << " Phi0\n";
  }
  emit(c, t);
}

// -------------------------------------------------------------------- gate

struct DynamicsArgs {
  int grid_points = 32, levels = 4;
  double edge = 9.0, edge_step = 0.01, sample = 0.1;
  std::string frame = "adiabatic";

  DynamicsOptions options() const {
    if (levels < 3) throw UsageError("dynamics needs at least 3 levels per mode");
    DynamicsOptions o;
    o.grid = PhaseGrid::with_points(grid_points);
    o.levels = levels;
    o.edge_step = edge_step;
    o.sample_interval = sample;
    o.readout = frame == "zero-flux" ? ReadoutFrame::ZeroFlux : ReadoutFrame::Adiabatic;
    return o;
  }
};

void add_dynamics(CLI::App* sub, DynamicsArgs& d) {
  sub->add_option("--phase-points", d.grid_points, "Phase-grid points per mode");
  sub->add_option("--levels", d.levels, "Levels per mode");
  sub->add_option("--edge", d.edge, "Hann edge duration, ns");
  sub->add_option("--edge-step", d.edge_step, "Edge time step, ns");
  sub->add_option("--sample", d.sample, "Trajectory sample interval, ns");
  sub->add_option("--frame", d.frame, "Population readout frame")
      ->check(CLI::IsMember({"adiabatic", "zero-flux"}));
}

struct GateArgs {
  DynamicsArgs dyn;
  double amplitude = 0.0;
  int solution = 1;
  std::optional<double> duration;
  double max_duration = 300.0;
  std::vector<std::string> track = {"gg000", "ge000", "eg000", "ee000", "fg000", "gf000", "gg010"};
};

const char* kInitial[4] = {"gg", "ge", "eg", "ee"};

ojson gate_summary(const GateResult& g) {
  ojson s;
  s["amplitude_phi0"] = g.pulse.amplitude;
  s["duration_ns"] = g.pulse.total_duration;
  s["edge_ns"] = g.pulse.edge_duration;
  s["theta_rad"] = g.theta;
  s["fidelity"] = g.fidelity;
  s["target_population"] = g.target_population;
  s["leakage_error"] = g.leakage_error;
  return s;
}

GateResult calibrated_gate(const CzSimulator& sim, double amplitude, int solution, std::optional<double> duration,
                           double edge, double max_duration) {
  FluxPulse pulse;
  pulse.amplitude = amplitude;
  pulse.edge_duration = edge;
  if (duration) {
    pulse.total_duration = *duration;
  } else {
    CalibrationOptions co;
    co.solution = solution;
    co.max_duration = max_duration;
    pulse.total_duration = calibrate_gate_duration(sim.family(amplitude, edge), co);
  }
  pulse.validate();
  return sim.family(amplitude, edge).evaluate(pulse.plateau_duration());
}

void cmd_gate(const Common& c, const GateArgs& a) {
  const CircuitParams p = load(c);
  const CzSimulator sim(p, a.dyn.options());
  FluxPulse pulse;
  pulse.amplitude = a.amplitude;
  pulse.edge_duration = a.dyn.edge;
  if (a.duration) {
    pulse.total_duration = *a.duration;
  } else {
    CalibrationOptions co;
    co.solution = a.solution;
    co.max_duration = a.max_duration;
    pulse.total_duration = calibrate_gate_duration(sim.family(a.amplitude, a.dyn.edge), co);
  }
  pulse.validate();
  for (const auto& l : a.track)
    if (!sim.dressed().find(parse_label(l))) throw UsageError("unknown dressed level " + l);
  const GateResult g = sim.propagate(pulse, true, a.track);
  const Trajectories& tr = g.trajectories;

  Table t;
  t.meta = {{"params", params_source(c)},
            {"amplitude_phi0", format_number(pulse.amplitude)},
            {"duration_ns", format_number(pulse.total_duration)},
            {"edge_ns", format_number(pulse.edge_duration)},
            {"theta_rad", format_number(g.theta)},
            {"fidelity", format_number(g.fidelity)},
            {"target_population", format_number(g.target_population)},
            {"leakage_error", format_number(g.leakage_error)},
            {"frame", a.dyn.frame},
            {"population columns", "<initial state>:<dressed level>"}};
  t.columns = {"time_ns", "theta_rad", "target_population", "leakage_error"};
  for (int i = 0; i < 4; ++i)
    for (const auto& l : tr.labels) t.columns.push_back(std::string(kInitial[i]) + ":" + l);
  for (std::size_t s = 0; s < tr.time.size(); ++s) {
    std::vector<double> row{tr.time[s], tr.theta[s], tr.target_population[s], tr.leakage_error[s]};
    for (int i = 0; i < 4; ++i)
      for (Eigen::Index k = 0; k < tr.populations[i].cols(); ++k) row.push_back(tr.populations[i](s, k));
    t.rows.push_back(std::move(row));
  }

  // Levels other than the computational ones whose population ever exceeds 1e-3.
  ojson peaks = ojson::object();
  const auto& dressed = sim.dressed();
  for (Eigen::Index k = 0; k < tr.peak_population.size(); ++k) {
    const std::string name = label_to_string(dressed.labels[k]);
    const bool comp = name == "gg000" || name == "ge000" || name == "eg000" || name == "ee000";
    if (!comp && tr.peak_population(k) > 1e-3) peaks[name] = tr.peak_population(k);
  }
  ojson extra;
  extra["gate"] = gate_summary(g);
  extra["transient_leakage_above_1e-3"] = peaks;
  emit(c, t, extra);
  if (!(g.fidelity >= 0.0)) throw NumericalError("gate evaluation produced an invalid fidelity");
}

// -------------------------------------------------------------------- scan

struct ScanArgs {
  DynamicsArgs dyn;
  double amp_min = 0.37, amp_max = 0.5, amp_step = 0.13 / 19.0;
  std::vector<double> amplitudes;
  std::vector<int> solutions = {1};
  double max_duration = 300.0;
};

void cmd_scan(const Common& c, const ScanArgs& a) {
  const CircuitParams p = load(c);
  const auto amps = explicit_or_grid(a.amplitudes, a.amp_min, a.amp_max, a.amp_step);
  if (amps.empty()) throw UsageError("empty amplitude grid");
  if (a.solutions.empty()) throw UsageError("no calibration solutions requested");
  const CzSimulator sim(p, a.dyn.options());
  CalibrationOptions co;
  co.max_duration = a.max_duration;
  const auto points = fidelity_amplitude_scan(sim, amps, a.solutions, a.dyn.edge, co, c.workers);

  if (c.format == "json") {
    ojson j;
    j["params"] = params_source(c);
    j["edge_ns"] = a.dyn.edge;
    j["records"] = ojson::array();
    for (const auto& s : points) {
      ojson r;
      r["amplitude_phi0"] = s.amplitude;
      r["solution"] = s.solution;
      r["found"] = s.found;
      r["duration_ns"] = s.found ? ojson(s.duration) : ojson(nullptr);
      r["fidelity"] = s.found ? ojson(s.fidelity) : ojson(nullptr);
      r["target_population"] = s.found ? ojson(s.target_population) : ojson(nullptr);
      r["leakage_error"] = s.found ? ojson(s.leakage_error) : ojson(nullptr);
      r["theta_rad"] = s.found ? ojson(s.theta) : ojson(nullptr);
      j["records"].push_back(r);
    }
    write_output(c.out, j.dump(2) + "\n");
    return;
  }
  Table t;
  t.meta = {{"params", params_source(c)}, {"edge_ns", format_number(a.dyn.edge)}};
  t.columns = {"amplitude_phi0", "solution", "found",           "duration_ns",
               "fidelity",       "theta_rad", "target_population", "leakage_error"};
  const double nan = std::nan("");
  for (const auto& s : points)
    t.rows.push_back({s.amplitude, double(s.solution), s.found ? 1.0 : 0.0, s.found ? s.duration : nan,
                      s.found ? s.fidelity : nan, s.found ? s.theta : nan, s.found ? s.target_population : nan,
                      s.found ? s.leakage_error : nan});
  emit(c, t);
}

// --------------------------------------------------------------------- xeb

struct XebArgs {
  DynamicsArgs dyn;
  std::vector<int> depths = {2, 5, 10, 15, 20, 25, 30, 40, 50};
  int circuits = 100, shots = 3000;
  std::vector<double> t1 = {15.8, 8.3}, t2 = {8.6, 10.8};
  double x90_time = 46.66, cz_time = 60.0;
  std::string gate = "ideal";
  double theta_pi = 1.0, amplitude = 0.409;
  int solution = 1;
  bool no_decoherence = false;
  double depolarizing = 1.0;
  std::optional<double> p1, p2;
};

ojson decay_json(const DecayFit& f) {
  ojson j;
  j["a"] = f.a;
  j["a_stderr"] = f.a_stderr;
  j["p"] = f.p;
  j["p_stderr"] = f.p_stderr;
  return j;
}

void cmd_xeb(const Common& c, const XebArgs& a) {
  if (a.p1 || a.p2) {
    if (!a.p1 || !a.p2) throw UsageError("--p1 and --p2 go together");
    const auto f = interleaved_fidelity(*a.p1, *a.p2);
    Table t;
    t.columns = {"p1", "p2", "fidelity"};
    t.rows.push_back({*a.p1, *a.p2, f.fidelity});
    emit(c, t);
    return;
  }
  if (a.t1.size() != 2 || a.t2.size() != 2) throw UsageError("--t1 and --t2 take two values (qubit A, qubit B)");
  NoiseModel noise;
  noise.t1 = {a.t1[0], a.t1[1]};
  noise.t2_star = {a.t2[0], a.t2[1]};
  noise.single_qubit_gate_time = a.x90_time;
  noise.cz_gate_time = a.cz_time;
  noise.decoherence = !a.no_decoherence;
  noise.depolarizing = a.depolarizing;
  try {
    noise.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  InterleavedGate gate;
  ojson gate_info;
  gate_info["kind"] = a.gate;
  if (a.gate == "cphase") {
    gate.noisy = cphase_matrix(a.theta_pi * units::kPi);
    gate_info["theta_rad"] = a.theta_pi * units::kPi;
  } else if (a.gate == "simulated") {
    const CircuitParams p = load(c);
    const CzSimulator sim(p, a.dyn.options());
    const GateResult g = calibrated_gate(sim, a.amplitude, a.solution, std::nullopt, a.dyn.edge, 300.0);
    gate.noisy = g.computational_unitary;
    gate_info = gate_summary(g);
    gate_info["kind"] = a.gate;
    gate_info["params"] = params_source(c);
  }

  XebOptions xo;
  xo.depths = a.depths;
  xo.circuits = a.circuits;
  xo.shots = a.shots;
  xo.seed = c.seed;
  xo.workers = c.workers;
  const XebRun ref = run_xeb(xo, noise);
  const XebRun inter = run_xeb(xo, noise, gate);
  const DecayFit f1 = fit_depolarization(ref);
  const DecayFit f2 = fit_depolarization(inter);
  const InterleavedFidelity fcz = interleaved_fidelity(f1.p, f2.p, f1.p_stderr, f2.p_stderr);
  const SpecklePurity sp_ref = speckle_purity(ref);
  const SpecklePurity sp_int = speckle_purity(inter);
  const PhaseEstimate phase = extract_conditional_phase(inter);
  if (phase.flat) std::cerr << "warning: cross-entropy is flat in theta; phase estimate is unreliable\n";

  const auto d1 = depth_fidelities(ref);
  const auto d2 = depth_fidelities(inter);
  if (c.format == "json") {
    ojson j;
    j["seed"] = c.seed;
    j["circuits"] = a.circuits;
    j["shots"] = a.shots;
    j["depths"] = a.depths;
    j["gate"] = gate_info;
    j["reference"]["fidelity"] = d1;
    j["interleaved"]["fidelity"] = d2;
    j["reference"]["circuit_fidelities"] = ojson::array();
    j["interleaved"]["circuit_fidelities"] = ojson::array();
    for (std::size_t d = 0; d < a.depths.size(); ++d) {
      j["reference"]["circuit_fidelities"].push_back(circuit_fidelities(ref.circuits[d]));
      j["interleaved"]["circuit_fidelities"].push_back(circuit_fidelities(inter.circuits[d]));
    }
    j["reference"]["fit"] = decay_json(f1);
    j["interleaved"]["fit"] = decay_json(f2);
    j["reference"]["sqrt_purity"] = sp_ref.sqrt_purity;
    j["interleaved"]["sqrt_purity"] = sp_int.sqrt_purity;
    j["reference"]["sqrt_purity_fit"] = decay_json(sp_ref.decay);
    j["interleaved"]["sqrt_purity_fit"] = decay_json(sp_int.decay);
    j["p1"] = f1.p;
    j["p2"] = f2.p;
    j["cz_fidelity"] = fcz.fidelity;
    j["cz_fidelity_stderr"] = fcz.stderr;
    j["sqrt_purity_per_cycle"] = sp_int.decay.p;
    j["theta_estimate_rad"] = phase.theta;
    j["theta_objective_flat"] = phase.flat;
    write_output(c.out, j.dump(2) + "\n");
    return;
  }
  Table t;
  t.meta = {{"seed", std::to_string(c.seed)},
            {"gate", a.gate},
            {"circuits", std::to_string(a.circuits)},
            {"shots", std::to_string(a.shots)},
            {"p1", format_number(f1.p) + " +- " + format_number(f1.p_stderr)},
            {"p2", format_number(f2.p) + " +- " + format_number(f2.p_stderr)},
            {"cz_fidelity", format_number(fcz.fidelity) + " +- " + format_number(fcz.stderr)},
            {"sqrt_purity_per_cycle", format_number(sp_int.decay.p)},
            {"theta_estimate_rad", format_number(phase.theta)}};
  t.columns = {"depth", "reference_fidelity", "interleaved_fidelity", "reference_sqrt_purity",
               "interleaved_sqrt_purity"};
  for (std::size_t d = 0; d < a.depths.size(); ++d)
    t.rows.push_back({double(a.depths[d]), d1[d], d2[d], sp_ref.sqrt_purity[d], sp_int.sqrt_purity[d]});
  emit(c, t);
}

// --------------------------------------------------------------------- fit

struct FitArgs {
  std::string targets;
  bool predict = false;
  int grid_points = 32, levels = 4, kept = 60, max_evaluations = 500;
  double current_density = units::kDefaultCurrentDensity;
};

const std::vector<std::pair<std::string, double FitTargets::*>>& target_keys() {
  static const std::vector<std::pair<std::string, double FitTargets::*>> keys = {
      {"f_a_ghz", &FitTargets::f_a},           {"f_b_ghz", &FitTargets::f_b},
      {"alpha_a_ghz", &FitTargets::alpha_a},   {"alpha_b_ghz", &FitTargets::alpha_b},
      {"zz_zero_mhz", &FitTargets::zeta_zz_zero}, {"f_c_half_ghz", &FitTargets::f_c_half}};
  return keys;
}

FitTargets read_targets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open targets file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
  FitTargets t;
  for (const auto& [key, member] : target_keys()) {
    if (!j.contains(key) || !j[key].is_number()) throw UsageError(path + ": missing numeric target '" + key + "'");
    t.*member = j[key].get<double>();
  }
  return t;
}

int cmd_fit(const Common& c, const FitArgs& a) {
  const CircuitParams seed = load(c);
  FitOptions fo;
  fo.model = model_options(a.grid_points, a.levels, a.kept);
  fo.current_density = a.current_density;
  fo.max_evaluations = a.max_evaluations;
  if (a.predict) {
    const FitTargets t = predict_targets(seed, fo.model);
    ojson j;
    for (const auto& [key, member] : target_keys()) j[key] = t.*member;
    write_output(c.out, j.dump(2) + "\n");
    return 0;
  }
  if (a.targets.empty()) throw UsageError("fit needs --targets (or --predict)");
  const FitTargets targets = read_targets(a.targets);
  const FitResult r = fit_junction_areas(targets, seed, fo);

  std::ostringstream header;
  header << "junction-area fit from " << params_source(c) << ", " << r.evaluations << " evaluations, "
         << (r.converged ? "converged" : "NOT converged") << "\n";
  for (const auto& res : r.residuals)
    header << res.name << ": target " << format_number(res.target) << ", achieved " << format_number(res.achieved)
           << "\n";
  header << "areas (um^2) at " << format_number(a.current_density) << " uA/um^2:";
  for (int j = 0; j < 10; ++j) header << " J" << j + 1 << "=" << format_number(r.areas[j]);
  std::ostringstream body;
  write_params(body, r.params, header.str());
  write_output(c.out, body.str());
  if (!r.converged) {
    std::cerr << "error: junction fit did not reach the target tolerances\n";
    return kExitNumerical;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmon-coupler-transmon circuit simulator"};
  app.require_subcommand(1);

  Common common;
  SpectrumArgs spectrum;
  ZzArgs zz;
  GateArgs gate;
  ScanArgs scan;
  XebArgs xeb;
  FitArgs fit;

  auto* s = app.add_subcommand("spectrum", "Energy levels versus coupler flux");
  add_common(s, common);
  s->add_option("--system", spectrum.system, "full five-mode system or the coupler alone")
      ->check(CLI::IsMember({"full", "coupler"}));
  s->add_option("--flux-min", spectrum.flux_min, "Phi0");
  s->add_option("--flux-max", spectrum.flux_max, "Phi0");
  s->add_option("--flux-step", spectrum.flux_step, "Phi0");
  s->add_option("--flux", spectrum.flux, "Explicit flux values, Phi0")->delimiter(',');
  s->add_option("--phase-points", spectrum.grid_points, "Phase-grid points per mode");
  s->add_option("--levels", spectrum.levels, "Levels per mode");
  s->add_option("--kept", spectrum.kept, "Composite states kept");
  s->add_option("--states", spectrum.states, "Lowest labeled states written");
  s->add_option("--max-excitations", spectrum.max_excitations, "Coupler levels: maximum total quanta");

  auto* z = app.add_subcommand("zz", "ZZ interaction strength versus coupler flux");
  add_common(z, common);
  z->add_option("--flux-min", zz.flux_min, "Phi0");
  z->add_option("--flux-max", zz.flux_max, "Phi0");
  z->add_option("--flux-step", zz.flux_step, "Phi0");
  z->add_option("--flux", zz.flux, "Explicit flux values, Phi0")->delimiter(',');
  z->add_option("--phase-points", zz.grid_points, "Phase-grid points per mode");
  z->add_option("--levels", zz.levels, "Levels per mode (model method)");
  z->add_option("--kept", zz.kept, "Composite states kept");
  z->add_option("--method", zz.method, "Static spectrum or emulated Ramsey sequence")
      ->check(CLI::IsMember({"model", "ramsey"}));
  z->add_option("--dynamics-levels", zz.dynamics_levels, "Levels per mode (ramsey method)");
  z->add_option("--edge", zz.edge, "Pulse edge, ns");
  z->add_option("--delay-min", zz.delay_min, "ns");
  z->add_option("--delay-max", zz.delay_max, "ns");
  z->add_option("--delay-step", zz.delay_step, "ns");
  z->add_option("--offset-low", zz.offset_low, "Virtual-Z offset below --offset-switch, MHz");
  z->add_option("--offset-high", zz.offset_high, "Virtual-Z offset from --offset-switch on, MHz");
  z->add_option("--offset-switch", zz.offset_switch, "Phi0");

  auto* g = app.add_subcommand("gate", "Calibrate and simulate one CZ pulse");
  add_common(g, common);
  add_dynamics(g, gate.dyn);
  g->add_option("--amplitude", gate.amplitude, "Plateau flux, Phi0")->required();
  g->add_option("--solution", gate.solution, "k-th theta = pi crossing")->check(CLI::PositiveNumber);
  g->add_option("--duration", gate.duration, "Total duration, ns (skips calibration)");
  g->add_option("--max-duration", gate.max_duration, "Calibration cap, ns");
  g->add_option("--track", gate.track, "Dressed levels written to the trajectory table")->delimiter(',');

  auto* sc = app.add_subcommand("scan", "Calibrated CZ fidelity versus pulse amplitude");
  add_common(sc, common);
  add_dynamics(sc, scan.dyn);
  sc->add_option("--amp-min", scan.amp_min, "Phi0");
  sc->add_option("--amp-max", scan.amp_max, "Phi0");
  sc->add_option("--amp-step", scan.amp_step, "Phi0");
  sc->add_option("--amplitudes", scan.amplitudes, "Explicit amplitudes, Phi0")->delimiter(',');
  sc->add_option("--solutions", scan.solutions, "Calibration solutions")->delimiter(',');
  sc->add_option("--max-duration", scan.max_duration, "Calibration cap, ns");

  auto* x = app.add_subcommand("xeb", "Cross-entropy benchmarking with and without an interleaved CZ");
  add_common(x, common);
  add_dynamics(x, xeb.dyn);
  x->add_option("--depths", xeb.depths, "Circuit depths")->delimiter(',');
  x->add_option("--circuits", xeb.circuits, "Random circuits per depth")->check(CLI::PositiveNumber);
  x->add_option("--shots", xeb.shots, "Shots per circuit, 0 for exact probabilities")->check(CLI::NonNegativeNumber);
  x->add_option("--t1", xeb.t1, "T1 of qubits A and B, us")->delimiter(',');
  x->add_option("--t2", xeb.t2, "T2* of qubits A and B, us")->delimiter(',');
  x->add_option("--x90-time", xeb.x90_time, "X90 duration, ns");
  x->add_option("--cz-time", xeb.cz_time, "CZ slot, ns");
  x->add_option("--gate", xeb.gate, "Interleaved gate")->check(CLI::IsMember({"ideal", "cphase", "simulated"}));
  x->add_option("--theta", xeb.theta_pi, "CPHASE angle in units of pi");
  x->add_option("--amplitude", xeb.amplitude, "Simulated gate: plateau flux, Phi0");
  x->add_option("--solution", xeb.solution, "Simulated gate: calibration solution");
  x->add_flag("--no-decoherence", xeb.no_decoherence, "Disable T1/T2* decay");
  x->add_option("--depolarizing", xeb.depolarizing, "Depolarizing parameter per layer");
  x->add_option("--p1", xeb.p1, "Only evaluate the interleaved fidelity for given p1, p2");
  x->add_option("--p2", xeb.p2, "See --p1");

  auto* f = app.add_subcommand("fit", "Fit junction areas to spectroscopic targets");
  add_common(f, common);
  f->add_option("--targets", fit.targets, "JSON with f_a_ghz, f_b_ghz, alpha_a_ghz, alpha_b_ghz, zz_zero_mhz, "
                                          "f_c_half_ghz");
  f->add_flag("--predict", fit.predict, "Write the targets predicted by the input parameters instead");
  f->add_option("--phase-points", fit.grid_points, "Phase-grid points per mode");
  f->add_option("--levels", fit.levels, "Levels per mode for the ZZ target");
  f->add_option("--max-evaluations", fit.max_evaluations, "Budget per stage");
  f->add_option("--current-density", fit.current_density, "uA / um^2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (s->parsed()) cmd_spectrum(common, spectrum);
    if (z->parsed()) cmd_zz(common, zz);
    if (g->parsed()) cmd_gate(common, gate);
    if (sc->parsed()) cmd_scan(common, scan);
    if (x->parsed()) cmd_xeb(common, xeb);
    if (f->parsed()) return cmd_fit(common, fit);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParamsFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
