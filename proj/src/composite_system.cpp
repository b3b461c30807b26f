#include "tcsim/composite_system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tcsim/linalg.hpp"
#include "tcsim/parallel.hpp"

namespace tcsim {

std::string label_to_string(const Label& label) {
  static const char kQubit[] = "gefhijkl";
  std::string out;
  for (std::size_t i = 0; i < label.size(); ++i) {
    const int n = label[i];
    if (label.size() == kNumModes && i < 2) {
      out += (n >= 0 && n < 8) ? kQubit[n] : '?';
    } else {
      out += std::to_string(n);
    }
  }
  return out;
}

Label parse_label(const std::string& text) {
  static const std::string kQubit = "gefhijkl";
  Label out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (text.size() == kNumModes && i < 2) {
      const auto pos = kQubit.find(c);
      if (pos == std::string::npos) throw std::invalid_argument("bad qubit level '" + std::string(1, c) + "'");
      out.push_back(static_cast<int>(pos));
    } else {
      if (c < '0' || c > '9') throw std::invalid_argument("bad level digit '" + std::string(1, c) + "'");
      out.push_back(c - '0');
    }
  }
  if (out.empty()) throw std::invalid_argument("empty label");
  return out;
}

int basis_index(const Label& digits, int levels) {
  int k = 0;
  for (int d : digits) {
    if (d < 0 || d >= levels) throw std::out_of_range("level outside the truncated basis");
    k = k * levels + d;
  }
  return k;
}

Label basis_digits(int index, int modes, int levels) {
  Label d(modes);
  for (int i = modes - 1; i >= 0; --i) {
    d[i] = index % levels;
    index /= levels;
  }
  return d;
}

SubsystemSpectrum mode_spectrum(const CircuitParams& params, Mode mode, const FluxConfig& fluxes,
                                const Eigen::Matrix<double, kNumModes, kNumModes>& charging, const PhaseGrid& grid,
                                int levels) {
  const int i = static_cast<int>(mode);
  return diagonalize_subsystem(mode_potential(params, mode, fluxes), charging(i, i), grid, levels);
}

ModeSpectra build_mode_spectra(const CircuitParams& params, const FluxConfig& fluxes, const PhaseGrid& grid,
                               int levels) {
  ModeSpectra out;
  out.charging = mode_charging_energies(params);
  for (int i = 0; i < kNumModes; ++i)
    out.modes[i] = mode_spectrum(params, static_cast<Mode>(i), fluxes, out.charging, grid, levels);
  return out;
}

Eigen::MatrixXd assemble_full_hamiltonian(const std::vector<const SubsystemSpectrum*>& subs,
                                          const Eigen::MatrixXd& couplings, int levels) {
  const int modes = static_cast<int>(subs.size());
  if (couplings.rows() != modes || couplings.cols() != modes)
    throw std::invalid_argument("coupling matrix size does not match the number of subsystems");
  if (levels < 1) throw std::invalid_argument("levels must be positive");
  for (const auto* s : subs) {
    if (s->eigenvalues.size() < levels || s->charge_elements.rows() < levels)
      throw std::invalid_argument("subsystem spectrum has fewer levels than the requested truncation");
  }
  int dim = 1;
  for (int i = 0; i < modes; ++i) dim *= levels;

  std::vector<Eigen::MatrixXd> re(modes), im(modes);
  for (int i = 0; i < modes; ++i) {
    re[i] = subs[i]->charge_elements.topLeftCorner(levels, levels).real();
    im[i] = subs[i]->charge_elements.topLeftCorner(levels, levels).imag();
  }

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<int> stride(modes);
  stride[modes - 1] = 1;
  for (int i = modes - 2; i >= 0; --i) stride[i] = stride[i + 1] * levels;

  for (int r = 0; r < dim; ++r) {
    const Label d = basis_digits(r, modes, levels);
    double diag = 0.0;
    for (int i = 0; i < modes; ++i) diag += subs[i]->eigenvalues(d[i]);
    h(r, r) += diag;
    for (int i = 0; i < modes; ++i) {
      for (int j = i + 1; j < modes; ++j) {
        const double g = 8.0 * couplings(i, j);
        if (g == 0.0) continue;
        for (int a = 0; a < levels; ++a) {
          for (int b = 0; b < levels; ++b) {
            // Re(n_i (x) n_j) = Re Re - Im Im
            const double v = re[i](d[i], a) * re[j](d[j], b) - im[i](d[i], a) * im[j](d[j], b);
            if (v == 0.0) continue;
            const int c = r + (a - d[i]) * stride[i] + (b - d[j]) * stride[j];
            h(r, c) += g * v;
          }
        }
      }
    }
  }
  return h;
}

Eigen::MatrixXd assemble_full_hamiltonian(const ModeSpectra& spectra, int levels) {
  std::vector<const SubsystemSpectrum*> subs;
  for (const auto& s : spectra.modes) subs.push_back(&s);
  return assemble_full_hamiltonian(subs, Eigen::MatrixXd(spectra.charging), levels);
}

std::optional<int> CompositeSpectrum::find(const Label& label) const {
  for (std::size_t s = 0; s < labels.size(); ++s)
    if (labels[s] == label) return static_cast<int>(s);
  return std::nullopt;
}

double CompositeSpectrum::energy(const Label& label) const {
  const auto s = find(label);
  if (!s) throw NumericalError("state " + label_to_string(label) + " is not among the labeled levels");
  return eigenvalues(*s);
}

std::vector<int> assign_labels(const Eigen::MatrixXd& v) {
  const int dim = static_cast<int>(v.rows());
  const int kept = static_cast<int>(v.cols());
  struct Entry {
    double overlap;
    int basis;
    int state;
  };
  std::vector<Entry> entries;
  for (int s = 0; s < kept; ++s)
    for (int b = 0; b < dim; ++b) {
      const double o = v(b, s) * v(b, s);
      if (o > 1e-4) entries.push_back({o, b, s});
    }
  // Ties broken by state then basis index so the result is deterministic.
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    if (x.overlap != y.overlap) return x.overlap > y.overlap;
    if (x.state != y.state) return x.state < y.state;
    return x.basis < y.basis;
  });
  std::vector<int> label(kept, -1);
  std::vector<char> claimed(dim, 0);
  int assigned = 0;
  for (const auto& e : entries) {
    if (label[e.state] >= 0 || claimed[e.basis]) continue;
    label[e.state] = e.basis;
    claimed[e.basis] = 1;
    if (++assigned == kept) break;
  }
  for (int s = 0; s < kept; ++s) {
    if (label[s] >= 0) continue;
    int best = -1;
    for (int b = 0; b < dim; ++b)
      if (!claimed[b] && (best < 0 || v(b, s) * v(b, s) > v(best, s) * v(best, s))) best = b;
    label[s] = best;
    claimed[best] = 1;
  }
  return label;
}

std::vector<int> product_parity(const std::vector<const SubsystemSpectrum*>& subs, int levels) {
  for (const auto* s : subs) {
    if (static_cast<int>(s->parity.size()) < levels) return {};
    for (int k = 0; k < levels; ++k)
      if (s->parity[k] == 0) return {};
  }
  const int modes = static_cast<int>(subs.size());
  int dim = 1;
  for (int i = 0; i < modes; ++i) dim *= levels;
  std::vector<int> out(dim);
  for (int r = 0; r < dim; ++r) {
    const Label d = basis_digits(r, modes, levels);
    int p = 1;
    for (int i = 0; i < modes; ++i) p *= subs[i]->parity[d[i]];
    out[r] = p;
  }
  return out;
}

linalg::SymmetricEigen eigh_by_sector(const Eigen::MatrixXd& h, int kept, const std::vector<int>& sectors) {
  const int dim = static_cast<int>(h.rows());
  if (sectors.empty()) return linalg::eigh_lowest(h, kept);
  if (static_cast<int>(sectors.size()) != dim) throw std::invalid_argument("sector list does not match H");

  std::vector<int> ids(sectors);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  struct Pair {
    double value;
    int sector;
    int column;
  };
  std::vector<Pair> pairs;
  std::vector<std::vector<int>> members(ids.size());
  std::vector<linalg::SymmetricEigen> blocks(ids.size());
  for (std::size_t b = 0; b < ids.size(); ++b) {
    for (int r = 0; r < dim; ++r)
      if (sectors[r] == ids[b]) members[b].push_back(r);
    const int m = static_cast<int>(members[b].size());
    Eigen::MatrixXd sub(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) sub(i, j) = h(members[b][i], members[b][j]);
    blocks[b] = linalg::eigh_lowest(sub, std::min(kept, m));
    for (int c = 0; c < blocks[b].values.size(); ++c) pairs.push_back({blocks[b].values(c), static_cast<int>(b), c});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    if (x.value != y.value) return x.value < y.value;
    return x.sector < y.sector;
  });
  kept = std::min<int>(kept, static_cast<int>(pairs.size()));
  linalg::SymmetricEigen out;
  out.values.resize(kept);
  out.vectors = Eigen::MatrixXd::Zero(dim, kept);
  for (int k = 0; k < kept; ++k) {
    const auto& p = pairs[k];
    out.values(k) = p.value;
    const auto& rows = members[p.sector];
    for (std::size_t i = 0; i < rows.size(); ++i) out.vectors(rows[i], k) = blocks[p.sector].vectors(i, p.column);
  }
  return out;
}

CompositeSpectrum diagonalize_and_label(const Eigen::MatrixXd& h, int modes, int levels, int kept,
                                        const std::vector<int>& sectors) {
  CompositeSpectrum out;
  out.modes = modes;
  out.levels = levels;
  auto eig = eigh_by_sector(h, kept, sectors);
  out.eigenvalues = eig.values.array() - eig.values(0);
  out.eigenvectors = std::move(eig.vectors);
  const auto basis = assign_labels(out.eigenvectors);
  for (std::size_t s = 0; s < basis.size(); ++s) {
    out.labels.push_back(basis_digits(basis[s], modes, levels));
    const double c = out.eigenvectors(basis[s], static_cast<Eigen::Index>(s));
    out.overlap_quality.push_back(c * c);
  }
  if (modes == kNumModes) {
    for (const Label& l : {Label{0, 0, 0, 0, 0}, Label{1, 0, 0, 0, 0}, Label{0, 1, 0, 0, 0}, Label{1, 1, 0, 0, 0}}) {
      const auto s = out.find(l);
      if (!s || out.overlap_quality[*s] < 0.5) out.labeling_warning = true;
    }
  }
  return out;
}

double zz_strength(const CompositeSpectrum& s) {
  const double f11 = s.energy({1, 1, 0, 0, 0});
  const double f10 = s.energy({1, 0, 0, 0, 0});
  const double f01 = s.energy({0, 1, 0, 0, 0});
  return 1e3 * (f11 - f10 - f01);
}

std::vector<double> flux_grid(double lo, double hi, int points) {
  if (points < 1) throw std::invalid_argument("flux grid needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
  g.back() = hi;
  return g;
}

CompositeSpectrum composite_spectrum(const CircuitParams& params, const FluxConfig& fluxes,
                                     const ModelOptions& options) {
  const auto spectra = build_mode_spectra(params, fluxes, options.grid, options.levels);
  const auto h = assemble_full_hamiltonian(spectra, options.levels);
  std::vector<const SubsystemSpectrum*> subs;
  for (const auto& m : spectra.modes) subs.push_back(&m);
  return diagonalize_and_label(h, kNumModes, options.levels, options.kept_states,
                               product_parity(subs, options.levels));
}

ZZCurve zz_curve(const CircuitParams& params, const std::vector<double>& coupler_flux, const ModelOptions& options,
                 int workers) {
  ZZCurve out;
  out.flux = coupler_flux;
  out.zeta_mhz.assign(coupler_flux.size(), 0.0);
  std::vector<char> warn(coupler_flux.size(), 0);
  parallel_for(coupler_flux.size(), workers, [&](std::size_t i) {
    const auto s = composite_spectrum(params, FluxConfig{0.0, 0.0, coupler_flux[i]}, options);
    out.zeta_mhz[i] = zz_strength(s);
    warn[i] = s.labeling_warning;
  });
  out.labeling_warning.assign(warn.begin(), warn.end());
  return out;
}

namespace {

std::vector<Label> coupler_labels(int max_excitations, int levels) {
  std::vector<Label> out;
  for (int total = 1; total <= max_excitations; ++total)
    for (int l = total; l >= 0; --l)
      for (int m = total - l; m >= 0; --m) {
        const int r = total - l - m;
        if (l < levels && m < levels && r < levels) out.push_back({l, m, r});
      }
  return out;
}

}  // namespace

CouplerLevels coupler_spectrum(const CircuitParams& params, const std::vector<double>& coupler_flux,
                               const ModelOptions& options, int max_excitations, int workers) {
  const Eigen::Matrix3d ec = coupler_charging_energies(params);
  const int levels = options.levels;
  const auto wanted = coupler_labels(max_excitations, levels);

  CouplerLevels out;
  out.flux = coupler_flux;
  for (const auto& l : wanted) out.labels.push_back(label_to_string(l));
  out.energies.resize(static_cast<Eigen::Index>(coupler_flux.size()), static_cast<Eigen::Index>(wanted.size()));

  const auto left = diagonalize_subsystem(mode_potential(params, Mode::CouplerLeft, {}), ec(0, 0), options.grid, levels);
  const auto right =
      diagonalize_subsystem(mode_potential(params, Mode::CouplerRight, {}), ec(2, 2), options.grid, levels);

  parallel_for(coupler_flux.size(), workers, [&](std::size_t k) {
    const FluxConfig f{0.0, 0.0, coupler_flux[k]};
    const auto mid = diagonalize_subsystem(mode_potential(params, Mode::CouplerMid, f), ec(1, 1), options.grid, levels);
    const auto h = assemble_full_hamiltonian({&left, &mid, &right}, Eigen::MatrixXd(ec), levels);
    const auto s = diagonalize_and_label(h, 3, levels, static_cast<int>(h.rows()));
    for (std::size_t j = 0; j < wanted.size(); ++j)
      out.energies(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = s.energy(wanted[j]);
  });
  return out;
}

double coupler_tunable_frequency(const CircuitParams& params, double coupler_flux, const ModelOptions& options) {
  const auto levels = coupler_spectrum(params, {coupler_flux}, options, 1, 1);
  for (std::size_t j = 0; j < levels.labels.size(); ++j)
    if (levels.labels[j] == "010") return levels.energies(0, static_cast<Eigen::Index>(j));
  throw NumericalError("coupler level 010 not found");
}

QubitTransitions qubit_transitions(const CircuitParams& params, Mode qubit, const FluxConfig& fluxes,
                                   const PhaseGrid& grid) {
  if (qubit != Mode::QubitA && qubit != Mode::QubitB) throw std::invalid_argument("not a qubit mode");
  const auto s = mode_spectrum(params, qubit, fluxes, mode_charging_energies(params), grid, 3);
  return {s.eigenvalues(1), s.eigenvalues(2) - 2.0 * s.eigenvalues(1)};
}

}  // namespace tcsim
