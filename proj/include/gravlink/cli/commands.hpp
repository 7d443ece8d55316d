#pragma once

// Drivers behind the gravlink subcommands. Each returns its report as a JSON
// document (or CSV text for scans) so the binary stays a thin shell.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gravlink/bmv.hpp"
#include "gravlink/cli/config.hpp"
#include "gravlink/cli/json_writer.hpp"
#include "gravlink/frames.hpp"
#include "gravlink/modesum.hpp"

namespace gravlink::cli {

// Bad command-line flags (exit code 2, like config errors).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Json vec_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

// Config fragment that reproduces the scenario when fed back in.
inline Json scenario_json(const BmvScenario& s) {
  const BranchPositions& p = s.positions();
  Json j;
  j["constants"] = {{"G", s.constants().G}, {"c", s.constants().c}, {"hbar", s.constants().hbar}};
  j["mass"] = s.mass();
  j["tau"] = s.tau();
  j["geometry"] = {{"mode", "positions"},
                   {"positions", {{"l1", vec_json(p.l1)}, {"u1", vec_json(p.u1)}, {"l2", vec_json(p.l2)}, {"u2", vec_json(p.u2)}}}};
  return j;
}

inline Json phases_json(const PhaseTable& p) {
  return {{"ll", p.phi_ll}, {"lu", p.phi_lu}, {"ul", p.phi_ul}, {"uu", p.phi_uu}};
}

inline Json distances_json(const PairDistances& d) {
  return {{"ll", d[0]}, {"lu", d[1]}, {"ul", d[2]}, {"uu", d[3]}};
}

inline Json entanglement_json(const PhaseTable& p) {
  const TwoQubitState s = assemble_state(p);
  return {{"delta_phi", relative_phase(p)}, {"negativity", negativity(s)}, {"entropy", entanglement_entropy(s)}};
}

inline void merge_into(Json& target, const Json& extra) {
  for (auto it = extra.begin(); it != extra.end(); ++it) target[it.key()] = it.value();
}

inline PhaseMethod parse_phase_method(const std::string& m) {
  if (m == "newtonian") return PhaseMethod::newtonian;
  if (m == "action" || m == "action_integral") return PhaseMethod::action_integral;
  throw UsageError("unknown phase method '" + m + "' (expected newtonian or action)");
}

inline std::string to_string(PhaseMethod m) { return m == PhaseMethod::newtonian ? "newtonian" : "action_integral"; }

inline Json cmd_phase(const ScenarioFile& f, PhaseMethod method) {
  const BmvScenario s = f.scenario();
  const PhaseTable p = phase_table(s, method);
  Json r;
  r["command"] = "phase";
  r["method"] = to_string(method);
  r["scenario"] = scenario_json(s);
  r["distances"] = distances_json(cross_distances(s.positions()));
  r["phases"] = phases_json(p);
  merge_into(r, entanglement_json(p));
  if (f.boost) {
    const FramePhaseResult fr = phase_in_frame(relative_phase(p), f.boost->beta, f.boost->model);
    r["boost"] = {{"beta", f.boost->beta},
                  {"axis", vec_json(f.boost->axis)},
                  {"model", to_string(f.boost->model)},
                  {"phase_factor", fr.phase_factor.coefficients()},
                  {"delta_phi", fr.phase_value},
                  {"residual", fr.residual},
                  {"exact_factor", fr.exact_factor},
                  {"exact_residual", fr.exact_residual}};
  }
  return r;
}

inline std::string format_phase_table(const Json& r) {
  std::ostringstream os;
  os << "method      " << r["method"].get<std::string>() << "\n";
  os << "pair  distance                  phase\n";
  for (const char* k : {"ll", "lu", "ul", "uu"})
    os << k << "    " << format_double(r["distances"][k].get<double>()) << "    "
       << format_double(r["phases"][k].get<double>()) << "\n";
  os << "delta_phi   " << format_double(r["delta_phi"].get<double>()) << "\n";
  os << "negativity  " << format_double(r["negativity"].get<double>()) << "\n";
  os << "entropy     " << format_double(r["entropy"].get<double>()) << "\n";
  return os.str();
}

struct BoostScanOptions {
  std::optional<double> beta_max;
  int steps = 30;
  std::optional<QuantizationModel> model;
  int order = kDefaultSeriesOrder;
  unsigned workers = 0;
};

struct BoostScanOutput {
  std::string csv;
  Json summary;
};

inline BoostScanOutput cmd_boost_scan(const ScenarioFile& f, const BoostScanOptions& o) {
  double beta_max = 0.0;
  if (o.beta_max) beta_max = *o.beta_max;
  else if (f.boost) beta_max = std::abs(f.boost->beta);
  else throw UsageError("boost-scan needs --beta-max or a boost.beta entry in the config");
  if (!(beta_max >= 0.0 && beta_max < 1.0)) throw UsageError("--beta-max must lie in [0, 1)");
  if (o.steps < 1) throw UsageError("--steps must be at least 1");
  if (o.order < 2 || o.order > 200) throw UsageError("--order must lie in [2, 200]");
  const QuantizationModel model =
      o.model ? *o.model : (f.boost ? f.boost->model : QuantizationModel::scalar_plus_vector);

  const BmvScenario s = f.scenario();
  const PhaseTable rest = phase_table(s);
  std::vector<double> grid;
  for (int i = 0; i <= o.steps; ++i) grid.push_back(beta_max * i / o.steps);
  const std::vector<ResidualRow> rows = invariance_residual_scan(grid, model, o.order, o.workers);

  std::ostringstream csv;
  csv << "beta,phase_factor,residual,negativity,exact_factor,exact_residual\n";
  double max_abs_residual = 0.0;
  for (const ResidualRow& row : rows) {
    const auto a = rest.as_array();
    const PhaseTable boosted{a[0] * row.factor, a[1] * row.factor, a[2] * row.factor, a[3] * row.factor};
    const double n = negativity(assemble_state(boosted));
    csv << format_double(row.beta) << ',' << format_double(row.factor) << ',' << format_double(row.residual) << ','
        << format_double(n) << ',' << format_double(row.exact_factor) << ',' << format_double(row.exact_residual)
        << '\n';
    max_abs_residual = std::max(max_abs_residual, std::abs(row.residual));
  }
  BoostScanOutput out;
  out.csv = csv.str();
  out.summary = {{"command", "boost-scan"},
                 {"model", to_string(model)},
                 {"order", o.order},
                 {"beta_max", beta_max},
                 {"rows", rows.size()},
                 {"max_abs_residual", max_abs_residual},
                 {"rest_delta_phi", relative_phase(rest)}};
  return out;
}

inline Json cmd_bell(const ScenarioFile& f, std::optional<double> gamma_override = std::nullopt) {
  double gamma = 0.0;
  if (gamma_override) gamma = *gamma_override;
  else if (f.bell) gamma = f.bell->gamma_final;
  else throw UsageError("bell needs --gamma or a bell.gamma_final entry in the config");
  if (!(std::isfinite(gamma) && gamma >= 1.0)) throw UsageError("final gamma must be >= 1");

  const BellParadoxResult b = bell_paradox_phase(f.scenario(), gamma);
  const auto before = b.rest_phases.as_array();
  const auto after = b.stretched_phases.as_array();
  Json ratios;
  const char* names[] = {"ll", "lu", "ul", "uu"};
  for (std::size_t i = 0; i < 4; ++i) ratios[names[i]] = before[i] != 0.0 ? after[i] / before[i] : 1.0;
  const double dphi_rest = relative_phase(b.rest_phases);
  const double dphi_after = relative_phase(b.stretched_phases);
  Json r;
  r["command"] = "bell";
  r["gamma_final"] = gamma;
  r["rest"] = {{"distances", distances_json(b.rest_distances)}, {"phases", phases_json(b.rest_phases)}};
  merge_into(r["rest"], entanglement_json(b.rest_phases));
  r["stretched"] = {{"distances", distances_json(b.stretched_distances)}, {"phases", phases_json(b.stretched_phases)}};
  merge_into(r["stretched"], entanglement_json(b.stretched_phases));
  r["stretched"]["scenario"] = scenario_json(b.stretched);
  r["phase_ratio"] = ratios;
  r["delta_phi_ratio"] = dphi_rest != 0.0 ? dphi_after / dphi_rest : 1.0;
  r["expected_ratio"] = 1.0 / gamma;
  return r;
}

inline Json commutator_json(const CommutatorReport& c) {
  Json j = {{"number_quadrature_norm", c.number_quadrature_norm},
            {"ladder_identity_defect", c.ladder_identity_defect},
            {"canonical_defect_low_occupation", c.canonical_defect_low_occupation}};
  if (c.cross_mode_checked) j["cross_mode_norm"] = c.cross_mode_norm;
  j["pass"] = c.pass;
  return j;
}

inline Json cmd_modesum(const ScenarioFile& f) {
  if (!f.modesum) throw UsageError("modesum needs a modesum section in the config");
  const ModesumSpec& m = *f.modesum;
  const BmvScenario s = f.scenario();
  const PhysicalConstants& k = s.constants();

  TruncatedHilbertConfig cfg;
  cfg.fock_cutoff = m.fock_cutoff;
  cfg.mode_count = static_cast<int>(m.wavenumbers.size());
  cfg.budget = m.budget;
  const std::size_t dim = cfg.dimension();

  const ModeSet modes = make_mode_set(m.wavenumbers, m.volume, s.mass(), k);
  const Vec3 axis = m.axis ? *m.axis : f.separation_axis();
  const BranchCoordinates x = project_branches(s.positions(), axis);
  const ModeSumHamiltonian h = build_hamiltonian(modes, x, cfg, k);
  bool hermitian = true;
  for (std::size_t b = 0; b < 4; ++b) hermitian = hermitian && is_hermitian(h.block(b));
  const ModeSumPropagator prop(h, k.hbar);
  const QuantumState psi0 = initial_state(cfg);

  const double t_end = m.t_end ? *m.t_end : s.tau();
  Json samples = Json::array();
  double max_td = 0.0;
  double max_population_drift = 0.0;
  double final_td = 0.0;
  for (int i = 0; i <= m.samples; ++i) {
    const double t = t_end * i / m.samples;
    const QuantumState psi = prop.apply(psi0, t);
    const DensityMatrix rho = reduced_mass_state(psi);
    const DisplacementOracle o = conditional_displacement_oracle(modes, x, t);
    const double td = trace_distance(rho, o.reduced_state);
    for (double p : branch_populations(psi)) max_population_drift = std::max(max_population_drift, std::abs(p - 0.25));
    max_td = std::max(max_td, td);
    if (i == m.samples) final_td = td;
    samples.push_back({{"t", t},
                       {"negativity", negativity(rho)},
                       {"oracle_negativity", negativity(o.reduced_state)},
                       {"trace_distance", td},
                       {"max_displacement", o.max_displacement},
                       {"oracle_delta_phi", relative_phase(o.phases)}});
  }

  Json mode_list = Json::array();
  for (std::size_t j = 0; j < modes.size(); ++j)
    mode_list.push_back({{"k", modes.wavenumbers[j]},
                         {"omega", modes.frequencies[j]},
                         {"g", modes.couplings[j]},
                         {"period", 2.0 * std::numbers::pi / modes.frequencies[j]}});

  Json r;
  r["command"] = "modesum";
  r["dimension"] = dim;
  r["fock_cutoff"] = cfg.fock_cutoff;
  r["modes"] = mode_list;
  r["axis"] = vec_json(axis);
  r["hermitian"] = hermitian;
  r["commutators"] = commutator_json(commutator_check(modes, cfg));
  r["t_end"] = t_end;
  r["final_trace_distance"] = final_td;
  r["max_trace_distance"] = max_td;
  r["max_branch_population_drift"] = max_population_drift;
  r["samples"] = samples;
  return r;
}

}  // namespace gravlink::cli
