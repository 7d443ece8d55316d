#pragma once

// Boosted and accelerated descriptions of the experiment.
//
// Index placement: the stress-energy is contravariant and boosts with Lambda, the
// metric perturbation is covariant and boosts with Lambda^{-1}. For a boost along x
// this gives T^{0'1'} = -beta gamma^2 T^{00} and h_{0'1'} = +beta gamma^2 h_{00}, so
// each mixed term enters the contraction with a minus sign and the two of them
// together produce the (1 - 2 beta^2) factor. The 1'1' term is O(beta^4) relative
// to the rest and is not part of either quantization model.

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "gravlink/bmv.hpp"
#include "gravlink/errors.hpp"
#include "gravlink/series.hpp"
#include "gravlink/tensorkit.hpp"

namespace gravlink {

enum class QuantizationModel { scalar_only, scalar_plus_vector };

inline std::string to_string(QuantizationModel m) {
  return m == QuantizationModel::scalar_only ? "scalar_only" : "scalar_plus_vector";
}

// Accepts the canonical names and the short CLI spellings "scalar" / "full".
inline QuantizationModel parse_quantization_model(const std::string& s) {
  if (s == "scalar_only" || s == "scalar") return QuantizationModel::scalar_only;
  if (s == "scalar_plus_vector" || s == "full") return QuantizationModel::scalar_plus_vector;
  throw DomainError("unknown quantization model '" + s + "'");
}

using ComponentIndex = std::pair<int, int>;
using ComponentMap = std::map<ComponentIndex, double>;
using ComponentSeriesMap = std::map<ComponentIndex, TruncatedSeries>;

namespace detail {

inline void require_subluminal(double beta) {
  if (!(std::abs(beta) < 1.0)) throw DomainError("superluminal boost");
}

inline void require_agreement(const ComponentMap& closed_form, const Rank2Tensor& boosted, const char* what) {
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const auto it = closed_form.find({mu, nu});
      const double expected = it == closed_form.end() ? 0.0 : it->second;
      if (std::abs(boosted(mu, nu) - expected) > 1e-12 * std::max(1.0, std::abs(expected)))
        throw NumericalError(std::string(what) + " disagrees with the tensor boost");
    }
  }
}

}  // namespace detail

// Coefficients on T^{00} of the boosted dust components, cross-checked against the
// general tensor transformation.
inline ComponentMap boost_stress_components(double beta) {
  detail::require_subluminal(beta);
  const double g2 = 1.0 / (1.0 - beta * beta);
  ComponentMap m{{{0, 0}, g2}, {{0, 1}, -beta * g2}, {{1, 0}, -beta * g2}, {{1, 1}, beta * beta * g2}};
  const Rank2Tensor dust = Rank2Tensor::diagonal(1.0, 0.0, 0.0, 0.0, Variance::contravariant);
  detail::require_agreement(m, transform_rank2(dust, boost_x(beta)), "stress boost");
  return m;
}

// Coefficients on h_{00} of the boosted metric components each model makes quantum.
inline ComponentMap boost_metric_components(double beta, QuantizationModel model) {
  detail::require_subluminal(beta);
  const double g2 = 1.0 / (1.0 - beta * beta);
  ComponentMap m{{{0, 0}, g2}};
  if (model == QuantizationModel::scalar_plus_vector) {
    m[{0, 1}] = beta * g2;
    m[{1, 0}] = beta * g2;
  }
  // The full covariant boost also has a 1'1' entry; compare only what the model keeps.
  const Rank2Tensor scalar = Rank2Tensor::diagonal(1.0, 0.0, 0.0, 0.0, Variance::covariant);
  const Rank2Tensor boosted = transform_rank2(scalar, boost_x(beta));
  for (const auto& [idx, value] : m)
    if (std::abs(boosted(idx.first, idx.second) - value) > 1e-12 * std::max(1.0, std::abs(value)))
      throw NumericalError("metric boost disagrees with the tensor boost");
  return m;
}

inline ComponentSeriesMap stress_component_series(int order = kDefaultSeriesOrder) {
  const TruncatedSeries g2 = gamma_power_series(2, order);
  const TruncatedSeries mixed = TruncatedSeries::monomial(-1.0, 1, order) * g2;
  return {{{0, 0}, g2},
          {{0, 1}, mixed},
          {{1, 0}, mixed},
          {{1, 1}, TruncatedSeries::monomial(1.0, 2, order) * g2}};
}

inline ComponentSeriesMap metric_component_series(QuantizationModel model, int order = kDefaultSeriesOrder) {
  const TruncatedSeries g2 = gamma_power_series(2, order);
  ComponentSeriesMap m{{{0, 0}, g2}};
  if (model == QuantizationModel::scalar_plus_vector) {
    const TruncatedSeries mixed = TruncatedSeries::monomial(1.0, 1, order) * g2;
    m.emplace(ComponentIndex{0, 1}, mixed);
    m.emplace(ComponentIndex{1, 0}, mixed);
  }
  return m;
}

// Multiplier on the rest-frame phase: sum over the model's metric components of
// h_{mu'nu'} T^{mu'nu'} in units of h_{00} T^{00}.
inline TruncatedSeries phase_factor_series(QuantizationModel model, int order = kDefaultSeriesOrder) {
  const ComponentSeriesMap stress = stress_component_series(order);
  TruncatedSeries acc(order);
  for (const auto& [idx, h] : metric_component_series(model, order)) acc = acc + h * stress.at(idx);
  return acc;
}

// Same contraction evaluated without truncation: gamma^4 or gamma^4 (1 - 2 beta^2).
inline double exact_phase_factor(double beta, QuantizationModel model) {
  const ComponentMap stress = boost_stress_components(beta);
  double acc = 0.0;
  for (const auto& [idx, h] : boost_metric_components(beta, model)) acc += h * stress.at(idx);
  return acc;
}

struct FramePhaseResult {
  QuantizationModel model = QuantizationModel::scalar_only;
  double beta = 0.0;
  TruncatedSeries phase_factor;
  double phase_value = 0.0;   // rest phase times the truncated factor at beta
  double residual = 0.0;      // truncated factor at beta, minus one
  double exact_factor = 1.0;  // untruncated factor
  double exact_residual = 0.0;
};

inline FramePhaseResult phase_in_frame(double rest_phase, double beta, QuantizationModel model,
                                       int order = kDefaultSeriesOrder) {
  detail::require_subluminal(beta);
  if (order < 2) throw DomainError("frame phase expansion needs order >= 2");
  FramePhaseResult r;
  r.model = model;
  r.beta = beta;
  r.phase_factor = phase_factor_series(model, order);
  const double factor = evaluate(r.phase_factor, beta);
  r.phase_value = rest_phase * factor;
  r.residual = factor - 1.0;
  r.exact_factor = exact_phase_factor(beta, model);
  r.exact_residual = r.exact_factor - 1.0;
  return r;
}

struct ResidualRow {
  double beta = 0.0;
  double factor = 1.0;
  double residual = 0.0;
  double exact_factor = 1.0;
  double exact_residual = 0.0;
};

// Rows come back in grid order however the work is split.
inline std::vector<ResidualRow> invariance_residual_scan(const std::vector<double>& beta_grid, QuantizationModel model,
                                                         int order = kDefaultSeriesOrder, unsigned workers = 0) {
  for (double b : beta_grid)
    if (!(b >= 0.0 && b < 1.0)) throw DomainError("scan velocities must lie in [0, 1)");
  if (order < 2) throw DomainError("frame phase expansion needs order >= 2");
  std::vector<ResidualRow> rows(beta_grid.size());
  const TruncatedSeries factor = phase_factor_series(model, order);
  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double b = beta_grid[i];
      ResidualRow& row = rows[i];
      row.beta = b;
      row.factor = evaluate(factor, b);
      row.residual = row.factor - 1.0;
      row.exact_factor = exact_phase_factor(b, model);
      row.exact_residual = row.exact_factor - 1.0;
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n = rows.size();
  const std::size_t chunks = std::min<std::size_t>(workers, std::max<std::size_t>(1, n / 64));
  if (chunks <= 1) {
    fill(0, n);
    return rows;
  }
  std::vector<std::future<void>> jobs;
  const std::size_t step = (n + chunks - 1) / chunks;
  for (std::size_t begin = 0; begin < n; begin += step)
    jobs.push_back(std::async(std::launch::async, fill, begin, std::min(n, begin + step)));
  for (auto& j : jobs) j.get();
  return rows;
}

// Acceleration of the observer alone leaves the interferometers' proper geometry
// untouched, so the relative phase is the stationary one.
inline double accelerated_observer_phase(const BmvScenario& s, PhaseMethod method = PhaseMethod::newtonian) {
  return relative_phase(phase_table(s, method));
}

struct BellParadoxResult {
  double gamma = 1.0;
  BmvScenario rest;
  BmvScenario stretched;
  PhaseTable rest_phases;
  PhaseTable stretched_phases;
  PairDistances rest_distances{};
  PairDistances stretched_distances{};
};

// Both interferometers accelerated identically to a final gamma: their proper
// separation grows by gamma. Positions are scaled about the origin, so every
// cross-pair distance stretches by gamma and every pair phase drops by 1/gamma.
inline BellParadoxResult bell_paradox_phase(const BmvScenario& s, double gamma_final,
                                            PhaseMethod method = PhaseMethod::newtonian) {
  if (!(std::isfinite(gamma_final) && gamma_final >= 1.0)) throw DomainError("final gamma must be >= 1");
  const BranchPositions& p = s.positions();
  const BranchPositions q{gamma_final * p.l1, gamma_final * p.u1, gamma_final * p.l2, gamma_final * p.u2};
  BellParadoxResult r{gamma_final, s, s.with_positions(q), {}, {}, {}, {}};
  r.rest_phases = phase_table(r.rest, method);
  r.stretched_phases = phase_table(r.stretched, method);
  r.rest_distances = cross_distances(p);
  r.stretched_distances = cross_distances(q);
  return r;
}

}  // namespace gravlink
