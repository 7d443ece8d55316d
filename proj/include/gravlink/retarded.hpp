#pragma once

// Retarded fields of point sources: the trace-reversed metric perturbation of point
// masses and the Lienard-Wiechert four-potential of point charges. Delta-function
// sources are integrated analytically, which leaves the usual 1/(R (1 - n.beta))
// factor evaluated at the retarded time.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "gravlink/errors.hpp"
#include "gravlink/tensorkit.hpp"

namespace gravlink {

enum class WorldlineKind { static_position, sampled };

// Spatial position as a function of coordinate time. Sampled worldlines are
// piecewise linear between strictly increasing sample times.
class Worldline {
 public:
  static Worldline at_rest(const Vec3& position) {
    check_finite(position);
    Worldline w;
    w.kind_ = WorldlineKind::static_position;
    w.positions_ = {position};
    return w;
  }

  static Worldline sampled(std::vector<double> times, std::vector<Vec3> positions) {
    if (times.size() != positions.size()) throw DomainError("worldline times and positions differ in length");
    if (times.size() < 2) throw DomainError("sampled worldline needs at least two samples");
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (!std::isfinite(times[i])) throw DomainError("worldline sample time must be finite");
      check_finite(positions[i]);
      if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("worldline samples must be strictly time-ordered");
    }
    Worldline w;
    w.kind_ = WorldlineKind::sampled;
    w.times_ = std::move(times);
    w.positions_ = std::move(positions);
    return w;
  }

  WorldlineKind kind() const { return kind_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Vec3>& positions() const { return positions_; }

  double start_time() const { return kind_ == WorldlineKind::sampled ? times_.front() : -INFINITY; }
  double end_time() const { return kind_ == WorldlineKind::sampled ? times_.back() : INFINITY; }

  Vec3 position(double t) const {
    if (kind_ == WorldlineKind::static_position) return positions_.front();
    if (t < times_.front() || t > times_.back()) throw DomainError("time outside worldline domain");
    const std::size_t k = segment_index(t);
    return interpolate(k, t);
  }

  // Largest k with times[k] <= t, capped so that [k, k+1] is a valid segment.
  std::size_t segment_index(double t) const {
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - times_.begin()) - 1));
    return std::min(k, times_.size() - 2);
  }

  Vec3 interpolate(std::size_t k, double t) const {
    const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
    return positions_[k] + w * (positions_[k + 1] - positions_[k]);
  }

  Vec3 segment_velocity(std::size_t k) const {
    return (1.0 / (times_[k + 1] - times_[k])) * (positions_[k + 1] - positions_[k]);
  }

 private:
  static void check_finite(const Vec3& p) {
    for (double v : p)
      if (!std::isfinite(v)) throw DomainError("worldline position must be finite");
  }

  WorldlineKind kind_ = WorldlineKind::static_position;
  std::vector<double> times_;
  std::vector<Vec3> positions_;
};

struct PointMassTrajectory {
  double mass = 0.0;
  Worldline worldline = Worldline::at_rest({0.0, 0.0, 0.0});
};

struct PointChargeTrajectory {
  double charge = 0.0;
  Worldline worldline = Worldline::at_rest({0.0, 0.0, 0.0});
};

// Source state at the retarded time of a field point.
struct RetardedState {
  double time = 0.0;
  Vec3 position{};
  Vec3 velocity{};
};

inline constexpr int kRetardedIterationBudget = 64;
inline constexpr double kRetardedRelativeTolerance = 1e-12;

namespace detail {

// Root of f(s) = s - t + |x - p(s)|/c on [lo, hi] with p(s) = p0 + v (s - s0) and
// f(lo) <= 0 <= f(hi). f is strictly increasing for |v| < c. Newton steps, with
// bisection whenever a step leaves the bracket.
inline double solve_linear_segment(const Vec3& x, double t, double c, const Vec3& p0, const Vec3& v, double s0,
                                   double lo, double hi) {
  const double tol = kRetardedRelativeTolerance * std::max(1.0, std::abs(t));
  auto f = [&](double s, double* slope) {
    const Vec3 r = x - (p0 + (s - s0) * v);
    const double rn = norm(r);
    if (slope) *slope = rn > 0.0 ? 1.0 - dot(r, v) / (rn * c) : 1.0;
    return s - t + rn / c;
  };
  double s = std::clamp(t - norm(x - (p0 + (hi - s0) * v)) / c, lo, hi);
  for (int iter = 0; iter < kRetardedIterationBudget; ++iter) {
    double slope = 1.0;
    const double fs = f(s, &slope);
    if (std::abs(fs) <= tol) return s;
    if (fs < 0.0) lo = s; else hi = s;
    double next = s - fs / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == s) return s;
    s = next;
  }
  throw NumericalError("retarded time iteration did not converge");
}

}  // namespace detail

inline RetardedState retarded_state(const Vec3& x, double t, const Worldline& w, double c) {
  if (!(c > 0.0)) throw DomainError("speed of light must be positive");
  if (!std::isfinite(t)) throw DomainError("field time must be finite");
  if (w.kind() == WorldlineKind::static_position) {
    const Vec3 p = w.positions().front();
    const double r = distance(x, p);
    const double tr = detail::solve_linear_segment(x, t, c, p, {0.0, 0.0, 0.0}, 0.0, t - r / c - 1.0, t);
    return {tr, p, {0.0, 0.0, 0.0}};
  }

  const auto& times = w.times();
  auto f_at_sample = [&](std::size_t k) { return times[k] - t + distance(x, w.positions()[k]) / c; };

  // The root cannot lie after t, so the walk starts from the segment holding
  // min(t, end) and moves back until the sample residual turns non-positive.
  // Samples beyond that segment are never read.
  if (t > times.back() && f_at_sample(times.size() - 1) < 0.0)
    throw DomainError("retarded time lies after the worldline domain");
  std::size_t k = w.segment_index(std::min(t, times.back()));
  while (f_at_sample(k) > 0.0) {
    if (k == 0) throw DomainError("retarded time precedes the worldline domain");
    --k;
  }
  const Vec3 v = w.segment_velocity(k);
  if (norm(v) >= c) throw DomainError("worldline segment is faster than light");
  if (f_at_sample(k) == 0.0) return {times[k], w.positions()[k], v};
  const double hi = std::min(times[k + 1], t);
  const double tr = detail::solve_linear_segment(x, t, c, w.positions()[k], v, times[k], times[k], hi);
  return {tr, w.interpolate(k, tr), v};
}

inline double solve_retarded_time(const Vec3& x, double t, const Worldline& w, double c) {
  return retarded_state(x, t, w, c).time;
}

namespace detail {

// Common kinematics of a delta source seen from (x, t): distance at the retarded
// time, the Lienard-Wiechert compression factor 1 - n.beta, beta and gamma.
struct RetardedGeometry {
  double distance;
  double compression;
  Vec3 beta;
  double gamma;
};

inline RetardedGeometry retarded_geometry(const Vec3& x, double t, const Worldline& w, double c) {
  const RetardedState st = retarded_state(x, t, w, c);
  const Vec3 r = x - st.position;
  const double rn = norm(r);
  if (!(rn > 1e-15 * std::max(1.0, norm(x)))) throw SingularityError("field evaluated at a source position");
  const Vec3 beta = (1.0 / c) * st.velocity;
  const double gamma = 1.0 / std::sqrt(1.0 - dot(beta, beta));
  return {rn, 1.0 - dot(r, beta) / rn, beta, gamma};
}

}  // namespace detail

// hbar_{mu nu}(x, t) = (4G/c^4) sum m gamma v_mu v_nu / (R (1 - n.beta)), v^mu = (c, v).
// For sources at rest only the 00 component survives: 4Gm/(c^2 R).
inline Rank2Tensor hbar_field(std::span<const PointMassTrajectory> sources, const Vec3& x, double t,
                              const PhysicalConstants& k) {
  k.validate();
  Eigen::Matrix4d acc = Eigen::Matrix4d::Zero();
  const double c = k.c;
  for (const auto& src : sources) {
    if (!(std::isfinite(src.mass) && src.mass >= 0.0)) throw DomainError("source mass must be finite and non-negative");
    const auto g = detail::retarded_geometry(x, t, src.worldline, c);
    Eigen::Vector4d v_lower(-c, c * g.beta[0], c * g.beta[1], c * g.beta[2]);
    const double pref = 4.0 * k.G / (c * c * c * c) * src.mass * g.gamma / (g.distance * g.compression);
    acc += pref * (v_lower * v_lower.transpose());
  }
  return Rank2Tensor::symmetric(acc, Variance::covariant);
}

// h_{mu nu} recovered from the trace-reversed field.
inline Rank2Tensor metric_perturbation(std::span<const PointMassTrajectory> sources, const Vec3& x, double t,
                                       const PhysicalConstants& k) {
  return trace_reverse(hbar_field(sources, x, t, k));
}

// A^mu(x, t) = (k/c^2) sum q (c, v) / (R (1 - n.beta)). Static charge: A^0 = kq/(c R).
inline std::array<double, 4> em_potential(std::span<const PointChargeTrajectory> sources, const Vec3& x, double t,
                                          double coulomb_constant, double c) {
  std::array<double, 4> a{0.0, 0.0, 0.0, 0.0};
  for (const auto& src : sources) {
    if (!std::isfinite(src.charge)) throw DomainError("source charge must be finite");
    const auto g = detail::retarded_geometry(x, t, src.worldline, c);
    const double pref = coulomb_constant / (c * c) * src.charge / (g.distance * g.compression);
    a[0] += pref * c;
    for (int i = 0; i < 3; ++i) a[static_cast<std::size_t>(i) + 1] += pref * c * g.beta[static_cast<std::size_t>(i)];
  }
  return a;
}

}  // namespace gravlink
