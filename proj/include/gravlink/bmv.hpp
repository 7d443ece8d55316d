#pragma once

// The two-interferometer experiment: branch geometry, per-branch gravitational
// phases, the induced two-qubit state and its entanglement.
//
// Branch labels are (mass 1 branch, mass 2 branch); basis order is ll, lu, ul, uu.
// Only cross-interferometer pairs interact. Intra-interferometer self-energy adds
// local phases that no entanglement measure can see.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "gravlink/errors.hpp"
#include "gravlink/retarded.hpp"
#include "gravlink/tensorkit.hpp"

namespace gravlink {

enum class Branch { lower = 0, upper = 1 };

inline constexpr std::array<Branch, 2> kBranches = {Branch::lower, Branch::upper};

inline char branch_letter(Branch b) { return b == Branch::lower ? 'l' : 'u'; }

// Index into the (ll, lu, ul, uu) ordering.
inline std::size_t pair_index(Branch first, Branch second) {
  return 2 * static_cast<std::size_t>(first) + static_cast<std::size_t>(second);
}

struct BranchPositions {
  Vec3 l1{}, u1{}, l2{}, u2{};

  const Vec3& of(int mass, Branch b) const {
    if (mass == 1) return b == Branch::lower ? l1 : u1;
    return b == Branch::lower ? l2 : u2;
  }
};

// Cross-interferometer distance for each branch pair, in (ll, lu, ul, uu) order.
using PairDistances = std::array<double, 4>;

inline PairDistances cross_distances(const BranchPositions& p) {
  PairDistances d{};
  for (Branch x : kBranches)
    for (Branch y : kBranches) d[pair_index(x, y)] = distance(p.of(1, x), p.of(2, y));
  return d;
}

class BmvScenario {
 public:
  BmvScenario(double mass, double tau, BranchPositions positions, PhysicalConstants constants = {})
      : mass_(mass), tau_(tau), positions_(positions), constants_(constants) {
    constants_.validate();
    if (!(std::isfinite(mass_) && mass_ >= 0.0)) throw DomainError("mass must be finite and non-negative");
    if (!(std::isfinite(tau_) && tau_ >= 0.0)) throw DomainError("interaction time must be finite and non-negative");
    const std::array<const Vec3*, 4> all = {&positions_.l1, &positions_.u1, &positions_.l2, &positions_.u2};
    for (const Vec3* p : all)
      for (double v : *p)
        if (!std::isfinite(v)) throw DomainError("branch positions must be finite");
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = i + 1; j < all.size(); ++j)
        if (!(distance(*all[i], *all[j]) > 0.0)) throw SingularityError("coincident branch positions");
  }

  // Collinear equal-arm layout along x. Lower branches are d1 apart, l2 to u1 is d2,
  // both interferometers have arm separation d2 - d1. Needs d1 < d2 < 2 d1.
  static BmvScenario from_d1d2(double mass, double tau, double d1, double d2, PhysicalConstants constants = {}) {
    if (!(d1 > 0.0 && d2 > d1 && d2 < 2.0 * d1))
      throw DomainError("d1/d2 geometry requires 0 < d1 < d2 < 2*d1");
    const double arm = d2 - d1;
    BranchPositions p;
    p.l2 = {0.0, 0.0, 0.0};
    p.u2 = {arm, 0.0, 0.0};
    p.l1 = {d1, 0.0, 0.0};
    p.u1 = {d2, 0.0, 0.0};
    return {mass, tau, p, constants};
  }

  double mass() const { return mass_; }
  double tau() const { return tau_; }
  const BranchPositions& positions() const { return positions_; }
  const PhysicalConstants& constants() const { return constants_; }

  BmvScenario with_positions(const BranchPositions& p) const { return {mass_, tau_, p, constants_}; }
  BmvScenario with_tau(double tau) const { return {mass_, tau, positions_, constants_}; }
  BmvScenario with_mass(double mass) const { return {mass, tau_, positions_, constants_}; }

 private:
  double mass_;
  double tau_;
  BranchPositions positions_;
  PhysicalConstants constants_;
};

struct PhaseTable {
  double phi_ll = 0.0;
  double phi_lu = 0.0;
  double phi_ul = 0.0;
  double phi_uu = 0.0;

  std::array<double, 4> as_array() const { return {phi_ll, phi_lu, phi_ul, phi_uu}; }
  static PhaseTable from_array(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }
};

// phi_ll + phi_uu - phi_lu - phi_ul: the only combination entanglement depends on.
inline double relative_phase(const PhaseTable& p) { return p.phi_ll + p.phi_uu - p.phi_lu - p.phi_ul; }

inline double newtonian_phase(double m1, double m2, double tau, double d, const PhysicalConstants& k) {
  if (!(d > 0.0)) throw DomainError("separation must be positive");
  if (!(tau >= 0.0)) throw DomainError("interaction time must be non-negative");
  return k.G * m1 * m2 * tau / (k.hbar * d);
}

enum class PhaseMethod { newtonian, action_integral };

namespace detail {

// (1/4 hbar) int dt d^3x h_{mu nu} T^{mu nu} for one ordered pair: field of the
// source mass evaluated on the probe mass, integrand constant over tau.
inline double action_cross_term(const Vec3& source, const Vec3& probe, const BmvScenario& s) {
  const PhysicalConstants& k = s.constants();
  const std::array<PointMassTrajectory, 1> src = {PointMassTrajectory{s.mass(), Worldline::at_rest(source)}};
  const Rank2Tensor h = metric_perturbation(src, probe, 0.0, k);
  // Integrated stress-energy of a resting point mass: T^{00} -> m c^2.
  const Rank2Tensor t = Rank2Tensor::diagonal(s.mass() * k.c * k.c, 0.0, 0.0, 0.0, Variance::contravariant);
  return contract(h, t) * s.tau() / (4.0 * k.hbar);
}

}  // namespace detail

inline PhaseTable phase_table(const BmvScenario& s, PhaseMethod method = PhaseMethod::newtonian) {
  std::array<double, 4> phi{};
  for (Branch x : kBranches) {
    for (Branch y : kBranches) {
      const Vec3& p1 = s.positions().of(1, x);
      const Vec3& p2 = s.positions().of(2, y);
      double value = 0.0;
      if (method == PhaseMethod::newtonian) {
        value = newtonian_phase(s.mass(), s.mass(), s.tau(), distance(p1, p2), s.constants());
      } else {
        value = detail::action_cross_term(p1, p2, s) + detail::action_cross_term(p2, p1, s);
      }
      phi[pair_index(x, y)] = value;
    }
  }
  return PhaseTable::from_array(phi);
}

using Complex = std::complex<double>;
using DensityMatrix = Eigen::Matrix4cd;

struct TwoQubitState {
  std::array<Complex, 4> amplitudes{};

  double norm() const {
    double n = 0.0;
    for (const auto& a : amplitudes) n += std::norm(a);
    return std::sqrt(n);
  }

  Eigen::Vector4cd vector() const { return {amplitudes[0], amplitudes[1], amplitudes[2], amplitudes[3]}; }
};

inline TwoQubitState assemble_state(const PhaseTable& p) {
  TwoQubitState s;
  const auto phi = p.as_array();
  for (std::size_t i = 0; i < 4; ++i) s.amplitudes[i] = 0.5 * std::polar(1.0, phi[i]);
  return s;
}

inline void require_normalized(const TwoQubitState& s) {
  if (std::abs(s.norm() - 1.0) > 1e-10) throw ContractViolation("two-qubit state is not normalized");
}

inline DensityMatrix density_matrix(const TwoQubitState& s) {
  const Eigen::Vector4cd v = s.vector();
  return v * v.adjoint();
}

// Transpose on the second qubit: rho_{(a b),(a' b')} -> rho_{(a b'),(a' b)}.
inline DensityMatrix partial_transpose(const DensityMatrix& rho) {
  DensityMatrix out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp) out(2 * a + b, 2 * ap + bp) = rho(2 * a + bp, 2 * ap + b);
  return out;
}

// Trace over the second qubit.
inline Eigen::Matrix2cd reduce_to_first(const DensityMatrix& rho) {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap)
      for (int b = 0; b < 2; ++b) out(a, ap) += rho(2 * a + b, 2 * ap + b);
  return out;
}

inline double negativity(const DensityMatrix& rho) {
  const DensityMatrix pt = partial_transpose(rho);
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
  double n = 0.0;
  for (int i = 0; i < 4; ++i)
    if (es.eigenvalues()(i) < 0.0) n -= es.eigenvalues()(i);
  return n;
}

inline double negativity(const TwoQubitState& s) {
  require_normalized(s);
  return negativity(density_matrix(s));
}

// Von Neumann entropy (bits) of one mass after tracing out the other.
inline double entanglement_entropy(const DensityMatrix& rho) {
  const Eigen::Matrix2cd r = reduce_to_first(rho);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(0.5 * (r + r.adjoint()), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-300) s -= p * std::log2(p);
  }
  return std::max(0.0, s);
}

inline double entanglement_entropy(const TwoQubitState& s) {
  require_normalized(s);
  return entanglement_entropy(density_matrix(s));
}

// Half the trace norm of the difference.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  const DensityMatrix d = a - b;
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace gravlink
