#pragma once

// Explicitly quantum mediator: two branch qubits coupled to a handful of 1D scalar
// field modes, truncated at a fixed Fock occupation.
//
//   H = sum_k hbar w_k a_k^+ a_k + m c^2 (b^+b + c^+c)
//     + sum_k (hbar g_k / sqrt(w_k)) [ b^+b (a_k e^{i k x1} + h.c.) + c^+c (a_k e^{i k x2} + h.c.) ]
//
// In the branch basis the number operators are projectors, so H is block diagonal
// with one driven-oscillator block per branch pair (x1, x2). Each block has the
// closed-form solution used by conditional_displacement_oracle: starting from the
// vacuum, mode k ends up in the coherent state
//   alpha_k(t) = (lambda_k^* / w_k) (e^{-i w_k t} - 1),  lambda_k = (g_k / sqrt(w_k)) (e^{ikx1} + e^{ikx2}),
// multiplied by exp(i |lambda_k|^2 / w_k (t - sin(w_k t) / w_k)).
//
// Basis index = branch * F + fock, branch in (ll, lu, ul, uu) order, fock in mixed
// radix with mode 0 most significant.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "gravlink/bmv.hpp"
#include "gravlink/errors.hpp"
#include "gravlink/tensorkit.hpp"

namespace gravlink {

struct ModeSet {
  std::vector<double> wavenumbers;
  std::vector<double> frequencies;
  std::vector<double> couplings;
  double volume = 1.0;
  double mass = 0.0;

  std::size_t size() const { return wavenumbers.size(); }
};

// w_k = c |k|, g_k = m c sqrt(2 pi G / (hbar w_k V)).
inline ModeSet make_mode_set(const std::vector<double>& wavenumbers, double volume, double mass,
                             const PhysicalConstants& k) {
  k.validate();
  if (!(std::isfinite(volume) && volume > 0.0)) throw DomainError("quantization volume must be positive");
  if (!(std::isfinite(mass) && mass >= 0.0)) throw DomainError("mass must be finite and non-negative");
  if (wavenumbers.empty()) throw DomainError("at least one field mode is required");
  ModeSet m;
  m.volume = volume;
  m.mass = mass;
  for (double kn : wavenumbers) {
    if (!std::isfinite(kn) || kn == 0.0) throw DomainError("wavenumbers must be finite and nonzero");
    const double w = k.c * std::abs(kn);
    m.wavenumbers.push_back(kn);
    m.frequencies.push_back(w);
    m.couplings.push_back(mass * k.c * std::sqrt(2.0 * std::numbers::pi * k.G / (k.hbar * w * volume)));
  }
  return m;
}

inline constexpr std::size_t kDefaultDimensionBudget = std::size_t{1} << 14;

struct TruncatedHilbertConfig {
  int fock_cutoff = 12;
  int mode_count = 1;
  std::size_t budget = kDefaultDimensionBudget;

  // (n_max + 1)^N, per branch block.
  std::size_t fock_dimension() const {
    if (fock_cutoff < 0 || mode_count < 1) throw DomainError("invalid Fock truncation");
    std::size_t d = 1;
    for (int i = 0; i < mode_count; ++i) {
      if (d > budget) throw ResourceError("truncated Hilbert space exceeds the dimension budget");
      d *= static_cast<std::size_t>(fock_cutoff) + 1;
    }
    return d;
  }

  std::size_t dimension() const {
    const std::size_t d = 4 * fock_dimension();
    if (d > budget)
      throw ResourceError("truncated Hilbert space dimension " + std::to_string(d) + " exceeds budget " +
                          std::to_string(budget));
    return d;
  }
};

// Positions of the four branches projected on the mode axis.
struct BranchCoordinates {
  double l1 = 0.0, u1 = 0.0, l2 = 0.0, u2 = 0.0;

  double of(int mass, Branch b) const {
    if (mass == 1) return b == Branch::lower ? l1 : u1;
    return b == Branch::lower ? l2 : u2;
  }
};

inline BranchCoordinates project_branches(const BranchPositions& p, const Vec3& axis = {1.0, 0.0, 0.0}) {
  const double n = norm(axis);
  if (!(n > 0.0)) throw DomainError("mode axis must be nonzero");
  const Vec3 u = (1.0 / n) * axis;
  return {dot(p.l1, u), dot(p.u1, u), dot(p.l2, u), dot(p.u2, u)};
}

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Block-diagonal Hamiltonian: one Fock-space block per branch pair.
class ModeSumHamiltonian {
 public:
  ModeSumHamiltonian(TruncatedHilbertConfig cfg, std::array<ComplexMatrix, 4> blocks)
      : cfg_(cfg), blocks_(std::move(blocks)) {}

  const TruncatedHilbertConfig& config() const { return cfg_; }
  const ComplexMatrix& block(std::size_t branch) const { return blocks_.at(branch); }
  std::size_t dimension() const { return 4 * static_cast<std::size_t>(blocks_[0].rows()); }

  ComplexMatrix dense() const {
    const auto f = blocks_[0].rows();
    ComplexMatrix h = ComplexMatrix::Zero(4 * f, 4 * f);
    for (std::size_t b = 0; b < 4; ++b) h.block(static_cast<Eigen::Index>(b) * f, static_cast<Eigen::Index>(b) * f, f, f) = blocks_[b];
    return h;
  }

 private:
  TruncatedHilbertConfig cfg_;
  std::array<ComplexMatrix, 4> blocks_;
};

namespace detail {

inline std::vector<int> fock_digits(std::size_t index, const TruncatedHilbertConfig& cfg) {
  std::vector<int> n(static_cast<std::size_t>(cfg.mode_count));
  const std::size_t radix = static_cast<std::size_t>(cfg.fock_cutoff) + 1;
  for (int j = cfg.mode_count - 1; j >= 0; --j) {
    n[static_cast<std::size_t>(j)] = static_cast<int>(index % radix);
    index /= radix;
  }
  return n;
}

inline std::size_t mode_stride(int mode, const TruncatedHilbertConfig& cfg) {
  std::size_t s = 1;
  for (int j = cfg.mode_count - 1; j > mode; --j) s *= static_cast<std::size_t>(cfg.fock_cutoff) + 1;
  return s;
}

// lambda_k for one branch pair: coefficient of a_k in H / hbar.
inline Complex drive_amplitude(const ModeSet& modes, std::size_t k, double x1, double x2) {
  const double kn = modes.wavenumbers[k];
  return modes.couplings[k] / std::sqrt(modes.frequencies[k]) * (std::polar(1.0, kn * x1) + std::polar(1.0, kn * x2));
}

}  // namespace detail

// Annihilation operator of one mode on the Fock space (no branch factor).
inline ComplexMatrix annihilation_operator(int mode, const TruncatedHilbertConfig& cfg) {
  const std::size_t f = cfg.fock_dimension();
  const std::size_t stride = detail::mode_stride(mode, cfg);
  ComplexMatrix a = ComplexMatrix::Zero(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(f));
  for (std::size_t i = 0; i < f; ++i) {
    const int n = detail::fock_digits(i, cfg)[static_cast<std::size_t>(mode)];
    if (n > 0) a(static_cast<Eigen::Index>(i - stride), static_cast<Eigen::Index>(i)) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

inline ModeSumHamiltonian build_hamiltonian(const ModeSet& modes, const BranchCoordinates& x,
                                            const TruncatedHilbertConfig& cfg, const PhysicalConstants& k) {
  if (static_cast<std::size_t>(cfg.mode_count) != modes.size())
    throw DomainError("mode count in the truncation does not match the mode set");
  cfg.dimension();
  const std::size_t f = cfg.fock_dimension();
  const auto fi = static_cast<Eigen::Index>(f);
  const double rest_energy = 2.0 * modes.mass * k.c * k.c;
  std::array<ComplexMatrix, 4> blocks;
  for (Branch b1 : kBranches) {
    for (Branch b2 : kBranches) {
      ComplexMatrix h = ComplexMatrix::Zero(fi, fi);
      std::vector<Complex> lambda(modes.size());
      for (std::size_t j = 0; j < modes.size(); ++j) lambda[j] = detail::drive_amplitude(modes, j, x.of(1, b1), x.of(2, b2));
      for (std::size_t i = 0; i < f; ++i) {
        const std::vector<int> n = detail::fock_digits(i, cfg);
        double diag = rest_energy;
        for (std::size_t j = 0; j < modes.size(); ++j) diag += k.hbar * modes.frequencies[j] * n[j];
        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag;
        for (std::size_t j = 0; j < modes.size(); ++j) {
          if (n[j] == 0) continue;
          const auto lower = static_cast<Eigen::Index>(i - detail::mode_stride(static_cast<int>(j), cfg));
          const double amp = std::sqrt(static_cast<double>(n[j]));
          const auto upper = static_cast<Eigen::Index>(i);
          h(lower, upper) += k.hbar * lambda[j] * amp;             // a_k
          h(upper, lower) += k.hbar * std::conj(lambda[j]) * amp;  // a_k^+
        }
      }
      blocks[pair_index(b1, b2)] = std::move(h);
    }
  }
  return {cfg, std::move(blocks)};
}

inline bool is_hermitian(const ComplexMatrix& h, double rel_tol = 1e-12) {
  const double scale = std::max(1e-300, h.norm());
  return (h - h.adjoint()).norm() <= rel_tol * scale;
}

struct QuantumState {
  ComplexVector amplitudes;

  double norm() const { return amplitudes.norm(); }
};

// Equal superposition of the four branch pairs, field in its vacuum.
inline QuantumState initial_state(const TruncatedHilbertConfig& cfg) {
  const std::size_t f = cfg.fock_dimension();
  QuantumState s{ComplexVector::Zero(static_cast<Eigen::Index>(cfg.dimension()))};
  for (std::size_t b = 0; b < 4; ++b) s.amplitudes(static_cast<Eigen::Index>(b * f)) = 0.5;
  return s;
}

// Eigendecomposition of a Hermitian matrix, reusable for many evolution times.
class Propagator {
 public:
  Propagator(const ComplexMatrix& h, double hbar) : hbar_(hbar) {
    if (!is_hermitian(h)) throw ContractViolation("Hamiltonian is not Hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
    if (es.info() != Eigen::Success) throw NumericalError("Hamiltonian eigendecomposition failed");
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }

  ComplexVector apply(const ComplexVector& psi, double t) const {
    ComplexVector c = vectors_.adjoint() * psi;
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -energies_(i) * t / hbar_);
    return vectors_ * c;
  }

  const Eigen::VectorXd& energies() const { return energies_; }

 private:
  double hbar_;
  Eigen::VectorXd energies_;
  ComplexMatrix vectors_;
};

// One propagator per branch block.
class ModeSumPropagator {
 public:
  ModeSumPropagator(const ModeSumHamiltonian& h, double hbar)
      : fock_(static_cast<Eigen::Index>(h.block(0).rows())),
        blocks_{Propagator(h.block(0), hbar), Propagator(h.block(1), hbar), Propagator(h.block(2), hbar),
                Propagator(h.block(3), hbar)} {}

  QuantumState apply(const QuantumState& psi0, double t) const {
    if (psi0.amplitudes.size() != 4 * fock_) throw ContractViolation("state dimension does not match Hamiltonian");
    QuantumState out{ComplexVector(psi0.amplitudes.size())};
    for (Eigen::Index b = 0; b < 4; ++b)
      out.amplitudes.segment(b * fock_, fock_) =
          blocks_[static_cast<std::size_t>(b)].apply(psi0.amplitudes.segment(b * fock_, fock_), t);
    return out;
  }

 private:
  Eigen::Index fock_;
  std::array<Propagator, 4> blocks_;
};

inline QuantumState evolve(const QuantumState& psi0, const ComplexMatrix& h, double t, double hbar = 1.0) {
  if (psi0.amplitudes.size() != h.rows()) throw ContractViolation("state dimension does not match Hamiltonian");
  return {Propagator(h, hbar).apply(psi0.amplitudes, t)};
}

inline QuantumState evolve(const QuantumState& psi0, const ModeSumHamiltonian& h, double t, double hbar = 1.0) {
  return ModeSumPropagator(h, hbar).apply(psi0, t);
}

// Partial trace over every field mode.
inline DensityMatrix reduced_mass_state(const QuantumState& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw ContractViolation("state is not normalized");
  const Eigen::Index f = psi.amplitudes.size() / 4;
  DensityMatrix rho;
  for (Eigen::Index b = 0; b < 4; ++b)
    for (Eigen::Index bp = 0; bp < 4; ++bp)
      rho(b, bp) = psi.amplitudes.segment(bp * f, f).dot(psi.amplitudes.segment(b * f, f));
  return rho;
}

// Probability of each branch pair.
inline std::array<double, 4> branch_populations(const QuantumState& psi) {
  const Eigen::Index f = psi.amplitudes.size() / 4;
  std::array<double, 4> p{};
  for (Eigen::Index b = 0; b < 4; ++b) p[static_cast<std::size_t>(b)] = psi.amplitudes.segment(b * f, f).squaredNorm();
  return p;
}

struct DisplacementOracle {
  PhaseTable phases;
  // alpha_k for each branch pair, [branch][mode].
  std::array<std::vector<Complex>, 4> displacements;
  DensityMatrix reduced_state;
  // Largest |alpha_k| over branches and modes; zero at a common recurrence.
  double max_displacement = 0.0;
  // Smallest |<field_b | field_b'>| over branch pairs; one at a common recurrence.
  double min_field_overlap = 1.0;
};

inline DisplacementOracle conditional_displacement_oracle(const ModeSet& modes, const BranchCoordinates& x, double t) {
  DisplacementOracle o;
  std::array<double, 4> phi{};
  for (Branch b1 : kBranches) {
    for (Branch b2 : kBranches) {
      const std::size_t b = pair_index(b1, b2);
      o.displacements[b].resize(modes.size());
      const double dx = x.of(1, b1) - x.of(2, b2);
      for (std::size_t j = 0; j < modes.size(); ++j) {
        const double w = modes.frequencies[j];
        const double g = modes.couplings[j];
        const Complex lambda = detail::drive_amplitude(modes, j, x.of(1, b1), x.of(2, b2));
        // |lambda|^2 / w = (2 g^2 / w^2)(1 + cos k dx): local part plus the cross term.
        const double strength = 2.0 * g * g / (w * w) * (1.0 + std::cos(modes.wavenumbers[j] * dx));
        phi[b] += strength * (t - std::sin(w * t) / w);
        o.displacements[b][j] = std::conj(lambda) / w * (std::polar(1.0, -w * t) - 1.0);
        o.max_displacement = std::max(o.max_displacement, std::abs(o.displacements[b][j]));
      }
    }
  }
  o.phases = PhaseTable::from_array(phi);
  for (std::size_t b = 0; b < 4; ++b) {
    for (std::size_t bp = 0; bp < 4; ++bp) {
      // <alpha'|alpha> = exp(-|alpha|^2/2 - |alpha'|^2/2 + conj(alpha') alpha), per mode.
      Complex overlap = 1.0;
      for (std::size_t j = 0; j < modes.size(); ++j) {
        const Complex a = o.displacements[b][j];
        const Complex ap = o.displacements[bp][j];
        overlap *= std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(ap) + std::conj(ap) * a);
      }
      o.min_field_overlap = std::min(o.min_field_overlap, std::abs(overlap));
      o.reduced_state(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(bp)) =
          0.25 * std::polar(1.0, phi[b] - phi[bp]) * overlap;
    }
  }
  return o;
}

struct CommutatorReport {
  // ||[a^+a, a + a^+]||_F on the truncated space; nonzero.
  double number_quadrature_norm = 0.0;
  // max entry of [a^+a, a + a^+] - (a^+ - a); zero (ladder algebra).
  double ladder_identity_defect = 0.0;
  // max entry of [a, a^+] - 1 on states with every occupation below the cutoff.
  double canonical_defect_low_occupation = 0.0;
  // ||[a_1, a_2^+]||_F; only computed with two or more modes.
  bool cross_mode_checked = false;
  double cross_mode_norm = 0.0;
  bool pass = false;
};

// Uses at most two modes of the configured truncation; the algebra is per mode.
inline CommutatorReport commutator_check(const ModeSet& modes, const TruncatedHilbertConfig& cfg) {
  if (static_cast<std::size_t>(cfg.mode_count) != modes.size())
    throw DomainError("mode count in the truncation does not match the mode set");
  TruncatedHilbertConfig small = cfg;
  small.mode_count = std::min(cfg.mode_count, 2);
  const auto f = static_cast<Eigen::Index>(small.fock_dimension());
  const ComplexMatrix a = annihilation_operator(0, small);
  const ComplexMatrix ad = a.adjoint();
  const ComplexMatrix num = ad * a;
  const ComplexMatrix quad = a + ad;
  CommutatorReport r;
  const ComplexMatrix c1 = num * quad - quad * num;
  r.number_quadrature_norm = c1.norm();
  r.ladder_identity_defect = (c1 - (ad - a)).cwiseAbs().maxCoeff();
  const ComplexMatrix canon = a * ad - ad * a;
  for (Eigen::Index i = 0; i < f; ++i) {
    const std::vector<int> n = detail::fock_digits(static_cast<std::size_t>(i), small);
    bool low = true;
    for (int v : n) low = low && v < small.fock_cutoff;
    if (!low) continue;
    for (Eigen::Index j = 0; j < f; ++j) {
      const Complex expected = (i == j) ? 1.0 : 0.0;
      r.canonical_defect_low_occupation = std::max(r.canonical_defect_low_occupation, std::abs(canon(i, j) - expected));
    }
  }
  if (small.mode_count >= 2) {
    const ComplexMatrix b = annihilation_operator(1, small);
    r.cross_mode_checked = true;
    r.cross_mode_norm = (a * b.adjoint() - b.adjoint() * a).norm();
  }
  r.pass = r.number_quadrature_norm > 0.0 && r.ladder_identity_defect <= 1e-12 &&
           r.canonical_defect_low_occupation <= 1e-12 && (!r.cross_mode_checked || r.cross_mode_norm <= 1e-12);
  return r;
}

}  // namespace gravlink
