#pragma once

// Minkowski-space tensor algebra on a flat background with signature (-,+,+,+).

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>

#include "gravlink/errors.hpp"

namespace gravlink {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

// The one place the signature lives.
inline constexpr std::array<double, 4> kMetricSignature = {-1.0, 1.0, 1.0, 1.0};

inline Eigen::Matrix4d minkowski_matrix() {
  Eigen::Matrix4d eta = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 4; ++i) eta(i, i) = kMetricSignature[static_cast<std::size_t>(i)];
  return eta;
}

// G, c and hbar. The default is natural units. G may be zero for decoupled control runs.
struct PhysicalConstants {
  double G = 1.0;
  double c = 1.0;
  double hbar = 1.0;

  void validate() const {
    if (!(std::isfinite(G) && std::isfinite(c) && std::isfinite(hbar)))
      throw DomainError("physical constants must be finite");
    if (G < 0.0) throw DomainError("G must be non-negative");
    if (c <= 0.0) throw DomainError("c must be strictly positive");
    if (hbar <= 0.0) throw DomainError("hbar must be strictly positive");
  }
};

enum class Variance { covariant, contravariant, mixed };

inline std::string to_string(Variance v) {
  switch (v) {
    case Variance::covariant: return "covariant";
    case Variance::contravariant: return "contravariant";
    case Variance::mixed: return "mixed";
  }
  return "unknown";
}

// Dense 4x4 tensor with declared index placement. Mixed means T^mu_nu (upper row index).
class Rank2Tensor {
 public:
  Rank2Tensor(const Eigen::Matrix4d& components, Variance variance)
      : components_(components), variance_(variance) {
    if (!components_.allFinite()) throw DomainError("tensor components must be finite");
  }

  static Rank2Tensor zero(Variance v) { return {Eigen::Matrix4d::Zero(), v}; }

  // eta_{mu nu} or eta^{mu nu} (numerically identical), delta^mu_nu for mixed.
  static Rank2Tensor minkowski(Variance v = Variance::covariant) {
    if (v == Variance::mixed) return {Eigen::Matrix4d::Identity(), v};
    return {minkowski_matrix(), v};
  }

  static Rank2Tensor diagonal(double a, double b, double c, double d, Variance v) {
    return {Eigen::Vector4d(a, b, c, d).asDiagonal().toDenseMatrix(), v};
  }

  // Symmetrizes the input; use for tensors that are symmetric by construction.
  static Rank2Tensor symmetric(const Eigen::Matrix4d& m, Variance v) {
    return {0.5 * (m + m.transpose()), v};
  }

  const Eigen::Matrix4d& components() const { return components_; }
  Variance variance() const { return variance_; }
  double operator()(int mu, int nu) const { return components_(mu, nu); }

  bool is_symmetric(double tol = 1e-12) const {
    const double scale = std::max(1.0, components_.cwiseAbs().maxCoeff());
    return (components_ - components_.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
  }

 private:
  Eigen::Matrix4d components_;
  Variance variance_;
};

inline Rank2Tensor lower_indices(const Rank2Tensor& t) {
  const Eigen::Matrix4d eta = minkowski_matrix();
  switch (t.variance()) {
    case Variance::covariant: return t;
    case Variance::contravariant: return {eta * t.components() * eta, Variance::covariant};
    case Variance::mixed: return {eta * t.components(), Variance::covariant};
  }
  return t;
}

inline Rank2Tensor raise_indices(const Rank2Tensor& t) {
  const Eigen::Matrix4d eta = minkowski_matrix();
  switch (t.variance()) {
    case Variance::contravariant: return t;
    case Variance::covariant: return {eta * t.components() * eta, Variance::contravariant};
    case Variance::mixed: return {t.components() * eta, Variance::contravariant};
  }
  return t;
}

// Lambda^mu_nu together with the velocity it was built from.
class LorentzTransform {
 public:
  const Eigen::Matrix4d& matrix() const { return matrix_; }
  const Vec3& beta() const { return beta_; }
  double gamma() const { return gamma_; }

  // Lambda^{-1} = eta Lambda^T eta.
  Eigen::Matrix4d inverse_matrix() const {
    const Eigen::Matrix4d eta = minkowski_matrix();
    return eta * matrix_.transpose() * eta;
  }

  // Composition (apply rhs first). Non-collinear products carry a Wigner rotation;
  // beta and gamma then describe the velocity part only.
  LorentzTransform operator*(const LorentzTransform& rhs) const {
    LorentzTransform out;
    out.matrix_ = matrix_ * rhs.matrix_;
    out.gamma_ = out.matrix_(0, 0);
    for (int i = 0; i < 3; ++i) out.beta_[static_cast<std::size_t>(i)] = -out.matrix_(i + 1, 0) / out.gamma_;
    return out;
  }

  friend LorentzTransform boost(const Vec3& beta);

 private:
  Eigen::Matrix4d matrix_ = Eigen::Matrix4d::Identity();
  Vec3 beta_{0.0, 0.0, 0.0};
  double gamma_ = 1.0;
};

// Passive boost into the frame moving with velocity beta*c.
inline LorentzTransform boost(const Vec3& beta) {
  for (double b : beta)
    if (!std::isfinite(b)) throw DomainError("boost velocity must be finite");
  const double b2 = dot(beta, beta);
  if (b2 >= 1.0) throw DomainError("superluminal boost");
  LorentzTransform out;
  const double gamma = 1.0 / std::sqrt(1.0 - b2);
  out.beta_ = beta;
  out.gamma_ = gamma;
  Eigen::Matrix4d& m = out.matrix_;
  m(0, 0) = gamma;
  // (gamma - 1)/beta^2 written without the 0/0 at rest.
  const double k = gamma * gamma / (1.0 + gamma);
  for (int i = 0; i < 3; ++i) {
    const double bi = beta[static_cast<std::size_t>(i)];
    m(0, i + 1) = -gamma * bi;
    m(i + 1, 0) = -gamma * bi;
    for (int j = 0; j < 3; ++j)
      m(i + 1, j + 1) = (i == j ? 1.0 : 0.0) + k * bi * beta[static_cast<std::size_t>(j)];
  }
  return out;
}

inline LorentzTransform boost_x(double beta) { return boost({beta, 0.0, 0.0}); }

inline Rank2Tensor transform_rank2(const Rank2Tensor& t, const LorentzTransform& l) {
  const Eigen::Matrix4d& lam = l.matrix();
  const Eigen::Matrix4d inv = l.inverse_matrix();
  const Eigen::Matrix4d& c = t.components();
  switch (t.variance()) {
    case Variance::contravariant: return {lam * c * lam.transpose(), t.variance()};
    case Variance::covariant: return {inv.transpose() * c * inv, t.variance()};
    case Variance::mixed: return {lam * c * inv, t.variance()};
  }
  return t;
}

// eta_{mu nu} h^{mu nu} (or eta^{mu nu} h_{mu nu}); the plain trace for mixed tensors.
inline double minkowski_trace(const Rank2Tensor& h) {
  if (h.variance() == Variance::mixed) return h.components().trace();
  double tr = 0.0;
  for (int i = 0; i < 4; ++i) tr += kMetricSignature[static_cast<std::size_t>(i)] * h(i, i);
  return tr;
}

// h - (1/2) eta tr(h). An involution in four dimensions.
inline Rank2Tensor trace_reverse(const Rank2Tensor& h) {
  if (!h.is_symmetric()) throw ContractViolation("trace_reverse requires a symmetric tensor");
  const double tr = minkowski_trace(h);
  const Rank2Tensor eta = Rank2Tensor::minkowski(h.variance());
  return {h.components() - 0.5 * tr * eta.components(), h.variance()};
}

// Full contraction a_{mu nu} b^{mu nu}; indices are moved as needed.
inline double contract(const Rank2Tensor& a, const Rank2Tensor& b) {
  const Eigen::Matrix4d lo = lower_indices(a).components();
  const Eigen::Matrix4d up = raise_indices(b).components();
  return lo.cwiseProduct(up).sum();
}

}  // namespace gravlink
