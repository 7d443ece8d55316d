#pragma once

// Test-only oracles and generators. Nothing here calls into the code paths it is
// used to check.

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

namespace gravlink::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Eigen::Matrix4d random_symmetric(std::mt19937_64& rng, double scale = 1.0) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) m(i, j) = m(j, i) = uniform(rng, -scale, scale);
  return m;
}

// Random velocity with |beta| <= max_speed, isotropic direction.
inline std::array<double, 3> random_velocity(std::mt19937_64& rng, double max_speed) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::array<double, 3> d{n(rng), n(rng), n(rng)};
  const double len = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
  const double speed = uniform(rng, 0.0, max_speed);
  for (double& v : d) v *= speed / len;
  return d;
}

inline std::array<double, 3> random_point(std::mt19937_64& rng, double extent) {
  return {uniform(rng, -extent, extent), uniform(rng, -extent, extent), uniform(rng, -extent, extent)};
}

namespace oracle {

inline long double gamma(long double beta) { return 1.0L / std::sqrt(1.0L - beta * beta); }

// Closed-form negativity of (1/2)(e^{i a}, e^{i b}, e^{i c}, e^{i d}).
inline double negativity(double delta_phi) { return std::abs(std::sin(0.5 * delta_phi)) / 2.0; }

// Retarded time for x_s(s) = x0 + v (s - s0): the earlier root of
// c^2 (t - s)^2 = |x - x0 - v (s - s0)|^2, solved as a quadratic in u = t - s.
inline double uniform_motion_retarded_time(const std::array<double, 3>& x, double t, const std::array<double, 3>& x0,
                                           const std::array<double, 3>& v, double s0, double c) {
  // R(u) = x - x0 - v (t - s0) + v u  =: w + v u
  std::array<double, 3> w{};
  for (int i = 0; i < 3; ++i) w[i] = x[i] - x0[i] - v[i] * (t - s0);
  const double vv = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  const double wv = w[0] * v[0] + w[1] * v[1] + w[2] * v[2];
  const double ww = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
  // (c^2 - v^2) u^2 - 2 (w.v) u - w^2 = 0, take u >= 0.
  const double a = c * c - vv;
  const double u = (wv + std::sqrt(wv * wv + a * ww)) / a;
  return t - u;
}

// Brute-force negativity through an independently coded partial transpose (first
// qubit) and the characteristic polynomial roots via Eigen's general solver.
inline double negativity_first_qubit_transpose(const std::array<std::complex<double>, 4>& psi) {
  Eigen::Matrix4cd rho;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
  Eigen::Matrix4cd pt;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp) pt(2 * a + b, 2 * ap + bp) = rho(2 * ap + b, 2 * a + bp);
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(pt);
  double n = 0.0;
  for (int i = 0; i < 4; ++i)
    if (es.eigenvalues()(i).real() < 0.0) n -= es.eigenvalues()(i).real();
  return n;
}

}  // namespace oracle
}  // namespace gravlink::testing
