#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "dicke/fitting.hpp"
#include "dicke/rng.hpp"

namespace dicke {

// ---------------------------------------------------------------------------
// Langevin dynamics of the Landau model  H = p^2/2 + (stiffness/2) x^2 + x^4/(4N).
// ---------------------------------------------------------------------------

/// Noise follows the fluctuation-dissipation theorem,
/// <f(t) f(t')> = 2 eta k_B T delta(t - t'), which makes equipartition
/// <x^2> = k_B T / stiffness exact on the normal side.  Setting
/// `flat_noise_f0` replaces the FDT amplitude by a flat spectrum F0 (the
/// non-equilibrium steady state of the model).
struct LangevinConfig {
  double eta = 1.0;          // friction
  double temperature = 1.0;  // k_B T
  double stiffness = 0.1;    // lambda_c - lambda (normal side when > 0)
  double quartic_n = infinity;  // Landau N; infinity disables the quartic term
  double dt = 0.0;           // 0: choose automatically from the timescales
  double t_total = 0.0;      // 0: choose automatically
  std::uint64_t seed = 1;
  std::optional<double> flat_noise_f0;
};

struct LangevinResult {
  double mean_x2 = 0.0;
  double stderr_x2 = 0.0;
};

namespace detail {

inline double langevin_force(double x, const LangevinConfig& c) {
  double f = -c.stiffness * x;
  if (std::isfinite(c.quartic_n)) f -= x * x * x / c.quartic_n;
  return f;
}

}  // namespace detail

/// Time-averaged <x^2> from a semi-implicit Euler-Maruyama run (friction
/// treated implicitly, so the scheme stays stable as stiffness -> 0).
/// The standard error comes from block averaging over 32 blocks.
inline LangevinResult langevin_x2(const LangevinConfig& cfg) {
  LangevinConfig c = cfg;
  // Fastest timescale: friction and, where active, the harmonic period.
  double t_fast = 1.0 / c.eta;
  if (c.stiffness > 0) t_fast = std::min(t_fast, 1.0 / std::sqrt(c.stiffness));
  if (c.dt == 0.0) c.dt = 0.02 * t_fast;
  if (c.dt > 0.05 * t_fast) {
    throw Error("UnderResolved", "dt exceeds 5% of the fastest timescale");
  }
  // Relaxation time: overdamped estimate eta/stiffness, at least 1/eta.
  double t_relax = (1.0 / c.eta) * std::max(1.0, c.eta * c.eta /
                                                     std::max(c.stiffness, 1e-3));
  if (c.t_total == 0.0) c.t_total = 4000.0 * t_relax / std::max(1.0, c.eta);
  if (c.t_total < 50.0 * t_relax) c.t_total = 50.0 * t_relax;

  CounterRng rng(c.seed);
  const double noise_var = c.flat_noise_f0 ? *c.flat_noise_f0
                                           : 2.0 * c.eta * c.temperature;
  const double noise_amp = std::sqrt(noise_var * c.dt);
  const long n_steps = long(c.t_total / c.dt);
  const long n_burn = std::min(n_steps / 4, long(10.0 * t_relax / c.dt) + 1);

  double x = 0.0, v = 0.0;
  const int n_blocks = 32;
  std::vector<double> block_sum(n_blocks, 0.0);
  std::vector<long> block_cnt(n_blocks, 0);
  const long per_block = std::max<long>(1, (n_steps - n_burn) / n_blocks);

  for (long i = 0; i < n_steps; ++i) {
    double xi = noise_amp * rng.next_normal();
    v = (v + c.dt * detail::langevin_force(x, c) + xi) / (1.0 + c.eta * c.dt);
    x += c.dt * v;
    if (i >= n_burn) {
      int b = std::min<long>((i - n_burn) / per_block, n_blocks - 1);
      block_sum[b] += x * x;
      block_cnt[b] += 1;
    }
  }
  LangevinResult r;
  std::vector<double> means;
  for (int b = 0; b < n_blocks; ++b) {
    if (block_cnt[b] > 0) means.push_back(block_sum[b] / block_cnt[b]);
  }
  double m = 0;
  for (double v2 : means) m += v2;
  m /= means.size();
  double var = 0;
  for (double v2 : means) var += (v2 - m) * (v2 - m);
  var /= means.size() > 1 ? (means.size() - 1) : 1;
  r.mean_x2 = m;
  r.stderr_x2 = std::sqrt(var / means.size());
  return r;
}

/// Exact classical <x^2> of the pure quartic ensemble, by quadrature of the
/// Boltzmann weight exp(-x^4 / (4 N k_B T)); the independent check for the
/// finite-size Langevin runs.
inline double quartic_classical_x2(double quartic_n, double temperature) {
  // Substituting u = x / (4 N T)^{1/4} reduces both integrals to fixed
  // Gaussian-like quadratures.
  const double scale = std::pow(4.0 * quartic_n * temperature, 0.25);
  const int n = 20000;
  const double umax = 6.0;
  double num = 0, den = 0;
  for (int i = 0; i <= n; ++i) {
    double u = umax * i / n;
    double w = std::exp(-u * u * u * u) * (i == 0 || i == n ? 0.5 : 1.0);
    num += w * u * u;
    den += w;
  }
  return scale * scale * num / den;
}

struct FiniteSizeFit {
  std::vector<double> n_values;
  std::vector<double> x2;
  std::vector<double> stderr_x2;
  LinearFit xi;
};

/// <x^2> against the Landau N at criticality (stiffness = 0); classical
/// scaling gives xi = 1/2.
inline FiniteSizeFit langevin_finite_size(LangevinConfig cfg,
                                          const std::vector<double>& n_list) {
  if (n_list.size() < 4) throw Error("InsufficientPoints", "need >= 4 sizes");
  double span = n_list.back() / n_list.front();
  if (span < std::pow(10.0, 1.5)) {
    throw Error("InsufficientPoints", "N list must span at least 1.5 decades");
  }
  cfg.stiffness = 0.0;
  FiniteSizeFit out;
  std::uint64_t seed0 = cfg.seed;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    LangevinConfig c = cfg;
    c.quartic_n = n_list[i];
    c.seed = seed0 + i;
    // At stiffness 0 the confining scale is the quartic turning point.
    double x_scale = std::pow(4.0 * c.quartic_n * c.temperature, 0.25);
    double t_fast = std::min(1.0 / c.eta, 1.0 / std::max(x_scale, 1e-3));
    c.dt = 0.02 * t_fast;
    auto r = langevin_x2(c);
    out.n_values.push_back(n_list[i]);
    out.x2.push_back(r.mean_x2);
    out.stderr_x2.push_back(r.stderr_x2);
  }
  out.xi = fit_powerlaw(out.n_values, out.x2);
  return out;
}

// ---------------------------------------------------------------------------
// One-dimensional Schroedinger ground states (the quantum side of the table).
// ---------------------------------------------------------------------------

struct GroundState {
  double energy;
  double x2;
};

/// Ground state of H = p^2/2 + V(x) on [-L, L] by second-order finite
/// differences and inverse iteration (all eigenvalues positive, so shift 0
/// targets the ground state).  GridTooNarrow when the wavefunction tail at
/// the boundary exceeds 1e-12.
template <typename Potential>
GroundState ground_state_1d(Potential&& v, double box, int n_points) {
  const int n = n_points;
  const double h = 2.0 * box / (n + 1);
  Eigen::VectorXd diag(n), off(n - 1);
  for (int i = 0; i < n; ++i) {
    double x = -box + h * (i + 1);
    diag[i] = 1.0 / (h * h) + v(x);
  }
  for (int i = 0; i < n - 1; ++i) off[i] = -0.5 / (h * h);

  // Inverse iteration with the Thomas algorithm.
  Eigen::VectorXd psi = Eigen::VectorXd::Constant(n, 1.0);
  for (int i = 0; i < n; ++i) {
    double x = -box + h * (i + 1);
    psi[i] = std::exp(-0.5 * x * x);
  }
  psi.normalize();
  double energy = 0.0;
  for (int it = 0; it < 200; ++it) {
    // Solve (T - shift) y = psi with shift slightly below the current Rayleigh
    // quotient estimate to accelerate.
    Eigen::VectorXd c(n), d(n);
    double shift = it == 0 ? 0.0 : energy * 0.99;
    c[0] = off[0] / (diag[0] - shift);
    d[0] = psi[0] / (diag[0] - shift);
    for (int i = 1; i < n; ++i) {
      double m = (diag[i] - shift) - off[i - 1] * c[i - 1];
      if (i < n - 1) c[i] = off[i] / m;
      d[i] = (psi[i] - off[i - 1] * d[i - 1]) / m;
    }
    Eigen::VectorXd y(n);
    y[n - 1] = d[n - 1];
    for (int i = n - 2; i >= 0; --i) y[i] = d[i] - c[i] * y[i + 1];
    y.normalize();
    // Rayleigh quotient.
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      e += diag[i] * y[i] * y[i];
      if (i < n - 1) e += 2.0 * off[i] * y[i] * y[i + 1];
    }
    if (it > 2 && std::abs(e - energy) < 1e-14 * std::max(1.0, std::abs(e))) {
      psi = y;
      energy = e;
      break;
    }
    psi = y;
    energy = e;
  }
  double tail = std::max(psi[0] * psi[0], psi[n - 1] * psi[n - 1]);
  if (tail > 1e-12) throw Error("GridTooNarrow", "wavefunction tail at the box edge");
  GroundState g;
  g.energy = energy;
  double x2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = -box + h * (i + 1);
    x2 += x * x * psi[i] * psi[i];
  }
  g.x2 = x2;
  return g;
}

/// <x^2> of the pure quartic ground state H = p^2/2 + x^4/(4N), with
/// Richardson extrapolation in the grid spacing.
inline double quartic_ground_state_x2(double quartic_n, int n_points = 4000) {
  double box = 7.0 * std::pow(quartic_n, 1.0 / 6.0) + 4.0;
  auto v = [&](double x) { return x * x * x * x / (4.0 * quartic_n); };
  double coarse = ground_state_1d(v, box, n_points).x2;
  double fine = ground_state_1d(v, box, 2 * n_points).x2;
  return (4.0 * fine - coarse) / 3.0;
}

/// Harmonic ground state <x^2> for H = p^2/2 + (stiffness/2) x^2, same
/// solver and extrapolation: equals 1/(2 sqrt(stiffness)).
inline double harmonic_ground_state_x2(double stiffness, int n_points = 4000) {
  double omega = std::sqrt(stiffness);
  double box = 9.0 / std::sqrt(omega);
  auto v = [&](double x) { return 0.5 * stiffness * x * x; };
  double coarse = ground_state_1d(v, box, n_points).x2;
  double fine = ground_state_1d(v, box, 2 * n_points).x2;
  return (4.0 * fine - coarse) / 3.0;
}

/// xi fit of the quartic ground state over an N list (exact value 1/3).
inline FiniteSizeFit quartic_ground_state_scan(const std::vector<double>& n_list) {
  if (n_list.size() < 4) throw Error("InsufficientPoints", "need >= 4 sizes");
  FiniteSizeFit out;
  for (double n : n_list) {
    out.n_values.push_back(n);
    out.x2.push_back(quartic_ground_state_x2(n));
    out.stderr_x2.push_back(0.0);
  }
  out.xi = fit_powerlaw(out.n_values, out.x2);
  return out;
}

// ---------------------------------------------------------------------------
// Equilibrium quadrature variances of the normal phase.
// ---------------------------------------------------------------------------

/// <x_a^2> of the coupled-oscillator normal phase: the two eigenmodes carry
/// stiffness (lambda_c +- lambda), so at T = 0
///   <x_a^2> = 1/(2 sqrt(lambda_c+lambda)) + 1/(2 sqrt(lambda_c-lambda))
/// and at finite temperature each mode picks up coth(beta w/2) with
/// w = sqrt(lambda_c -+ lambda).  Near the transition this scales as
/// (lambda_c-lambda)^{-1/2} at T=0 and (lambda_c-lambda)^{-1} thermally.
inline double equilibrium_quadrature_x2(double lambda, double lambda_c, double beta) {
  if (!(lambda < lambda_c)) throw Error("NonPositiveFrequency", "normal phase needs lambda < lambda_c");
  double x2 = 0.0;
  for (double s : {+1.0, -1.0}) {
    double w = std::sqrt(lambda_c + s * lambda);
    double th = std::isinf(beta) ? 1.0 : coth(0.5 * beta * w);
    x2 += th / (2.0 * w);
  }
  return x2;
}

}  // namespace dicke
