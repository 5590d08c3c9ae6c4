#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dicke/drift.hpp"
#include "dicke/fitting.hpp"

namespace dicke {

/// G^R(w) = [w 1 - i M]^{-1} S.  Throws when w hits an eigen-resonance of a
/// lossless drift matrix.
inline MatrixXc retarded_green(const DriftMatrix& dm, double omega) {
  const auto n = dm.m.rows();
  MatrixXc k = omega * MatrixXc::Identity(n, n) - I * dm.m;
  Eigen::FullPivLU<MatrixXc> lu(k);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) {
    throw Error("SingularAtFrequency", "w 1 - i M singular at w = " + std::to_string(omega));
  }
  return lu.solve(dm.signature);
}

/// Frequency-independent Keldysh noise matrix of the Markovian collective
/// channels in the HP basis: D^K = 2i diag(kappa, kappa, gamma, gamma).
inline MatrixXc hp_keldysh_noise(const ModelParams& p) {
  Eigen::Vector4cd d(2.0 * I * p.kappa, 2.0 * I * p.kappa, 2.0 * I * p.gamma,
                     2.0 * I * p.gamma);
  return d.asDiagonal();
}

/// Retarded and Keldysh Green's functions tabulated on a frequency grid.
struct GreenFunctionSample {
  std::vector<double> omega_grid;
  std::vector<MatrixXc> gr;
  std::vector<MatrixXc> gk;
  MatrixXc dk;
};

/// Tabulates G^R and G^K = -G^R D^K G^A on the given grid.
///
/// Sign convention: inverting the quadratic Keldysh action with noise block
/// D^K = 2i diag(kappa, ...) gives G^K = -G^R D^K G^A, which makes i G^K
/// positive semidefinite and the empty-cavity occupation exactly zero via
/// 2n + 1 = i Int dw/2pi G^K_aa^dag(w).
inline GreenFunctionSample keldysh_green(const DriftMatrix& dm, const MatrixXc& dk,
                                         const std::vector<double>& omega_grid) {
  double max_re = dm.max_real_eigenvalue();
  if (max_re > 1e-10 * std::max(1.0, dm.norm())) {
    throw Error("UnstableDrift", "Keldysh functions need a stable drift matrix");
  }
  GreenFunctionSample s;
  s.omega_grid = omega_grid;
  s.dk = dk;
  s.gr.reserve(omega_grid.size());
  s.gk.reserve(omega_grid.size());
  for (double w : omega_grid) {
    MatrixXc gr = retarded_green(dm, w);
    s.gr.push_back(gr);
    s.gk.push_back(-gr * dk * gr.adjoint());
  }
  return s;
}

/// Frequency grid adapted to the resonances of M: a tan-spaced cluster per
/// pole of G^R (center -Im mu, half width |Re mu|) over a linear backbone.
/// Narrow Lorentzians near threshold are resolved by construction.
inline std::vector<double> make_frequency_grid(const DriftMatrix& dm,
                                               int points_per_pole = 200,
                                               double span_factor = 60.0) {
  auto ev = dm.eigenvalues();
  std::vector<double> grid;
  double scale = 0.0;
  for (int i = 0; i < ev.size(); ++i) {
    scale = std::max(scale, std::abs(ev[i]));
  }
  if (scale == 0.0) scale = 1.0;
  const double span = span_factor * scale;
  for (int i = 0; i < ev.size(); ++i) {
    double center = -ev[i].imag();
    double width = std::max(std::abs(ev[i].real()), 1e-6 * scale);
    // Half-offset tan spacing: no point lands exactly on an (undamped)
    // resonance center.  Points beyond the linear backbone are dropped;
    // the log wings and the analytic tail own that region.
    for (int k = 0; k < points_per_pole; ++k) {
      double theta = -M_PI / 2.0 + M_PI * (k + 0.5) / points_per_pole;
      double w = center + width * std::tan(theta);
      if (std::abs(w) <= span) grid.push_back(w);
    }
  }
  const int backbone = 2 * points_per_pole;
  for (int k = 0; k <= backbone; ++k) {
    grid.push_back(-span + 2.0 * span * k / backbone);
  }
  // Log-spaced wings out to where the 1/w^2 asymptote is clean; the residual
  // tail is added analytically by the integrators.
  const double far = 3000.0 * scale;
  const int wing = points_per_pole;
  for (int k = 1; k <= wing; ++k) {
    double w = span * std::pow(far / span, double(k) / wing);
    grid.push_back(w);
    grid.push_back(-w);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [&](double a, double b) { return std::abs(a - b) < 1e-14 * scale; }),
             grid.end());
  return grid;
}

/// Trapezoid integral of f over the sample grid.
template <typename F>
double integrate_grid(const std::vector<double>& w, F&& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    acc += 0.5 * (f(i) + f(i + 1)) * (w[i + 1] - w[i]);
  }
  return acc;
}

/// Photon number from the Keldysh function:
/// n = (Int dw/2pi [i G^K]_aa^dag - 1) / 2.  The integrand decays as C/w^2,
/// so the truncated tails are added analytically with C estimated from the
/// outermost grid points; the spread between neighboring C estimates bounds
/// the remaining tail error and must stay below `tail_tol` of the integral.
inline double photon_number_keldysh(const GreenFunctionSample& s, double tail_tol = 1e-6) {
  const std::size_t m = s.omega_grid.size();
  if (m < 16) throw Error("GridTooNarrow", "grid too coarse");
  auto f = [&](std::size_t i) { return (I * s.gk[i](0, 0)).real(); };
  double integral = integrate_grid(s.omega_grid, f);

  const double wlo = s.omega_grid.front(), whi = s.omega_grid.back();
  double c_hi = f(m - 1) * whi * whi;
  double c_hi2 = f(m - 2) * s.omega_grid[m - 2] * s.omega_grid[m - 2];
  double c_lo = f(0) * wlo * wlo;
  double c_lo2 = f(1) * s.omega_grid[1] * s.omega_grid[1];
  integral += c_hi / whi + c_lo / std::abs(wlo);
  integral /= 2.0 * M_PI;

  double tail_err = (std::abs(c_hi - c_hi2) / whi + std::abs(c_lo - c_lo2) / std::abs(wlo)) /
                    (2.0 * M_PI);
  if (tail_err > tail_tol * std::max(std::abs(integral), 1.0)) {
    throw Error("GridTooNarrow", "Lorentzian tail estimate above tolerance");
  }
  return 0.5 * (integral - 1.0);
}

/// Convenience driver: builds the adapted grid and doubles its density with
/// Richardson extrapolation (the trapezoid error is second order in the
/// spacing) until the estimated error is below tolerance.
inline double photon_number_keldysh(const DriftMatrix& dm, const MatrixXc& dk,
                                    double rel_tol = 1e-7) {
  int ppp = 256;
  double prev = infinity, best = infinity;
  for (int it = 0; it < 7; ++it) {
    auto grid = make_frequency_grid(dm, ppp);
    double n = photon_number_keldysh(keldysh_green(dm, dk, grid));
    if (it > 0) {
      best = n + (n - prev) / 3.0;
      double err_est = std::abs(n - prev) / 3.0;
      if (err_est <= rel_tol * std::max(std::abs(best), 1e-3)) return best;
    }
    prev = n;
    ppp *= 2;
  }
  return best;
}

/// x-quadrature of mode `q` (0: cavity, 1: matter): u = (e_{2q} + e_{2q+1})/sqrt(2).
inline Eigen::VectorXcd quadrature_vector(int n, int q) {
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(n);
  u[2 * q] = 1.0 / std::sqrt(2.0);
  u[2 * q + 1] = 1.0 / std::sqrt(2.0);
  return u;
}

/// Fluctuation-response ratio chi(w) = -i G^K_xx / (2 Im G^R_xx) evaluated
/// at grid index i; equals coth(w / 2T) in equilibrium.
inline double fluctuation_response_ratio(const GreenFunctionSample& s, int quadrature_index,
                                         std::size_t i) {
  auto u = quadrature_vector(int(s.gr[i].rows()), quadrature_index);
  complexd gk = u.dot(s.gk[i] * u);
  complexd gr = u.dot(s.gr[i] * u);
  return (-I * gk).real() / (2.0 * gr.imag());
}

struct LeetWindow {
  double omega_min;
  double omega_max;
};

/// Default LEET fit window: [1e-3, 1e-1] * min(kappa, |omega_c|).
inline LeetWindow default_leet_window(const ModelParams& p) {
  double base = std::min(p.kappa > 0 ? p.kappa : std::abs(p.omega_c), std::abs(p.omega_c));
  return {1e-3 * base, 1e-1 * base};
}

/// Low-energy effective temperature T* from a fit of chi(w) ~ 2 T*/w on the
/// window: least squares of (w/2) chi(w) against a constant.  The relative
/// scatter of the fitted constant is bounded by `residual_tol`.
inline double effective_temperature(const GreenFunctionSample& s, int quadrature_index,
                                    const LeetWindow& window, double residual_tol = 0.05) {
  std::vector<double> vals;
  for (std::size_t i = 0; i < s.omega_grid.size(); ++i) {
    double w = s.omega_grid[i];
    if (w < window.omega_min || w > window.omega_max) continue;
    vals.push_back(0.5 * w * fluctuation_response_ratio(s, quadrature_index, i));
  }
  if (vals.size() < 8) throw Error("GridTooNarrow", "too few grid points in LEET window");
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= double(vals.size());
  double scatter = 0.0;
  for (double v : vals) scatter = std::max(scatter, std::abs(v - mean));
  if (!(std::abs(mean) > 0) || scatter > residual_tol * std::abs(mean)) {
    throw Error("NonAnalyticWindow", "chi(w) does not follow 2T*/w on the fit window");
  }
  return mean;
}

/// Builds a log-spaced sample on the LEET window and fits T*.
inline double effective_temperature(const DriftMatrix& dm, const MatrixXc& dk,
                                    const LeetWindow& window, int quadrature_index = 0,
                                    int n_points = 160) {
  std::vector<double> grid;
  double ratio = window.omega_max / window.omega_min;
  for (int i = 0; i <= n_points; ++i) {
    grid.push_back(window.omega_min * std::pow(ratio, double(i) / n_points));
  }
  return effective_temperature(keldysh_green(dm, dk, grid), quadrature_index, window);
}

}  // namespace dicke
