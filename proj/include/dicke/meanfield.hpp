#pragma once

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "dicke/drift.hpp"
#include "dicke/fitting.hpp"
#include "dicke/thresholds.hpp"

namespace dicke {

// ---------------------------------------------------------------------------
// Equilibrium mean field: variational free energy of the coherent ansatz.
// ---------------------------------------------------------------------------

/// F(alpha) = w_c alpha^2 - (N/beta) ln(2 cosh(beta E)),
/// E = sqrt(w_z^2/4 + 4 lambda^2 alpha^2 / N); the T = 0 limit is
/// w_c alpha^2 - N E.  F is even in alpha.
inline double free_energy(double alpha, const ModelParams& p) {
  const double n = double(p.n_atoms);
  const double e =
      std::sqrt(0.25 * p.omega_z * p.omega_z + 4.0 * p.lambda * p.lambda * alpha * alpha / n);
  if (std::isinf(p.beta)) return p.omega_c * alpha * alpha - n * e;
  double be = p.beta * e;
  // ln(2 cosh x) = x + ln(1 + e^{-2x}) avoids overflow for large beta.
  double ln2cosh = be + std::log1p(std::exp(-2.0 * be));
  return p.omega_c * alpha * alpha - n / p.beta * ln2cosh;
}

/// Global minimizer alpha* >= 0 of the free energy; 0 for lambda <= lambda_c
/// (the flat-landscape side).
inline double minimize_free_energy(const ModelParams& p, double tol = 1e-12) {
  double lc = lambda_c_equilibrium(p.omega_c, p.omega_z, p.beta).lambda_c.value();
  if (p.lambda <= lc) return 0.0;
  // At T=0 the minimum satisfies alpha^2 <= N lambda^2 / w_c^2; pad the bracket.
  double hi = std::sqrt(double(p.n_atoms)) * (p.lambda / p.omega_c + 1.0) * 2.0;
  double a = minimize_golden([&](double x) { return free_energy(x, p); }, 0.0, hi, tol);
  return free_energy(a, p) < free_energy(0.0, p) ? a : 0.0;
}

/// Order-parameter exponent: fit of log alpha* against log(lambda - lambda_c)
/// over lambda/lambda_c in [1.001, 1.05].
inline LinearFit order_parameter_exponent(ModelParams p, int n_points = 12) {
  double lc = lambda_c_equilibrium(p.omega_c, p.omega_z, p.beta).lambda_c.value();
  std::vector<double> dl, al;
  for (int i = 0; i < n_points; ++i) {
    double f = 1.001 * std::pow(1.05 / 1.001, double(i) / (n_points - 1));
    p.lambda = f * lc;
    double a = minimize_free_energy(p);
    dl.push_back(p.lambda - lc);
    al.push_back(a);
  }
  return fit_powerlaw(dl, al);
}

// ---------------------------------------------------------------------------
// Maxwell-Bloch mean-field dynamics.
// ---------------------------------------------------------------------------

/// Mean-field state: a is the scaled cavity amplitude <a>/sqrt(N) (the
/// intensive order parameter), sp = <sigma^+>, sz = <sigma^z> per atom.
struct MeanFieldState {
  complexd a{0.0, 0.0};
  complexd sp{0.0, 0.0};
  double sz = -0.5;

  double bloch_radius2() const { return std::norm(sp) + sz * sz; }
};

/// Right-hand side of the mean-field (Maxwell-Bloch) equations with both
/// couplings and all single-atom channels:
///   da/dt  = -(i w_c + kappa) a - i lambda <sigma^-> - i lambda' <sigma^+>
///   dsp/dt = (i w_z - G) sp - 2i (lambda conj(a) + lambda' a) sz
///   dsz/dt = i lambda (conj(a) sm - a sp) + i lambda' (a sm - conj(a) sp)
///            - 2 gamma_down (sz + 1/2) + 2 gamma_up (1/2 - sz)
/// with G = gamma_phi + gamma_down + gamma_up and sm = conj(sp).  The sz
/// equation follows from the master equation with the factorized coupling;
/// its Jacobian at the normal state reproduces build_drift_mb entry by entry.
inline MeanFieldState mb_rhs(const MeanFieldState& s, const ModelParams& p) {
  if (p.gamma > 0) {
    throw Error("CollectiveChannelUnsupported",
                "mean-field dynamics carries single-atom channels only");
  }
  const double l = p.lambda, lp = p.lambda_prime;
  const double gt = gamma_transverse(p);
  const complexd sm = std::conj(s.sp);
  MeanFieldState d;
  d.a = -(I * p.omega_c + p.kappa) * s.a - I * l * sm - I * lp * s.sp;
  d.sp = (I * p.omega_z - gt) * s.sp -
         2.0 * I * (l * std::conj(s.a) + lp * s.a) * s.sz;
  d.sz = (I * l * (std::conj(s.a) * sm - s.a * s.sp)).real() +
         (I * lp * (s.a * sm - std::conj(s.a) * s.sp)).real() -
         2.0 * p.gamma_down * (s.sz + 0.5) + 2.0 * p.gamma_up * (0.5 - s.sz);
  return d;
}

/// Steady-state atomic polarization of the pump/decay balance at a = 0;
/// defaults to the fully polarized dark state when both rates vanish.
inline double sz_steady_pump(const ModelParams& p) {
  double tot = p.gamma_up + p.gamma_down;
  if (tot <= 0.0) return -0.5;
  return 0.5 * (p.gamma_up - p.gamma_down) / tot;
}

namespace detail {
using MbArray = std::array<double, 5>;

inline MbArray to_array(const MeanFieldState& s) {
  return {s.a.real(), s.a.imag(), s.sp.real(), s.sp.imag(), s.sz};
}
inline MeanFieldState from_array(const MbArray& v) {
  return {complexd(v[0], v[1]), complexd(v[2], v[3]), v[4]};
}
}  // namespace detail

struct TrajectoryPoint {
  double t;
  MeanFieldState state;
};

/// Adaptive Dormand-Prince integration of the mean-field equations, sampled
/// every `dt_sample`.  Tolerances are relative/absolute 1e-9.
inline std::vector<TrajectoryPoint> integrate_mb(const MeanFieldState& s0,
                                                 const ModelParams& p, double t_final,
                                                 double dt_sample, double tol = 1e-9) {
  namespace ode = boost::numeric::odeint;
  if (!(t_final > 0)) throw Error("BadTimeSpan", "t_final must be > 0");
  auto rhs = [&](const detail::MbArray& v, detail::MbArray& dv, double) {
    dv = detail::to_array(mb_rhs(detail::from_array(v), p));
  };
  auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<detail::MbArray>());
  std::vector<TrajectoryPoint> out;
  detail::MbArray v = detail::to_array(s0);
  double t = 0.0, dt = std::min(dt_sample, 1e-3 * t_final);
  out.push_back({0.0, s0});
  double t_next = dt_sample;
  while (t < t_final - 1e-15 * t_final) {
    double target = std::min(t_next, t_final);
    while (t < target) {
      if (dt < 1e-15 * t_final) throw Error("StepSizeUnderflow", "adaptive step collapsed");
      dt = std::min(dt, target - t);
      auto res = stepper.try_step(rhs, v, t, dt);
      if (res == ode::fail) continue;  // dt was shrunk, retry
    }
    out.push_back({t, detail::from_array(v)});
    t_next += dt_sample;
  }
  return out;
}

/// Fixed point of the mean-field flow: damped Newton on the 5 real unknowns,
/// seeded from a symmetry-breaking integration run (the normal state is
/// always a fixed point, so scans start from a small seed).
inline MeanFieldState mb_steady_state(const ModelParams& p,
                                      MeanFieldState seed = {complexd(1e-3, 0.0),
                                                             complexd(1e-3, 0.0), -0.5},
                                      double t_relax = 200.0, double tol = 1e-12) {
  auto traj = integrate_mb(seed, p, t_relax, t_relax / 8.0);
  detail::MbArray x = detail::to_array(traj.back().state);

  auto f = [&](const detail::MbArray& v) {
    return detail::to_array(mb_rhs(detail::from_array(v), p));
  };
  auto norm = [](const detail::MbArray& v) {
    double s = 0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
  };

  for (int it = 0; it < 60; ++it) {
    detail::MbArray fx = f(x);
    if (norm(fx) < tol) break;
    Eigen::Matrix<double, 5, 5> jac;
    Eigen::Matrix<double, 5, 1> rhs;
    const double h = 1e-7;
    for (int j = 0; j < 5; ++j) {
      detail::MbArray xp = x;
      xp[j] += h;
      detail::MbArray fp = f(xp);
      for (int i = 0; i < 5; ++i) jac(i, j) = (fp[i] - fx[i]) / h;
    }
    for (int i = 0; i < 5; ++i) rhs(i) = -fx[i];
    Eigen::Matrix<double, 5, 1> step = jac.fullPivLu().solve(rhs);
    double damp = 1.0;
    for (int tries = 0; tries < 30; ++tries) {
      detail::MbArray xn = x;
      for (int i = 0; i < 5; ++i) xn[i] += damp * step(i);
      MeanFieldState sn = detail::from_array(xn);
      // Stay inside the Bloch ball; damp the step otherwise.
      if (sn.bloch_radius2() <= 0.25 + 1e-9 && norm(f(xn)) < norm(fx)) {
        x = xn;
        break;
      }
      damp *= 0.5;
    }
  }
  return detail::from_array(x);
}

}  // namespace dicke
