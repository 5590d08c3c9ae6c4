#pragma once

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <vector>

#include "dicke/drift.hpp"
#include "dicke/fitting.hpp"

namespace dicke {

/// Symmetry-respecting second moments of the Dicke model.  First moments
/// (<a>, <sigma^+->) are identically zero in this representation: the state
/// only carries the Z2-even correlators, so the symmetric sector is preserved
/// by construction.
///
/// Normalization: spin operators are sigma^alpha = tau^alpha/2, so the
/// cross-site correlators lie in [-1/4, 1/4] and sz in [-1/2, 1/2].
struct MomentState {
  double n_ph = 0.0;       // <a^dag a>
  complexd aa{0.0, 0.0};   // <a a>
  complexd ax{0.0, 0.0};   // <a sigma^x_i>
  complexd ay{0.0, 0.0};   // <a sigma^y_i>
  double xx = 0.0;         // <sigma^x_i sigma^x_j>, i != j
  double yy = 0.0;
  double zz = 0.25;        // product of two down spins
  double xy = 0.0;
  double sz = -0.5;        // <sigma^z_i>

  /// Fully polarized dark state: all atoms down, cavity empty.  The fields
  /// are moments, not cumulants, so zz = <sigma^z_i sigma^z_j> = 1/4 here;
  /// every other correlator vanishes.
  static MomentState dark_state() { return MomentState{}; }
};

namespace detail {
using CumArray = std::array<double, 13>;

inline CumArray to_array(const MomentState& s) {
  return {s.n_ph, s.aa.real(), s.aa.imag(), s.ax.real(), s.ax.imag(),
          s.ay.real(), s.ay.imag(), s.xx, s.yy, s.zz, s.xy, s.sz, 0.0};
}
inline MomentState from_array(const CumArray& v) {
  MomentState s;
  s.n_ph = v[0];
  s.aa = {v[1], v[2]};
  s.ax = {v[3], v[4]};
  s.ay = {v[5], v[6]};
  s.xx = v[7];
  s.yy = v[8];
  s.zz = v[9];
  s.xy = v[10];
  s.sz = v[11];
  return s;
}
}  // namespace detail

struct CumulantOptions {
  /// Freeze sz at its initial value; with single-atom channels off this turns
  /// the system into the exactly solvable Gaussian (large-N) model.
  bool freeze_sz = false;
};

/// Second-cumulant equations of motion (third cumulants set to zero), derived
/// from the master equation for the Dicke coupling (2 lambda / sqrt(N))
/// (a + a^dag) sum_j sigma^x_j with cavity decay and all single-atom
/// channels.  g = 2 lambda / sqrt(N) is the per-atom coupling; N enters only
/// through the g*N photon drive terms and the (N-1) cross-site factors.
inline MomentState cumulant_rhs(const MomentState& s, const ModelParams& p,
                               const CumulantOptions& opt = {}) {
  if (p.gamma > 0) {
    throw Error("CollectiveChannelUnsupported",
                "cumulant equations carry kappa and single-atom channels only");
  }
  if (p.lambda_prime != p.lambda) {
    throw Error("GeneralizedCouplingUnsupported",
                "cumulant equations are derived for the plain Dicke model");
  }
  const double n_atoms = double(p.n_atoms);
  const double g = 2.0 * p.lambda / std::sqrt(n_atoms);
  const double gt = gamma_transverse(p);
  const double wc = p.omega_c, wz = p.omega_z, k = p.kappa;
  const double gd = p.gamma_down, gu = p.gamma_up;

  MomentState d;
  d.n_ph = -2.0 * k * s.n_ph - 2.0 * g * n_atoms * s.ax.imag();
  d.aa = -2.0 * (I * wc + k) * s.aa - 2.0 * I * g * n_atoms * s.ax;
  d.ax = -(I * wc + k + gt) * s.ax - wz * s.ay -
         I * g * ((n_atoms - 1.0) * s.xx + 0.25);
  d.ay = -(I * wc + k + gt) * s.ay + wz * s.ax -
         g * (s.aa + s.n_ph + 0.5) * s.sz - I * g * (n_atoms - 1.0) * s.xy;
  d.xx = -2.0 * wz * s.xy - 2.0 * gt * s.xx;
  d.yy = 2.0 * wz * s.xy - 2.0 * gt * s.yy - 4.0 * g * s.sz * s.ay.real();
  d.zz = 4.0 * g * s.sz * s.ay.real() - 4.0 * gd * (s.zz + 0.5 * s.sz) -
         4.0 * gu * (s.zz - 0.5 * s.sz);
  d.xy = wz * (s.xx - s.yy) - 2.0 * gt * s.xy - 2.0 * g * s.sz * s.ax.real();
  d.sz = opt.freeze_sz ? 0.0
                       : 2.0 * g * s.ay.real() - 2.0 * gd * (s.sz + 0.5) +
                             2.0 * gu * (0.5 - s.sz);
  return d;
}

struct CumulantTrajectoryPoint {
  double t;
  MomentState state;
};

/// Adaptive integration of the cumulant system sampled every dt_sample.
inline std::vector<CumulantTrajectoryPoint> integrate_cumulant(
    const MomentState& s0, const ModelParams& p, double t_final, double dt_sample,
    const CumulantOptions& opt = {}, double tol = 1e-10) {
  namespace ode = boost::numeric::odeint;
  auto rhs = [&](const detail::CumArray& v, detail::CumArray& dv, double) {
    dv = detail::to_array(cumulant_rhs(detail::from_array(v), p, opt));
  };
  auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<detail::CumArray>());
  std::vector<CumulantTrajectoryPoint> out;
  detail::CumArray v = detail::to_array(s0);
  double t = 0.0, dt = 1e-3;
  out.push_back({0.0, s0});
  double t_next = dt_sample;
  while (t < t_final - 1e-15 * t_final) {
    double target = std::min(t_next, t_final);
    while (t < target) {
      if (dt < 1e-15 * std::max(1.0, t_final)) {
        throw Error("StepSizeUnderflow", "adaptive step collapsed");
      }
      dt = std::min(dt, target - t);
      if (stepper.try_step(rhs, v, t, dt) == ode::fail) continue;
    }
    out.push_back({t, detail::from_array(v)});
    t_next += dt_sample;
  }
  return out;
}

inline double rhs_norm(const MomentState& s, const ModelParams& p,
                       const CumulantOptions& opt = {}) {
  auto d = detail::to_array(cumulant_rhs(s, p, opt));
  double acc = 0.0;
  for (double c : d) acc += c * c;
  return std::sqrt(acc);
}

/// Steady state by pseudo-time integration followed by a Newton polish on the
/// algebraic system (Newton alone can land on unphysical roots).
inline MomentState cumulant_steady_state(const ModelParams& p,
                                         const CumulantOptions& opt = {},
                                         MomentState s0 = MomentState::dark_state(),
                                         double t_max = 1e5, double res_tol = 1e-10) {
  // Without gamma_down the polarization relaxes only through the coupling,
  // at a rate ~ lambda^2/N; chunks grow so large systems stay affordable.
  double t_chunk = 50.0;
  MomentState s = s0;
  double t = 0.0;
  while (rhs_norm(s, p, opt) > 1e-7) {
    if (t >= t_max) throw Error("NonStationary", "no fixed point reached within t_max");
    auto traj = integrate_cumulant(s, p, t_chunk, t_chunk, opt);
    s = traj.back().state;
    t += t_chunk;
    t_chunk = std::min(2.0 * t_chunk, 2000.0);
  }

  // Newton polish; sz stays frozen out of the unknowns if requested.
  auto f = [&](const detail::CumArray& v) {
    return detail::to_array(cumulant_rhs(detail::from_array(v), p, opt));
  };
  detail::CumArray x = detail::to_array(s);
  const int nvar = 12;
  for (int it = 0; it < 40; ++it) {
    detail::CumArray fx = f(x);
    double r0 = 0;
    for (int i = 0; i < nvar; ++i) r0 += fx[i] * fx[i];
    if (std::sqrt(r0) < res_tol) break;
    Eigen::MatrixXd jac(nvar, nvar);
    const double h = 1e-8;
    for (int j = 0; j < nvar; ++j) {
      detail::CumArray xp = x;
      xp[j] += h;
      auto fp = f(xp);
      for (int i = 0; i < nvar; ++i) jac(i, j) = (fp[i] - fx[i]) / h;
    }
    Eigen::VectorXd rhs(nvar);
    for (int i = 0; i < nvar; ++i) rhs(i) = -fx[i];
    Eigen::VectorXd step = jac.fullPivLu().solve(rhs);
    double damp = 1.0;
    for (int tries = 0; tries < 25; ++tries) {
      detail::CumArray xn = x;
      for (int i = 0; i < nvar; ++i) xn[i] += damp * step(i);
      auto fn = f(xn);
      double rn = 0;
      for (int i = 0; i < nvar; ++i) rn += fn[i] * fn[i];
      if (rn < r0 && xn[0] > -1e-9) {
        x = xn;
        break;
      }
      damp *= 0.5;
    }
  }
  MomentState res = detail::from_array(x);
  if (rhs_norm(res, p, opt) > res_tol) {
    throw Error("NonStationary", "Newton polish did not reach residual tolerance");
  }
  return res;
}

struct CumulantCurvePoint {
  int n_atoms;
  MomentState state;
};

/// Steady-state photon curve against N at fixed parameters (the Dicke
/// coupling lambda is the intensive control, so it stays fixed as N varies).
inline std::vector<CumulantCurvePoint> cumulant_curve_vs_n(
    ModelParams p, const std::vector<int>& n_list, const CumulantOptions& opt = {}) {
  std::vector<CumulantCurvePoint> out;
  for (int n : n_list) {
    p.n_atoms = n;
    out.push_back({n, cumulant_steady_state(p, opt)});
  }
  return out;
}

}  // namespace dicke
