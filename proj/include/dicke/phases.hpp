#pragma once

#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include "dicke/collective.hpp"
#include "dicke/cumulant.hpp"
#include "dicke/greens.hpp"
#include "dicke/landau.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/stability.hpp"

namespace dicke {

enum class Phase { Normal, Superradiant, CounterLasing, RegularLasing };

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Normal: return "N";
    case Phase::Superradiant: return "SR";
    case Phase::CounterLasing: return "CL";
    case Phase::RegularLasing: return "RL";
  }
  return "?";
}

struct PhasePoint {
  double x = 0.0, y = 0.0;
  Phase phase = Phase::Normal;
  complexd lead_eigenvalue{0.0, 0.0};
  double sz = -0.5;
  std::string error;  // non-empty when the point failed and defaulted to Normal
};

/// Writes one ModelParams field by name (names mirror the fields exactly).
inline void set_param_by_name(ModelParams& p, const std::string& name, double value) {
  if (name == "omega_c") p.omega_c = value;
  else if (name == "omega_z") p.omega_z = value;
  else if (name == "lambda") p.lambda = value;
  else if (name == "lambda_prime") p.lambda_prime = value;
  else if (name == "kappa") p.kappa = value;
  else if (name == "gamma") p.gamma = value;
  else if (name == "gamma_down") p.gamma_down = value;
  else if (name == "gamma_phi") p.gamma_phi = value;
  else if (name == "gamma_up") p.gamma_up = value;
  else if (name == "beta") p.beta = value;
  else throw Error("InvalidAxisName", name);
}

/// Decision table: stable -> Normal; a real eigenvalue crossing -> Superradiant
/// (pitchfork); a complex pair crossing -> lasing, counter-lasing without
/// inversion (sz <= 0) and regular lasing with it (sz > 0).
inline PhasePoint classify_phase_point(const ModelParams& p,
                                       std::optional<double> fixed_sz = std::nullopt) {
  PhasePoint pt;
  pt.sz = fixed_sz ? *fixed_sz : sz_steady_pump(p);
  DriftMatrix dm = build_drift_mb(p, pt.sz);
  auto ev = dm.eigenvalues();
  Eigen::Index lead = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    if (ev[i].real() > ev[lead].real()) lead = i;
  }
  pt.lead_eigenvalue = ev[lead];
  double scale = std::max(1.0, dm.norm());
  if (ev[lead].real() <= 1e-10 * scale) {
    pt.phase = Phase::Normal;
  } else if (std::abs(ev[lead].imag()) < kRealCrossingTol * scale) {
    pt.phase = Phase::Superradiant;
  } else {
    pt.phase = pt.sz > 0 ? Phase::RegularLasing : Phase::CounterLasing;
  }
  return pt;
}

struct Axis {
  std::string name;
  double lo = 0.0, hi = 1.0;
  int steps = 10;  // number of grid points along the axis

  double value(int i) const {
    return steps < 2 ? lo : lo + (hi - lo) * double(i) / (steps - 1);
  }
};

/// Row-major phase-diagram scan; points are independent and evaluated by a
/// worker pool, with the output assembled in deterministic order.  A failed
/// point records its error and defaults to Normal instead of aborting.
inline std::vector<PhasePoint> phase_diagram(const ModelParams& base, const Axis& ax,
                                             const Axis& ay,
                                             std::optional<double> fixed_sz = std::nullopt,
                                             int workers = 1) {
  {
    // Fail fast on a bad axis name before spawning workers.
    ModelParams probe = base;
    set_param_by_name(probe, ax.name, ax.lo);
    set_param_by_name(probe, ay.name, ay.lo);
  }
  const int total = ax.steps * ay.steps;
  std::vector<PhasePoint> grid(total);
  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      int idx = next.fetch_add(1);
      if (idx >= total) return;
      int iy = idx / ax.steps, ix = idx % ax.steps;
      PhasePoint& pt = grid[idx];
      pt.x = ax.value(ix);
      pt.y = ay.value(iy);
      try {
        ModelParams p = base;
        set_param_by_name(p, ax.name, pt.x);
        set_param_by_name(p, ay.name, pt.y);
        double sz = pt.sz;
        PhasePoint res = classify_phase_point(p, fixed_sz);
        pt.phase = res.phase;
        pt.lead_eigenvalue = res.lead_eigenvalue;
        pt.sz = res.sz;
        (void)sz;
      } catch (const std::exception& e) {
        pt.phase = Phase::Normal;
        pt.error = e.what();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Exponent reports: one orchestration point for the scaling fits.
// ---------------------------------------------------------------------------

struct ExponentReport {
  std::string method;
  std::string which;  // beta | susc | xi
  double exponent = 0.0;
  double stderr_fit = 0.0;
  std::string window;
};

/// Susceptibility exponent of the open (NESS) transition from the Keldysh
/// photon number: slope of log n vs log(lambda_c - lambda) over
/// lambda/lambda_c in [0.9, 0.999].
inline ExponentReport keldysh_susceptibility_exponent(const ModelParams& base,
                                                      int n_points = 12) {
  ModelParams p = validate(base);
  double lc = lambda_c_collective(p.omega_c, p.omega_z, p.kappa, p.gamma).lambda_c.value();
  std::vector<double> dl, n;
  for (int i = 0; i < n_points; ++i) {
    double f = 0.9 * std::pow(0.999 / 0.9, double(i) / (n_points - 1));
    p.lambda = p.lambda_prime = f * lc;
    DriftMatrix dm = build_drift_hp(p);
    n.push_back(photon_number_keldysh(dm, hp_keldysh_noise(p)));
    dl.push_back(lc - p.lambda);
  }
  auto fit = fit_powerlaw(dl, n);
  return {"keldysh", "susc", -fit.slope, fit.slope_stderr, "lambda/lambda_c in [0.9,0.999]"};
}

/// Susceptibility exponent of the T=0 equilibrium transition from the
/// quadrature formula (exact value 1/2).
inline ExponentReport equilibrium_susceptibility_exponent(int n_points = 12) {
  const double lc = 0.5;
  std::vector<double> dl, x2;
  for (int i = 0; i < n_points; ++i) {
    double f = 0.9 * std::pow(0.999 / 0.9, double(i) / (n_points - 1));
    x2.push_back(equilibrium_quadrature_x2(f * lc, lc, infinity));
    dl.push_back(lc - f * lc);
  }
  auto fit = fit_powerlaw(dl, x2);
  return {"equilibrium", "susc", -fit.slope, fit.slope_stderr,
          "lambda/lambda_c in [0.9,0.999]"};
}

/// Order-parameter exponent from the free-energy minimization.
inline ExponentReport meanfield_beta_exponent(const ModelParams& base) {
  auto fit = order_parameter_exponent(base);
  return {"meanfield", "beta", fit.slope, fit.slope_stderr,
          "lambda/lambda_c in [1.001,1.05]"};
}

/// Order-parameter exponent from Maxwell-Bloch late-time steady states:
/// |<a>|/sqrt(N) against lambda - lambda_c above threshold.
inline ExponentReport mb_beta_exponent(const ModelParams& base, int n_points = 10) {
  ModelParams p = validate(base);
  double sz0 = sz_steady_pump(p);
  double lc = lambda_c_single_atom(p.omega_c, p.omega_z, p.kappa, gamma_total(p), sz0)
                  .lambda_c.value();
  std::vector<double> dl, amp;
  for (int i = 0; i < n_points; ++i) {
    double f = 1.005 * std::pow(1.08 / 1.005, double(i) / (n_points - 1));
    p.lambda = p.lambda_prime = f * lc;
    MeanFieldState ss = mb_steady_state(p);
    dl.push_back(p.lambda - lc);
    amp.push_back(std::abs(ss.a));
  }
  auto fit = fit_powerlaw(dl, amp);
  // |a| ~ (dl)^beta directly: alpha = sqrt(N) |a|.
  return {"meanfield-mb", "beta", fit.slope, fit.slope_stderr,
          "lambda/lambda_c in [1.005,1.08]"};
}

}  // namespace dicke
