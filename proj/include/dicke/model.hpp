#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dicke {

/// Error carrying a short machine-readable code ("NegativeRate", ...) plus context.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Parameters of the (generalized) Dicke model, in a user-chosen energy unit.
///
/// Conventions: spins are sigma^alpha = tau^alpha / 2, so <sigma^z> lies in
/// [-1/2, 1/2].  The dissipator is D[L] = 2 L rho L^dag - {L^dag L, rho}
/// multiplied by the bare rate, so <a> decays at exactly `kappa`.  omega_c is
/// the cavity frequency in the frame rotating at the pump frequency (i.e. the
/// detuned value), which is why it may be negative.
struct ModelParams {
  double omega_c = 1.0;       // cavity frequency (rotating frame, may be < 0)
  double omega_z = 1.0;       // atomic splitting
  double lambda = 0.0;        // rotating coupling
  double lambda_prime = 0.0;  // counter-rotating coupling
  double kappa = 0.0;         // cavity decay
  double gamma = 0.0;         // collective atomic decay (jump op S^-)
  double gamma_down = 0.0;    // single-atom decay (sigma^-_j)
  double gamma_phi = 0.0;     // single-atom dephasing (sigma^z_j)
  double gamma_up = 0.0;      // single-atom pump (sigma^+_j)
  int n_atoms = 1;
  double beta = infinity;     // inverse temperature; infinity = T = 0

  /// The plain Dicke model: both couplings equal.
  static ModelParams dicke(double omega_c, double omega_z, double lambda,
                           double kappa = 0.0, double gamma = 0.0, int n = 1) {
    ModelParams p;
    p.omega_c = omega_c;
    p.omega_z = omega_z;
    p.lambda = lambda;
    p.lambda_prime = lambda;
    p.kappa = kappa;
    p.gamma = gamma;
    p.n_atoms = n;
    return p;
  }

  bool is_plain_dicke() const { return lambda_prime == lambda; }
  bool is_tavis_cummings() const { return lambda_prime == 0.0; }
  bool has_single_atom_channels() const {
    return gamma_down > 0 || gamma_phi > 0 || gamma_up > 0;
  }
};

enum class DissipatorKind {
  CavityDecay,         // L = a,          rate kappa
  CollectiveAtomDecay, // L = S^-,        rate gamma
  SingleAtomDecay,     // L = sigma^-_j,  rate gamma_down
  SingleAtomDephasing, // L = sigma^z_j,  rate gamma_phi
  SingleAtomPump,      // L = sigma^+_j,  rate gamma_up
};

struct DissipatorSpec {
  DissipatorKind kind;
  double rate;
};

/// Checks all ModelParams invariants; returns the params unchanged on success.
inline ModelParams validate(const ModelParams& p) {
  auto rate_ok = [](double r) { return r >= 0.0 && std::isfinite(r); };
  if (!rate_ok(p.kappa) || !rate_ok(p.gamma) || !rate_ok(p.gamma_down) ||
      !rate_ok(p.gamma_phi) || !rate_ok(p.gamma_up)) {
    throw Error("NegativeRate", "all dissipation rates must be >= 0");
  }
  if (p.n_atoms <= 0) {
    throw Error("NonPositiveAtomNumber", "n_atoms must be a positive integer");
  }
  if (!(p.omega_z > 0.0)) {
    throw Error("NonPositiveOmegaZ", "omega_z must be > 0");
  }
  if (p.lambda < 0.0 || p.lambda_prime < 0.0) {
    throw Error("NegativeCoupling",
                "lambda and lambda_prime are taken >= 0 (phases are gauged away)");
  }
  if (!(p.beta > 0.0)) {
    throw Error("NonPositiveBeta", "beta must be > 0 (use infinity for T=0)");
  }
  return p;
}

/// gamma_T = gamma_phi + gamma_down, the transverse single-atom decay.
inline double gamma_total(const ModelParams& p) {
  return p.gamma_phi + p.gamma_down;
}

/// Transverse damping of sigma^+ including the pump channel; equals
/// gamma_total when gamma_up = 0.
inline double gamma_transverse(const ModelParams& p) {
  return p.gamma_phi + p.gamma_down + p.gamma_up;
}

/// coth with the large-argument asymptote to avoid overflow as beta -> inf.
inline double coth(double x) {
  if (x > 20.0) return 1.0;
  if (x < -20.0) return -1.0;
  return 1.0 / std::tanh(x);
}

}  // namespace dicke
