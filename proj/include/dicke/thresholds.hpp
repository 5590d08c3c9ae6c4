#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "dicke/model.hpp"

namespace dicke {

enum class ThresholdMethod {
  EquilibriumMF,
  CollectiveHP,
  SingleAtomMB,
  GeneralizedDet,
  SelfEnergy,
};

struct ThresholdResult {
  std::optional<double> lambda_c;
  ThresholdMethod method = ThresholdMethod::EquilibriumMF;
  bool exists = false;
  /// All positive real roots when the determinant condition is polynomial
  /// (the generalized model can have two); lambda_c is the smallest.
  std::vector<double> roots;

  static ThresholdResult found(double lc, ThresholdMethod m) {
    return {lc, m, true, {lc}};
  }
  static ThresholdResult none(ThresholdMethod m) { return {std::nullopt, m, false, {}}; }
};

/// Equilibrium mean-field threshold: lambda_c = (1/2) sqrt(w_c w_z coth(beta w_z / 2)).
inline ThresholdResult lambda_c_equilibrium(double omega_c, double omega_z, double beta) {
  if (!(omega_c > 0) || !(omega_z > 0)) {
    throw Error("NonPositiveFrequency", "equilibrium threshold needs omega_c, omega_z > 0");
  }
  double lc = 0.5 * std::sqrt(omega_c * omega_z * coth(0.5 * beta * omega_z));
  return ThresholdResult::found(lc, ThresholdMethod::EquilibriumMF);
}

/// Holstein-Primakoff threshold with collective decay channels:
/// lambda_c = (1/2) sqrt[(w_z^2+gamma^2)(w_c^2+kappa^2) / (w_z w_c)].
inline ThresholdResult lambda_c_collective(double omega_c, double omega_z, double kappa,
                                           double gamma) {
  if (!(omega_c > 0) || !(omega_z > 0)) {
    throw Error("NonPositiveFrequency", "collective threshold needs omega_c, omega_z > 0");
  }
  double lc = 0.5 * std::sqrt((omega_z * omega_z + gamma * gamma) *
                              (omega_c * omega_c + kappa * kappa) / (omega_z * omega_c));
  return ThresholdResult::found(lc, ThresholdMethod::CollectiveHP);
}

/// Maxwell-Bloch threshold at fixed atomic polarization sz < 0:
/// lambda_c = (1/2) sqrt[(w_z^2+gamma_T^2)(w_c^2+kappa^2) / (-2 sz w_z w_c)].
/// A non-positive product w_c * w_z makes the radicand negative: no transition.
inline ThresholdResult lambda_c_single_atom(double omega_c, double omega_z, double kappa,
                                            double gamma_T, double sz) {
  if (sz >= 0) {
    throw Error("InvertedAtoms", "threshold formula requires <sigma^z> < 0");
  }
  if (omega_c * omega_z <= 0) {
    return ThresholdResult::none(ThresholdMethod::SingleAtomMB);
  }
  double lc = 0.5 * std::sqrt((omega_z * omega_z + gamma_T * gamma_T) *
                              (omega_c * omega_c + kappa * kappa) /
                              (-2.0 * sz * omega_z * omega_c));
  return ThresholdResult::found(lc, ThresholdMethod::SingleAtomMB);
}

/// Generalized Dicke threshold at fixed ratio r = lambda'/lambda: smallest
/// lambda > 0 solving
///   (l^2-l'^2)^2 - 2(l^2+l'^2) w_c w_z + (kappa^2+w_c^2) w_z^2 = 0.
/// Both positive roots, when present, are reported in `roots`.
inline ThresholdResult lambda_c_generalized(double omega_c, double omega_z, double kappa,
                                            double lambda_ratio) {
  if (!(omega_c > 0) || !(omega_z > 0) || lambda_ratio < 0) {
    throw Error("NonPositiveFrequency",
                "generalized threshold needs omega_c, omega_z > 0 and ratio >= 0");
  }
  const double r2 = lambda_ratio * lambda_ratio;
  // Quadratic in u = lambda^2.
  const double a = (1.0 - r2) * (1.0 - r2);
  const double b = -2.0 * (1.0 + r2) * omega_c * omega_z;
  const double c = (kappa * kappa + omega_c * omega_c) * omega_z * omega_z;
  ThresholdResult res = ThresholdResult::none(ThresholdMethod::GeneralizedDet);
  std::vector<double> us;
  if (a == 0.0) {
    us.push_back(-c / b);
  } else {
    double disc = b * b - 4.0 * a * c;
    if (disc < 0) return res;
    double sq = std::sqrt(disc);
    us.push_back((-b - sq) / (2.0 * a));
    us.push_back((-b + sq) / (2.0 * a));
  }
  for (double u : us) {
    if (u > 0) res.roots.push_back(std::sqrt(u));
  }
  if (!res.roots.empty()) {
    res.exists = true;
    res.lambda_c = res.roots.front();
  }
  return res;
}

/// Disorder realization: per-atom coupling pattern and splitting.
struct DisorderSpec {
  struct Sample {
    double lambda_j;
    double omega_z_j;
  };
  std::vector<Sample> samples;
};

/// Threshold from the zero-frequency cavity self-energy with disordered
/// atoms.  Sigma_a^R(0) is the disorder average of
/// 4 lambda_j^2 <sigma^z> w_zj / (w_zj^2 + gamma_T^2); the transition solves
/// w_c^2 + kappa^2 + 2 w_c Sigma_a^R(0) = 0 for an overall scale of the
/// coupling pattern.  Returned lambda_c is the scaled rms coupling, so a
/// homogeneous pattern reproduces lambda_c_single_atom exactly.
inline ThresholdResult lambda_c_self_energy(const DisorderSpec& disorder, double omega_c,
                                            double kappa, double gamma_T, double sz) {
  if (disorder.samples.empty()) throw Error("EmptyDisorder", "need at least one sample");
  double avg = 0.0, rms2 = 0.0;
  for (const auto& s : disorder.samples) {
    if (!(s.omega_z_j > 0)) {
      throw Error("NonPositiveFrequency", "disorder sample needs omega_z_j > 0");
    }
    avg += 4.0 * s.lambda_j * s.lambda_j * sz * s.omega_z_j /
           (s.omega_z_j * s.omega_z_j + gamma_T * gamma_T);
    rms2 += s.lambda_j * s.lambda_j;
  }
  avg /= double(disorder.samples.size());
  rms2 /= double(disorder.samples.size());
  double scale2 = -(omega_c * omega_c + kappa * kappa) / (2.0 * omega_c * avg);
  if (!(scale2 > 0) || !(rms2 > 0)) {
    return ThresholdResult::none(ThresholdMethod::SelfEnergy);
  }
  return ThresholdResult::found(std::sqrt(scale2 * rms2), ThresholdMethod::SelfEnergy);
}

struct RabiFrequency {
  double value = 0.0;  // meaningful only when exists
  bool exists = false; // false past the transition (imaginary frequency)
};

/// Effective photon frequency of the Rabi model in the w_z -> inf scaling
/// limit: sqrt(w_c (w_c - 4 lambda^2 / w_z)); vanishes at the transition.
inline RabiFrequency rabi_effective_frequency(double omega_c, double omega_z, double lambda) {
  if (!(omega_c > 0) || !(omega_z > 0)) {
    throw Error("NonPositiveFrequency", "rabi limit needs omega_c, omega_z > 0");
  }
  double rad = omega_c * (omega_c - 4.0 * lambda * lambda / omega_z);
  if (rad < 0) return {0.0, false};
  return {std::sqrt(rad), true};
}

}  // namespace dicke
