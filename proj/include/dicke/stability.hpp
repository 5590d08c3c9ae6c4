#pragma once

#include <functional>

#include "dicke/drift.hpp"
#include "dicke/fitting.hpp"
#include "dicke/thresholds.hpp"

namespace dicke {

enum class Classification { Stable, Pitchfork, Hopf };

struct InstabilityReport {
  Classification classification = Classification::Stable;
  std::vector<complexd> crossing_eigenvalues;
  double crossing_frequency = 0.0;  // |Im| of the crossing pair; 0 for pitchfork
};

/// An eigenvalue counts as real (pitchfork) when |Im| < 1e-8 * ||M||.
inline constexpr double kRealCrossingTol = 1e-8;

/// Threshold by determinant root finding: bisection on the largest real part
/// of eig(M(lambda)) over a bracketing coupling interval.
inline ThresholdResult find_threshold_det(
    const std::function<DriftMatrix(double)>& drift_of_lambda, double lambda_lo,
    double lambda_hi, double rel_tol = 1e-10) {
  auto growth = [&](double l) { return drift_of_lambda(l).max_real_eigenvalue(); };
  double lc = bisect(growth, lambda_lo, lambda_hi, rel_tol);
  return ThresholdResult::found(lc, ThresholdMethod::GeneralizedDet);
}

/// Classifies the instability between a stable and an unstable drift matrix:
/// pitchfork when a single real eigenvalue crosses zero, Hopf when a complex
/// pair crosses away from the origin.
inline InstabilityReport classify_instability(const DriftMatrix& dm_below,
                                              const DriftMatrix& dm_above) {
  const double scale_below = std::max(1.0, dm_below.norm());
  const double scale_above = std::max(1.0, dm_above.norm());
  bool below_stable = dm_below.max_real_eigenvalue() <= 1e-10 * scale_below;
  bool above_stable = dm_above.max_real_eigenvalue() <= 1e-10 * scale_above;
  if (below_stable && above_stable) throw Error("BothStable", "no instability in between");
  if (!below_stable && !above_stable) {
    throw Error("BothUnstable", "lower point is already unstable");
  }

  auto ev = dm_above.eigenvalues();
  InstabilityReport rep;
  double max_re = -infinity;
  for (int i = 0; i < ev.size(); ++i) max_re = std::max(max_re, ev[i].real());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i].real() > 0.5 * max_re && ev[i].real() > 0) {
      rep.crossing_eigenvalues.push_back(ev[i]);
    }
  }
  double im = 0.0;
  for (auto e : rep.crossing_eigenvalues) im = std::max(im, std::abs(e.imag()));
  if (im < kRealCrossingTol * scale_above) {
    rep.classification = Classification::Pitchfork;
    rep.crossing_frequency = 0.0;
  } else {
    rep.classification = Classification::Hopf;
    rep.crossing_frequency = im;
  }
  return rep;
}

}  // namespace dicke
