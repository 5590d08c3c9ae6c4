#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <string>
#include <vector>

#include "dicke/model.hpp"

namespace dicke {

using complexd = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;
using MatrixXc = Eigen::MatrixXcd;

inline constexpr complexd I{0.0, 1.0};

/// Linear equations of motion dv/dt = M v together with the equal-time
/// commutator matrix S_ij = <[v_i, v_j^dag]> that seeds the retarded
/// Green's function G^R(w) = (w 1 - i M)^{-1} S.
struct DriftMatrix {
  MatrixXc m;
  MatrixXc signature;
  std::vector<std::string> basis_labels;

  Eigen::VectorXcd eigenvalues() const {
    return Eigen::ComplexEigenSolver<MatrixXc>(m, false).eigenvalues();
  }

  double max_real_eigenvalue() const {
    auto ev = eigenvalues();
    double mx = -infinity;
    for (int i = 0; i < ev.size(); ++i) mx = std::max(mx, ev[i].real());
    return mx;
  }

  double norm() const { return m.norm(); }
};

/// Holstein-Primakoff drift matrix in the basis (a, a^dag, b, b^dag).
/// Collective channels only; the generalized model splits the coupling
/// entries into lambda / lambda_prime blocks.
inline DriftMatrix build_drift_hp(const ModelParams& p) {
  if (p.has_single_atom_channels()) {
    throw Error("SingleAtomChannelPresent",
                "the HP representation keeps collective channels only");
  }
  const double wc = p.omega_c, wz = p.omega_z, k = p.kappa, g = p.gamma;
  const double l = p.lambda, lp = p.lambda_prime;
  Matrix4c m;
  m << -(k + I * wc), 0.0, -I * l, -I * lp,
       0.0, -(k - I * wc), I * lp, I * l,
       -I * l, -I * lp, -(g + I * wz), 0.0,
       I * lp, I * l, 0.0, -(g - I * wz);
  DriftMatrix dm;
  dm.m = m;
  dm.signature = Eigen::Vector4cd(1, -1, 1, -1).asDiagonal();
  dm.basis_labels = {"a", "adag", "b", "bdag"};
  return dm;
}

/// Maxwell-Bloch drift matrix in the basis (<a>, <a^dag>, <sigma->, <sigma+>)
/// with the atomic polarization sz entering the spin rows.  The transverse
/// damping is gamma_phi + gamma_down + gamma_up (the pump also damps the
/// coherence), which reduces to gamma_T for an undriven system.
inline DriftMatrix build_drift_mb(const ModelParams& p, double sz) {
  if (p.gamma > 0) {
    throw Error("CollectiveChannelUnsupported",
                "the Maxwell-Bloch equations carry single-atom channels only");
  }
  const double wc = p.omega_c, wz = p.omega_z, k = p.kappa;
  const double gt = gamma_transverse(p);
  const double l = p.lambda, lp = p.lambda_prime;
  Matrix4c m;
  m << -(k + I * wc), 0.0, -I * l, -I * lp,
       0.0, -(k - I * wc), I * lp, I * l,
       2.0 * I * l * sz, 2.0 * I * lp * sz, -(gt + I * wz), 0.0,
       -2.0 * I * lp * sz, -2.0 * I * l * sz, 0.0, -(gt - I * wz);
  DriftMatrix dm;
  dm.m = m;
  // <[sigma^-, sigma^+]> = -2 sz, so the spin block signature is state
  // dependent; it equals the HP one at sz = -1/2.
  dm.signature = Eigen::Vector4cd(1, -1, -2.0 * sz, 2.0 * sz).asDiagonal();
  dm.basis_labels = {"a", "adag", "sm", "sp"};
  return dm;
}

}  // namespace dicke
