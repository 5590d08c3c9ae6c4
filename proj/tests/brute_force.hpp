#pragma once

// Test-only oracle: the unreduced Lindblad problem on the full
// photon (x) 2^N Hilbert space, built independently of the permutation
// machinery it checks.

#include <vector>

#include "dicke/collective.hpp"
#include "dicke/steadystate.hpp"

namespace dicke::testing {

struct BruteForceSystem {
  int cutoff;
  int n_atoms;
  Eigen::Index dim;
  SparseC generator;
  VectorC trace_vec;
  SparseC num_op;
  std::vector<SparseC> sx, sy_unused, sz_site;

  MatrixC unvec(const VectorC& rho) const {
    return Eigen::Map<const MatrixC>(rho.data(), dim, dim);
  }
  double expval(const SparseC& op, const VectorC& rho) const {
    return (op * unvec(rho)).trace().real();
  }
};

inline SparseC spin_half(int which) {
  // which: 0 -> sigma^-, 1 -> sigma^+, 2 -> sigma^z.  Basis index 0 = up.
  SparseC s(2, 2);
  std::vector<Eigen::Triplet<complexd>> t;
  if (which == 0) t.emplace_back(1, 0, 1.0);
  if (which == 1) t.emplace_back(0, 1, 1.0);
  if (which == 2) {
    t.emplace_back(0, 0, 0.5);
    t.emplace_back(1, 1, -0.5);
  }
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

inline SparseC site_operator(const SparseC& op, int site, int n_atoms, int cutoff) {
  SparseC acc = sparse_identity(cutoff + 1);
  for (int j = 0; j < n_atoms; ++j) {
    acc = kron(acc, j == site ? op : sparse_identity(2));
  }
  return acc;
}

inline BruteForceSystem build_brute_force(const ModelParams& p, int cutoff) {
  BruteForceSystem sys;
  sys.cutoff = cutoff;
  sys.n_atoms = p.n_atoms;
  const Eigen::Index spin_dim = Eigen::Index(1) << p.n_atoms;
  sys.dim = (cutoff + 1) * spin_dim;

  SparseC a = kron(fock_annihilation(cutoff), sparse_identity(spin_dim));
  SparseC adag = a.adjoint();
  SparseC sm_tot(sys.dim, sys.dim), h(sys.dim, sys.dim);
  sm_tot.setZero();
  const double rt_n = std::sqrt(double(p.n_atoms));
  h = p.omega_c * (adag * a).eval();
  for (int j = 0; j < p.n_atoms; ++j) {
    SparseC sm = site_operator(spin_half(0), j, p.n_atoms, cutoff);
    SparseC sp = site_operator(spin_half(1), j, p.n_atoms, cutoff);
    SparseC sz = site_operator(spin_half(2), j, p.n_atoms, cutoff);
    sys.sz_site.push_back(sz);
    sys.sx.push_back(0.5 * (sp + sm).eval());
    sm_tot += sm;
    h += p.omega_z * sz + (p.lambda / rt_n) * (a * sp + adag * sm).eval() +
         (p.lambda_prime / rt_n) * (a * sm + adag * sp).eval();
  }

  SparseC gen = -I * (superop_left(h, sys.dim) - superop_right(h, sys.dim));
  if (p.kappa > 0) gen += p.kappa * superop_dissipator(a, sys.dim);
  if (p.gamma > 0) gen += p.gamma * superop_dissipator(sm_tot, sys.dim);
  for (int j = 0; j < p.n_atoms; ++j) {
    if (p.gamma_down > 0) {
      gen += p.gamma_down *
             superop_dissipator(site_operator(spin_half(0), j, p.n_atoms, cutoff), sys.dim);
    }
    if (p.gamma_up > 0) {
      gen += p.gamma_up *
             superop_dissipator(site_operator(spin_half(1), j, p.n_atoms, cutoff), sys.dim);
    }
    if (p.gamma_phi > 0) {
      gen += p.gamma_phi *
             superop_dissipator(site_operator(spin_half(2), j, p.n_atoms, cutoff), sys.dim);
    }
  }
  gen.makeCompressed();
  sys.generator = gen;
  sys.num_op = adag * a;
  sys.trace_vec = VectorC::Zero(sys.dim * sys.dim);
  for (Eigen::Index i = 0; i < sys.dim; ++i) sys.trace_vec[i * (sys.dim + 1)] = 1.0;
  return sys;
}

struct BruteForceObservables {
  double n_ph, sz, xx, zz;
};

inline BruteForceObservables brute_force_observables(const BruteForceSystem& sys,
                                                     const VectorC& rho) {
  BruteForceObservables o{};
  o.n_ph = sys.expval(sys.num_op, rho);
  const int n = sys.n_atoms;
  for (int j = 0; j < n; ++j) o.sz += sys.expval(sys.sz_site[j], rho) / n;
  int pairs = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      o.xx += sys.expval(SparseC(sys.sx[i] * sys.sx[j]), rho);
      o.zz += sys.expval(SparseC(sys.sz_site[i] * sys.sz_site[j]), rho);
      ++pairs;
    }
  }
  o.xx /= pairs;
  o.zz /= pairs;
  return o;
}

}  // namespace dicke::testing
