#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <boost/numeric/odeint.hpp>
#include <vector>

#include "dicke/drift.hpp"
#include "dicke/fitting.hpp"
#include "dicke/steadystate.hpp"
#include "dicke/thresholds.hpp"

namespace dicke {

using MatrixC = Eigen::MatrixXcd;

/// Sparse Kronecker product, (A (x) B)[i*rb+k, j*cb+l] = A_ij B_kl.
inline SparseC kron(const SparseC& a, const SparseC& b) {
  SparseC out(a.rows() * b.rows(), a.cols() * b.cols());
  std::vector<Eigen::Triplet<std::complex<double>>> trip;
  trip.reserve(std::size_t(a.nonZeros()) * b.nonZeros());
  for (Eigen::Index ka = 0; ka < a.outerSize(); ++ka) {
    for (SparseC::InnerIterator ia(a, ka); ia; ++ia) {
      for (Eigen::Index kb = 0; kb < b.outerSize(); ++kb) {
        for (SparseC::InnerIterator ib(b, kb); ib; ++ib) {
          trip.emplace_back(ia.row() * b.rows() + ib.row(),
                            ia.col() * b.cols() + ib.col(), ia.value() * ib.value());
        }
      }
    }
  }
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

inline SparseC sparse_identity(Eigen::Index n) {
  SparseC id(n, n);
  id.setIdentity();
  return id;
}

/// Photon annihilation operator on a truncated Fock space.
inline SparseC fock_annihilation(int cutoff) {
  SparseC a(cutoff + 1, cutoff + 1);
  std::vector<Eigen::Triplet<std::complex<double>>> trip;
  for (int n = 1; n <= cutoff; ++n) trip.emplace_back(n - 1, n, std::sqrt(double(n)));
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

/// Collective spin operators on the maximal Dicke manifold (S = N/2,
/// N+1 states, basis index m = 0..N with S^z eigenvalue m - N/2).
struct DickeManifold {
  SparseC sz, sp, sm;
  static DickeManifold make(int n_atoms) {
    const double s = 0.5 * n_atoms;
    const int dim = n_atoms + 1;
    std::vector<Eigen::Triplet<std::complex<double>>> tz, tp;
    for (int m = 0; m < dim; ++m) {
      double mz = m - s;
      tz.emplace_back(m, m, mz);
      if (m + 1 < dim) tp.emplace_back(m + 1, m, std::sqrt(s * (s + 1) - mz * (mz + 1)));
    }
    DickeManifold d;
    d.sz.resize(dim, dim);
    d.sz.setFromTriplets(tz.begin(), tz.end());
    d.sp.resize(dim, dim);
    d.sp.setFromTriplets(tp.begin(), tp.end());
    d.sm = d.sp.adjoint();
    return d;
  }
};

/// Superoperator helpers in column-major vec(rho) coordinates.
inline SparseC superop_left(const SparseC& a, Eigen::Index dim) {
  return kron(sparse_identity(dim), a);
}
inline SparseC superop_right(const SparseC& b, Eigen::Index dim) {
  return kron(SparseC(b.transpose()), sparse_identity(dim));
}
inline SparseC superop_dissipator(const SparseC& l, Eigen::Index dim) {
  SparseC ldl = l.adjoint() * l;
  return 2.0 * kron(SparseC(l.conjugate()), l) - superop_left(ldl, dim) -
         superop_right(ldl, dim);
}

/// Exact Lindblad generator in the collective-spin representation:
/// photon Fock space (cutoff+1) (x) Dicke manifold (N+1).  Collective
/// channels only.
struct CollectiveSystem {
  int photon_cutoff;
  int n_atoms;
  Eigen::Index dim;      // Hilbert space dimension
  SparseC hamiltonian;   // also used for closed-system ground states
  SparseC generator;     // acts on vec(rho), dimension dim^2
  SparseC num_op, sz_op; // full-space a^dag a and S^z / N
  VectorC trace_vec;

  MatrixC unvec(const VectorC& rho) const {
    return Eigen::Map<const MatrixC>(rho.data(), dim, dim);
  }
  double expval(const SparseC& op, const VectorC& rho) const {
    return (op * unvec(rho)).trace().real();
  }
  double photon_number(const VectorC& rho) const { return expval(num_op, rho); }
  double sz(const VectorC& rho) const { return expval(sz_op, rho) / n_atoms; }
  double top_fock_population(const VectorC& rho) const {
    MatrixC r = unvec(rho);
    double pop = 0.0;
    for (int m = 0; m <= n_atoms; ++m) {
      Eigen::Index i = Eigen::Index(photon_cutoff) * (n_atoms + 1) + m;
      pop += r(i, i).real();
    }
    return pop;
  }
};

inline CollectiveSystem build_collective_liouvillian(const ModelParams& p,
                                                     int photon_cutoff) {
  if (p.has_single_atom_channels()) {
    throw Error("SingleAtomChannelPresent",
                "the collective representation supports kappa and gamma only");
  }
  const int nph = photon_cutoff + 1;
  const int nsp = p.n_atoms + 1;
  const Eigen::Index dim = Eigen::Index(nph) * nsp;
  SparseC a = kron(fock_annihilation(photon_cutoff), sparse_identity(nsp));
  auto manifold = DickeManifold::make(p.n_atoms);
  SparseC sz = kron(sparse_identity(nph), manifold.sz);
  SparseC sp = kron(sparse_identity(nph), manifold.sp);
  SparseC sm = kron(sparse_identity(nph), manifold.sm);
  SparseC adag = a.adjoint();

  const double rt_n = std::sqrt(double(p.n_atoms));
  SparseC h = p.omega_c * (adag * a).eval() + p.omega_z * sz +
              (p.lambda / rt_n) * (a * sp + adag * sm).eval() +
              (p.lambda_prime / rt_n) * (a * sm + adag * sp).eval();

  SparseC gen = -I * (superop_left(h, dim) - superop_right(h, dim));
  if (p.kappa > 0) gen += p.kappa * superop_dissipator(a, dim);
  if (p.gamma > 0) gen += p.gamma * superop_dissipator(sm, dim);
  gen.makeCompressed();

  CollectiveSystem sys;
  sys.photon_cutoff = photon_cutoff;
  sys.n_atoms = p.n_atoms;
  sys.dim = dim;
  sys.hamiltonian = h;
  sys.generator = gen;
  sys.num_op = adag * a;
  sys.sz_op = sz;
  sys.trace_vec = VectorC::Zero(dim * dim);
  for (Eigen::Index i = 0; i < dim; ++i) sys.trace_vec[i * (dim + 1)] = 1.0;
  return sys;
}

/// Steady state of the collective system; CutoffTooSmall when the top Fock
/// level carries more than `cutoff_tol` population.
inline VectorC collective_steady_state(const CollectiveSystem& sys,
                                       double cutoff_tol = 1e-6) {
  auto res = steady_state_nullvector(sys.generator, sys.trace_vec);
  if (sys.top_fock_population(res.rho) > cutoff_tol) {
    throw Error("CutoffTooSmall", "steady-state population at the Fock cutoff");
  }
  return res.rho;
}

/// Driver that doubles the photon cutoff until the steady state fits.
inline std::pair<CollectiveSystem, VectorC> collective_steady_state_auto(
    const ModelParams& p, int cutoff0 = 10, int max_cutoff = 320) {
  for (int c = cutoff0; c <= max_cutoff; c *= 2) {
    CollectiveSystem sys = build_collective_liouvillian(p, c);
    try {
      VectorC rho = collective_steady_state(sys);
      return {std::move(sys), std::move(rho)};
    } catch (const Error& e) {
      if (e.code() != "CutoffTooSmall" || 2 * c > max_cutoff) throw;
    }
  }
  throw Error("CutoffTooSmall", "photon cutoff limit exceeded");
}

/// Time evolution of vec(rho) under the generator (used by convention checks
/// and small-system oracles).
inline VectorC evolve_generator(const SparseC& gen, VectorC rho, double t_final,
                                double tol = 1e-10) {
  namespace ode = boost::numeric::odeint;
  using State = std::vector<double>;  // interleaved re/im
  State v(2 * rho.size());
  Eigen::Map<VectorC>(reinterpret_cast<complexd*>(v.data()), rho.size()) = rho;
  auto rhs = [&](const State& x, State& dx, double) {
    Eigen::Map<const VectorC> xv(reinterpret_cast<const complexd*>(x.data()), rho.size());
    dx.resize(2 * rho.size());
    Eigen::Map<VectorC> dv(reinterpret_cast<complexd*>(dx.data()), rho.size());
    dv = gen * xv;
  };
  auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<State>());
  double t = 0.0, dt = 1e-3;
  while (t < t_final) {
    dt = std::min(dt, t_final - t);
    if (stepper.try_step(rhs, v, t, dt) == ode::fail) {
      if (dt < 1e-14 * t_final) throw Error("StepSizeUnderflow", "generator evolution");
    }
  }
  return Eigen::Map<VectorC>(reinterpret_cast<complexd*>(v.data()), rho.size());
}

/// Closed-system ground state photon number by dense diagonalization (the
/// Hamiltonian is real in this basis).
inline double ground_state_photon_number(const ModelParams& p, int photon_cutoff) {
  CollectiveSystem sys = build_collective_liouvillian(
      [&] {
        ModelParams q = p;
        q.kappa = 0;
        q.gamma = 0;
        return q;
      }(),
      photon_cutoff);
  Eigen::MatrixXd h = MatrixC(sys.hamiltonian).real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  Eigen::VectorXd gs = es.eigenvectors().col(0);
  Eigen::VectorXcd gsc = gs.cast<complexd>();
  return (gsc.adjoint() * sys.num_op * gsc)(0).real();
}

struct FiniteSizeScan {
  std::vector<int> n_values;
  std::vector<double> n_ph;
  LinearFit xi;  // slope of log n_ph vs log N
};

/// Photon number against N and the finite-size exponent xi.  For the open
/// (NESS) scan lambda is pinned to the collective threshold when
/// `at_critical`; the closed-system variant diagonalizes the Hamiltonian
/// instead (kappa = gamma = 0) at the T=0 equilibrium threshold.
inline FiniteSizeScan finite_size_scan(ModelParams p, const std::vector<int>& n_list,
                                       bool at_critical, bool ground_state = false,
                                       int cutoff0 = 10) {
  if (n_list.size() < 4) throw Error("InsufficientPoints", "need at least 4 sizes");
  FiniteSizeScan scan;
  for (int n : n_list) {
    p.n_atoms = n;
    if (at_critical) {
      double lc = ground_state
                      ? lambda_c_equilibrium(p.omega_c, p.omega_z, infinity).lambda_c.value()
                      : lambda_c_collective(p.omega_c, p.omega_z, p.kappa, p.gamma)
                            .lambda_c.value();
      p.lambda = lc;
      p.lambda_prime = lc;
    }
    double nph;
    if (ground_state) {
      // Enlarge the cutoff until the ground-state occupation is converged.
      int c = cutoff0;
      nph = ground_state_photon_number(p, c);
      for (;;) {
        double next = ground_state_photon_number(p, 2 * c);
        if (std::abs(next - nph) < 1e-8 * std::max(1.0, next)) {
          nph = next;
          break;
        }
        nph = next;
        c *= 2;
        if (c > 640) throw Error("CutoffTooSmall", "ground-state cutoff limit");
      }
    } else {
      auto [sys, rho] = collective_steady_state_auto(p, cutoff0);
      nph = sys.photon_number(rho);
    }
    scan.n_values.push_back(n);
    scan.n_ph.push_back(nph);
  }
  std::vector<double> ns(scan.n_values.begin(), scan.n_values.end());
  scan.xi = fit_powerlaw(ns, scan.n_ph);
  return scan;
}

}  // namespace dicke
