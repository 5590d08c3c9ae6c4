#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <vector>

#include "dicke/model.hpp"

namespace dicke {

using SparseC = Eigen::SparseMatrix<std::complex<double>>;
using VectorC = Eigen::VectorXcd;

/// Solves L rho = 0 normalized by trace(rho) = 1, where `trace` is the trace
/// functional in the solver's coordinates.  One row of L is replaced by the
/// trace row (the dropped equation is linearly dependent for a
/// trace-preserving generator with a one-dimensional null space).
///
/// The generator is solved twice with different replaced rows: disagreement
/// between the two solutions flags a degenerate steady state.
struct SteadyStateResult {
  VectorC rho;
  double residual;  // ||L rho||_2 after normalization
};

namespace detail {

inline VectorC solve_with_replaced_row(const SparseC& gen, const VectorC& trace,
                                       Eigen::Index row) {
  SparseC sys = gen;
  // Zero the chosen row, then add the trace functional there.
  for (Eigen::Index k = 0; k < sys.outerSize(); ++k) {
    for (SparseC::InnerIterator it(sys, k); it; ++it) {
      if (it.row() == row) it.valueRef() = 0.0;
    }
  }
  std::vector<Eigen::Triplet<std::complex<double>>> extra;
  for (Eigen::Index j = 0; j < trace.size(); ++j) {
    if (trace[j] != 0.0) extra.emplace_back(row, j, trace[j]);
  }
  SparseC addon(sys.rows(), sys.cols());
  addon.setFromTriplets(extra.begin(), extra.end());
  sys += addon;
  sys.makeCompressed();

  Eigen::SparseLU<SparseC> lu(sys);
  if (lu.info() != Eigen::Success) {
    throw Error("SolverFailure", "sparse LU factorization failed");
  }
  VectorC rhs = VectorC::Zero(sys.rows());
  rhs[row] = 1.0;
  return lu.solve(rhs);
}

}  // namespace detail

inline SteadyStateResult steady_state_nullvector(const SparseC& gen, const VectorC& trace,
                                                 double residual_tol = 1e-10,
                                                 double degeneracy_tol = 1e-7) {
  // Only rows inside the trace block (diagonal elements) are linearly
  // dependent through trace preservation; replacing any other row can break
  // the rank.  Pick two well-separated rows from the trace support.
  std::vector<Eigen::Index> diag_rows;
  for (Eigen::Index i = 0; i < trace.size(); ++i) {
    if (trace[i] != 0.0) diag_rows.push_back(i);
  }
  if (diag_rows.size() < 2) throw Error("SolverFailure", "trace functional too sparse");
  VectorC rho1 = detail::solve_with_replaced_row(gen, trace, diag_rows.front());
  VectorC rho2 =
      detail::solve_with_replaced_row(gen, trace, diag_rows[diag_rows.size() / 2]);
  double diff = (rho1 - rho2).norm() / std::max(1.0, rho1.norm());
  if (diff > degeneracy_tol) {
    throw Error("DegenerateSteadyState",
                "independent row replacements disagree: null space is not unique");
  }
  VectorC rho = rho1 / trace.dot(rho1).real();

  double res = (gen * rho).norm();
  if (res > residual_tol) {
    throw Error("SolverFailure", "steady-state residual " + std::to_string(res) +
                                     " above tolerance");
  }
  return {rho, res};
}

}  // namespace dicke
