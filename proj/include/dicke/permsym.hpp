#pragma once

#include <array>
#include <vector>

#include "dicke/collective.hpp"
#include "dicke/steadystate.hpp"

namespace dicke {

/// Permutation-symmetric density-matrix representation.
///
/// Each site pair (s^L_j, s^R_j) of bra/ket spins falls into one of four
/// types (uu, ud, du, dd); permutation symmetry means an element only
/// depends on the type counts (c_uu, c_ud, c_du, c_dd) with sum N, so a
/// single representative per orbit is propagated.  Together with photon
/// indices (n_L, n_R) the reduced dimension is (cutoff+1)^2 C(N+3, 3).
///
/// Multiplicities N!/(prod c!) never enter the generator; they only weight
/// trace and observable sums.
class PermSymSystem {
 public:
  PermSymSystem(const ModelParams& p, int photon_cutoff)
      : params_(p), cutoff_(photon_cutoff), nph_(photon_cutoff + 1), n_(p.n_atoms) {
    enumerate_classes();
    dim_ = Eigen::Index(nph_) * nph_ * Eigen::Index(classes_.size());
    build_generator();
    build_trace();
  }

  Eigen::Index dim() const { return dim_; }
  int n_classes() const { return int(classes_.size()); }
  int photon_cutoff() const { return cutoff_; }
  const SparseC& generator() const { return gen_; }
  const VectorC& trace_vec() const { return trace_; }

  Eigen::Index index(int nl, int nr, int cuu, int cud, int cdu) const {
    return (Eigen::Index(nl) * nph_ + nr) * Eigen::Index(classes_.size()) +
           rank_[rank_key(cuu, cud, cdu)];
  }

  /// rho = |vac> <vac| (x) |down...><down...| as a representative vector.
  VectorC dark_state() const {
    VectorC v = VectorC::Zero(dim_);
    v[index(0, 0, 0, 0, 0)] = 1.0;
    return v;
  }

  double trace(const VectorC& rho) const { return trace_.dot(rho).real(); }

  double photon_number(const VectorC& rho) const {
    double acc = 0.0;
    for (int nl = 0; nl < nph_; ++nl) {
      for (int k = 0; k <= n_; ++k) {
        acc += nl * binom_(k) * rho[index(nl, nl, k, 0, 0)].real();
      }
    }
    return acc;
  }

  double top_fock_population(const VectorC& rho) const {
    double acc = 0.0;
    for (int k = 0; k <= n_; ++k) {
      acc += binom_(k) * rho[index(cutoff_, cutoff_, k, 0, 0)].real();
    }
    return acc;
  }

  double sz(const VectorC& rho) const {
    double acc = 0.0;
    for (int nl = 0; nl < nph_; ++nl) {
      for (int k = 0; k <= n_; ++k) {
        acc += (k - 0.5 * n_) * binom_(k) * rho[index(nl, nl, k, 0, 0)].real();
      }
    }
    return acc / n_;
  }

  /// <sigma^z_i sigma^z_j>, i != j.
  double zz(const VectorC& rho) const {
    require_pair();
    double acc = 0.0;
    for (int nl = 0; nl < nph_; ++nl) {
      for (int k = 0; k <= n_; ++k) {
        double m = k - 0.5 * n_;
        acc += (m * m - 0.25 * n_) * binom_(k) * rho[index(nl, nl, k, 0, 0)].real();
      }
    }
    return acc / (double(n_) * (n_ - 1));
  }

  /// <sigma^x_i sigma^x_j>, i != j: elements with two z-off-diagonal sites.
  double xx(const VectorC& rho) const {
    require_pair();
    double acc = 0.0;
    for (int nl = 0; nl < nph_; ++nl) {
      for (int k = 0; k + 2 <= n_; ++k) {
        double w = binom2_(k);
        acc += 0.25 * w *
               (rho[index(nl, nl, k, 2, 0)] + 2.0 * rho[index(nl, nl, k, 1, 1)] +
                rho[index(nl, nl, k, 0, 2)])
                   .real();
      }
    }
    return acc;
  }

  /// <sigma^y_i sigma^y_j>, i != j.
  double yy(const VectorC& rho) const {
    require_pair();
    double acc = 0.0;
    for (int nl = 0; nl < nph_; ++nl) {
      for (int k = 0; k + 2 <= n_; ++k) {
        double w = binom2_(k);
        acc += 0.25 * w *
               (-rho[index(nl, nl, k, 2, 0)] + 2.0 * rho[index(nl, nl, k, 1, 1)] -
                rho[index(nl, nl, k, 0, 2)])
                   .real();
      }
    }
    return acc;
  }

  /// <S^2> = 3N/4 + N(N-1)(xx + yy + zz); conserved by collective channels.
  double total_spin_sq(const VectorC& rho) const {
    return 0.75 * n_ + double(n_) * (n_ - 1) * (xx(rho) + yy(rho) + zz(rho));
  }

  /// Hermiticity image: swaps bra/ket photon indices, swaps c_ud with c_du
  /// and conjugates.  rho physical  <=>  hermitian_image(rho) == rho.
  VectorC hermitian_image(const VectorC& rho) const {
    VectorC out(dim_);
    for (int nl = 0; nl < nph_; ++nl) {
      for (int nr = 0; nr < nph_; ++nr) {
        for (const auto& c : classes_) {
          out[index(nl, nr, c[0], c[1], c[2])] =
              std::conj(rho[index(nr, nl, c[0], c[2], c[1])]);
        }
      }
    }
    return out;
  }

 private:
  void require_pair() const {
    if (n_ < 2) throw Error("InsufficientAtoms", "pair correlator needs N >= 2");
  }

  int rank_key(int cuu, int cud, int cdu) const {
    return (cuu * (n_ + 1) + cud) * (n_ + 1) + cdu;
  }

  void enumerate_classes() {
    rank_.assign((n_ + 1) * (n_ + 1) * (n_ + 1), -1);
    for (int cuu = 0; cuu <= n_; ++cuu) {
      for (int cud = 0; cud + cuu <= n_; ++cud) {
        for (int cdu = 0; cdu + cud + cuu <= n_; ++cdu) {
          rank_[rank_key(cuu, cud, cdu)] = int(classes_.size());
          classes_.push_back({cuu, cud, cdu, n_ - cuu - cud - cdu});
        }
      }
    }
    binom_n_.resize(n_ + 1);
    for (int k = 0; k <= n_; ++k) binom_n_[k] = binom_exact(n_, k);
    if (n_ >= 2) {
      binom_nm2_.resize(n_ - 1);
      for (int k = 0; k <= n_ - 2; ++k) binom_nm2_[k] = binom_exact(n_ - 2, k);
    }
  }

  static double binom_exact(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
  }

  void build_generator() {
    const ModelParams& p = params_;
    const double lam = p.lambda / std::sqrt(double(n_));
    const double lamp = p.lambda_prime / std::sqrt(double(n_));
    std::vector<Eigen::Triplet<complexd>> trip;
    trip.reserve(std::size_t(dim_) * 24);

    auto add = [&](Eigen::Index tgt, int nl, int nr, int cuu, int cud, int cdu, int cdd,
                   complexd coeff) {
      if (coeff == complexd(0.0, 0.0)) return;
      if (nl < 0 || nl > cutoff_ || nr < 0 || nr > cutoff_) return;
      if (cuu < 0 || cud < 0 || cdu < 0 || cdd < 0) return;
      trip.emplace_back(tgt, index(nl, nr, cuu, cud, cdu), coeff);
    };

    for (int nl = 0; nl < nph_; ++nl) {
      for (int nr = 0; nr < nph_; ++nr) {
        for (const auto& c : classes_) {
          const int cuu = c[0], cud = c[1], cdu = c[2], cdd = c[3];
          const Eigen::Index tgt = index(nl, nr, cuu, cud, cdu);
          const double sNLp = std::sqrt(double(nl + 1)), sNL = std::sqrt(double(nl));
          const double sNRp = std::sqrt(double(nr + 1)), sNR = std::sqrt(double(nr));

          // Diagonal: coherent phases plus all number-conserving decay terms.
          complexd diag = -I * (p.omega_c * double(nl - nr) + p.omega_z * double(cud - cdu));
          diag += -p.kappa * double(nl + nr);
          diag += -p.gamma_down * double(2 * cuu + cud + cdu);
          diag += -p.gamma_up * double(2 * cdd + cud + cdu);
          diag += -p.gamma_phi * double(cud + cdu);
          diag += -p.gamma * (double(2 * cuu + cud + cdu) +
                              double(cuu) * cdu + double(cud) * cdd +
                              double(cuu) * cud + double(cdu) * cdd);
          add(tgt, nl, nr, cuu, cud, cdu, cdd, diag);

          // -i H rho: a sigma^+ and a^dag sigma^- at lambda; the
          // counter-rotating partners at lambda'.
          add(tgt, nl + 1, nr, cuu - 1, cud, cdu + 1, cdd, -I * lam * sNLp * double(cuu));
          add(tgt, nl + 1, nr, cuu, cud - 1, cdu, cdd + 1, -I * lam * sNLp * double(cud));
          add(tgt, nl - 1, nr, cuu + 1, cud, cdu - 1, cdd, -I * lam * sNL * double(cdu));
          add(tgt, nl - 1, nr, cuu, cud + 1, cdu, cdd - 1, -I * lam * sNL * double(cdd));
          add(tgt, nl + 1, nr, cuu + 1, cud, cdu - 1, cdd, -I * lamp * sNLp * double(cdu));
          add(tgt, nl + 1, nr, cuu, cud + 1, cdu, cdd - 1, -I * lamp * sNLp * double(cdd));
          add(tgt, nl - 1, nr, cuu - 1, cud, cdu + 1, cdd, -I * lamp * sNL * double(cuu));
          add(tgt, nl - 1, nr, cuu, cud - 1, cdu, cdd + 1, -I * lamp * sNL * double(cud));

          // +i rho H.
          add(tgt, nl, nr - 1, cuu - 1, cud + 1, cdu, cdd, I * lam * sNR * double(cuu));
          add(tgt, nl, nr - 1, cuu, cud, cdu - 1, cdd + 1, I * lam * sNR * double(cdu));
          add(tgt, nl, nr + 1, cuu + 1, cud - 1, cdu, cdd, I * lam * sNRp * double(cud));
          add(tgt, nl, nr + 1, cuu, cud, cdu + 1, cdd - 1, I * lam * sNRp * double(cdd));
          add(tgt, nl, nr - 1, cuu + 1, cud - 1, cdu, cdd, I * lamp * sNR * double(cud));
          add(tgt, nl, nr - 1, cuu, cud, cdu + 1, cdd - 1, I * lamp * sNR * double(cdd));
          add(tgt, nl, nr + 1, cuu - 1, cud + 1, cdu, cdd, I * lamp * sNRp * double(cuu));
          add(tgt, nl, nr + 1, cuu, cud, cdu - 1, cdd + 1, I * lamp * sNRp * double(cdu));

          // Jump parts of the dissipators.
          add(tgt, nl + 1, nr + 1, cuu, cud, cdu, cdd, 2.0 * p.kappa * sNLp * sNRp);
          if (p.gamma_down > 0) {
            add(tgt, nl, nr, cuu + 1, cud, cdu, cdd - 1,
                2.0 * p.gamma_down * double(cdd));
          }
          if (p.gamma_up > 0) {
            add(tgt, nl, nr, cuu - 1, cud, cdu, cdd + 1, 2.0 * p.gamma_up * double(cuu));
          }
          if (p.gamma > 0) {
            // Collective S^- channel: single-site part plus all ordered
            // two-site flips.
            add(tgt, nl, nr, cuu + 1, cud, cdu, cdd - 1, 2.0 * p.gamma * double(cdd));
            add(tgt, nl, nr, cuu + 2, cud - 1, cdu - 1, cdd,
                2.0 * p.gamma * double(cdu) * double(cud));
            add(tgt, nl, nr, cuu + 1, cud, cdu, cdd - 1,
                2.0 * p.gamma * (double(cdu) * cdd + double(cdd) * cud));
            add(tgt, nl, nr, cuu, cud + 1, cdu + 1, cdd - 2,
                2.0 * p.gamma * double(cdd) * (cdd - 1));
            add(tgt, nl, nr, cuu - 1, cud + 1, cdu + 1, cdd - 1,
                -2.0 * p.gamma * double(cuu) * cdd);
            add(tgt, nl, nr, cuu + 1, cud - 1, cdu - 1, cdd + 1,
                -2.0 * p.gamma * double(cud) * cdu);
          }
        }
      }
    }
    gen_.resize(dim_, dim_);
    gen_.setFromTriplets(trip.begin(), trip.end());
    gen_.makeCompressed();
  }

  void build_trace() {
    trace_ = VectorC::Zero(dim_);
    for (int nl = 0; nl < nph_; ++nl) {
      for (int k = 0; k <= n_; ++k) {
        trace_[index(nl, nl, k, 0, 0)] = binom_(k);
      }
    }
  }

  double binom_(int k) const { return binom_n_[std::size_t(k)]; }
  double binom2_(int k) const { return binom_nm2_[std::size_t(k)]; }

  ModelParams params_;
  int cutoff_, nph_, n_;
  Eigen::Index dim_ = 0;
  std::vector<std::array<int, 4>> classes_;
  std::vector<int> rank_;
  std::vector<double> binom_n_;
  std::vector<double> binom_nm2_;
  SparseC gen_;
  VectorC trace_;
};

inline PermSymSystem build_permsym_liouvillian(const ModelParams& p, int photon_cutoff) {
  return PermSymSystem(p, photon_cutoff);
}

inline VectorC permsym_steady_state(const PermSymSystem& sys, double cutoff_tol = 1e-6,
                                    double residual_tol = 1e-9) {
  auto res = steady_state_nullvector(sys.generator(), sys.trace_vec(), residual_tol);
  if (sys.top_fock_population(res.rho) > cutoff_tol) {
    throw Error("CutoffTooSmall", "steady-state population at the Fock cutoff");
  }
  return res.rho;
}

inline std::pair<int, VectorC> permsym_steady_state_auto(const ModelParams& p,
                                                         int cutoff0 = 10,
                                                         int max_cutoff = 80) {
  for (int c = cutoff0; c <= max_cutoff; c = c * 3 / 2 + 1) {
    PermSymSystem sys(p, c);
    try {
      return {c, permsym_steady_state(sys)};
    } catch (const Error& e) {
      if (e.code() != "CutoffTooSmall" || (c * 3 / 2 + 1) > max_cutoff) throw;
    }
  }
  throw Error("CutoffTooSmall", "photon cutoff limit exceeded");
}

}  // namespace dicke
