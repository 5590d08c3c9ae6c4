#include <catch2/catch_amalgamated.hpp>

#include "dicke/collective.hpp"
#include "dicke/rng.hpp"

using namespace dicke;
using Catch::Approx;

TEST_CASE("pure cavity decay relaxes to the vacuum projector", "[collective]") {
  ModelParams p;
  p.omega_c = 1.0;
  p.kappa = 0.8;
  p.lambda = p.lambda_prime = 0.0;
  p.gamma_down = 0.0;
  p.n_atoms = 1;
  p.gamma = 0.3;  // collective decay keeps the atomic sector non-degenerate
  auto sys = build_collective_liouvillian(p, 6);
  VectorC rho = collective_steady_state(sys);
  CHECK(sys.photon_number(rho) == Approx(0.0).margin(1e-12));
  CHECK(sys.sz(rho) == Approx(-0.5).margin(1e-12));
  MatrixC r = sys.unvec(rho);
  CHECK(std::abs(r(0, 0) - 1.0) < 1e-10);
}

TEST_CASE("generator preserves trace and hermiticity", "[collective]") {
  ModelParams p = ModelParams::dicke(1.1, 0.9, 0.6, 0.4, 0.2, 3);
  auto sys = build_collective_liouvillian(p, 5);
  CounterRng rng(41);
  for (int rep = 0; rep < 5; ++rep) {
    MatrixC r = MatrixC::Zero(sys.dim, sys.dim);
    for (Eigen::Index i = 0; i < sys.dim; ++i) {
      for (Eigen::Index j = 0; j < sys.dim; ++j) {
        r(i, j) = complexd(rng.uniform(-1, 1), rng.uniform(-1, 1));
      }
    }
    r = 0.5 * (r + r.adjoint()).eval();  // hermitian test input
    VectorC v = Eigen::Map<VectorC>(r.data(), sys.dim * sys.dim);
    VectorC lv = sys.generator * v;
    // tr L[rho] = 0.
    CHECK(std::abs(sys.trace_vec.dot(lv)) < 1e-10 * lv.norm());
    // L[rho^dag] = (L[rho])^dag for hermitian rho: L[rho] hermitian.
    MatrixC lr = sys.unvec(lv);
    CHECK((lr - lr.adjoint()).norm() < 1e-10 * lr.norm());
  }
}

TEST_CASE("degenerate steady state is detected", "[collective]") {
  // No atomic dissipation and lambda = 0: every spin projector is steady.
  ModelParams p;
  p.kappa = 0.5;
  p.lambda = p.lambda_prime = 0.0;
  p.gamma = 0.0;
  p.n_atoms = 2;
  auto sys = build_collective_liouvillian(p, 4);
  CHECK_THROWS_MATCHES(
      collective_steady_state(sys), Error,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("DegenerateSteadyState")));
}

TEST_CASE("cutoff too small is reported and auto-extension fixes it", "[collective]") {
  ModelParams p = ModelParams::dicke(1.0, 2.0, 1.0, 1.0, 0.0, 6);  // at threshold
  auto sys = build_collective_liouvillian(p, 3);
  CHECK_THROWS_MATCHES(collective_steady_state(sys), Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("CutoffTooSmall")));
  auto [sys2, rho] = collective_steady_state_auto(p, 6);
  CHECK(sys2.photon_number(rho) > 0.5);
}

TEST_CASE("cutoff convergence of the steady-state photon number", "[collective]") {
  ModelParams p = ModelParams::dicke(1.0, 2.0, 1.0, 1.0, 0.0, 6);
  auto [sys, rho] = collective_steady_state_auto(p, 10);
  double n1 = sys.photon_number(rho);
  auto sys2 = build_collective_liouvillian(p, 2 * sys.photon_cutoff);
  double n2 = sys2.photon_number(collective_steady_state(sys2));
  CHECK(n2 == Approx(n1).epsilon(1e-6));
}

TEST_CASE("steady-state photon number at the Fig. 3 critical point", "[collective]") {
  // N=6, omega_z=2, omega_c=kappa=1, gamma=0, lambda = lambda_c = 1.
  ModelParams p = ModelParams::dicke(1.0, 2.0, 1.0, 1.0, 0.0, 6);
  auto [sys, rho] = collective_steady_state_auto(p, 10);
  // Frozen regression value (first computed with this implementation).
  CHECK(sys.photon_number(rho) == Approx(1.2582927346).epsilon(1e-6));
}

TEST_CASE("closed-system ground state: empty cavity at lambda=0", "[collective]") {
  ModelParams p = ModelParams::dicke(1.0, 1.0, 0.0, 0.0, 0.0, 4);
  CHECK(ground_state_photon_number(p, 8) == Approx(0.0).margin(1e-12));
}

TEST_CASE("finite-size scan below threshold saturates", "[collective]") {
  ModelParams p = ModelParams::dicke(1.0, 2.0, 0.5, 1.0, 0.0);
  auto scan = finite_size_scan(p, {4, 6, 8, 10, 12}, false);
  CHECK(std::abs(scan.xi.slope) < 0.1);
  CHECK_THROWS_AS(finite_size_scan(p, {4, 6}, false), Error);
}
