#include <catch2/catch_amalgamated.hpp>

#include "brute_force.hpp"
#include "dicke/permsym.hpp"
#include "dicke/rng.hpp"

using namespace dicke;
using Catch::Approx;

namespace {

ModelParams random_params(CounterRng& rng, int n_atoms) {
  ModelParams p;
  p.omega_c = rng.uniform(0.6, 1.5);
  p.omega_z = rng.uniform(0.6, 1.5);
  p.lambda = rng.uniform(0.1, 0.7);
  p.lambda_prime = rng.uniform(0.0, 0.7);
  p.kappa = rng.uniform(0.3, 1.0);
  p.gamma = rng.uniform(0.0, 0.25);
  p.gamma_down = rng.uniform(0.05, 0.3);
  p.gamma_phi = rng.uniform(0.0, 0.3);
  p.gamma_up = rng.uniform(0.0, 0.2);
  p.n_atoms = n_atoms;
  return p;
}

}  // namespace

TEST_CASE("reduced dimension follows the combinatorial count", "[permsym]") {
  ModelParams p;
  p.n_atoms = 10;
  PermSymSystem sys(p, 5);
  CHECK(sys.n_classes() == 286);  // C(13, 3)
  CHECK(sys.dim() == 36 * 286);
}

TEST_CASE("trace functional annihilates the generator", "[permsym]") {
  CounterRng rng(47);
  ModelParams p = random_params(rng, 3);
  PermSymSystem sys(p, 4);
  for (int rep = 0; rep < 5; ++rep) {
    VectorC x(sys.dim());
    for (Eigen::Index i = 0; i < sys.dim(); ++i) {
      x[i] = complexd(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
    complexd t = sys.trace_vec().dot(sys.generator() * x);
    CHECK(std::abs(t) < 1e-10 * x.norm() * sys.generator().norm());
  }
}

TEST_CASE("generator commutes with the hermiticity image", "[permsym]") {
  CounterRng rng(53);
  ModelParams p = random_params(rng, 3);
  PermSymSystem sys(p, 4);
  for (int rep = 0; rep < 3; ++rep) {
    VectorC x(sys.dim());
    for (Eigen::Index i = 0; i < sys.dim(); ++i) {
      x[i] = complexd(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
    VectorC a = sys.hermitian_image(sys.generator() * x);
    VectorC b = sys.generator() * sys.hermitian_image(x);
    CHECK((a - b).norm() < 1e-10 * a.norm());
  }
}

TEST_CASE("dark state is steady under pure decay", "[permsym]") {
  ModelParams p;
  p.omega_c = 1.0;
  p.omega_z = 0.8;
  p.kappa = 0.5;
  p.gamma_down = 0.2;
  p.n_atoms = 3;
  PermSymSystem sys(p, 4);
  VectorC rho = permsym_steady_state(sys);
  CHECK(sys.photon_number(rho) == Approx(0.0).margin(1e-12));
  CHECK(sys.sz(rho) == Approx(-0.5).margin(1e-12));
  CHECK(sys.trace(rho) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("steady-state observables match the unreduced Liouvillian", "[permsym]") {
  // Two random draws here; the acceptance suite runs the full ten.
  CounterRng rng(59);
  for (int rep = 0; rep < 2; ++rep) {
    int n = 3;
    ModelParams p = random_params(rng, n);
    const int cutoff = 8;
    PermSymSystem sys(p, cutoff);
    VectorC rho = permsym_steady_state(sys);
    auto bf = testing::build_brute_force(p, cutoff);
    auto bf_rho = steady_state_nullvector(bf.generator, bf.trace_vec);
    auto obs = testing::brute_force_observables(bf, bf_rho.rho);
    CHECK(sys.photon_number(rho) == Approx(obs.n_ph).margin(1e-10));
    CHECK(sys.sz(rho) == Approx(obs.sz).margin(1e-10));
    CHECK(sys.xx(rho) == Approx(obs.xx).margin(1e-10));
    CHECK(sys.zz(rho) == Approx(obs.zz).margin(1e-10));
  }
}

TEST_CASE("collective-only channels agree with the Dicke-manifold solver", "[permsym]") {
  // With individual channels off the maximal-spin sector is closed; evolving
  // the permutation solver from the all-down state must land on the
  // collective steady state.
  ModelParams p = ModelParams::dicke(1.0, 1.2, 0.45, 0.6, 0.3, 3);
  const int cutoff = 8;
  auto csys = build_collective_liouvillian(p, cutoff);
  VectorC crho = collective_steady_state(csys);

  PermSymSystem sys(p, cutoff);
  VectorC rho = sys.dark_state();
  rho = evolve_generator(sys.generator(), rho, 80.0, 1e-12);
  CHECK(sys.photon_number(rho) == Approx(csys.photon_number(crho)).margin(1e-8));
  CHECK(sys.sz(rho) == Approx(csys.sz(crho)).margin(1e-8));
}

TEST_CASE("total spin is conserved by collective channels", "[permsym]") {
  ModelParams p = ModelParams::dicke(1.0, 1.0, 0.5, 0.4, 0.2, 4);
  PermSymSystem sys(p, 6);
  VectorC rho = sys.dark_state();
  double s2_max = 0.5 * p.n_atoms * (0.5 * p.n_atoms + 1.0);
  CHECK(sys.total_spin_sq(rho) == Approx(s2_max).epsilon(1e-12));
  for (double t : {5.0, 15.0}) {
    rho = evolve_generator(sys.generator(), rho, t, 1e-11);
    CHECK(sys.total_spin_sq(rho) == Approx(s2_max).epsilon(1e-8));
  }
}

TEST_CASE("single-atom dephasing breaks the maximal-spin sector", "[permsym]") {
  ModelParams p = ModelParams::dicke(1.0, 1.0, 0.5, 0.4, 0.0, 4);
  p.gamma_phi = 0.3;
  PermSymSystem sys(p, 6);
  VectorC rho = sys.dark_state();
  rho = evolve_generator(sys.generator(), rho, 20.0, 1e-10);
  double s2_max = 0.5 * p.n_atoms * (0.5 * p.n_atoms + 1.0);
  CHECK(sys.total_spin_sq(rho) < s2_max - 0.05);
}
