#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <fstream>

#include "dicke/collective.hpp"
#include "dicke/config.hpp"
#include "dicke/model.hpp"

using namespace dicke;
using Catch::Approx;

TEST_CASE("validate accepts well-formed defaults", "[model]") {
  ModelParams p;
  p.n_atoms = 10;
  REQUIRE_NOTHROW(validate(p));
}

TEST_CASE("validate rejects invariant violations", "[model]") {
  ModelParams p;
  p.kappa = -1.0;
  REQUIRE_THROWS_MATCHES(validate(p), Error, Catch::Matchers::MessageMatches(
                                                 Catch::Matchers::ContainsSubstring(
                                                     "NegativeRate")));
  p = ModelParams{};
  p.n_atoms = 0;
  REQUIRE_THROWS_AS(validate(p), Error);
  p = ModelParams{};
  p.omega_z = 0.0;
  REQUIRE_THROWS_AS(validate(p), Error);
}

TEST_CASE("negative cavity detuning is physical", "[model]") {
  ModelParams p;
  p.omega_c = -0.5;
  REQUIRE_NOTHROW(validate(p));
}

TEST_CASE("gamma_total is gamma_phi + gamma_down", "[model]") {
  ModelParams p;
  p.gamma_phi = 0.2;
  p.gamma_down = 0.1;
  CHECK(gamma_total(p) == Approx(0.3));
  p.gamma_phi = 0.0;
  p.gamma_down = 0.0;
  CHECK(gamma_total(p) == 0.0);
  p.gamma_phi = 0.02;
  CHECK(gamma_total(p) == Approx(0.02));
}

TEST_CASE("rate convention: <a> decays at exactly kappa", "[model]") {
  // Single decaying mode realized as the collective Liouvillian at lambda=0
  // with one spectator atom; start from a displaced (truncated coherent)
  // state and compare <a>(t) with the closed form.
  ModelParams p;
  p.omega_c = 0.7;
  p.kappa = 0.35;
  p.lambda = p.lambda_prime = 0.0;
  p.n_atoms = 1;
  const int cutoff = 14;
  auto sys = build_collective_liouvillian(p, cutoff);

  // Coherent state alpha0 in the photon factor, spin down.
  const complexd alpha0{0.6, 0.2};
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(sys.dim);
  for (int n = 0; n <= cutoff; ++n) {
    double logw = -0.5 * std::norm(alpha0) + n * std::log(std::abs(alpha0)) -
                  0.5 * std::lgamma(n + 1.0);
    complexd phase = std::polar(1.0, n * std::arg(alpha0));
    psi[Eigen::Index(n) * (p.n_atoms + 1) + 0] = std::exp(logw) * phase;
  }
  psi.normalize();
  MatrixC rho0 = psi * psi.adjoint();
  VectorC v0 = Eigen::Map<VectorC>(rho0.data(), sys.dim * sys.dim);

  SparseC a_full = kron(fock_annihilation(cutoff), sparse_identity(p.n_atoms + 1));
  auto mean_a = [&](const VectorC& v) {
    return complexd((a_full * sys.unvec(v)).trace());
  };

  complexd a_init = mean_a(v0);
  double t = 1.3;
  VectorC vt = evolve_generator(sys.generator, v0, t, 1e-12);
  complexd expected = a_init * std::exp((-I * p.omega_c - p.kappa) * t);
  CHECK(std::abs(mean_a(vt) - expected) < 1e-8);
}

TEST_CASE("config file parsing with CLI-style overrides", "[model]") {
  std::string path = "test_config_tmp.cfg";
  {
    std::ofstream f(path);
    f << "# comment line\n";
    f << "omega_c = 2.5\n";
    f << "lambda=0.3   # trailing comment\n";
    f << "beta = inf\n";
    f << "n_atoms = 7\n";
  }
  ModelParams p = params_from_file(path);
  CHECK(p.omega_c == Approx(2.5));
  CHECK(p.lambda == Approx(0.3));
  CHECK(std::isinf(p.beta));
  CHECK(p.n_atoms == 7);
  p = apply_params(p, {{"omega_c", "-0.5"}});
  CHECK(p.omega_c == Approx(-0.5));
  REQUIRE_THROWS_AS(apply_params(p, {{"omega_q", "1"}}), Error);
  std::remove(path.c_str());
}
