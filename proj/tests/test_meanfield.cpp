#include <catch2/catch_amalgamated.hpp>

#include "dicke/meanfield.hpp"
#include "dicke/permsym.hpp"
#include "dicke/rng.hpp"

using namespace dicke;
using Catch::Approx;

TEST_CASE("free energy at alpha=0 and Z2 symmetry", "[meanfield]") {
  ModelParams p;
  p.omega_c = 1.2;
  p.omega_z = 0.8;
  p.lambda = 0.4;
  p.beta = 2.0;
  p.n_atoms = 5;
  double expected = -(p.n_atoms / p.beta) * std::log(2.0 * std::cosh(p.beta * 0.4));
  CHECK(free_energy(0.0, p) == Approx(expected).epsilon(1e-12));
  CounterRng rng(5);
  for (int i = 0; i < 20; ++i) {
    double a = rng.uniform(-3.0, 3.0);
    CHECK(free_energy(a, p) == Approx(free_energy(-a, p)).epsilon(1e-14));
  }
}

TEST_CASE("free-energy minimizer is zero below threshold", "[meanfield]") {
  ModelParams p;
  p.n_atoms = 20;
  double lc = lambda_c_equilibrium(1, 1, infinity).lambda_c.value();
  p.lambda = 0.9 * lc;
  CHECK(minimize_free_energy(p) == 0.0);
}

TEST_CASE("order-parameter exponent and sqrt(N) scaling", "[meanfield]") {
  ModelParams p;
  p.n_atoms = 50;
  auto fit = order_parameter_exponent(p);
  CHECK(fit.slope == Approx(0.5).margin(0.02));

  // alpha* scales as sqrt(N) at fixed lambda above threshold.
  p.lambda = 0.65;  // lambda_c = 1/2 here
  double a50 = minimize_free_energy(p);
  p.n_atoms = 200;
  double a200 = minimize_free_energy(p);
  CHECK(a200 / a50 == Approx(2.0).epsilon(1e-6));

  // T=0 closed form: alpha*^2 = N (16 l^4 - wc^2 wz^2) / (16 l^2 wc^2).
  double l = 0.65;
  double exact = std::sqrt(200.0 * (16 * std::pow(l, 4) - 1.0) / (16 * l * l));
  CHECK(a200 == Approx(exact).epsilon(1e-6));
}

TEST_CASE("pump/decay fixed point matches the exact N=1 steady state", "[meanfield]") {
  ModelParams p;
  p.omega_c = 1.0;
  p.omega_z = 0.9;
  p.lambda = p.lambda_prime = 0.0;
  p.kappa = 0.6;
  p.gamma_down = 0.23;
  p.gamma_up = 0.4;
  p.n_atoms = 1;
  double sz_expect = 0.5 * (p.gamma_up - p.gamma_down) / (p.gamma_up + p.gamma_down);

  MeanFieldState fp{complexd(0, 0), complexd(0, 0), sz_expect};
  auto d = mb_rhs(fp, p);
  CHECK(std::abs(d.a) < 1e-14);
  CHECK(std::abs(d.sp) < 1e-14);
  CHECK(std::abs(d.sz) < 1e-14);

  // Exact single-atom Lindblad steady state (permutation solver at N=1).
  PermSymSystem sys(p, 4);
  VectorC rho = permsym_steady_state(sys);
  CHECK(sys.sz(rho) == Approx(sz_expect).margin(1e-10));

  // With weak coupling on, the exact N=1 polarization shifts from the
  // factorized value only at order lambda^2.
  p.lambda = p.lambda_prime = 0.1;
  PermSymSystem sys2(p, 6);
  VectorC rho2 = permsym_steady_state(sys2);
  CHECK(sys2.sz(rho2) == Approx(sz_expect).margin(0.01));
}

TEST_CASE("Jacobian at the normal state equals the MB drift matrix", "[meanfield]") {
  ModelParams p;
  p.omega_c = 1.1;
  p.omega_z = 0.8;
  p.lambda = 0.45;
  p.lambda_prime = 0.3;
  p.kappa = 0.4;
  p.gamma_down = 0.1;
  p.gamma_phi = 0.07;
  p.gamma_up = 0.05;
  double sz0 = sz_steady_pump(p);

  // The flow is exactly linear in (a, abar, sm, sp) at fixed sz, so one-sided
  // differences recover the complex Jacobian through Wirtinger combinations.
  const double h = 1e-4;
  auto col = [&](int which, bool imag_dir) {
    MeanFieldState s{complexd(0, 0), complexd(0, 0), sz0};
    complexd step = imag_dir ? complexd(0, h) : complexd(h, 0);
    if (which == 0) s.a = step;
    else s.sp = step;
    auto d = mb_rhs(s, p);
    Eigen::Vector4cd v;
    v << d.a / h, std::conj(d.a) / h, std::conj(d.sp) / h, d.sp / h;
    return v;
  };
  Matrix4c jac;
  {
    auto fx = col(0, false), fy = col(0, true);
    jac.col(0) = 0.5 * (fx - I * fy);  // d/da
    jac.col(1) = 0.5 * (fx + I * fy);  // d/dabar
    auto gx = col(1, false), gy = col(1, true);
    jac.col(3) = 0.5 * (gx - I * gy);  // d/dsp
    jac.col(2) = 0.5 * (gx + I * gy);  // d/dsm
  }
  auto dm = build_drift_mb(p, sz0);
  CHECK((jac - dm.m).norm() < 1e-10);
}

TEST_CASE("Z2 equivariance of the mean-field flow", "[meanfield]") {
  ModelParams p;
  p.lambda = 0.5;
  p.lambda_prime = 0.2;
  p.kappa = 0.3;
  p.gamma_down = 0.1;
  CounterRng rng(9);
  for (int i = 0; i < 20; ++i) {
    MeanFieldState s{complexd(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                     complexd(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)),
                     rng.uniform(-0.5, 0.5)};
    MeanFieldState sm{-s.a, -s.sp, s.sz};
    auto d = mb_rhs(s, p);
    auto dm = mb_rhs(sm, p);
    CHECK(std::abs(dm.a + d.a) < 1e-14);
    CHECK(std::abs(dm.sp + d.sp) < 1e-14);
    CHECK(dm.sz == Approx(d.sz).margin(1e-14));
  }
}

TEST_CASE("free cavity decay along the trajectory", "[meanfield]") {
  ModelParams p;
  p.lambda = p.lambda_prime = 0.0;
  p.kappa = 0.4;
  p.omega_c = 1.3;
  MeanFieldState s0{complexd(1.0, 0.0), complexd(0, 0), -0.5};
  auto traj = integrate_mb(s0, p, 5.0, 0.5);
  for (const auto& pt : traj) {
    CHECK(std::abs(std::abs(pt.state.a) - std::exp(-p.kappa * pt.t)) < 1e-8);
  }
}

TEST_CASE("Bloch ball is preserved without single-atom dissipation", "[meanfield]") {
  ModelParams p;
  p.omega_c = 1.0;
  p.omega_z = 1.0;
  p.lambda = p.lambda_prime = 0.7;
  p.kappa = 0.3;
  MeanFieldState s0{complexd(0.02, 0.01), complexd(0.3, 0.1), -0.3};
  double r0 = s0.bloch_radius2();
  auto traj = integrate_mb(s0, p, 40.0, 1.0);
  for (const auto& pt : traj) {
    CHECK(std::abs(pt.state.bloch_radius2() - r0) < 1e-8);
  }
}

TEST_CASE("below threshold the seed decays to the normal state", "[meanfield]") {
  ModelParams p;
  p.omega_c = p.omega_z = 1.0;
  p.kappa = 0.4;
  p.gamma_down = 0.15;
  double lc = lambda_c_single_atom(1, 1, 0.4, gamma_total(p), -0.5).lambda_c.value();
  p.lambda = p.lambda_prime = 0.8 * lc;
  auto ss = mb_steady_state(p);
  CHECK(std::abs(ss.a) < 1e-8);
  CHECK(ss.sz == Approx(-0.5).margin(1e-8));
}

TEST_CASE("pitchfork pair: symmetry-broken fixed points are negatives", "[meanfield]") {
  ModelParams p;
  p.omega_c = p.omega_z = 1.0;
  p.kappa = 0.4;
  p.gamma_down = 0.15;
  double lc = lambda_c_single_atom(1, 1, 0.4, gamma_total(p), -0.5).lambda_c.value();
  p.lambda = p.lambda_prime = 1.3 * lc;
  auto up = mb_steady_state(p, {complexd(1e-3, 0), complexd(1e-3, 0), -0.5});
  auto dn = mb_steady_state(p, {complexd(-1e-3, 0), complexd(-1e-3, 0), -0.5});
  REQUIRE(std::abs(up.a) > 1e-3);
  CHECK(std::abs(up.a + dn.a) < 1e-8);
  CHECK(std::abs(up.sp + dn.sp) < 1e-8);
  CHECK(up.sz == Approx(dn.sz).margin(1e-8));
}

TEST_CASE("regular lasing: steady modulus with rotating phase", "[meanfield]") {
  ModelParams p;
  p.omega_c = 1.0;
  p.omega_z = 1.0;
  p.kappa = 0.5;
  p.gamma_down = 0.1;
  p.gamma_up = 1.0;
  p.lambda = 3.0;
  p.lambda_prime = 0.0;
  MeanFieldState s0{complexd(1e-3, 0), complexd(1e-3, 0), sz_steady_pump(p)};
  auto traj = integrate_mb(s0, p, 400.0, 0.05);
  // Late-time window: modulus settles while the phase advances linearly.
  std::size_t half = traj.size() * 3 / 4;
  double amp_ref = std::abs(traj[half].state.a);
  REQUIRE(amp_ref > 1e-2);
  std::vector<double> rates;
  for (std::size_t i = half; i + 1 < traj.size(); ++i) {
    CHECK(std::abs(traj[i].state.a) == Approx(amp_ref).epsilon(0.02));
    complexd ratio = traj[i + 1].state.a / traj[i].state.a;
    rates.push_back(std::arg(ratio) / (traj[i + 1].t - traj[i].t));
  }
  double mean_rate = 0;
  for (double r : rates) mean_rate += r;
  mean_rate /= rates.size();
  REQUIRE(std::abs(mean_rate) > 0.01);
  for (double r : rates) CHECK(r == Approx(mean_rate).epsilon(0.05));
}
