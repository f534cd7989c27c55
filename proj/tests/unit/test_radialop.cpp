#include "../oracles/frozen_values.hpp"
#include "fixtures.hpp"

#include "hardykpz/radialop.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace hk;

TEST_CASE("angular kernel against quadrature at high precision")
{
  RadialKernel const k3(3, 0.75);
  CHECK(std::abs(k3.J(0.3) / frozen::J_3_0p75_tau0p3 - 1) < 1e-9);
  CHECK(std::abs(k3.J(2.0) / frozen::J_3_0p75_tau2 - 1) < 1e-12);
  CHECK(std::abs(k3.J_angular(0.3, 30) / frozen::J_3_0p75_tau0p3 - 1) < 1e-12);
  RadialKernel const k4(4, 0.6);
  CHECK(std::abs(k4.J(0.05) / frozen::J_4_0p6_tau0p05 - 1) < 1e-9);
  CHECK(k3.quadrature_error() < 1e-8);
  CHECK(k3.J(-0.7) == k3.J(0.7));
  // series and angular forms agree where both apply
  CHECK(std::abs(k3.J_series(1.2) / k3.J_angular(1.2, 40) - 1) < 1e-12);
  // the exterior integral is continuous across the table end
  CHECK(std::abs(k3.exterior_integral(1.0 - 1e-9, 0.3) / k3.exterior_integral(1.0, 0.3) - 1) < 1e-7);
}

TEST_CASE("grid construction")
{
  auto const u = build_grid(1.0, 100, 1.0);
  CHECK(u.r[0] == doctest::Approx(0.01));
  CHECK(u.r[99] == 1.0);
  auto const g = build_grid(1.0, 100, 2.0);
  CHECK(g.r[0] == doctest::Approx(1e-4));
  for (int i = 1; i < g.M; ++i) { CHECK(g.r[i] > g.r[i - 1]); }
  CHECK_THROWS_AS(build_grid(1.0, 15, 2.0), ConfigError);
  CHECK_THROWS_AS(build_grid(0.0, 100, 2.0), ConfigError);
  CHECK_THROWS_AS(build_grid(1.0, 100, 0.5), ConfigError);

  auto const b = build_grid(2.0, 64, 2.0);
  for (int N : {2, 3, 4, 6}) {
    Vector const w = radial_weights(b, N);
    double const ball = std::pow(std::numbers::pi, N / 2.0) / std::tgamma(N / 2.0 + 1) * std::pow(2.0, N);
    INFO("N = " << N);
    CHECK(w.minCoeff() > 0);
    CHECK(std::abs(w.sum() / ball - 1) < 1e-6);
  }
}

TEST_CASE("operator basics")
{
  auto const &op = fixture::op();
  auto const &g = op.grid;
  int const   M = g.M;
  CHECK(op.kernel_error < 1e-8);
  CHECK(op.far_field_radius >= 20 * g.R);

  CHECK(apply(op, make_field(g, Vector::Zero(M))).values.cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64                        rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Vector u(M), v(M);
  for (int i = 0; i < M; ++i) {
    u[i] = U(rng);
    v[i] = U(rng);
  }
  Vector const lhs = apply(op, make_field(g, 2.5 * u - 0.7 * v)).values;
  Vector const rhs = 2.5 * apply(op, make_field(g, u)).values - 0.7 * apply(op, make_field(g, v)).values;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * rhs.cwiseAbs().maxCoeff());

  Vector ej = Vector::Zero(M);
  ej[37] = 1.0;
  CHECK((apply(op, make_field(g, ej)).values - op.L.col(37)).cwiseAbs().maxCoeff() == 0.0);

  Vector const ones = op.L * Vector::Ones(M);
  CHECK(ones.minCoeff() > 0);

  auto const other = build_grid(1.0, 100, 2.0);
  CHECK_THROWS_AS(apply(op, make_field(other, Vector::Zero(100))), UsageError);
}

TEST_CASE("discrete maximum principle on random nonnegative fields")
{
  auto const &op = fixture::op();
  int const   M = op.grid.M;
  std::mt19937_64                        rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Vector u(M);
    for (int i = 0; i < M; ++i) { u[i] = U(rng); }
    if (trial % 2 == 1) { u = u.array().square().square(); }
    Eigen::Index imax = 0;
    u.maxCoeff(&imax);
    double const Lu = op.L.row(imax).dot(u);
    if (Lu < 0) { ++bad; }
  }
  CHECK(bad == 0);

  // a bump near R pulls the operator negative near the origin
  Vector bump = Vector::Zero(M);
  for (int i = 0; i < M; ++i) {
    double const r = op.grid.r[i];
    if (r > 0.8 && r < 0.95) { bump[i] = std::pow(std::sin((r - 0.8) / 0.15 * std::numbers::pi), 2); }
  }
  Vector const out = op.L * bump;
  CHECK(out[0] < 0);
  CHECK(out[M / 4] < 0);
}

TEST_CASE("power-function oracle")
{
  auto const &op = fixture::op();
  auto const &r = fixture::report();
  auto const  mu = oracle_power_test(op, r.mu_lambda, 0.1);
  CHECK_FALSE(mu.absolute);
  CHECK(mu.error() <= 0.02);
  CHECK(mu.nodes_checked > 20);
  CHECK(std::abs(mu.multiplier / r.lambda - 1) < 1e-12);

  double const p_mid = 0.5 * (r.p_minus + r.p_plus);
  double const theta0 = (1.5 - p_mid) / (p_mid - 1);
  for (double theta : {0.5 * (r.mu_lambda + r.mubar_lambda), theta0}) {
    INFO("theta = " << theta);
    CHECK(oracle_power_test(op, theta, 0.1, 2).error() <= 0.02);
  }
  CHECK(oracle_power_test(op, r.mubar_lambda, 0.1, 2).error() <= 0.05);

  auto const tiny = oracle_power_test(op, 0.01, 0.1);
  CHECK(tiny.absolute);
  CHECK(tiny.error() <= 1e-3);

  CHECK_THROWS_AS(oracle_power_test(op, 0.0, 0.1), DomainError);
  CHECK_THROWS_AS(oracle_power_test(op, 1.5, 0.1), DomainError);
  CHECK_THROWS_AS(oracle_power_test(op, 0.5, 0.1, -1), ConfigError);
}

TEST_CASE("Rayleigh quotient")
{
  auto const  &op = fixture::op();
  auto const  &g = op.grid;
  double const L = fixture::Lambda();
  Vector const bump = (1 - g.r.array().square()).square();
  double const q = rayleigh_quotient(op, make_field(g, bump));
  CHECK(q >= 0.95 * L);
  CHECK(rayleigh_quotient(op, make_field(g, 3.7 * bump)) == doctest::Approx(q).epsilon(1e-12));
  CHECK_THROWS_AS(rayleigh_quotient(op, make_field(g, Vector::Zero(g.M))), DomainError);

  Vector const near = g.r.array().pow(-0.75) * (1 - g.r.array().sqrt());
  double const qn = rayleigh_quotient(op, make_field(g, near));
  CHECK(qn >= L);
  CHECK(qn <= 1.1 * L);

  // default assembly carries the critical exponent
  auto const   plain = assemble_operator(g, 3, 0.75);
  Vector const crit = g.r.array().pow(-0.75) * (1 - g.r.array().sqrt());
  double const qc = rayleigh_quotient(plain, make_field(g, crit));
  CHECK(qc >= L);
  CHECK(qc <= 1.1 * L);
}

TEST_CASE("gradient")
{
  auto const &g = fixture::op().grid;
  int const   M = g.M;
  int const   inner_end = M - M / 20;
  auto const  c = gradient(make_field(g, Vector::Constant(M, 2.0))).values;
  for (int i = 0; i < M - 1; ++i) { CHECK(std::abs(c[i]) < 1e-9); }
  CHECK(std::abs(c[M - 1]) > 1.0);

  auto const lin = gradient(make_field(g, g.r)).values;
  for (int i = 1; i < inner_end; ++i) { CHECK(std::abs(lin[i] - 1) < 1e-3); }

  for (double theta : {0.2130816, 0.75, 0.845}) {
    auto const d = gradient(make_field(g, g.r.array().pow(-theta))).values;
    double     worst = 0;
    for (int i = 2; i < inner_end; ++i) {
      worst = std::max(worst, std::abs(d[i] / (theta * std::pow(g.r[i], -theta - 1)) - 1));
    }
    INFO("theta = " << theta);
    CHECK(worst <= 0.05);
  }
}

TEST_CASE("dumps")
{
  auto const       &op = fixture::op();
  std::stringstream bin;
  write_operator_binary(bin, op);
  auto const back = read_operator_binary(bin);
  CHECK(back.N == op.N);
  CHECK(back.s == op.s);
  CHECK(back.grid.matches(op.grid));
  CHECK((back.L - op.L).cwiseAbs().maxCoeff() == 0.0);

  std::stringstream bad("XXXX");
  CHECK_THROWS_AS(read_operator_binary(bad), ConfigError);

  std::ostringstream csv;
  write_field_csv(csv, power_field(op.grid, 0.5), 3, 0.75);
  auto const text = csv.str();
  CHECK(text.rfind("# N,s,R,M,g", 0) == 0);
  CHECK(text.find("r,u\n") != std::string::npos);
}
