#include "../oracles/frozen_values.hpp"

#include "hardykpz/specfun.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hk;

namespace {
auto rel(double a, double b) -> double { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST_CASE("log_gamma against high-precision values")
{
  CHECK(std::abs(log_gamma(1.0)) < 1e-15);
  CHECK(rel(log_gamma(4.0), std::log(6.0)) < 1e-13);
  struct Row { double x, v; };
  for (auto [x, v] : {Row{0.001, frozen::log_gamma_0p001}, Row{0.1, frozen::log_gamma_0p1},
                      Row{0.5, frozen::log_gamma_0p5}, Row{0.85, frozen::log_gamma_0p85},
                      Row{1.15, frozen::log_gamma_1p15}, Row{2.5, frozen::log_gamma_2p5},
                      Row{10.0, frozen::log_gamma_10}, Row{49.9, frozen::log_gamma_49p9}}) {
    INFO("x = " << x);
    CHECK(rel(log_gamma(x), v) < 1e-12);
  }
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
  auto const g = log_gamma_signed(-0.5); // Γ(-1/2) = -2√π
  CHECK(g.sign == -1);
  CHECK(rel(g.log_abs, std::log(2 * std::sqrt(M_PI))) < 1e-13);
  CHECK_THROWS_AS(log_gamma_signed(-2.0), DomainError);
}

TEST_CASE("Hardy constant")
{
  CHECK(rel(hardy_constant(3, 0.75), frozen::Lambda_3_0p75) < 1e-12);
  CHECK(rel(hardy_constant(4, 0.6), frozen::Lambda_4_0p6) < 1e-12);
  CHECK(rel(hardy_constant(7, 0.55), frozen::Lambda_7_0p55) < 1e-12);
  CHECK(rel(hardy_constant(3, 0.9999), frozen::Lambda_3_0p9999) < 1e-12);
  CHECK(std::abs(hardy_constant(3, 0.9999) - 0.25) < 1e-2);
  CHECK(hardy_constant(3, 0.75) == lambda_of_alpha(0.0, 3, 0.75));
  CHECK_THROWS_AS(hardy_constant(1, 0.75), DomainError);
  CHECK_THROWS_AS(hardy_constant(3, 1.0), DomainError);
  CHECK_THROWS_AS(hardy_constant(3, 0.0), DomainError);
}

TEST_CASE("lambda_of_alpha")
{
  CHECK(rel(lambda_of_alpha(0.3, 3, 0.75), frozen::lambda_alpha_0p3_3_0p75) < 1e-12);
  CHECK(lambda_of_alpha(0.3, 3, 0.75) == lambda_of_alpha(-0.3, 3, 0.75));
  double const top = (3 - 1.5) / 2;
  CHECK(lambda_of_alpha(top - 1e-8, 3, 0.75) < 1e-7);
  CHECK_THROWS_AS(lambda_of_alpha(top, 3, 0.75), DomainError);
  CHECK_THROWS_AS(lambda_of_alpha(-top - 0.1, 3, 0.75), DomainError);

  double prev = lambda_of_alpha(0.0, 3, 0.75);
  for (int k = 1; k < 100; ++k) {
    double const v = lambda_of_alpha(top * k / 100, 3, 0.75);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("gamma_multiplier")
{
  auto const &r = exponent_report(3, 0.75, frozen::Lambda_3_0p75 / 2);
  CHECK(rel(gamma_multiplier(r.alpha_lambda, 3, 0.75), r.lambda) < 1e-12);
  CHECK(gamma_multiplier(0.0, 3, 0.75) == hardy_constant(3, 0.75));
  for (double t = 0.05; t < 0.95; t += 0.05) {
    double const p = r.p_minus + t * (r.p_plus - r.p_minus);
    double const theta0 = (2 * 0.75 - p) / (p - 1);
    CHECK(gamma_multiplier(0.75 - theta0, 3, 0.75) > r.lambda);
  }
}

TEST_CASE("alpha_of_lambda")
{
  double const L = hardy_constant(3, 0.75);
  CHECK(rel(alpha_of_lambda(L / 2, 3, 0.75), frozen::alpha_half_Lambda) < 1e-12);
  CHECK(alpha_of_lambda(L, 3, 0.75) == 0.0);
  CHECK(std::abs(alpha_of_lambda(1e-12, 3, 0.75) - 0.75) < 1e-4);
  CHECK_THROWS_AS(alpha_of_lambda(0.0, 3, 0.75), DomainError);
  CHECK_THROWS_AS(alpha_of_lambda(1.01 * L, 3, 0.75), DomainError);

  std::mt19937_64                        rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    double const lam = L * (1e-6 + (1 - 2e-6) * U(rng));
    double const a = alpha_of_lambda(lam, 3, 0.75);
    CHECK(rel(lambda_of_alpha(a, 3, 0.75), lam) <= 1e-10);
  }
}

TEST_CASE("s close to 1 matches the local Hardy exponents")
{
  double const s = 1 - 1e-4;
  for (int N : {3, 4, 5}) {
    double const top = std::pow((N - 2) / 2.0, 2);
    for (int k = 1; k < 10; ++k) {
      double const lam = 0.9 * top * k / 10;
      CHECK(std::abs(alpha_of_lambda(lam, N, s) - std::sqrt(top - lam)) <= 1e-2);
    }
  }
  CHECK(std::abs(alpha_of_lambda(0.1875, 3, s) - 0.25) <= 1e-2);
}

TEST_CASE("normalizing constant")
{
  CHECK(rel(normalizing_constant(3, 0.5), frozen::a_3_0p5) < 1e-12);
  CHECK(rel(normalizing_constant(3, 0.75), frozen::a_3_0p75) < 1e-12);
  CHECK(rel(normalizing_constant(4, 0.6), frozen::a_4_0p6) < 1e-12);
  CHECK(rel(normalizing_constant(3, 1 - 1e-6), frozen::a_3_1m1e6) < 1e-8);
  for (int N = 2; N <= 8; ++N) {
    for (double s = 0.05; s < 1; s += 0.1) { CHECK(normalizing_constant(N, s) > 0); }
  }
  CHECK_THROWS_AS(normalizing_constant(3, 1.0), DomainError);
  CHECK_THROWS_AS(normalizing_constant(3, 0.0), DomainError);
}

TEST_CASE("critical exponents")
{
  double const L = hardy_constant(3, 0.75);
  auto const   r = exponent_report(3, 0.75, L / 2);
  CHECK(rel(r.mu_lambda, frozen::mu_half_Lambda) < 1e-12);
  CHECK(rel(r.mubar_lambda, frozen::mubar_half_Lambda) < 1e-12);
  CHECK(rel(r.p_plus, frozen::p_plus_half_Lambda) < 1e-12);
  CHECK(rel(r.p_minus, frozen::p_minus_half_Lambda) < 1e-12);
  CHECK(rel(r.p_plus, (r.mu_lambda + 1.5) / (r.mu_lambda + 1)) < 1e-12);
  CHECK(rel(r.p_minus, (r.mubar_lambda + 1.5) / (r.mubar_lambda + 1)) < 1e-12);
  CHECK(rel(r.mu_lambda + r.mubar_lambda, 1.5) < 1e-15);
  CHECK(r.chain_holds());

  auto const e = exponent_report(3, 0.75, L);
  CHECK(e.p_plus == e.p_minus);
  CHECK(rel(e.p_plus, e.p_mid()) < 1e-15);

  auto const z = exponent_report(3, 0.75, 1e-14);
  CHECK(std::abs(z.p_plus - 1.5) < 1e-6);
  CHECK(std::abs(z.p_minus - z.p_star) < 1e-6);

  ProblemParams bad{3, 0.75, L, 1.2, 0.0};
  CHECK_THROWS_AS(critical_exponents(bad), DomainError);
  bad.lambda = L / 2;
  bad.s = 0.4;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.s = 0.75;
  bad.p = 1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.p = 1.2;
  bad.mu = -1;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("exponent chain and monotonicity over random parameters")
{
  std::mt19937_64                        rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::uniform_int_distribution<int>     Nd(2, 9);
  for (int k = 0; k < 50; ++k) {
    int const    N = Nd(rng);
    double const s = 0.5 + 0.5 * (0.01 + 0.98 * U(rng));
    double const lam = hardy_constant(N, s) * (0.01 + 0.98 * U(rng));
    auto const   r = exponent_report(N, s, lam);
    INFO("N=" << N << " s=" << s << " lambda=" << lam);
    CHECK(r.chain_holds());
    CHECK(r.mu_lambda > 0);
    CHECK(r.mu_lambda < (N - 2 * s) / 2);
    CHECK(r.mubar_lambda < N - 2 * s);
  }
  for (int N : {3, 5}) {
    for (double s : {0.55, 0.75, 0.95}) {
      double const L = hardy_constant(N, s);
      auto         prev = exponent_report(N, s, L * 0.005);
      for (int j = 2; j < 200; ++j) {
        auto const cur = exponent_report(N, s, L * 0.005 * j);
        CHECK(cur.p_plus < prev.p_plus);
        CHECK(cur.p_minus > prev.p_minus);
        prev = cur;
      }
    }
  }
}

TEST_CASE("lambda factorizes as m_alpha m_-alpha")
{
  int const    n = 3;
  double const ss = 0.75;
  auto m = [&](double a) {
    return std::exp((a + ss) * std::log(2.0) + log_gamma((n + 2 * ss + 2 * a) / 4) - log_gamma((n - 2 * ss - 2 * a) / 4));
  };
  for (double a = -0.7; a <= 0.7; a += 0.05) {
    INFO("alpha = " << a);
    CHECK(rel(m(a) * m(-a), lambda_of_alpha(a, n, ss)) < 1e-12);
  }
}
