#include "../oracles/frozen_values.hpp"
#include "fixtures.hpp"

#include "hardykpz/construct.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hk;

TEST_CASE("truncation")
{
  CHECK(truncate(5, 2) == 2);
  CHECK(truncate(-5, 2) == -2);
  CHECK(truncate(1, 2) == 1);
  CHECK_THROWS_AS(truncate(1, 0), DomainError);
}

TEST_CASE("kind names round-trip")
{
  for (auto k : {SupersolutionKind::ExactHomogeneous, SupersolutionKind::Dirichlet, SupersolutionKind::Damped}) {
    CHECK(supersolution_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS(supersolution_kind_from_string("other"));
}

TEST_CASE("exact radial solution")
{
  auto const  &r = fixture::report();
  ProblemParams P{3, 0.75, r.lambda, frozen::p_mid_window, 0.0};
  auto const   w = exact_radial_solution(P);
  CHECK(w.kind == SupersolutionKind::ExactHomogeneous);
  CHECK(std::abs(w.theta / frozen::theta0_mid_window - 1) < 1e-12);
  CHECK(std::abs(w.A / frozen::A_mid_window - 1) < 1e-9);
  CHECK(w.theta > w.window_lo);
  CHECK(w.theta <= w.window_hi);

  P.p = r.p_plus - 1e-12;
  CHECK(exact_radial_solution(P).A < 1e-6);
  P.p = r.p_minus + 1e-12;
  CHECK(exact_radial_solution(P).A < 1e-6);
  P.p = r.p_plus + 1e-3;
  CHECK_THROWS_AS(exact_radial_solution(P), DomainError);
  P.p = r.p_minus - 1e-3;
  CHECK_THROWS_AS(exact_radial_solution(P), DomainError);

  std::mt19937_64                        rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::uniform_int_distribution<int>     Nd(2, 8);
  for (int k = 0; k < 100; ++k) {
    int const    N = Nd(rng);
    double const s = 0.5 + 0.5 * (0.01 + 0.98 * U(rng));
    double const lam = hardy_constant(N, s) * (0.02 + 0.96 * U(rng));
    auto const   e = exponent_report(N, s, lam);
    double const p = e.p_minus + (e.p_plus - e.p_minus) * (0.01 + 0.98 * U(rng));
    auto const   x = exact_radial_solution({N, s, lam, p, 0.0});
    double const gam = gamma_multiplier((N - 2 * s) / 2 - x.theta, N, s);
    CHECK(std::abs(gam - lam - std::pow(x.A, p - 1) * std::pow(x.theta, p)) <= 1e-10 * lam);
  }
}

TEST_CASE("Dirichlet supersolution")
{
  auto const      &r = fixture::report();
  PowerBound const f{1.5 + r.mu_lambda, 0.1};
  auto const       P = fixture::params(0.9, 1e-3);
  auto const       w = dirichlet_supersolution(P, f);
  CHECK(w.kind == SupersolutionKind::Dirichlet);
  CHECK(w.margin > 0);
  CHECK(w.A > 0);
  CHECK(w.window_lo == doctest::Approx(r.mu_lambda).epsilon(1e-14));
  CHECK(w.theta > w.window_lo);
  CHECK(w.theta <= w.window_hi);
  CHECK(w.theta == doctest::Approx(dirichlet_theta(P)).epsilon(1e-14));

  auto const chk = check_on_grid(w, P, f, fixture::op(), 2);
  CHECK(chk.nodes_checked > 100);
  CHECK(chk.holds());

  // window empty at p = p+
  auto Q = P;
  Q.p = r.p_plus;
  CHECK_THROWS_AS(dirichlet_supersolution(Q, f), DomainError);

  // existence for every p below p+ at a small enough source, never at or above
  for (double pf : {0.75, 0.8, 0.9, 0.95, 0.99, 0.999}) {
    Q.p = pf * r.p_plus;
    Q.mu = 1e-3 * std::pow(1 - pf, 3);
    INFO("p/p+ = " << pf);
    CHECK(dirichlet_supersolution(Q, f).margin > 0);
  }
  for (double pf : {1.0, 1.001, 1.05}) {
    Q.p = pf * r.p_plus;
    CHECK_THROWS_AS(dirichlet_supersolution(Q, f), DomainError);
  }

  // a source the construction cannot absorb
  Q.p = 0.9 * r.p_plus;
  Q.mu = 10.0;
  CHECK_THROWS_AS(dirichlet_supersolution(Q, f), ConstructionError);
}

TEST_CASE("ball rescaling keeps the supersolution property")
{
  auto const      &r = fixture::report();
  PowerBound const f{1.5 + r.mu_lambda, 0.1};
  auto const       P = fixture::params(0.9, 1e-4);
  auto const       small = dirichlet_supersolution(P, f, 0.5);
  auto const       big = rescale_supersolution(small, P, f, 2.0);
  CHECK(big.R == 2.0);
  CHECK(big.margin > 0);
  auto const grid = build_grid(2.0, 200, 2.0);
  auto const op = assemble_operator(grid, 3, 0.75, solver_assembly(3, 0.75, r.lambda));
  CHECK(check_on_grid(big, P, f, op, 2).holds());
}

TEST_CASE("damped supersolution")
{
  double const s = 0.75;
  double const lam = fixture::Lambda() / 2;
  auto const   w = damped_supersolution(3, s, lam, 2 * s - 0.05, 2 * s - 1 + 0.5);
  CHECK(w.kind == SupersolutionKind::Damped);
  CHECK(w.theta > fixture::report().mu_lambda);
  CHECK(w.theta < fixture::report().mubar_lambda);
  CHECK(w.c_star > 0);
  CHECK(damped_beta_admissible(s, 2 * s - 0.05, 2 * s - 1 + 0.5, w.theta));

  CHECK_THROWS_AS(damped_supersolution(3, s, lam, 1.45, 2 * s - 1), DomainError);
  CHECK_THROWS_AS(damped_supersolution(3, s, lam, 2 * s, 1.0), DomainError);

  // admissibility flips across alpha = 2s - 1
  int flips = 0;
  bool prev = damped_beta_admissible(s, 1.45, 0.3, 0.3);
  for (double a = 0.3; a <= 0.7; a += 0.001) {
    bool const cur = damped_beta_admissible(s, 1.45, a, 0.3);
    if (cur != prev) {
      ++flips;
      CHECK(std::abs(a - (2 * s - 1)) < 2e-3);
    }
    prev = cur;
  }
  CHECK(flips == 1);

  // large damping: every beta of the undamped window is admissible
  auto const &r = fixture::report();
  double const p = 0.9 * r.p_plus;
  double const hi = std::min(r.mubar_lambda, (2 * s - p) / (p - 1));
  for (double t = 0.01; t < 1; t += 0.05) {
    CHECK(damped_beta_admissible(s, p, 3.0, r.mu_lambda + t * (hi - r.mu_lambda)));
  }

  ProblemParams const P{3, s, lam, 2 * s - 0.05, 0.5 * w.c_star};
  CHECK(check_on_grid(w, P, PowerBound{w.theta + 2 * s, 1.0}, fixture::op(), 2).holds());

  CHECK(pure_damping_admissible(s, 1.45, 0.51));
  CHECK_FALSE(pure_damping_admissible(s, 1.45, 0.5));
}
