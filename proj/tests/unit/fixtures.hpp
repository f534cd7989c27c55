#pragma once

#include "hardykpz/solver.hpp"
#include "hardykpz/sweep.hpp"

namespace fixture {

// N = 3, s = 0.75, lambda = Lambda/2 on the default grid (M = 200, g = 2).
inline constexpr int    N = 3;
inline constexpr double s = 0.75;

inline auto Lambda() -> double { return hk::hardy_constant(N, s); }
inline auto report() -> hk::ExponentReport const &
{
  static auto const r = hk::exponent_report(N, s, Lambda() / 2);
  return r;
}
inline auto disc() -> hk::Discretization const &
{
  static auto const d =
      hk::make_discretization(hk::build_grid(1.0, 200, 2.0), N, s, hk::solver_assembly(N, s, Lambda() / 2));
  return d;
}
inline auto op() -> hk::OperatorMatrix const & { return disc().op; }
inline auto params(double p_fraction, double mu) -> hk::ProblemParams
{
  return {N, s, Lambda() / 2, p_fraction * report().p_plus, mu};
}

} // namespace fixture
