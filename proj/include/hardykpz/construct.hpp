#pragma once

#include "radialop.hpp"
#include "specfun.hpp"

#include <string>

namespace hk {

enum class SupersolutionKind { ExactHomogeneous, Dirichlet, Damped };

auto to_string(SupersolutionKind k) -> std::string;
auto supersolution_kind_from_string(std::string const &name) -> SupersolutionKind;

// Damping denominator of the gradient term: (1+u)^alpha, or u^alpha (stub only).
enum class DampingForm { OnePlusU, PureU };

// f <= constant * |x|^{-exponent} on the ball.
struct PowerBound
{
  double exponent = 0.0;
  double constant = 1.0;
};

// w = A |x|^{-theta} on B_R, zero outside.
struct SupersolutionSpec
{
  SupersolutionKind kind = SupersolutionKind::Dirichlet;
  double            theta = 0.0;
  double            A = 0.0;
  double            window_lo = 0.0;
  double            window_hi = 0.0;
  double            R = 1.0;
  // slack of the inequality in units of |x|^{-theta-2s}, source term included
  double            margin = 0.0;
  double            gamma_minus_lambda = 0.0;
  // damped kind only
  double            alpha_damp = 0.0;
  double            c_star = 0.0;

  auto value(double r) const -> double;
  auto field(RadialGrid const &grid) const -> RadialField;
  auto sup_on(RadialGrid const &grid) const -> double;
};

// Whole-space solution of (-Δ)^s w - λ w/|x|^{2s} = |∇w|^p, p in (p-, p+).
auto exact_radial_solution(ProblemParams const &params) -> SupersolutionSpec;

// Supersolution on B_R for source mu*f with f <= f_bound, p < p+.
auto dirichlet_supersolution(ProblemParams const &params, PowerBound const &f_bound, double R = 1.0)
    -> SupersolutionSpec;
auto dirichlet_supersolution(ProblemParams const &params, double f_bound_exponent) -> SupersolutionSpec;

// theta = mu + eps, eps = 10% of the window width, at least 1e-4.
auto dirichlet_theta(ProblemParams const &params) -> double;

// Move a Dirichlet spec built on B_{spec.R} to B_R: u -> C u(rho x), rho = spec.R/R.
auto rescale_supersolution(SupersolutionSpec const &spec, ProblemParams const &params, PowerBound const &f_bound,
                           double R) -> SupersolutionSpec;

// v = A|x|^{-beta} for the damped problem; margin and c_star per unit f constant.
auto damped_supersolution(int N, double s, double lambda, double p, double alpha_damp,
                          DampingForm form = DampingForm::OnePlusU, double R = 1.0) -> SupersolutionSpec;
auto damped_beta_admissible(double s, double p, double alpha_damp, double beta) -> bool;
// 2s-1 < alpha < p+1-p/s; recorded for the u^alpha variant, not exercised by the solver.
auto pure_damping_admissible(double s, double p, double alpha_damp) -> bool;

auto truncate(double sigma, double k) -> double;

// Nodal check of the supersolution inequality with the discrete operator.
// slack_i = (L w - λ w/r^{2s} - G(w) - c f)_i / (A γ_θ r_i^{-θ-2s}), outer 5% excluded.
struct GridCheck
{
  double min_slack = 0.0;
  int    worst_node = -1;
  int    nodes_checked = 0;
  double operator_tolerance = 0.0; // oracle error of L on r^{-theta} at the same nodes
  auto   holds() const -> bool { return min_slack >= -operator_tolerance; }
};

auto check_on_grid(SupersolutionSpec const &spec, ProblemParams const &params, PowerBound const &f_bound,
                   OperatorMatrix const &op, int skip_inner = 0) -> GridCheck;

} // namespace hk
