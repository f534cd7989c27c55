#include "hardykpz/construct.hpp"
#include "hardykpz/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hk {

namespace {

// amplitudes 2^k * A_ref, k = amplitude_up, ..., -amplitude_steps
constexpr int amplitude_steps = 60;
constexpr int amplitude_up = 30;

auto fmt(double x) -> std::string
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

auto multiplier_at(double theta, int N, double s) -> double { return gamma_multiplier((N - 2 * s) / 2 - theta, N, s); }

// Pointwise slack of A|x|^{-theta} on B_R, per unit |x|^{-theta-2s}, at x = r/R:
//   A(γ-λ) + A E(x) - (Aθ)^p R^e x^e - src x^{θ+2s-f.exponent},
// E the exterior part of the operator removed by the Dirichlet truncation.
struct DirichletSlack
{
  double theta, gml, p, s, R, src_exp;
  Vector x, ext;

  DirichletSlack(int N, double s_, double theta_, double gml_, double p_, double R_, double f_exp)
    : theta(theta_), gml(gml_), p(p_), s(s_), R(R_), src_exp(theta_ + 2 * s_ - f_exp)
  {
    auto const   ker = shared_kernel(N, s);
    double const C = 2 * normalizing_constant(N, s);
    // 50 points per decade down to 1e-30
    int const n = 1501;
    x.resize(n);
    ext.resize(n);
    for (int j = 0; j < n; ++j) {
      x[j] = j == 0 ? 1.0 - 1e-9 : std::pow(10.0, -j / 50.0);
      ext[j] = C * ker->exterior_integral(-std::log(x[j]), theta);
    }
  }

  auto min_slack(double A, double source) const -> double
  {
    double const e = theta + 2 * s - p * (theta + 1);
    double const g = std::pow(A * theta, p) * std::pow(R, e);
    double const src = source * std::pow(R, src_exp);
    double       m = A * gml; // limit at the origin
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      double const v = A * gml + A * ext[j] - g * std::pow(x[j], e) - src * std::pow(x[j], src_exp);
      m = std::min(m, v);
    }
    return m;
  }
};

auto source_constant(PowerBound const &f, double mu) -> double { return mu * f.constant; }

void check_source(PowerBound const &f, double theta, double s)
{
  if (!(f.constant >= 0.0) || !std::isfinite(f.exponent)) { throw DomainError("source bound needs a finite exponent and constant >= 0"); }
  if (f.exponent > theta + 2 * s + 1e-12) {
    throw DomainError("source |x|^{-" + fmt(f.exponent) + "} is more singular than |x|^{-(2s+theta)} = |x|^{-" +
                      fmt(theta + 2 * s) + "}");
  }
}

// min over r in (0, R] of the damped gradient term per unit |x|^{-beta-2s}
auto damped_gradient_peak(double A, double beta, double p, double s, double alpha, DampingForm form, double R) -> double
{
  double const e1 = beta + 2 * s - p * (beta + 1);
  auto term = [&](double r) {
    double const v = A * std::pow(r, -beta);
    double const damp = form == DampingForm::OnePlusU ? std::pow(1 + v, alpha) : std::pow(v, alpha);
    return std::pow(A * beta, p) * std::pow(r, e1) / damp;
  };
  // 50 points per decade down to 1e-30 R, then golden refinement around the largest sample
  int const n = 1500;
  double    best = term(R);
  int       arg = 0;
  for (int j = 1; j <= n; ++j) {
    double const v = term(R * std::pow(10.0, -j / 50.0));
    if (v > best) {
      best = v;
      arg = j;
    }
  }
  double a = std::log10(R) - std::min(n, arg + 1) / 50.0;
  double b = std::log10(R) - std::max(0, arg - 1) / 50.0;
  double const gr = 0.5 * (std::sqrt(5.0) - 1);
  for (int it = 0; it < 60; ++it) {
    double const x1 = b - gr * (b - a);
    double const x2 = a + gr * (b - a);
    if (term(std::pow(10.0, x1)) > term(std::pow(10.0, x2))) {
      b = x2;
    } else {
      a = x1;
    }
  }
  return std::max(best, term(std::pow(10.0, 0.5 * (a + b))));
}

} // namespace

auto to_string(SupersolutionKind k) -> std::string
{
  switch (k) {
  case SupersolutionKind::ExactHomogeneous: return "exact-homogeneous";
  case SupersolutionKind::Dirichlet: return "dirichlet-supersolution";
  case SupersolutionKind::Damped: return "damped-supersolution";
  }
  throw InternalError("unknown supersolution kind");
}

auto supersolution_kind_from_string(std::string const &name) -> SupersolutionKind
{
  for (auto k : {SupersolutionKind::ExactHomogeneous, SupersolutionKind::Dirichlet, SupersolutionKind::Damped}) {
    if (to_string(k) == name) { return k; }
  }
  throw ConfigError("unknown supersolution kind '" + name + "'");
}

auto SupersolutionSpec::value(double r) const -> double { return r > R ? 0.0 : A * std::pow(r, -theta); }

auto SupersolutionSpec::field(RadialGrid const &grid) const -> RadialField
{
  Vector v(grid.M);
  for (int i = 0; i < grid.M; ++i) { v[i] = value(grid.r[i]); }
  return make_field(grid, std::move(v));
}

auto SupersolutionSpec::sup_on(RadialGrid const &grid) const -> double { return field(grid).values.maxCoeff(); }

auto exact_radial_solution(ProblemParams const &params) -> SupersolutionSpec
{
  params.validate();
  auto const   rep = critical_exponents(params);
  double const p = params.p;
  double const theta = (2 * params.s - p) / (p - 1);
  double const top = params.N - 2 * params.s;
  double       gml = -std::numeric_limits<double>::infinity();
  if (theta > 0.0 && theta < top) { gml = multiplier_at(theta, params.N, params.s) - params.lambda; }
  if (!(p > rep.p_minus && p < rep.p_plus) || !(gml > 0.0)) {
    throw DomainError("p = " + fmt(p) + " outside (p-, p+) = (" + fmt(rep.p_minus) + ", " + fmt(rep.p_plus) +
                      "): gamma_beta - lambda = " + fmt(gml));
  }
  SupersolutionSpec w;
  w.kind = SupersolutionKind::ExactHomogeneous;
  w.theta = theta;
  w.A = std::pow(gml / std::pow(theta, p), 1.0 / (p - 1));
  w.window_lo = rep.mu_lambda;
  w.window_hi = std::min(rep.mubar_lambda, theta);
  w.R = std::numeric_limits<double>::infinity();
  w.gamma_minus_lambda = gml;
  w.margin = 0.0;
  return w;
}

auto dirichlet_theta(ProblemParams const &params) -> double
{
  params.validate();
  auto const   rep = critical_exponents(params);
  double const p = params.p;
  if (p >= rep.p_plus) {
    throw DomainError("supersolution window is empty: p = " + fmt(p) + " >= p+ = " + fmt(rep.p_plus));
  }
  double const lo = rep.mu_lambda;
  double const hi = std::min(rep.mubar_lambda, (2 * params.s - p) / (p - 1));
  if (!(hi > lo)) { throw DomainError("supersolution window is empty"); }
  double const wide = 0.1 * (hi - lo);
  double const eps = lo + 1e-4 < hi ? std::max(wide, 1e-4) : wide;
  return lo + eps;
}

auto dirichlet_supersolution(ProblemParams const &params, PowerBound const &f_bound, double R) -> SupersolutionSpec
{
  if (!(R > 0.0)) { throw DomainError("radius must be positive"); }
  double const theta = dirichlet_theta(params);
  auto const   rep = critical_exponents(params);
  check_source(f_bound, theta, params.s);
  double const p = params.p;
  double const gml = multiplier_at(theta, params.N, params.s) - params.lambda;
  double const src = source_constant(f_bound, params.mu);
  double const A_ref = std::pow(gml / std::pow(theta, p), 1.0 / (p - 1));
  DirichletSlack const slack(params.N, params.s, theta, gml, p, R, f_bound.exponent);

  double best_A = A_ref;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = amplitude_up; k >= -amplitude_steps; --k) {
    double const A = std::ldexp(A_ref, k);
    double const m = slack.min_slack(A, src);
    if (m > best) {
      best = m;
      best_A = A;
    }
  }
  if (!(best > 0.0)) {
    throw ConstructionError("no amplitude gives a positive margin: best margin " + fmt(best) + " at A = " +
                            fmt(best_A) + " (source constant " + fmt(src) + ", theta " + fmt(theta) + ")");
  }
  SupersolutionSpec w;
  w.kind = SupersolutionKind::Dirichlet;
  w.theta = theta;
  w.A = best_A;
  w.window_lo = rep.mu_lambda;
  w.window_hi = std::min(rep.mubar_lambda, (2 * params.s - p) / (p - 1));
  w.R = R;
  w.margin = best;
  w.gamma_minus_lambda = gml;
  return w;
}

auto dirichlet_supersolution(ProblemParams const &params, double f_bound_exponent) -> SupersolutionSpec
{
  return dirichlet_supersolution(params, PowerBound{f_bound_exponent, 1.0});
}

auto rescale_supersolution(SupersolutionSpec const &spec, ProblemParams const &params, PowerBound const &f_bound,
                           double R) -> SupersolutionSpec
{
  if (spec.kind != SupersolutionKind::Dirichlet) { throw UsageError("only Dirichlet supersolutions are rescaled"); }
  if (!(R > 0.0)) { throw DomainError("radius must be positive"); }
  double const p = params.p;
  double const rho = spec.R / R;
  // C^{p-1} = rho^{2s-p} keeps the operator and gradient terms in balance
  double const C = std::pow(rho, (2 * params.s - p) / (p - 1));
  SupersolutionSpec w = spec;
  w.R = R;
  w.A = C * spec.A * std::pow(rho, -spec.theta);
  DirichletSlack const slack(params.N, params.s, spec.theta, spec.gamma_minus_lambda, p, R, f_bound.exponent);
  w.margin = slack.min_slack(w.A, source_constant(f_bound, params.mu));
  return w;
}

auto damped_beta_admissible(double s, double p, double alpha_damp, double beta) -> bool
{
  return (beta * (alpha_damp + 1) + 2 * s) / (beta + 1) > 2 * s && 2 * s > p;
}

auto pure_damping_admissible(double s, double p, double alpha_damp) -> bool
{
  return alpha_damp > 2 * s - 1 && alpha_damp < p + 1 - p / s;
}

auto damped_supersolution(int N, double s, double lambda, double p, double alpha_damp, DampingForm form, double R)
    -> SupersolutionSpec
{
  ProblemParams params{N, s, lambda, p, 0.0};
  params.validate();
  if (!(alpha_damp > 2 * s - 1)) {
    throw DomainError("damping exponent alpha = " + fmt(alpha_damp) + " must exceed 2s-1 = " + fmt(2 * s - 1));
  }
  if (!(p < 2 * s)) { throw DomainError("damped construction needs p < 2s"); }
  if (form == DampingForm::PureU && !pure_damping_admissible(s, p, alpha_damp)) {
    throw DomainError("u^alpha damping needs 2s-1 < alpha < p+1-p/s");
  }
  if (!(R > 0.0)) { throw DomainError("radius must be positive"); }
  auto const   rep = exponent_report(N, s, lambda);
  double const lo = rep.mu_lambda;
  double const hi = rep.mubar_lambda;
  double const wide = 0.1 * (hi - lo);
  double const beta = lo + (lo + 1e-4 < hi ? std::max(wide, 1e-4) : wide);
  if (!damped_beta_admissible(s, p, alpha_damp, beta)) {
    throw ConstructionError("no admissible beta in (mu, mubar)");
  }
  double const gml = multiplier_at(beta, N, s) - lambda;
  double const A_ref = std::pow(gml / std::pow(beta, p), 1.0 / (p - 1));

  double best_A = A_ref;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= amplitude_steps; ++k) {
    double const A = std::ldexp(A_ref, -k);
    double const m = A * gml - damped_gradient_peak(A, beta, p, s, alpha_damp, form, R);
    if (m > best) {
      best = m;
      best_A = A;
    }
  }
  if (!(best > 0.0)) { throw ConstructionError("no amplitude gives a positive damped margin: " + fmt(best)); }
  SupersolutionSpec w;
  w.kind = SupersolutionKind::Damped;
  w.theta = beta;
  w.A = best_A;
  w.window_lo = lo;
  w.window_hi = hi;
  w.R = R;
  w.margin = best;
  w.c_star = best;
  w.gamma_minus_lambda = gml;
  w.alpha_damp = alpha_damp;
  return w;
}

auto truncate(double sigma, double k) -> double
{
  if (!(k > 0.0)) { throw DomainError("truncation level must be positive"); }
  return std::max(-k, std::min(k, sigma));
}

auto check_on_grid(SupersolutionSpec const &spec, ProblemParams const &params, PowerBound const &f_bound,
                   OperatorMatrix const &op, int skip_inner) -> GridCheck
{
  RadialGrid const &g = op.grid;
  if (op.N != params.N || op.s != params.s) { throw UsageError("operator built for a different (N, s)"); }
  if (spec.R < g.R) { throw UsageError("supersolution built on a smaller ball than the grid"); }
  Vector const w = spec.field(g).values;
  Vector const Lw = op.L * w;
  Vector const dw = gradient_matrix(g, op.N, op.s, op.options) * w;
  double const gam = multiplier_at(spec.theta, op.N, op.s);
  double const s = op.s;

  int const cutoff = g.M - static_cast<int>(std::ceil(0.05 * g.M));
  GridCheck res;
  res.min_slack = std::numeric_limits<double>::infinity();
  for (int i = skip_inner; i < cutoff; ++i) {
    double const r = g.r[i];
    double grad = std::pow(std::abs(dw[i]), params.p);
    if (spec.kind == SupersolutionKind::Damped) { grad /= std::pow(1 + w[i], spec.alpha_damp); }
    double const f = f_bound.constant * std::pow(r, -f_bound.exponent);
    double const lhs = Lw[i] - params.lambda * w[i] * std::pow(r, -2 * s);
    double const slack = (lhs - grad - params.mu * f) / (spec.A * gam * std::pow(r, -spec.theta - 2 * s));
    if (slack < res.min_slack) {
      res.min_slack = slack;
      res.worst_node = i;
    }
    ++res.nodes_checked;
  }
  res.operator_tolerance = oracle_power_test(op, spec.theta, g.R, skip_inner).error();
  return res;
}

} // namespace hk
