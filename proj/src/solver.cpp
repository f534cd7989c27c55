#include "hardykpz/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace hk {

auto to_string(SolveStatus s) -> std::string
{
  switch (s) {
  case SolveStatus::Converged: return "Converged";
  case SolveStatus::BlowUp: return "BlowUp";
  case SolveStatus::MaxIterations: return "MaxIterations";
  }
  throw InternalError("unknown solve status");
}

auto Source::power(double exponent, double constant) -> Source
{
  Source f;
  f.analytic = true;
  f.exponent = exponent;
  f.constant = constant;
  return f;
}

auto Source::values(Vector v) -> Source
{
  Source f;
  f.analytic = false;
  f.nodal = std::move(v);
  return f;
}

auto Source::on(RadialGrid const &grid) const -> Vector
{
  if (!analytic) {
    if (nodal.size() != grid.M) { throw UsageError("nodal source has the wrong length"); }
    return nodal;
  }
  if (constant == 0.0) { return Vector::Zero(grid.M); }
  return constant * grid.r.array().pow(-exponent).matrix();
}

auto Source::is_zero() const -> bool { return analytic ? constant == 0.0 : nodal.cwiseAbs().maxCoeff() == 0.0; }

auto Source::scaled(double c) const -> Source
{
  Source f = *this;
  f.constant *= c;
  if (!analytic) { f.nodal *= c; }
  return f;
}

auto SolverControls::default_schedule() -> std::vector<double>
{
  std::vector<double> n;
  for (int j = 0; j <= 12; ++j) { n.push_back(std::ldexp(1.0, j)); }
  return n;
}

void SolverControls::validate() const
{
  if (n_schedule.empty()) { throw ConfigError("n_schedule must not be empty"); }
  for (std::size_t j = 0; j < n_schedule.size(); ++j) {
    if (!(n_schedule[j] > 0.0)) { throw ConfigError("n_schedule entries must be positive"); }
    if (j > 0 && !(n_schedule[j] > n_schedule[j - 1])) { throw ConfigError("n_schedule must be increasing"); }
  }
  if (!(picard_tol > 0.0)) { throw ConfigError("picard_tol must be positive"); }
  if (picard_max < 1) { throw ConfigError("picard_max must be positive"); }
  if (!(blowup_factor > 1.0)) { throw ConfigError("blowup_factor must exceed 1"); }
  if (!(damping > 0.0 && damping <= 1.0)) { throw ConfigError("damping must lie in (0, 1]"); }
  if (growth_window < 2) { throw ConfigError("growth_window must be at least 2"); }
}

auto make_discretization(OperatorMatrix op) -> Discretization
{
  Discretization d;
  d.D = gradient_matrix(op.grid, op.N, op.s, op.options);
  d.r_2s = op.grid.r.array().pow(-2 * op.s);
  d.lu.compute(op.L);
  double const rc = d.lu.rcond();
  if (!(rc > 1e-15)) { throw InternalError("operator matrix is numerically singular"); }
  d.op = std::move(op);
  return d;
}

auto make_discretization(RadialGrid const &grid, int N, double s, AssemblyOptions const &opts) -> Discretization
{
  return make_discretization(assemble_operator(grid, N, s, opts));
}

namespace {

struct Rhs
{
  RhsTerms const       &t;
  Discretization const &d;
  Vector const         &F;

  auto operator()(Vector const &u, double n) const -> Vector
  {
    Vector const g = d.D * u;
    Vector       out(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      double const gp = std::pow(std::abs(g[i]), t.p);
      double       grad = gp / (1 + gp / n);
      if (t.alpha_damp != 0.0) { grad /= std::pow(1 + u[i], t.alpha_damp); }
      double const hardy = t.lambda * (u[i] / (1 + u[i] / n)) * d.r_2s[i];
      out[i] = grad + hardy + t.source_scale * F[i];
    }
    return out;
  }
};

auto all_finite(Vector const &v) -> bool { return v.allFinite(); }

auto run(RhsTerms const &terms, Source const &f, Discretization const &disc, SolverControls const &c,
         SupersolutionSpec const *spec) -> SolverReport
{
  c.validate();
  RadialGrid const &grid = disc.op.grid;
  int const         M = grid.M;
  Vector const      F = f.on(grid);
  if ((F.array() < 0).any()) { throw DomainError("source must be nonnegative"); }
  Rhs const rhs{terms, disc, F};

  SolverReport rep;
  Vector       w;
  if (spec != nullptr) {
    w = spec->field(grid).values;
    rep.barrier_sup = w.maxCoeff();
  }
  double const nan = std::numeric_limits<double>::quiet_NaN();
  double const barrier_tol = 1e-6;

  Vector              u = Vector::Zero(M);
  std::vector<double> increments;
  rep.status = SolveStatus::Converged;
  for (double const n : c.n_schedule) {
    Vector const prev = u;
    int          it = 0;
    double       res = 0.0;
    bool         done = false;
    bool         over = false;
    while (it < c.picard_max) {
      ++it;
      Vector Tu = disc.lu.solve(rhs(u, n));
      Tu = Tu.cwiseMax(0.0);
      Vector const un = (1 - c.damping) * u + c.damping * Tu;
      if (!all_finite(un)) { throw NumericalDivergence("non-finite iterate at n = " + std::to_string(n)); }
      double const scale = un.cwiseAbs().maxCoeff();
      res = scale > 0 ? (un - u).cwiseAbs().maxCoeff() / scale : 0.0;
      u = un;
      if (res <= c.picard_tol) {
        done = true;
        break;
      }
      if (spec != nullptr && scale > c.blowup_factor * rep.barrier_sup) {
        over = true;
        break;
      }
    }

    TraceRow row;
    row.n = n;
    row.inner_iters = it;
    row.residual = res;
    row.sup_norm = u.maxCoeff();
    row.margin = nan;
    if (spec != nullptr) {
      row.margin = ((w - u).array() / w.array()).minCoeff();
      for (int i = 0; i < M; ++i) {
        if (u[i] > w[i] * (1 + barrier_tol)) { ++rep.barrier_violations; }
      }
    }
    rep.trace.push_back(row);

    double const floor_u = 10 * c.picard_tol * prev.cwiseAbs().maxCoeff();
    for (int i = 0; i < M; ++i) {
      if (u[i] < prev[i] - floor_u) { ++rep.monotonicity_violations; }
    }

    double const prev_sup = prev.maxCoeff();
    if (prev_sup > 0) { increments.push_back((row.sup_norm - prev_sup) / prev_sup); }

    if (over || (spec != nullptr && row.sup_norm > c.blowup_factor * rep.barrier_sup)) {
      rep.status = SolveStatus::BlowUp;
      rep.reason = "sup norm exceeds " + std::to_string(c.blowup_factor) + " x supersolution bound at n = " +
                   std::to_string(n);
      break;
    }
    if (!done) {
      rep.status = SolveStatus::MaxIterations;
      rep.reason = "inner iteration cap reached at n = " + std::to_string(n);
      break;
    }
  }

  // sustained growth: relative sup-norm increments rising over the last outer steps; a rise
  // followed by decay earlier in the schedule is the truncation catching up, not blow-up.
  // A respected barrier bounds the increasing sequence, so growth under it is not blow-up either.
  bool const held = spec != nullptr && rep.barrier_violations == 0;
  auto const k = static_cast<int>(increments.size());
  if (rep.status == SolveStatus::Converged && !held && k >= c.growth_window + 1) {
    bool rising = true;
    for (int j = k - c.growth_window; j < k; ++j) {
      if (!(increments[j] > increments[j - 1] && increments[j] > 10 * c.picard_tol)) { rising = false; }
    }
    if (rising) {
      rep.status = SolveStatus::BlowUp;
      rep.reason = "sup-norm increments rising over the last " + std::to_string(c.growth_window) + " outer steps";
    }
  }

  double const n_last = rep.trace.back().n;
  Vector const R = rhs(u, n_last);
  double const rn = R.cwiseAbs().maxCoeff();
  rep.fixed_point_residual = rn > 0 ? (disc.op.L * u - R).cwiseAbs().maxCoeff() / rn : 0.0;
  Vector const g = disc.D * u;
  rep.gradient_integral = (disc.op.weights.array() * g.array().abs().pow(terms.p)).sum();
  rep.hardy_integral = (disc.op.weights.array() * u.array() * disc.r_2s.array()).sum();
  rep.field = make_field(grid, u);
  return rep;
}

void check_params(ProblemParams const &params, Discretization const &disc)
{
  params.validate();
  if (params.N != disc.op.N || params.s != disc.op.s) { throw UsageError("discretization built for a different (N, s)"); }
}

} // namespace

auto solve_kpz(ProblemParams const &params, Source const &f, Discretization const &disc,
               SolverControls const &controls, SupersolutionSpec const *supersolution) -> SolverReport
{
  check_params(params, disc);
  return run({params.lambda, params.p, params.mu, 0.0}, f, disc, controls, supersolution);
}

auto solve_damped(ProblemParams const &params, double alpha_damp, Source const &f, Discretization const &disc,
                  SolverControls const &controls, SupersolutionSpec const *supersolution) -> SolverReport
{
  check_params(params, disc);
  if (!(alpha_damp >= 0.0)) { throw DomainError("damping exponent must be nonnegative"); }
  return run({params.lambda, params.p, params.mu, alpha_damp}, f, disc, controls, supersolution);
}

auto ProbeResult::estimate() const -> double { return std::sqrt(mu_lo * mu_hi); }

auto mu_threshold_probe(ProblemParams const &params, Source const &f, Discretization const &disc,
                        SolverControls const &controls, double rel_width) -> ProbeResult
{
  check_params(params, disc);
  if (!(rel_width > 0.0 && rel_width < 1.0)) { throw ConfigError("probe width must lie in (0, 1)"); }
  auto const rep = critical_exponents(params);
  if (!(params.p < rep.p_plus)) { throw DomainError("mu threshold probe needs p < p+"); }

  ProbeResult out;
  if (f.is_zero()) {
    out.reason = "source is zero: mu does not enter the problem";
    return out;
  }
  double const lo_limit = 1e-8;
  double const hi_limit = 1e8;
  auto converges = [&](double mu) {
    ProblemParams q = params;
    q.mu = mu;
    ++out.solves;
    try {
      return solve_kpz(q, f, disc, controls).status == SolveStatus::Converged;
    } catch (NumericalDivergence const &) {
      return false;
    }
  };

  double mu = params.mu > 0 ? params.mu : 1e-3;
  bool   ok = converges(mu);
  double lo = 0;
  double hi = 0;
  if (ok) {
    lo = mu;
    while (true) {
      mu *= 4;
      if (mu > hi_limit) {
        out.reason = "converged up to mu = 1e8";
        return out;
      }
      if (!converges(mu)) { break; }
      lo = mu;
    }
    hi = mu;
  } else {
    hi = mu;
    while (true) {
      mu /= 4;
      if (mu < lo_limit) {
        out.reason = "no convergence down to mu = 1e-8";
        return out;
      }
      if (converges(mu)) { break; }
      hi = mu;
    }
    lo = mu;
  }
  while ((hi - lo) / hi > rel_width) {
    double const mid = std::sqrt(lo * hi);
    if (converges(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.conclusive = true;
  out.mu_lo = lo;
  out.mu_hi = hi;
  return out;
}

void write_trace_csv(std::ostream &os, SolverReport const &report)
{
  auto const old = os.precision(17);
  os << "outer_n,inner_iters,residual,sup_norm,margin\n";
  for (auto const &row : report.trace) {
    os << row.n << ',' << row.inner_iters << ',' << row.residual << ',' << row.sup_norm << ',' << row.margin << '\n';
  }
  os.precision(old);
}

} // namespace hk
