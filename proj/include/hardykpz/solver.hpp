#pragma once

#include "construct.hpp"
#include "radialop.hpp"
#include "specfun.hpp"

#include <Eigen/LU>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hk {

enum class SolveStatus { Converged, BlowUp, MaxIterations };

auto to_string(SolveStatus s) -> std::string;

// Nodal source, or constant * |x|^{-exponent} evaluated at the nodes.
struct Source
{
  bool   analytic = true;
  double exponent = 0.0;
  double constant = 0.0;
  Vector nodal;

  static auto power(double exponent, double constant = 1.0) -> Source;
  static auto values(Vector v) -> Source;
  auto        on(RadialGrid const &grid) const -> Vector;
  auto        is_zero() const -> bool;
  auto        scaled(double c) const -> Source;
};

struct SolverControls
{
  std::vector<double> n_schedule = default_schedule();
  double              picard_tol = 1e-8;
  int                 picard_max = 500;
  double              blowup_factor = 10.0;
  double              damping = 0.7;
  int                 growth_window = 5;

  static auto default_schedule() -> std::vector<double>;
  void        validate() const;
};

// Operator, its LU factors and the gradient matrix; built once per grid.
struct Discretization
{
  OperatorMatrix             op;
  Eigen::PartialPivLU<Matrix> lu;
  Matrix                     D;
  Vector                     r_2s; // r_i^{-2s}
};

auto make_discretization(RadialGrid const &grid, int N, double s, AssemblyOptions const &opts = {}) -> Discretization;
auto make_discretization(OperatorMatrix op) -> Discretization;

struct TraceRow
{
  double n = 0;
  int    inner_iters = 0;
  double residual = 0;
  double sup_norm = 0;
  double margin = 0; // min_i (w_i - u_i)/w_i; NaN without a supersolution
};

struct SolverReport
{
  SolveStatus           status = SolveStatus::MaxIterations;
  RadialField           field;
  std::vector<TraceRow> trace;
  int                   monotonicity_violations = 0;
  int                   barrier_violations = 0; // node-steps with u > w beyond tolerance
  double                barrier_sup = 0.0;      // sup of the supersolution on the grid, 0 without one
  double                fixed_point_residual = 0.0;
  double                gradient_integral = 0.0; // int |∇u|^p
  double                hardy_integral = 0.0;    // int u/|x|^{2s}
  std::string           reason;
};

// Gradient damping alpha = 0 gives the undamped right-hand side.
struct RhsTerms
{
  double lambda = 0;
  double p = 1;
  double source_scale = 0; // mu or c
  double alpha_damp = 0;
};

auto solve_kpz(ProblemParams const &params, Source const &f, Discretization const &disc,
               SolverControls const &controls, SupersolutionSpec const *supersolution = nullptr) -> SolverReport;

auto solve_damped(ProblemParams const &params, double alpha_damp, Source const &f, Discretization const &disc,
                  SolverControls const &controls, SupersolutionSpec const *supersolution = nullptr) -> SolverReport;

struct ProbeResult
{
  bool   conclusive = false;
  double mu_lo = 0.0; // Converged
  double mu_hi = 0.0; // not Converged
  int    solves = 0;
  std::string reason;

  auto estimate() const -> double; // geometric midpoint
};

// Bracketing by factors of 4 from params.mu (1e-3 if zero), then geometric bisection.
auto mu_threshold_probe(ProblemParams const &params, Source const &f, Discretization const &disc,
                        SolverControls const &controls, double rel_width = 0.05) -> ProbeResult;

void write_trace_csv(std::ostream &os, SolverReport const &report);

} // namespace hk
