#pragma once

#include "errors.hpp"
#include "kernel.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace hk {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Nodes r_i = R (i/M)^g, i = 1..M. A ghost node at R + (r_M - r_{M-1}) carries the
// exterior zero; everything beyond it is exactly zero.
struct RadialGrid
{
  double R = 1.0;
  int    M = 0;
  double g = 2.0;
  Vector r;
  double ghost = 0.0;

  auto log_nodes() const -> Vector; // ln r_1 .. ln r_M, ln ghost
  auto matches(RadialGrid const &other) const -> bool;
};

auto build_grid(double R, int M, double g = 2.0) -> RadialGrid;

// Volume weights: sum_i w_i f(r_i) ~ int_{B_R} f(|x|) dx in dimension N.
auto radial_weights(RadialGrid const &grid, int N) -> Vector;

struct RadialField
{
  RadialGrid grid;
  Vector     values;

  auto size() const -> Eigen::Index { return values.size(); }
};

auto make_field(RadialGrid const &grid, Vector values) -> RadialField;
auto power_field(RadialGrid const &grid, double theta, double amplitude = 1.0) -> RadialField;

// Local interpolation used everywhere (operator rows, gradient, weights).
// Near the origin (rows with log spacing above 1/4) the pieces are combinations of
// exp(-theta t), theta spread over [0, muntz_top_fraction*(N-2s)]; the exponents in
// `singular_exponents` replace their nearest neighbours in that set (empty: (N-2s)/2). The top fraction
// stays below 1: r^{-(N-2s)} is annihilated by the operator away from 0 and must not
// be representable there. Elsewhere the pieces are polynomials in t = ln r.
struct AssemblyOptions
{
  int                 window_degree = 6;
  int                 cell_degree = 4;
  int                 muntz_window_degree = 2;
  int                 muntz_cell_degree = 3;
  int                 muntz_origin_degree = 2; // extrapolation into (0, r_1)
  double              muntz_top_fraction = 0.85;
  int                 muntz_rows = -1; // -1: from grid spacing
  std::vector<double> singular_exponents;
  double              far_field_factor = 20.0;
  int                 angular_order = 20;
};

struct OperatorMatrix
{
  RadialGrid      grid;
  int             N = 0;
  double          s = 0.0;
  AssemblyOptions options;
  double          constant = 0.0;         // multiplies the P.V. integral
  double          far_field_radius = 0.0; // numeric exterior integration stops here
  double          kernel_error = 0.0;     // angular quadrature error estimate
  int             muntz_rows = 0;
  Matrix          L;
  Vector          weights; // radial_weights(grid, N)
};

auto assemble_operator(RadialGrid const &grid, int N, double s, AssemblyOptions const &opts = {}) -> OperatorMatrix;

auto apply(OperatorMatrix const &op, RadialField const &u) -> RadialField;

struct OracleResult
{
  double theta = 0.0;
  double multiplier = 0.0;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0; // error on the multiplier itself
  bool   absolute = false;    // criterion used: abs when the multiplier is tiny
  int    first_node = 0;
  int    nodes_checked = 0;
  Vector node_rel_error;      // per checked node, innermost first

  auto error() const -> double { return absolute ? max_abs_error : max_rel_error; }
};

// Operator applied to the untruncated |x|^{-theta}: the part of the power outside the
// ghost node is added back analytically before comparing with gamma r^{-theta-2s}.
// Nodes 0..skip_inner-1 are left out; the outer 5% never enter.
auto oracle_power_test(OperatorMatrix const &op, double theta, double r_max_check, int skip_inner = 0)
    -> OracleResult;

auto rayleigh_quotient(OperatorMatrix const &op, RadialField const &u) -> double;

// d/dr matrix: interior rows centred, row 1 one sided, row M sees the exterior zero.
auto gradient_matrix(RadialGrid const &grid, int N, double s, AssemblyOptions const &opts = {}) -> Matrix;
auto gradient(RadialField const &u, int N = 3, double s = 0.75, AssemblyOptions const &opts = {}) -> RadialField;

auto muntz_exponents(int n, double top, std::vector<double> const &hints) -> Vector;
auto default_muntz_rows(RadialGrid const &grid) -> int;

// Dumps: "# N,s,R,M,g" header then rows.
void write_field_csv(std::ostream &os, RadialField const &u, int N, double s);
void write_operator_csv(std::ostream &os, OperatorMatrix const &op);
void write_operator_binary(std::ostream &os, OperatorMatrix const &op);
auto read_operator_binary(std::istream &is) -> OperatorMatrix;

} // namespace hk
