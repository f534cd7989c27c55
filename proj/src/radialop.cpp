#include "hardykpz/radialop.hpp"

#include "hardykpz/quadrature.hpp"
#include "hardykpz/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace hk {

namespace {

constexpr int    gl_order = 20;
constexpr int    graded_levels = 40;
constexpr double left_extent = 60.0; // in t; the kernel decays like e^{-N|tau|} there

struct LocalBasis
{
  bool             muntz = false;
  double           tref = 0.0;
  double           scale = 1.0;
  int              nterms = 0;
  Vector           exps;
  std::vector<int> nodes;
  Matrix           Vit; // nodes x terms: row contribution of node k = Vit.row(k) . (integral of basis)

  auto size() const -> int { return static_cast<int>(nodes.size()); }
  auto terms() const -> int { return nterms; }

  auto eval(double t) const -> Vector
  {
    Vector out(nterms);
    double const x = t - tref;
    if (muntz) {
      for (int m = 0; m < nterms; ++m) { out[m] = std::exp(-exps[m] * x); }
    } else {
      double const y = x / scale;
      double pw = 1.0;
      for (int m = 0; m < nterms; ++m) {
        out[m] = pw;
        pw *= y;
      }
    }
    return out;
  }

  auto deriv(double t) const -> Vector
  {
    Vector out(nterms);
    double const x = t - tref;
    if (muntz) {
      for (int m = 0; m < nterms; ++m) { out[m] = -exps[m] * std::exp(-exps[m] * x); }
    } else {
      double const y = x / scale;
      out[0] = 0.0;
      double pw = 1.0;
      for (int m = 1; m < nterms; ++m) {
        out[m] = m * pw / scale;
        pw *= y;
      }
    }
    return out;
  }
};

auto make_basis(Vector const &t, int lo, int n, double tref, bool muntz, Vector const &exps) -> LocalBasis
{
  LocalBasis b;
  b.muntz = muntz;
  b.tref = tref;
  b.nterms = n;
  b.nodes.resize(n);
  for (int k = 0; k < n; ++k) { b.nodes[k] = lo + k; }
  if (muntz) {
    b.exps = exps;
  } else {
    b.scale = std::max(0.5 * (t[lo + n - 1] - t[lo]), 1e-300);
  }
  Matrix V(n, n);
  for (int k = 0; k < n; ++k) { V.row(k) = b.eval(t[lo + k]).transpose(); }
  b.Vit = V.transpose().fullPivLu().inverse();
  return b;
}

auto clip_lo(int lo, int n, int max_index) -> int { return std::max(0, std::min(lo, max_index + 1 - n)); }

class Interp
{
public:
  Interp(RadialGrid const &grid, double top, AssemblyOptions const &opts)
    : t_(grid.log_nodes()), M_(grid.M), top_(top), opts_(opts)
  {
    int const lowest = std::min({opts.window_degree - 1, opts.cell_degree, opts.muntz_window_degree - 1,
                                 opts.muntz_cell_degree, opts.muntz_origin_degree});
    int const widest = std::max({opts.window_degree, opts.cell_degree, opts.muntz_window_degree,
                                 opts.muntz_cell_degree, opts.muntz_origin_degree});
    if (lowest < 1) { throw ConfigError("interpolation degrees too small"); }
    if (widest + 1 > grid.M) { throw ConfigError("interpolation stencil wider than the grid"); }
    if (!(opts.muntz_top_fraction > 0.0 && opts.muntz_top_fraction < 1.0)) {
      throw ConfigError("muntz_top_fraction must lie in (0, 1)");
    }
    i0_ = opts.muntz_rows >= 0 ? opts.muntz_rows : default_muntz_rows(grid);
  }

  auto t() const -> Vector const & { return t_; }
  auto muntz_rows() const -> int { return i0_; }

  // Stencil of n nodes starting near `lo`, nodes up to max_index (M: ghost allowed).
  auto basis(int lo, int n, int max_index, double tref, bool muntz) const -> LocalBasis
  {
    lo = clip_lo(lo, n, max_index);
    Vector const e = muntz ? muntz_exponents(n, opts_.muntz_top_fraction * top_, opts_.singular_exponents) : Vector();
    return make_basis(t_, lo, n, tref, muntz, e);
  }

  // Piece containing the singular window [t_{i-1}, t_{i+1}].
  auto window(int i) const -> LocalBasis
  {
    bool const m = i < i0_;
    int        n = (m ? opts_.muntz_window_degree : opts_.window_degree) + 1;
    // the innermost row only sees r_1, r_2; wider stencils there put positive mass off the diagonal
    if (i == 0) { n = 2; }
    // keep the stencil centred next to the ghost node
    if (!m && i + (n - 1) / 2 > M_) { n = 2 * (M_ - i) + 1; }
    return basis(i - (n - 1) / 2, n, M_, t_[i], m);
  }

  // Piece used on cell [t_j, t_{j+1}].
  auto cell(int j, int max_index) const -> LocalBasis
  {
    bool const m = j < i0_;
    int const  n = (m ? opts_.muntz_cell_degree : opts_.cell_degree) + 1;
    return basis(j - (n - 2) / 2, n, max_index, t_[j], m);
  }

  // Extrapolation into (0, r_1).
  auto left() const -> LocalBasis { return basis(0, opts_.muntz_origin_degree + 1, M_ - 1, t_[0], true); }

  // Centred piece for nodal derivatives.
  auto node(int i, int max_index) const -> LocalBasis
  {
    bool const m = i < i0_;
    int const  n = (m ? opts_.muntz_window_degree : 4) + 1;
    return basis(i - (n - 1) / 2, n, max_index, t_[i], m);
  }

  // Like node(), with r itself added to the Muntz set so linear fields differentiate exactly.
  auto slope(int i, int max_index) const -> LocalBasis
  {
    if (i >= i0_) { return node(i, max_index); }
    int const    n = opts_.muntz_window_degree + 2;
    Vector const e = muntz_exponents(n - 1, opts_.muntz_top_fraction * top_, opts_.singular_exponents);
    Vector       ext(n);
    ext << -1.0, e;
    return make_basis(t_, clip_lo(i - (n - 1) / 2, n, max_index), n, t_[i], true, ext);
  }

private:
  Vector          t_;
  int             M_;
  double          top_;
  AssemblyOptions opts_;
  int             i0_ = 0;
};

// int_0^h F with F ~ tau^p at 0: dyadic panels plus a power-law tail.
template <typename F> auto graded_integral(F &&f, double h, double p) -> Vector
{
  Vector tot = gl_integrate(f, 0.5 * h, h, gl_order);
  double hi = 0.5 * h;
  for (int k = 1; k < graded_levels; ++k) {
    tot += gl_integrate(f, 0.5 * hi, hi, gl_order);
    hi *= 0.5;
  }
  tot += f(hi) * (hi / (p + 1));
  return tot;
}

// Unsigned integral over the interval between a and b, panels growing geometrically away from a.
template <typename F> auto panel_integral(F &&f, double a, double b, double first) -> std::decay_t<decltype(f(a))>
{
  double const dir = b > a ? 1.0 : -1.0;
  double const len = std::abs(b - a);
  auto piece = [&](double x0, double x1) {
    double const u = a + dir * x0;
    double const v = a + dir * x1;
    return gl_integrate(f, std::min(u, v), std::max(u, v), gl_order);
  };
  double w = std::min(first, len);
  std::decay_t<decltype(f(a))> acc = piece(0.0, w);
  double x = w;
  while (x < len) {
    w = std::min(2 * w, len - x);
    acc += piece(x, x + w);
    x += w;
  }
  return acc;
}

struct RowAssembler
{
  RadialGrid const   &grid;
  RadialKernel const &ker;
  Interp const       &ip;
  AssemblyOptions     opts;
  double              c;  // N/2 - s
  double              s;
  double              far;

  // Integral row (length M+1, last entry is the ghost column) before the factor C r^{-2s}.
  auto row(int i) const -> Vector
  {
    Vector const &t = ip.t();
    int const     M = grid.M;
    double const  ti = t[i];
    Vector        out = Vector::Zero(M + 1);

    // window [t_{i-1}, t_{i+1}] around the singularity
    {
      LocalBasis   B = ip.window(i);
      int const    n = B.terms();
      double const wl = i == 0 ? -std::numeric_limits<double>::infinity() : t[i - 1] - ti;
      double const wr = t[i + 1] - ti;
      double const hm = std::min(-wl, wr);
      Vector       Phi;
      if (B.muntz) {
        auto fsym = [&](double tau) {
          Vector v(n);
          double const J = ker.J(tau);
          for (int m = 0; m < n; ++m) {
            double const th = B.exps[m];
            v[m] = J * 4 * std::sinh((2 * c - th) * tau / 2) * std::sinh(th * tau / 2);
          }
          return v;
        };
        Phi = graded_integral(fsym, hm, 1 - 2 * s);
      } else {
        auto fsym = [&](double tau) {
          Vector       v(n);
          double const J = ker.J(tau);
          double const ch = 2 * std::cosh(c * tau);
          double const sh = 2 * std::sinh(c * tau);
          double const y = tau / B.scale;
          double pw = 1.0;
          v[0] = 0.0;
          for (int m = 1; m < n; ++m) {
            pw *= y;
            v[m] = -pw * J * ((m % 2) ? sh : ch);
          }
          return v;
        };
        Phi = graded_integral(fsym, hm, 1 - 2 * s);
      }
      Vector const e0 = B.eval(ti);
      auto fone = [&](double tau) -> Vector { return (e0 - B.eval(ti + tau)) * ker.k(tau); };
      if (wr > hm) { Phi += panel_integral(fone, hm, wr, hm); }
      if (std::isfinite(wl) && -wl > hm) { Phi += panel_integral(fone, -hm, wl, hm); }
      for (int k = 0; k < B.size(); ++k) { out[B.nodes[k]] += B.Vit.row(k).dot(Phi); }
    }

    // regular cells
    auto kfun = [&](double tau) { return ker.k(tau); };
    for (int j = 0; j < M; ++j) {
      if (j == i - 1 || j == i) { continue; }
      LocalBasis   B = ip.cell(j, M);
      double const a = t[j] - ti;
      double const b = t[j + 1] - ti;
      auto fb = [&](double tau) -> Vector { return B.eval(ti + tau) * ker.k(tau); };
      out[i] += gl_integrate(kfun, a, b, gl_order);
      Vector const Phi = gl_integrate(fb, a, b, gl_order);
      for (int k = 0; k < B.size(); ++k) { out[B.nodes[k]] -= B.Vit.row(k).dot(Phi); }
    }

    // (0, r_1): extrapolate the innermost nodes; row 1 starts below its window
    {
      LocalBasis   B = ip.left();
      double const b = i == 0 ? t[0] - t[1] : t[0] - ti;
      auto fb = [&](double tau) -> Vector { return B.eval(ti + tau) * ker.k(tau); };
      double const first = 0.5 * std::min(std::abs(b), 1.0);
      out[i] += panel_integral(kfun, b, b - left_extent, first);
      Vector const Phi = panel_integral(fb, b, b - left_extent, first);
      for (int k = 0; k < B.size(); ++k) { out[B.nodes[k]] -= B.Vit.row(k).dot(Phi); }
    }

    out[i] += exterior(i, 0.0);
    return out;
  }

  // int_{tau > t_ghost - t_i} e^{-theta tau} k(tau) dtau
  auto exterior(int i, double theta) const -> double
  {
    Vector const &t = ip.t();
    double const  a = t[grid.M] - t[i];
    double const  T = std::max({std::log(far / grid.r[i]), 2 * a, RadialKernel::table_end});
    auto f = [&](double tau) { return std::exp(-theta * tau) * ker.k(tau); };
    return panel_integral(f, a, T, a) + ker.tail_integral(T, theta);
  }
};

} // namespace

auto RadialGrid::log_nodes() const -> Vector
{
  Vector t(M + 1);
  t.head(M) = r.array().log();
  t[M] = std::log(ghost);
  return t;
}

auto RadialGrid::matches(RadialGrid const &o) const -> bool { return R == o.R && M == o.M && g == o.g; }

auto build_grid(double R, int M, double g) -> RadialGrid
{
  if (M < 16) { throw ConfigError("grid needs M >= 16 nodes, got " + std::to_string(M)); }
  if (!(R > 0) || !std::isfinite(R)) { throw ConfigError("grid radius R must be positive"); }
  if (!(g >= 1) || !std::isfinite(g)) { throw ConfigError("grading exponent g must be >= 1"); }
  RadialGrid grid;
  grid.R = R;
  grid.M = M;
  grid.g = g;
  grid.r.resize(M);
  for (int i = 1; i <= M; ++i) { grid.r[i - 1] = R * std::pow(static_cast<double>(i) / M, g); }
  grid.r[M - 1] = R;
  grid.ghost = R + (grid.r[M - 1] - grid.r[M - 2]);
  return grid;
}

auto default_muntz_rows(RadialGrid const &grid) -> int
{
  Vector const t = grid.log_nodes();
  int i = 1;
  while (i < grid.M && t[i] - t[i - 1] > 0.25) { ++i; }
  return i;
}

auto muntz_exponents(int n, double top, std::vector<double> const &hints) -> Vector
{
  // clustered toward 0, where the regular part of the solutions lives
  Vector e = top * Vector::LinSpaced(n, 0.0, 1.0).array().square().matrix();
  std::vector<bool> taken(n, false);
  taken[0] = true;
  for (double h : hints) {
    if (!(h > 0.0 && h < top)) { continue; }
    int best = -1;
    for (int m = 1; m < n; ++m) {
      if (!taken[m] && (best < 0 || std::abs(e[m] - h) < std::abs(e[best] - h))) { best = m; }
    }
    if (best < 0) { continue; }
    bool clash = false;
    for (int m = 0; m < n; ++m) {
      if (m != best && std::abs(e[m] - h) < 0.02) { clash = true; }
    }
    if (clash) { continue; }
    e[best] = h;
    taken[best] = true;
  }
  std::sort(e.data(), e.data() + n);
  return e;
}

namespace {

// sum_i w_i f(r_i) ~ int_0^R f(r) r^{d-1} dr
auto measure_weights(RadialGrid const &grid, double d, int muntz_degree) -> Vector
{
  AssemblyOptions opts;
  opts.muntz_cell_degree = muntz_degree;
  Interp const  ip(grid, 0.5 * d, opts);
  Vector const &t = ip.t();
  int const     M = grid.M;
  Vector        w = Vector::Zero(M);
  for (int j = 0; j + 1 < M; ++j) {
    LocalBasis B = ip.cell(j, M - 1);
    auto f = [&](double x) -> Vector { return B.eval(x) * std::exp(d * x); };
    Vector const Phi = gl_integrate(f, t[j], t[j + 1], gl_order);
    for (int k = 0; k < B.size(); ++k) { w[B.nodes[k]] += B.Vit.row(k).dot(Phi); }
  }
  LocalBasis B = ip.left();
  Vector     Phi(B.terms());
  for (int m = 0; m < B.terms(); ++m) { Phi[m] = std::exp(d * t[0]) / (d - B.exps[m]); }
  for (int k = 0; k < B.size(); ++k) { w[B.nodes[k]] += B.Vit.row(k).dot(Phi); }
  return w;
}

// Highest Muntz cell degree whose weights are all positive; steep measures (large d) push
// the innermost weights of the wider stencils below zero.
auto measure_weights(RadialGrid const &grid, double d) -> Vector
{
  Vector w;
  for (int deg = AssemblyOptions{}.muntz_cell_degree; deg >= 1; --deg) {
    w = measure_weights(grid, d, deg);
    if ((w.array() > 0).all()) { break; }
  }
  return w;
}

auto sphere_area(int N) -> double { return 2 * std::exp(0.5 * N * std::log(std::numbers::pi) - log_gamma(0.5 * N)); }

} // namespace

auto radial_weights(RadialGrid const &grid, int N) -> Vector { return sphere_area(N) * measure_weights(grid, N); }

auto make_field(RadialGrid const &grid, Vector values) -> RadialField
{
  if (values.size() != grid.M) { throw UsageError("field length does not match the grid"); }
  if (!values.allFinite()) { throw UsageError("field values must be finite"); }
  return {grid, std::move(values)};
}

auto power_field(RadialGrid const &grid, double theta, double amplitude) -> RadialField
{
  return {grid, amplitude * grid.r.array().pow(-theta).matrix()};
}

namespace {

// Without a hint the Hardy-critical exponent (N-2s)/2 is built in.
auto resolved(AssemblyOptions opts, int N, double s) -> AssemblyOptions
{
  if (opts.singular_exponents.empty()) { opts.singular_exponents = {0.5 * N - s}; }
  return opts;
}

} // namespace

auto assemble_operator(RadialGrid const &grid, int N, double s, AssemblyOptions const &given) -> OperatorMatrix
{
  if (!(N > 2 * s)) { throw DomainError("operator needs N > 2s"); }
  if (!(s > 0 && s < 1)) { throw DomainError("operator needs 0 < s < 1"); }
  AssemblyOptions const opts = resolved(given, N, s);
  if (!(opts.far_field_factor >= 1.0)) { throw ConfigError("far-field factor must be >= 1"); }
  auto const   ker = shared_kernel(N, s, opts.angular_order);
  Interp const ip(grid, N - 2 * s, opts);

  OperatorMatrix op;
  op.grid = grid;
  op.N = N;
  op.s = s;
  op.options = opts;
  // P.V. form with symbol |xi|^{2s}: twice the normalizing constant a_{N,s}
  op.constant = 2 * normalizing_constant(N, s);
  op.far_field_radius = opts.far_field_factor * grid.R;
  op.kernel_error = ker->quadrature_error();
  op.muntz_rows = ip.muntz_rows();

  RowAssembler const ra{grid, *ker, ip, opts, N / 2.0 - s, s, op.far_field_radius};
  op.L.resize(grid.M, grid.M);
  for (int i = 0; i < grid.M; ++i) {
    Vector const row = ra.row(i);
    op.L.row(i) = (op.constant * std::pow(grid.r[i], -2 * s)) * row.head(grid.M).transpose();
  }
  op.weights = radial_weights(grid, N);
  return op;
}

auto apply(OperatorMatrix const &op, RadialField const &u) -> RadialField
{
  if (!op.grid.matches(u.grid)) { throw UsageError("field and operator live on different grids"); }
  return {u.grid, op.L * u.values};
}

auto oracle_power_test(OperatorMatrix const &op, double theta, double r_max_check, int skip_inner) -> OracleResult
{
  if (skip_inner < 0) { throw ConfigError("skip_inner must be nonnegative"); }
  double const top = op.N - 2 * op.s;
  if (!(theta > 0.0 && theta < top)) {
    throw DomainError("oracle exponent theta must lie in (0, N-2s) = (0, " + std::to_string(top) + ")");
  }
  auto const   ker = shared_kernel(op.N, op.s, op.options.angular_order);
  Interp const ip(op.grid, op.N - 2 * op.s, op.options);
  RowAssembler const ra{op.grid, *ker, ip, op.options, op.N / 2.0 - op.s, op.s, op.far_field_radius};
  Vector const &t = ip.t();
  int const     M = op.grid.M;

  OracleResult res;
  res.theta = theta;
  res.multiplier = gamma_multiplier(top / 2 - theta, op.N, op.s);
  // 1e-3 absolute and 2% relative coincide at a multiplier of 0.05
  res.absolute = res.multiplier < 0.05;

  Vector const u = op.grid.r.array().pow(-theta);
  Vector const Lu = op.L * u;
  Vector       uext(M + 1);
  uext << u, 0.0;
  LocalBasis const last = ip.cell(M - 1, M);
  Vector           un(last.size());
  for (int k = 0; k < last.size(); ++k) { un[k] = uext[last.nodes[k]]; }
  Vector const coef = last.Vit.transpose() * un; // V^{-1} u

  int const cutoff = M - static_cast<int>(std::ceil(0.05 * M));
  std::vector<double> errs;
  for (int i = skip_inner; i < std::min(cutoff, M - 1); ++i) {
    if (op.grid.r[i] > r_max_check) { break; }
    double const ti = t[i];
    auto gap = [&](double tau) {
      return (std::exp(-theta * (ti + tau)) - last.eval(ti + tau).dot(coef)) * ker->k(tau);
    };
    double corr = gl_integrate(gap, t[M - 1] - ti, t[M] - ti, gl_order);
    corr += std::exp(-theta * ti) * ra.exterior(i, theta);
    double const full = Lu[i] - op.constant * std::pow(op.grid.r[i], -2 * op.s) * corr;
    double const est = full * std::pow(op.grid.r[i], theta + 2 * op.s);
    double const abs_err = std::abs(est - res.multiplier);
    double const rel_err = abs_err / res.multiplier;
    res.max_abs_error = std::max(res.max_abs_error, abs_err);
    res.max_rel_error = std::max(res.max_rel_error, rel_err);
    errs.push_back(rel_err);
  }
  res.first_node = skip_inner;
  res.nodes_checked = static_cast<int>(errs.size());
  res.node_rel_error = Eigen::Map<Vector>(errs.data(), static_cast<Eigen::Index>(errs.size()));
  return res;
}

auto rayleigh_quotient(OperatorMatrix const &op, RadialField const &u) -> double
{
  if (!op.grid.matches(u.grid)) { throw UsageError("field and operator live on different grids"); }
  if (u.values.cwiseAbs().maxCoeff() == 0.0) { throw DomainError("Rayleigh quotient of the zero field"); }
  // both integrals against r^{N-1-2s} dr so that near-power fields share the extrapolation error
  Vector const w = measure_weights(op.grid, op.N - 2 * op.s);
  Vector const Lu = op.L * u.values;
  double const num = (w.array() * u.values.array() * Lu.array() * op.grid.r.array().pow(2 * op.s)).sum();
  double const den = (w.array() * u.values.array().square()).sum();
  return num / den;
}

auto gradient_matrix(RadialGrid const &grid, int N, double s, AssemblyOptions const &opts) -> Matrix
{
  Interp const  ip(grid, N - 2 * s, resolved(opts, N, s));
  Vector const &t = ip.t();
  int const     M = grid.M;
  Matrix        D = Matrix::Zero(M, M);
  for (int i = 0; i < M; ++i) {
    int const    max_index = i == M - 1 ? M : M - 1;
    LocalBasis   B = ip.slope(i, max_index);
    Vector const d = B.deriv(t[i]) / grid.r[i];
    for (int k = 0; k < B.size(); ++k) {
      if (B.nodes[k] < M) { D(i, B.nodes[k]) += B.Vit.row(k).dot(d); }
    }
  }
  return D;
}

auto gradient(RadialField const &u, int N, double s, AssemblyOptions const &opts) -> RadialField
{
  Matrix const D = gradient_matrix(u.grid, N, s, opts);
  return {u.grid, (D * u.values).cwiseAbs()};
}

namespace {

void write_header(std::ostream &os, int N, double s, RadialGrid const &g)
{
  os << "# N,s,R,M,g\n# " << N << ',' << s << ',' << g.R << ',' << g.M << ',' << g.g << '\n';
}

} // namespace

void write_field_csv(std::ostream &os, RadialField const &u, int N, double s)
{
  auto const old = os.precision(17);
  write_header(os, N, s, u.grid);
  os << "r,u\n";
  for (int i = 0; i < u.grid.M; ++i) { os << u.grid.r[i] << ',' << u.values[i] << '\n'; }
  os.precision(old);
}

void write_operator_csv(std::ostream &os, OperatorMatrix const &op)
{
  auto const old = os.precision(17);
  write_header(os, op.N, op.s, op.grid);
  for (int i = 0; i < op.L.rows(); ++i) {
    for (int j = 0; j < op.L.cols(); ++j) { os << (j ? "," : "") << op.L(i, j); }
    os << '\n';
  }
  os.precision(old);
}

// Little-endian layout: magic "HKOP", int32 N, f64 s, f64 R, int32 M, f64 g, M f64 nodes, M*M f64 row-major.
void write_operator_binary(std::ostream &os, OperatorMatrix const &op)
{
  auto put = [&](auto v) { os.write(reinterpret_cast<char const *>(&v), sizeof(v)); };
  os.write("HKOP", 4);
  put(static_cast<std::int32_t>(op.N));
  put(op.s);
  put(op.grid.R);
  put(static_cast<std::int32_t>(op.grid.M));
  put(op.grid.g);
  for (int i = 0; i < op.grid.M; ++i) { put(op.grid.r[i]); }
  for (int i = 0; i < op.grid.M; ++i) {
    for (int j = 0; j < op.grid.M; ++j) { put(op.L(i, j)); }
  }
}

auto read_operator_binary(std::istream &is) -> OperatorMatrix
{
  auto get = [&](auto &v) {
    is.read(reinterpret_cast<char *>(&v), sizeof(v));
    if (!is) { throw ConfigError("truncated operator dump"); }
  };
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "HKOP") { throw ConfigError("not an operator dump"); }
  std::int32_t N = 0, M = 0;
  double       s = 0, R = 0, g = 0;
  get(N);
  get(s);
  get(R);
  get(M);
  get(g);
  OperatorMatrix op;
  op.grid = build_grid(R, M, g);
  op.N = N;
  op.s = s;
  for (int i = 0; i < M; ++i) {
    double v;
    get(v);
    op.grid.r[i] = v;
  }
  op.L.resize(M, M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) { get(op.L(i, j)); }
  }
  op.constant = 2 * normalizing_constant(N, s);
  op.weights = radial_weights(op.grid, N);
  return op;
}

} // namespace hk
