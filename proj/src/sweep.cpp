#include "hardykpz/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace hk {

auto solver_assembly(int N, double s, double lambda) -> AssemblyOptions
{
  AssemblyOptions o;
  o.singular_exponents = {exponent_report(N, s, lambda).mu_lambda};
  return o;
}

namespace {
void validate_cells(SweepPlan const &plan);
}

auto SweepAxis::values() const -> std::vector<double>
{
  std::vector<double> v;
  for (int k = 0; k < steps; ++k) {
    v.push_back(steps == 1 ? from : k == steps - 1 ? to : from + (to - from) * k / (steps - 1));
  }
  return v;
}

auto SweepPlan::cell_count() const -> long
{
  long n = 1;
  for (auto const &a : axes) { n *= a.steps; }
  return n;
}

void SweepPlan::validate() const
{
  if (axes.size() > 2) { throw ConfigError("a sweep has at most 2 axes"); }
  for (std::size_t i = 0; i < axes.size(); ++i) {
    auto const &a = axes[i];
    if (a.name != "p" && a.name != "lambda" && a.name != "mu" && a.name != "alpha_damp") {
      throw ConfigError("unknown sweep axis '" + a.name + "' (p, lambda, mu, alpha_damp)");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (axes[j].name == a.name) { throw ConfigError("sweep axis '" + a.name + "' given twice"); }
    }
    if (a.steps < 0) { throw ConfigError("sweep axis '" + a.name + "': steps must be >= 0"); }
  }
  if (budget < 0) { throw ConfigError("budget must be >= 0"); }
  if (cell_count() > budget) {
    throw ConfigError("plan has " + std::to_string(cell_count()) + " cells, budget is " + std::to_string(budget));
  }
  controls.validate();
  if (source.analytic && !(source.constant >= 0.0)) { throw ConfigError("source constant must be >= 0"); }
  validate_cells(*this);
}

auto to_string(CellStatus s) -> std::string
{
  switch (s) {
  case CellStatus::Converged: return "Converged";
  case CellStatus::BlowUp: return "BlowUp";
  case CellStatus::MaxIterations: return "MaxIterations";
  case CellStatus::Inconclusive: return "Inconclusive";
  }
  throw InternalError("unknown cell status");
}

auto cell_status_from_string(std::string const &name) -> CellStatus
{
  for (auto c : {CellStatus::Converged, CellStatus::BlowUp, CellStatus::MaxIterations, CellStatus::Inconclusive}) {
    if (to_string(c) == name) { return c; }
  }
  throw ConfigError("unknown cell status '" + name + "'");
}

namespace {

auto cell_coords(SweepPlan const &plan, long index) -> std::vector<double>
{
  std::vector<double> c(plan.axes.size());
  long                rest = index;
  for (std::size_t a = plan.axes.size(); a-- > 0;) {
    auto const vals = plan.axes[a].values();
    long const n = plan.axes[a].steps;
    c[a] = vals[static_cast<std::size_t>(rest % n)];
    rest /= n;
  }
  return c;
}

struct CellParams
{
  ProblemParams params;
  double        alpha = 0.0;
};

auto params_at(SweepPlan const &plan, std::vector<double> const &coords) -> CellParams
{
  CellParams c{plan.fixed, plan.alpha_damp};
  for (std::size_t a = 0; a < plan.axes.size(); ++a) {
    auto const &name = plan.axes[a].name;
    if (name == "p") { c.params.p = coords[a]; }
    if (name == "lambda") { c.params.lambda = coords[a]; }
    if (name == "mu") { c.params.mu = coords[a]; }
    if (name == "alpha_damp") { c.alpha = coords[a]; }
  }
  return c;
}

class DiscretizationCache
{
public:
  DiscretizationCache(GridSpec g) : grid_(g) {}

  auto get(int N, double s, double lambda) -> std::shared_ptr<Discretization const>
  {
    std::lock_guard<std::mutex> lock(mtx_);
    auto const                  key = std::make_tuple(N, s, lambda);
    if (auto it = cache_.find(key); it != cache_.end()) { return it->second; }
    auto d = std::make_shared<Discretization const>(
        make_discretization(build_grid(grid_.R, grid_.M, grid_.g), N, s, solver_assembly(N, s, lambda)));
    cache_.emplace(key, d);
    return d;
  }

private:
  GridSpec                                                                   grid_;
  std::mutex                                                                 mtx_;
  std::map<std::tuple<int, double, double>, std::shared_ptr<Discretization const>> cache_;
};

auto run_cell(SweepPlan const &plan, long index, DiscretizationCache &cache) -> SweepCell
{
  SweepCell cell;
  cell.index = index;
  cell.coords = cell_coords(plan, index);
  auto const cp = params_at(plan, cell.coords);
  auto const &P = cp.params;
  try {
    P.validate();
    auto const rep = critical_exponents(P);
    if (std::abs(P.p - rep.p_plus) <= 1e-12 * rep.p_plus) {
      cell.note = "p = p+: inconclusive by policy";
      return cell;
    }
    auto const disc = cache.get(P.N, P.s, P.lambda);

    std::optional<SupersolutionSpec> spec;
    try {
      if (cp.alpha > 0.0) {
        spec = damped_supersolution(P.N, P.s, P.lambda, P.p, cp.alpha);
      } else if (plan.source.analytic && P.p < rep.p_plus) {
        spec = dirichlet_supersolution(P, PowerBound{plan.source.exponent, plan.source.constant});
      }
    } catch (DomainError const &) {
    } catch (ConstructionError const &) {
    }
    SupersolutionSpec const *w = spec ? &*spec : nullptr;
    SolverReport const rep_s = cp.alpha > 0.0 ? solve_damped(P, cp.alpha, plan.source, *disc, plan.controls, w)
                                               : solve_kpz(P, plan.source, *disc, plan.controls, w);
    switch (rep_s.status) {
    case SolveStatus::Converged: cell.status = CellStatus::Converged; break;
    case SolveStatus::BlowUp: cell.status = CellStatus::BlowUp; break;
    case SolveStatus::MaxIterations: cell.status = CellStatus::MaxIterations; break;
    }
    cell.sup_norm = rep_s.trace.back().sup_norm;
    for (auto const &row : rep_s.trace) { cell.iterations += row.inner_iters; }
    cell.note = w != nullptr ? "barrier" : "no barrier";
  } catch (std::exception const &e) {
    cell.status = CellStatus::Inconclusive;
    cell.note = e.what();
  }
  return cell;
}

auto format_double(double x) -> std::string
{
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

auto csv_note(std::string s) -> std::string
{
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

void write_checkpoint_line(std::ostream &os, SweepCell const &c)
{
  os << c.index;
  for (double x : c.coords) { os << ',' << format_double(x); }
  os << ',' << to_string(c.status) << ',' << format_double(c.sup_norm) << ',' << c.iterations << ','
     << csv_note(c.note) << '\n';
}

auto read_checkpoint(std::string const &path, SweepPlan const &plan) -> std::map<long, SweepCell>
{
  std::map<long, SweepCell> done;
  std::ifstream             in(path);
  if (!in) { return done; }
  std::string line;
  auto const  na = plan.axes.size();
  while (std::getline(in, line)) {
    if (line.empty()) { continue; }
    std::vector<std::string> f;
    std::stringstream        ss(line);
    std::string              item;
    while (std::getline(ss, item, ',')) { f.push_back(item); }
    if (f.size() < na + 4) { continue; } // torn last line
    SweepCell c;
    try {
      c.index = std::stol(f[0]);
      for (std::size_t a = 0; a < na; ++a) { c.coords.push_back(std::stod(f[1 + a])); }
      c.status = cell_status_from_string(f[na + 1]);
      c.sup_norm = std::stod(f[na + 2]);
      c.iterations = std::stoi(f[na + 3]);
      c.note = f.size() > na + 4 ? f[na + 4] : "";
    } catch (std::exception const &) {
      continue;
    }
    if (c.index < 0 || c.index >= plan.cell_count() || c.coords != cell_coords(plan, c.index)) {
      throw ConfigError("checkpoint " + path + " belongs to a different plan");
    }
    done[c.index] = c;
  }
  return done;
}

auto find_band_impl(SweepPlan const &plan, std::vector<SweepCell> const &cells) -> TransitionBand
{
  TransitionBand b;
  if (plan.axes.size() != 1 || plan.axes[0].name != "p" || cells.empty()) { return b; }
  b.p_plus = exponent_report(plan.fixed.N, plan.fixed.s, plan.fixed.lambda).p_plus;
  std::vector<SweepCell> sorted = cells;
  std::sort(sorted.begin(), sorted.end(), [](auto const &x, auto const &y) { return x.coords[0] < y.coords[0]; });
  auto first = std::find_if(sorted.begin(), sorted.end(), [](auto const &c) { return c.status == CellStatus::BlowUp; });
  if (first == sorted.end()) { return b; }
  for (auto it = first; it != sorted.begin();) {
    --it;
    if (it->status == CellStatus::Converged) {
      b.found = true;
      b.last_converged = it->coords[0];
      b.first_blowup = first->coords[0];
      break;
    }
  }
  return b;
}

void validate_cells(SweepPlan const &plan)
{
  if (plan.axes.empty()) { return; }
  for (long i = 0; i < plan.cell_count(); ++i) {
    auto const c = params_at(plan, cell_coords(plan, i));
    try {
      c.params.validate();
    } catch (DomainError const &e) {
      throw ConfigError("sweep cell " + std::to_string(i) + " leaves the analytic domain: " + e.what());
    }
    if (!(c.alpha >= 0.0)) { throw ConfigError("alpha_damp must be >= 0"); }
  }
}

} // namespace

auto run_sweep(SweepPlan const &plan, SweepOptions const &opts) -> RegionMap
{
  plan.validate();
  RegionMap map;
  for (auto const &a : plan.axes) { map.axis_names.push_back(a.name); }
  long const n = plan.axes.empty() ? 0 : plan.cell_count();

  // overlay recomputed from the exponent formulas on every call
  std::vector<double> lambdas{plan.fixed.lambda};
  for (auto const &a : plan.axes) {
    if (a.name == "lambda") { lambdas = a.values(); }
  }
  for (double l : lambdas) {
    auto const r = exponent_report(plan.fixed.N, plan.fixed.s, l);
    map.overlay.push_back({l, r.p_minus, r.p_plus, r.p_star, 2 * plan.fixed.s});
  }
  if (n == 0) { return map; }

  std::map<long, SweepCell> done;
  if (!opts.checkpoint.empty()) { done = read_checkpoint(opts.checkpoint, plan); }
  std::ofstream ckpt;
  if (!opts.checkpoint.empty()) {
    ckpt.open(opts.checkpoint, std::ios::app);
    if (!ckpt) { throw ConfigError("cannot open checkpoint " + opts.checkpoint); }
  }

  std::vector<SweepCell> cells(static_cast<std::size_t>(n));
  std::vector<long>      todo;
  for (long i = 0; i < n; ++i) {
    if (auto it = done.find(i); it != done.end()) {
      cells[static_cast<std::size_t>(i)] = it->second;
    } else {
      todo.push_back(i);
    }
  }

  DiscretizationCache cache(plan.grid);
  std::atomic<std::size_t> next{0};
  std::mutex               out_mtx;
  auto worker = [&] {
    while (true) {
      std::size_t const k = next.fetch_add(1);
      if (k >= todo.size()) { return; }
      SweepCell cell = run_cell(plan, todo[k], cache);
      std::lock_guard<std::mutex> lock(out_mtx);
      if (ckpt.is_open()) {
        write_checkpoint_line(ckpt, cell);
        ckpt.flush();
      }
      if (opts.on_cell) { opts.on_cell(cell); }
      cells[static_cast<std::size_t>(cell.index)] = std::move(cell);
    }
  };
  int const nt = std::max(1, std::min<int>(opts.threads, static_cast<int>(todo.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) { pool.emplace_back(worker); }
  worker();
  for (auto &t : pool) { t.join(); }

  map.computed = static_cast<long>(todo.size());
  map.cells = std::move(cells);
  map.band = find_band_impl(plan, map.cells);
  return map;
}

void write_region_csv(std::ostream &os, RegionMap const &map)
{
  os << "index";
  for (auto const &a : map.axis_names) { os << ',' << a; }
  os << ",status,sup_norm,iters\n";
  for (auto const &c : map.cells) {
    os << c.index;
    for (double x : c.coords) { os << ',' << format_double(x); }
    os << ',' << to_string(c.status) << ',' << format_double(c.sup_norm) << ',' << c.iterations << '\n';
  }
}

auto exponent_table(int N, double s, std::vector<double> const &lambda_grid) -> std::vector<ExponentRow>
{
  double const Lambda = hardy_constant(N, s);
  std::vector<ExponentRow> rows;
  for (double l : lambda_grid) {
    ExponentRow row;
    row.lambda = l;
    if (!(l > 0.0 && l <= Lambda)) {
      row.note = "lambda outside (0, Lambda]";
      rows.push_back(row);
      continue;
    }
    auto const r = exponent_report(N, s, l);
    row.valid = true;
    row.alpha = r.alpha_lambda;
    row.mu = r.mu_lambda;
    row.mubar = r.mubar_lambda;
    row.p_minus = r.p_minus;
    row.p_plus = r.p_plus;
    if (l < Lambda) {
      row.chain = r.chain_holds();
    } else {
      // alpha = 0: p- and p+ meet at the midpoint
      row.chain = r.p_star < r.p_minus && r.p_minus <= r.p_mid() && r.p_mid() <= r.p_plus && r.p_plus < 2 * s;
      row.note = "lambda = Lambda";
    }
    rows.push_back(row);
  }
  return rows;
}

void write_exponent_table_csv(std::ostream &os, std::vector<ExponentRow> const &rows)
{
  os << "lambda,alpha,mu,mubar,p_minus,p_plus,valid,chain,note\n";
  for (auto const &r : rows) {
    os << format_double(r.lambda) << ',' << format_double(r.alpha) << ',' << format_double(r.mu) << ','
       << format_double(r.mubar) << ',' << format_double(r.p_minus) << ',' << format_double(r.p_plus) << ','
       << (r.valid ? 1 : 0) << ',' << (r.chain ? 1 : 0) << ',' << csv_note(r.note) << '\n';
  }
}

} // namespace hk
