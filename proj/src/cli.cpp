#include "hardykpz/cli.hpp"

#include "hardykpz/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <optional>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hk::cli {

namespace fs = std::filesystem;
using io::json;
using io::Section;

namespace {

struct OracleFailure
{
};

// A flag that lands at a dotted path of the input JSON.
struct Bind
{
  enum Kind { Num, Int, Str, NumOrStr, Flag };
  std::string  path;
  Kind         kind = Num;
  std::string  value;
  bool         set = false;
  CLI::Option *opt = nullptr;
};

struct Command
{
  std::string                        name;
  CLI::App                          *app = nullptr;
  std::vector<std::unique_ptr<Bind>> binds;
  std::string                        config;
  std::string                        out;
  int                                threads = 0;
};

void add(Command &c, std::string const &flag, std::string const &path, Bind::Kind kind, std::string const &help)
{
  auto b = std::make_unique<Bind>();
  b->path = path;
  b->kind = kind;
  if (kind == Bind::Flag) {
    b->opt = c.app->add_flag(flag, b->set, help);
  } else {
    b->opt = c.app->add_option(flag, b->value, help);
  }
  c.binds.push_back(std::move(b));
}

auto parse_number(std::string const &flag, std::string const &text) -> double
{
  std::size_t pos = 0;
  double      x = 0;
  try {
    x = std::stod(text, &pos);
  } catch (std::exception const &) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) { throw ConfigError(flag + ": '" + text + "' is not a number"); }
  return x;
}

auto input_from_flags(Command const &c) -> json
{
  json j = json::object();
  for (auto const &b : c.binds) {
    if (b->opt->count() == 0) { continue; }
    json v;
    std::string const flag = b->opt->get_name();
    switch (b->kind) {
    case Bind::Num: v = parse_number(flag, b->value); break;
    case Bind::Int: {
      double const x = parse_number(flag, b->value);
      if (x != static_cast<long>(x)) { throw ConfigError(flag + ": expected an integer"); }
      v = static_cast<long>(x);
      break;
    }
    case Bind::Str: v = b->value; break;
    case Bind::NumOrStr:
      try {
        v = parse_number(flag, b->value);
      } catch (ConfigError const &) {
        v = b->value;
      }
      break;
    case Bind::Flag: v = true; break;
    }
    std::string ptr = "/" + b->path;
    std::replace(ptr.begin(), ptr.end(), '.', '/');
    j[json::json_pointer(ptr)] = v;
  }
  return j;
}

auto any_flag(Command const &c) -> bool
{
  for (auto const &b : c.binds) {
    if (b->opt->count() > 0) { return true; }
  }
  return false;
}

auto load_config(std::string const &path) -> json
{
  std::ifstream in(path);
  if (!in) { throw ConfigError("cannot read config file '" + path + "'"); }
  try {
    return json::parse(in);
  } catch (json::parse_error const &e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

auto env_or(char const *name, std::string const &fallback) -> std::string
{
  char const *v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

class Outputs
{
public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir))
  {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) { throw InternalError("cannot create output directory '" + dir_.string() + "': " + ec.message()); }
  }

  auto path(std::string const &name) const -> fs::path { return dir_ / name; }

  void write(std::string const &name, std::string const &text) const
  {
    std::ofstream f(path(name), std::ios::binary);
    f << text;
    if (!f) { throw InternalError("cannot write '" + path(name).string() + "'"); }
  }

  void write_json(std::string const &name, json const &j) const { write(name, io::canonical_text(j)); }

  void write_config(json const &resolved) const
  {
    write_json("config.json", resolved);
    write("config.sha256", io::config_hash(resolved) + "\n");
  }

private:
  fs::path dir_;
};

auto csv_text(auto &&writer) -> std::string
{
  std::ostringstream os;
  writer(os);
  return os.str();
}

auto with_key(Section const &sec, std::string const &key) -> std::optional<Section>
{
  if (!sec.has(key)) { return std::nullopt; }
  return sec.child(key);
}

auto grid_of(Section const &sec) -> GridSpec
{
  auto g = with_key(sec, "grid");
  return g ? io::read_grid(*g) : GridSpec{};
}

auto source_of(Section const &sec, ProblemParams const &p) -> Source
{
  if (auto f = with_key(sec, "source")) { return io::read_source(*f, p); }
  return Source::power(2 * p.s + exponent_report(p.N, p.s, p.lambda).mu_lambda, 1.0);
}

auto controls_of(Section const &sec) -> SolverControls
{
  auto c = with_key(sec, "controls");
  return c ? io::read_controls(*c) : SolverControls{};
}

void validate_problem(ProblemParams const &p)
{
  try {
    p.validate();
  } catch (DomainError const &e) {
    throw DomainError(std::string("problem: ") + e.what());
  }
}

auto discretize(ProblemParams const &p, GridSpec const &g) -> Discretization
{
  return make_discretization(build_grid(g.R, g.M, g.g), p.N, p.s, solver_assembly(p.N, p.s, p.lambda));
}

// ---------------------------------------------------------------- constants

auto cmd_constants(Section const &in, Outputs const *out) -> json
{
  int const    N = static_cast<int>(in.integer("N"));
  double const s = in.number("s");
  in.finish();
  json const resolved = {{"command", "constants"}, {"N", N}, {"s", s}};
  json const result = {{"N", N}, {"s", s}, {"Lambda_Ns", hardy_constant(N, s)}, {"a_Ns", normalizing_constant(N, s)}};
  std::cout << io::canonical_text(result);
  if (out) {
    out->write_config(resolved);
    out->write_json("constants.json", result);
  }
  return resolved;
}

// ---------------------------------------------------------------- exponents

auto cmd_exponents(Section const &in, Outputs const *out) -> json
{
  int const    N = static_cast<int>(in.integer("N"));
  double const s = in.number("s");
  double const Lambda = hardy_constant(N, s);
  json         resolved = {{"command", "exponents"}, {"N", N}, {"s", s}};
  if (auto t = with_key(in, "table")) {
    double from = 0;
    double to = 0;
    if (t->has("from_fraction") || t->has("to_fraction")) {
      from = t->number("from_fraction") * Lambda;
      to = t->number("to_fraction") * Lambda;
    } else {
      from = t->number("from");
      to = t->number("to");
    }
    long const steps = t->integer("steps");
    if (steps < 1 || steps > 100000) { throw ConfigError(t->key_path("steps") + ": must lie in [1, 100000]"); }
    t->finish();
    in.finish();
    SweepAxis const ax{"lambda", from, to, static_cast<int>(steps)};
    auto const      rows = exponent_table(N, s, ax.values());
    std::string const text = csv_text([&](std::ostream &os) { write_exponent_table_csv(os, rows); });
    std::cout << text;
    resolved["table"] = {{"from", from}, {"to", to}, {"steps", steps}};
    if (out) {
      out->write_config(resolved);
      out->write("exponent_table.csv", text);
    }
    return resolved;
  }
  double lambda = 0;
  if (in.has("lambda_fraction")) {
    if (in.has("lambda")) { throw ConfigError("lambda: give exactly one of lambda, lambda_fraction"); }
    lambda = in.number("lambda_fraction") * Lambda;
  } else {
    lambda = in.number("lambda");
  }
  in.finish();
  auto const r = exponent_report(N, s, lambda);
  json const result = io::to_json(r);
  std::cout << io::canonical_text(result);
  resolved["lambda"] = lambda;
  if (out) {
    out->write_config(resolved);
    out->write_json("exponents.json", result);
  }
  return resolved;
}

// ---------------------------------------------------------------- oracle

auto cmd_oracle(Section const &in, Outputs const *out) -> json
{
  auto const    prob = in.child("problem");
  ProblemParams P = io::read_problem(prob, false, false);
  auto const    rep = exponent_report(P.N, P.s, P.lambda);
  if (!(P.lambda > 0 && P.lambda < rep.Lambda_Ns)) {
    throw DomainError("problem.lambda: must lie in (0, " + io::number_text(rep.Lambda_Ns) + ")");
  }
  double      theta = 0;
  auto const &th = in.raw("theta");
  if (th.is_string()) {
    auto const name = th.get<std::string>();
    if (name == "mu") {
      theta = rep.mu_lambda;
    } else if (name == "mubar") {
      theta = rep.mubar_lambda;
    } else if (name == "mid") {
      theta = 0.5 * (rep.mu_lambda + rep.mubar_lambda);
    } else if (name == "theta0") {
      double const p = in.number("p");
      if (!(p > 1 && p < 2 * P.s)) { throw DomainError("p: theta0 needs 1 < p < 2s"); }
      theta = (2 * P.s - p) / (p - 1);
    } else {
      throw ConfigError("theta: a number or one of mu, mubar, mid, theta0");
    }
  } else {
    theta = in.number("theta");
  }
  if (in.has("p")) { in.number("p"); }
  GridSpec const g = grid_of(in);
  double const   tol = in.number("tolerance", 0.02);
  double const   abs_tol = in.number("abs_tolerance", 1e-3);
  double const   r_max = in.number("r_max_check", g.R / 10);
  bool const     near_mu = std::abs(theta - rep.mu_lambda) <= 1e-12 * rep.mu_lambda;
  long const     skip = in.integer("skip_inner", near_mu ? 0 : 2);
  bool const     refine = in.boolean("refine", false);
  in.finish();
  if (!(tol > 0) || !(abs_tol > 0)) { throw ConfigError("tolerance: must be positive"); }
  if (skip < 0 || skip > g.M) { throw ConfigError("skip_inner: must lie in [0, M]"); }

  json const resolved = {{"command", "oracle"},
                         {"problem", io::write_problem(P, false, false)},
                         {"theta", theta},
                         {"grid", io::write_grid(g)},
                         {"tolerance", tol},
                         {"abs_tolerance", abs_tol},
                         {"r_max_check", r_max},
                         {"skip_inner", skip},
                         {"refine", refine}};

  auto run_at = [&](int M) {
    auto const op = assemble_operator(build_grid(g.R, M, g.g), P.N, P.s, solver_assembly(P.N, P.s, P.lambda));
    return oracle_power_test(op, theta, r_max, static_cast<int>(skip));
  };
  auto const res = run_at(g.M);
  double const limit = res.absolute ? abs_tol : tol;
  bool const   pass = res.error() <= limit;
  json         result = io::to_json(res);
  result["M"] = g.M;
  result["tolerance"] = limit;
  result["pass"] = pass;
  if (refine) {
    auto const fine = run_at(2 * g.M);
    result["refined"] = io::to_json(fine);
    result["refined"]["M"] = 2 * g.M;
    result["error_ratio"] = fine.error() > 0 ? res.error() / fine.error() : 0.0;
  }
  std::cout << io::canonical_text(result);
  if (out) {
    out->write_config(resolved);
    out->write_json("oracle.json", result);
  }
  if (!pass) { throw OracleFailure{}; }
  return resolved;
}

// ---------------------------------------------------------------- solve / damped

void write_solve_outputs(Outputs const &out, json const &report, SolverReport const &rep, int N, double s)
{
  out.write_json("report.json", report);
  out.write("trace.csv", csv_text([&](std::ostream &os) { write_trace_csv(os, rep); }));
  out.write("field.csv", csv_text([&](std::ostream &os) { write_field_csv(os, rep.field, N, s); }));
}

auto barrier_mode(Section const &in) -> std::string
{
  auto const mode = in.string("supersolution", "auto");
  if (mode != "auto" && mode != "none" && mode != "required") {
    throw ConfigError("supersolution: one of auto, none, required");
  }
  return mode;
}

auto cmd_solve(Section const &in, Outputs const *out) -> json
{
  ProblemParams const  P = io::read_problem(in.child("problem"), true, true);
  GridSpec const       g = grid_of(in);
  SolverControls const c = controls_of(in);
  Source const         f = source_of(in, P);
  auto const           mode = barrier_mode(in);
  in.finish();
  validate_problem(P);
  json const resolved = {{"command", "solve"},         {"problem", io::write_problem(P, true, true)},
                         {"grid", io::write_grid(g)},  {"controls", io::write_controls(c)},
                         {"source", io::write_source(f)}, {"supersolution", mode}};

  std::optional<SupersolutionSpec> spec;
  std::string                      note;
  if (mode != "none") {
    try {
      spec = dirichlet_supersolution(P, PowerBound{f.exponent, f.constant}, g.R);
    } catch (DomainError const &e) {
      if (mode == "required") { throw; }
      note = e.what();
    } catch (ConstructionError const &e) {
      if (mode == "required") { throw DomainError(e.what()); }
      note = e.what();
    }
  }
  auto const disc = discretize(P, g);
  auto const rep = solve_kpz(P, f, disc, c, spec ? &*spec : nullptr);
  json       report = io::to_json(rep);
  report["supersolution"] = spec ? io::to_json(*spec) : json(nullptr);
  if (!note.empty()) { report["supersolution_note"] = note; }
  report["p_plus"] = critical_exponents(P).p_plus;
  std::cout << to_string(rep.status) << " sup_norm=" << io::number_text(rep.trace.back().sup_norm)
            << " monotonicity_violations=" << rep.monotonicity_violations
            << " barrier_violations=" << rep.barrier_violations << '\n';
  if (out) {
    out->write_config(resolved);
    write_solve_outputs(*out, report, rep, P.N, P.s);
  }
  return resolved;
}

auto cmd_damped(Section const &in, Outputs const *out) -> json
{
  ProblemParams P = io::read_problem(in.child("problem"), true, false);
  double const  alpha = in.number("alpha_damp");
  P.mu = in.number("c");
  GridSpec const       g = grid_of(in);
  SolverControls const c = controls_of(in);
  Source const         f = source_of(in, P);
  auto const           mode = barrier_mode(in);
  in.finish();
  validate_problem(P);
  if (!(alpha > 0)) { throw DomainError("alpha_damp: must be > 0"); }
  json const resolved = {{"command", "damped"},        {"problem", io::write_problem(P, true, false)},
                         {"alpha_damp", alpha},         {"c", P.mu},
                         {"grid", io::write_grid(g)},   {"controls", io::write_controls(c)},
                         {"source", io::write_source(f)}, {"supersolution", mode}};

  std::optional<SupersolutionSpec> spec;
  std::string                      note;
  if (mode != "none") {
    try {
      spec = damped_supersolution(P.N, P.s, P.lambda, P.p, alpha, DampingForm::OnePlusU, g.R);
    } catch (DomainError const &e) {
      if (mode == "required") { throw; }
      note = e.what();
    } catch (ConstructionError const &e) {
      if (mode == "required") { throw DomainError(e.what()); }
      note = e.what();
    }
  }
  auto const disc = discretize(P, g);
  auto const rep = solve_damped(P, alpha, f, disc, c, spec ? &*spec : nullptr);
  json       report = io::to_json(rep);
  report["supersolution"] = spec ? io::to_json(*spec) : json(nullptr);
  if (!note.empty()) { report["supersolution_note"] = note; }
  std::cout << to_string(rep.status) << " sup_norm=" << io::number_text(rep.trace.back().sup_norm)
            << " monotonicity_violations=" << rep.monotonicity_violations
            << " barrier_violations=" << rep.barrier_violations << '\n';
  if (out) {
    out->write_config(resolved);
    write_solve_outputs(*out, report, rep, P.N, P.s);
  }
  return resolved;
}

// ---------------------------------------------------------------- sweep

auto cmd_sweep(Section const &in, Outputs const *out, int threads) -> json
{
  SweepPlan plan = io::read_sweep_plan(in);
  in.finish();
  if (!in.has("source")) {
    ProblemParams ref = plan.fixed;
    if (ref.lambda == 0) { ref.lambda = 0.5 * hardy_constant(ref.N, ref.s); }
    plan.source = source_of(in, ref);
  }
  plan.validate();
  json resolved = io::write_sweep_plan(plan);
  resolved["command"] = "sweep";

  SweepOptions opts;
  opts.threads = threads;
  if (out) { opts.checkpoint = out->path("sweep.ckpt").string(); }
  auto const map = run_sweep(plan, opts);
  json       side = io::to_json(map);
  side["config_hash"] = io::config_hash(resolved);
  std::cout << io::canonical_text(side);
  if (out) {
    out->write_config(resolved);
    out->write("region.csv", csv_text([&](std::ostream &os) { write_region_csv(os, map); }));
    out->write_json("region.json", side);
    std::error_code ec;
    fs::remove(out->path("sweep.ckpt"), ec);
  }
  return resolved;
}

// ---------------------------------------------------------------- probe

auto cmd_probe(Section const &in, Outputs const *out) -> json
{
  ProblemParams const  P = io::read_problem(in.child("problem"), true, true);
  GridSpec const       g = grid_of(in);
  SolverControls const c = controls_of(in);
  Source const         f = source_of(in, P);
  double const         width = in.number("rel_width", 0.05);
  in.finish();
  validate_problem(P);
  json const resolved = {{"command", "probe"},          {"problem", io::write_problem(P, true, true)},
                         {"grid", io::write_grid(g)},   {"controls", io::write_controls(c)},
                         {"source", io::write_source(f)}, {"rel_width", width}};
  auto const disc = discretize(P, g);
  auto const res = mu_threshold_probe(P, f, disc, c, width);
  json const result = io::to_json(res);
  std::cout << io::canonical_text(result);
  if (out) {
    out->write_config(resolved);
    out->write_json("probe.json", result);
  }
  return resolved;
}

// ---------------------------------------------------------------- wiring

void problem_flags(Command &c, bool with_p, bool with_mu)
{
  add(c, "--N", "problem.N", Bind::Int, "dimension, integer N > 2s");
  add(c, "--s", "problem.s", Bind::Num, "fractional order, 1/2 < s < 1");
  add(c, "--lambda", "problem.lambda", Bind::Num, "Hardy coefficient, 0 < lambda < Lambda_{N,s}");
  add(c, "--lambda-fraction", "problem.lambda_fraction", Bind::Num, "lambda as a fraction of Lambda_{N,s}, in (0, 1)");
  if (with_p) {
    add(c, "--p", "problem.p", Bind::Num, "gradient exponent, p > 1");
    add(c, "--p-fraction", "problem.p_fraction", Bind::Num, "p as a multiple of p+(lambda, s)");
  }
  if (with_mu) { add(c, "--mu", "problem.mu", Bind::Num, "source coefficient, mu >= 0 (default 0)"); }
}

void grid_flags(Command &c)
{
  add(c, "--R", "grid.R", Bind::Num, "ball radius, R > 0 (default 1)");
  add(c, "--M", "grid.M", Bind::Int, "number of radial nodes, M >= 16 (default 200)");
  add(c, "--g", "grid.g", Bind::Num, "grading exponent toward the origin, g >= 1 (default 2)");
}

void source_flags(Command &c)
{
  add(c, "--f-exponent", "source.exponent", Bind::NumOrStr,
      "source f = C |x|^{-e}: exponent e, a number or \"2s+mu\" (default \"2s+mu\", mu = mu(lambda))");
  add(c, "--f-constant", "source.constant", Bind::Num, "source constant C >= 0 (default 1)");
}

void barrier_flag(Command &c)
{
  add(c, "--supersolution", "supersolution", Bind::Str,
      "barrier: auto (build if admissible), none, required (error if not admissible); default auto");
}

auto make_command(CLI::App &app, std::string const &name, std::string const &help, bool threads)
    -> std::unique_ptr<Command>
{
  auto  ptr = std::make_unique<Command>();
  auto &c = *ptr;
  c.name = name;
  c.app = app.add_subcommand(name, help);
  c.app->add_option("--config", c.config, "JSON config file (instead of parameter flags)");
  c.app->add_option("--out", c.out, "output directory (env HARDYKPZ_OUT, default hardykpz-out/<command>)");
  if (threads) { c.app->add_option("--threads", c.threads, "worker threads (env HARDYKPZ_THREADS, default 1)"); }
  return ptr;
}

auto execute(Command const &c) -> int
{
  json input;
  if (!c.config.empty()) {
    if (any_flag(c)) { throw ConfigError("parameter flags cannot be combined with --config"); }
    input = load_config(c.config);
    if (!input.is_object()) { throw ConfigError("config: expected an object"); }
    if (input.contains("command")) {
      if (input["command"] != c.name) {
        throw ConfigError("command: config is for '" + input["command"].dump() + "', not '" + c.name + "'");
      }
      input.erase("command");
    }
  } else {
    input = input_from_flags(c);
  }

  std::string const dir = !c.out.empty() ? c.out : env_or("HARDYKPZ_OUT", "hardykpz-out/" + c.name);
  int               threads = c.threads;
  if (threads <= 0) {
    auto const t = env_or("HARDYKPZ_THREADS", "1");
    threads = static_cast<int>(parse_number("HARDYKPZ_THREADS", t));
    if (threads < 1) { throw ConfigError("HARDYKPZ_THREADS: must be >= 1"); }
  }

  Section const in(input, "");
  Outputs const out(dir);
  if (c.name == "constants") { cmd_constants(in, &out); }
  if (c.name == "exponents") { cmd_exponents(in, &out); }
  if (c.name == "oracle") { cmd_oracle(in, &out); }
  if (c.name == "solve") { cmd_solve(in, &out); }
  if (c.name == "damped") { cmd_damped(in, &out); }
  if (c.name == "sweep") { cmd_sweep(in, &out, threads); }
  if (c.name == "probe") { cmd_probe(in, &out); }
  return 0;
}

} // namespace

auto run(std::vector<std::string> const &args) -> int
{
  CLI::App app{"Fractional Hardy-KPZ numerics: constants, exponents, operator oracle, solvers and sweeps.\n"
               "Every command writes config.json, config.sha256 and its outputs to the output directory.\n"
               "Exit codes: 0 success (Converged and BlowUp alike), 1 oracle tolerance failure,\n"
               "2 config or domain error, 3 internal error.",
               "hardykpz"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<Command>> cmds;

  {
    auto p = make_command(app, "constants", "Hardy constant Lambda_{N,s} and normalizing constant a_{N,s}", false);
    auto &c = *p;
    add(c, "--N", "N", Bind::Int, "dimension, integer N > 2s");
    add(c, "--s", "s", Bind::Num, "fractional order, 0 < s < 1");
    cmds.push_back(std::move(p));
  }
  {
    auto p = make_command(app, "exponents", "critical exponents at one lambda, or a CSV table over a lambda range", false);
    auto &c = *p;
    add(c, "--N", "N", Bind::Int, "dimension, integer N > 2s");
    add(c, "--s", "s", Bind::Num, "fractional order, 0 < s < 1");
    add(c, "--lambda", "lambda", Bind::Num, "Hardy coefficient, 0 < lambda <= Lambda_{N,s}");
    add(c, "--lambda-fraction", "lambda_fraction", Bind::Num, "lambda as a fraction of Lambda_{N,s}, in (0, 1]");
    add(c, "--table-from", "table.from", Bind::Num, "table mode: first lambda");
    add(c, "--table-to", "table.to", Bind::Num, "table mode: last lambda");
    add(c, "--table-from-fraction", "table.from_fraction", Bind::Num, "table mode: first lambda / Lambda_{N,s}");
    add(c, "--table-to-fraction", "table.to_fraction", Bind::Num, "table mode: last lambda / Lambda_{N,s}");
    add(c, "--table-steps", "table.steps", Bind::Int, "table mode: number of rows, >= 1");
    cmds.push_back(std::move(p));
  }
  {
    auto p = make_command(app, "oracle", "apply the discrete operator to |x|^{-theta} and compare with gamma r^{-theta-2s}",
                          false);
    auto &c = *p;
    problem_flags(c, false, false);
    add(c, "--theta", "theta", Bind::NumOrStr, "exponent in (0, N-2s), or mu, mubar, mid, theta0");
    add(c, "--p", "p", Bind::Num, "gradient exponent for theta0 = (2s-p)/(p-1), 1 < p < 2s");
    grid_flags(c);
    add(c, "--tol", "tolerance", Bind::Num, "relative tolerance (default 0.02)");
    add(c, "--abs-tol", "abs_tolerance", Bind::Num, "absolute tolerance used when the multiplier is below 0.05 (default 1e-3)");
    add(c, "--r-max", "r_max_check", Bind::Num, "check nodes with r <= r_max (default R/10)");
    add(c, "--skip-inner", "skip_inner", Bind::Int, "leave out the innermost nodes (default 0 at theta = mu, else 2)");
    add(c, "--refine", "refine", Bind::Flag, "also run at 2M and report the error ratio");
    cmds.push_back(std::move(p));
  }
  {
    auto p = make_command(app, "solve", "monotone truncation scheme for the Hardy-KPZ problem on B_R", false);
    auto &c = *p;
    problem_flags(c, true, true);
    grid_flags(c);
    source_flags(c);
    barrier_flag(c);
    cmds.push_back(std::move(p));
  }
  {
    auto p = make_command(app, "damped", "scheme for the problem with gradient term |grad u|^p/(1+u)^alpha", false);
    auto &c = *p;
    problem_flags(c, true, false);
    add(c, "--alpha-damp", "alpha_damp", Bind::Num, "damping exponent alpha > 0; a barrier needs alpha > 2s-1");
    add(c, "--c", "c", Bind::Num, "source coefficient c >= 0");
    grid_flags(c);
    source_flags(c);
    barrier_flag(c);
    cmds.push_back(std::move(p));
  }
  {
    auto p = make_command(app, "sweep", "classification map over up to 2 of p, lambda, mu, alpha_damp (config file)",
                          true);
    cmds.push_back(std::move(p));
  }
  {
    auto p = make_command(app, "probe", "bracket the source threshold mu* for p < p+", false);
    auto &c = *p;
    problem_flags(c, true, true);
    grid_flags(c);
    source_flags(c);
    add(c, "--rel-width", "rel_width", Bind::Num, "relative bracket width, in (0, 1) (default 0.05)");
    cmds.push_back(std::move(p));
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (CLI::CallForHelp const &e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const &e) {
    return app.exit(e);
  } catch (CLI::ParseError const &e) {
    app.exit(e);
    return 2;
  }

  try {
    for (auto const &c : cmds) {
      if (c->app->parsed()) { return execute(*c); }
    }
    return 2;
  } catch (OracleFailure const &) {
    std::cerr << "oracle: error above tolerance\n";
    return 1;
  } catch (ConfigError const &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (DomainError const &e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (ConstructionError const &e) {
    std::cerr << "construction error: " << e.what() << '\n';
    return 2;
  } catch (std::exception const &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}

auto run(int argc, char **argv) -> int
{
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) { args.emplace_back(argv[i]); }
  return run(args);
}

} // namespace hk::cli
