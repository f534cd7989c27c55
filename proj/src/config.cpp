#include "hardykpz/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace hk::io {

auto sha256_hex(std::string const &bytes) -> std::string
{
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int  len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw InternalError("sha256 failed");
  }
  std::string out;
  char        buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

namespace {

// Same layout as json::dump(2) but every double carries 17 significant digits.
void emit(std::string &out, json const &j, int depth)
{
  auto const pad = [&](int d) { out.append(2 * static_cast<std::size_t>(d), ' '); };
  switch (j.type()) {
  case json::value_t::object: {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto const &[k, v] : j.items()) {
      if (!first) { out += ",\n"; }
      first = false;
      pad(depth + 1);
      out += json(k).dump() + ": ";
      emit(out, v, depth + 1);
    }
    out += "\n";
    pad(depth);
    out += "}";
    return;
  }
  case json::value_t::array: {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) { out += ",\n"; }
      pad(depth + 1);
      emit(out, j[i], depth + 1);
    }
    out += "\n";
    pad(depth);
    out += "]";
    return;
  }
  case json::value_t::number_float: {
    double const x = j.get<double>();
    if (!std::isfinite(x)) {
      out += "null";
      return;
    }
    std::string t = number_text(x);
    if (t.find_first_of(".e") == std::string::npos) { t += ".0"; }
    out += t;
    return;
  }
  default: out += j.dump();
  }
}

} // namespace

auto canonical_text(json const &j) -> std::string
{
  std::string out;
  emit(out, j, 0);
  return out + "\n";
}

// hash of the exact bytes written to config.json
auto config_hash(json const &j) -> std::string { return sha256_hex(canonical_text(j)); }

auto number_text(double x) -> std::string
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Section::Section(json const &j, std::string path) : j_(j), path_(std::move(path))
{
  if (!j_.is_object()) { throw ConfigError((path_.empty() ? std::string("config") : path_) + ": expected an object"); }
}

auto Section::key_path(std::string const &key) const -> std::string { return path_.empty() ? key : path_ + "." + key; }

auto Section::has(std::string const &key) const -> bool { return j_.contains(key); }

auto Section::raw(std::string const &key) const -> json const &
{
  if (!j_.contains(key)) { throw ConfigError(key_path(key) + ": missing"); }
  used_.insert(key);
  return j_.at(key);
}

auto Section::number(std::string const &key) const -> double
{
  auto const &v = raw(key);
  if (!v.is_number()) { throw ConfigError(key_path(key) + ": expected a number"); }
  double const x = v.get<double>();
  if (!std::isfinite(x)) { throw ConfigError(key_path(key) + ": must be finite"); }
  return x;
}

auto Section::number(std::string const &key, double fallback) const -> double
{
  return has(key) ? number(key) : fallback;
}

auto Section::integer(std::string const &key) const -> long
{
  auto const &v = raw(key);
  if (v.is_number_integer()) { return v.get<long>(); }
  if (v.is_number_float()) {
    double const x = v.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 1e15) { return static_cast<long>(x); }
  }
  throw ConfigError(key_path(key) + ": expected an integer");
}

auto Section::integer(std::string const &key, long fallback) const -> long
{
  return has(key) ? integer(key) : fallback;
}

auto Section::boolean(std::string const &key, bool fallback) const -> bool
{
  if (!has(key)) { return fallback; }
  auto const &v = raw(key);
  if (!v.is_boolean()) { throw ConfigError(key_path(key) + ": expected true or false"); }
  return v.get<bool>();
}

auto Section::string(std::string const &key) const -> std::string
{
  auto const &v = raw(key);
  if (!v.is_string()) { throw ConfigError(key_path(key) + ": expected a string"); }
  return v.get<std::string>();
}

auto Section::string(std::string const &key, std::string const &fallback) const -> std::string
{
  return has(key) ? string(key) : fallback;
}

auto Section::child(std::string const &key) const -> Section { return Section(raw(key), key_path(key)); }

void Section::finish() const
{
  for (auto it = j_.begin(); it != j_.end(); ++it) {
    if (!used_.count(it.key())) { throw ConfigError(key_path(it.key()) + ": unknown key"); }
  }
}

namespace {

auto int_in(Section const &sec, std::string const &key, long v, long lo, long hi) -> int
{
  if (v < lo || v > hi) {
    throw ConfigError(sec.key_path(key) + ": must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

// lambda or lambda_fraction (of Λ), never both
auto read_lambda(Section const &sec, int N, double s) -> double
{
  bool const abs = sec.has("lambda");
  bool const frac = sec.has("lambda_fraction");
  if (abs == frac) { throw ConfigError(sec.key_path("lambda") + ": give exactly one of lambda, lambda_fraction"); }
  if (abs) { return sec.number("lambda"); }
  return sec.number("lambda_fraction") * hardy_constant(N, s);
}

} // namespace

auto read_problem(Section const &sec, bool need_p, bool need_mu) -> ProblemParams
{
  ProblemParams p;
  p.N = int_in(sec, "N", sec.integer("N"), 1, 1000);
  p.s = sec.number("s");
  try {
    p.lambda = read_lambda(sec, p.N, p.s);
  } catch (DomainError const &e) {
    throw ConfigError(sec.key_path("s") + ": " + e.what());
  }
  if (need_p) {
    bool const abs = sec.has("p");
    bool const frac = sec.has("p_fraction");
    if (abs == frac) { throw ConfigError(sec.key_path("p") + ": give exactly one of p, p_fraction"); }
    if (abs) {
      p.p = sec.number("p");
    } else {
      double const f = sec.number("p_fraction");
      try {
        p.p = f * exponent_report(p.N, p.s, p.lambda).p_plus;
      } catch (DomainError const &e) {
        throw ConfigError(sec.key_path("lambda") + ": " + e.what());
      }
    }
  }
  if (need_mu) { p.mu = sec.number("mu", 0.0); }
  sec.finish();
  return p;
}

auto write_problem(ProblemParams const &p, bool with_p, bool with_mu) -> json
{
  json j;
  j["N"] = p.N;
  j["s"] = p.s;
  j["lambda"] = p.lambda;
  if (with_p) { j["p"] = p.p; }
  if (with_mu) { j["mu"] = p.mu; }
  return j;
}

auto read_grid(Section const &sec) -> GridSpec
{
  GridSpec g;
  g.R = sec.number("R", g.R);
  g.M = int_in(sec, "M", sec.integer("M", g.M), 16, 4000);
  g.g = sec.number("g", g.g);
  if (!(g.R > 0)) { throw ConfigError(sec.key_path("R") + ": must be positive"); }
  if (!(g.g >= 1)) { throw ConfigError(sec.key_path("g") + ": must be >= 1"); }
  sec.finish();
  return g;
}

auto write_grid(GridSpec const &g) -> json { return {{"R", g.R}, {"M", g.M}, {"g", g.g}}; }

auto read_controls(Section const &sec) -> SolverControls
{
  SolverControls c;
  if (sec.has("n_schedule")) {
    auto const &v = sec.raw("n_schedule");
    if (!v.is_array()) { throw ConfigError(sec.key_path("n_schedule") + ": expected an array of numbers"); }
    c.n_schedule.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        throw ConfigError(sec.key_path("n_schedule") + "[" + std::to_string(i) + "]: expected a number");
      }
      c.n_schedule.push_back(v[i].get<double>());
    }
  }
  c.picard_tol = sec.number("picard_tol", c.picard_tol);
  c.picard_max = int_in(sec, "picard_max", sec.integer("picard_max", c.picard_max), 1, 1000000);
  c.blowup_factor = sec.number("blowup_factor", c.blowup_factor);
  c.damping = sec.number("damping", c.damping);
  c.growth_window = int_in(sec, "growth_window", sec.integer("growth_window", c.growth_window), 2, 1000);
  sec.finish();
  try {
    c.validate();
  } catch (ConfigError const &e) {
    throw ConfigError(sec.path() + ": " + e.what());
  }
  return c;
}

auto write_controls(SolverControls const &c) -> json
{
  return {{"n_schedule", c.n_schedule}, {"picard_tol", c.picard_tol},       {"picard_max", c.picard_max},
          {"blowup_factor", c.blowup_factor}, {"damping", c.damping}, {"growth_window", c.growth_window}};
}

auto read_source(Section const &sec, ProblemParams const &p) -> Source
{
  double     exponent = 0;
  json const fallback = "2s+mu";
  auto const &e = sec.has("exponent") ? sec.raw("exponent") : fallback;
  if (e.is_string()) {
    auto const name = e.get<std::string>();
    if (name != "2s+mu") { throw ConfigError(sec.key_path("exponent") + ": a number or \"2s+mu\""); }
    exponent = 2 * p.s + exponent_report(p.N, p.s, p.lambda).mu_lambda;
  } else {
    exponent = sec.number("exponent");
  }
  double const constant = sec.number("constant", 1.0);
  if (!(constant >= 0)) { throw ConfigError(sec.key_path("constant") + ": must be >= 0"); }
  sec.finish();
  return Source::power(exponent, constant);
}

auto write_source(Source const &f) -> json
{
  if (!f.analytic) { throw UsageError("only analytic sources are serialized"); }
  return {{"exponent", f.exponent}, {"constant", f.constant}};
}

auto read_sweep_plan(Section const &sec) -> SweepPlan
{
  SweepPlan plan;
  // problem needs p/mu unless they are axes; read axes first to know
  auto const &axes = sec.raw("axes");
  if (!axes.is_array()) { throw ConfigError(sec.key_path("axes") + ": expected an array"); }
  auto const pr = sec.child("problem");
  plan.fixed.N = int_in(pr, "N", pr.integer("N"), 1, 1000);
  plan.fixed.s = pr.number("s");
  bool const lambda_axis = std::any_of(axes.begin(), axes.end(), [](json const &a) {
    return a.is_object() && a.contains("name") && a["name"] == "lambda";
  });
  if (!lambda_axis || pr.has("lambda") || pr.has("lambda_fraction")) {
    try {
      plan.fixed.lambda = read_lambda(pr, plan.fixed.N, plan.fixed.s);
    } catch (DomainError const &e) {
      throw ConfigError(pr.key_path("s") + ": " + e.what());
    }
  }
  double p_plus = std::numeric_limits<double>::quiet_NaN();
  try {
    if (plan.fixed.lambda > 0) { p_plus = exponent_report(plan.fixed.N, plan.fixed.s, plan.fixed.lambda).p_plus; }
  } catch (DomainError const &e) {
    throw ConfigError(pr.key_path("lambda") + ": " + e.what());
  }
  if (pr.has("p_fraction")) {
    if (!std::isfinite(p_plus)) { throw ConfigError(pr.key_path("p_fraction") + ": needs a fixed lambda"); }
    plan.fixed.p = pr.number("p_fraction") * p_plus;
  } else {
    plan.fixed.p = pr.number("p", plan.fixed.p);
  }
  plan.fixed.mu = pr.number("mu", 0.0);
  pr.finish();

  for (std::size_t i = 0; i < axes.size(); ++i) {
    Section const a(axes[i], sec.key_path("axes") + "[" + std::to_string(i) + "]");
    SweepAxis     ax;
    ax.name = a.string("name");
    ax.steps = int_in(a, "steps", a.integer("steps"), 0, 1000000);
    if (a.has("from_fraction") || a.has("to_fraction")) {
      if (ax.name != "p") { throw ConfigError(a.key_path("from_fraction") + ": fractions of p+ apply to p only"); }
      if (!std::isfinite(p_plus)) { throw ConfigError(a.key_path("from_fraction") + ": needs a fixed lambda"); }
      ax.from = a.number("from_fraction") * p_plus;
      ax.to = a.number("to_fraction") * p_plus;
    } else {
      ax.from = a.number("from");
      ax.to = a.number("to");
    }
    a.finish();
    plan.axes.push_back(ax);
  }
  plan.alpha_damp = sec.number("alpha_damp", 0.0);
  if (sec.has("grid")) { plan.grid = read_grid(sec.child("grid")); }
  if (sec.has("controls")) { plan.controls = read_controls(sec.child("controls")); }
  if (sec.has("source")) {
    ProblemParams ref = plan.fixed;
    if (ref.lambda == 0) { ref.lambda = 0.5 * hardy_constant(ref.N, ref.s); }
    plan.source = read_source(sec.child("source"), ref);
  }
  plan.budget = int_in(sec, "budget", sec.integer("budget", plan.budget), 0, 100000000);
  return plan;
}

auto write_sweep_plan(SweepPlan const &plan) -> json
{
  json j;
  j["problem"] = write_problem(plan.fixed, true, true);
  json axes = json::array();
  for (auto const &a : plan.axes) { axes.push_back({{"name", a.name}, {"from", a.from}, {"to", a.to}, {"steps", a.steps}}); }
  j["axes"] = axes;
  j["alpha_damp"] = plan.alpha_damp;
  j["grid"] = write_grid(plan.grid);
  j["controls"] = write_controls(plan.controls);
  j["source"] = write_source(plan.source);
  j["budget"] = plan.budget;
  return j;
}

auto to_json(ExponentReport const &r) -> json
{
  return {{"N", r.N},
          {"s", r.s},
          {"lambda", r.lambda},
          {"Lambda_Ns", r.Lambda_Ns},
          {"a_Ns", r.a_Ns},
          {"alpha_lambda", r.alpha_lambda},
          {"mu_lambda", r.mu_lambda},
          {"mubar_lambda", r.mubar_lambda},
          {"p_star", r.p_star},
          {"p_minus", r.p_minus},
          {"p_mid", r.p_mid()},
          {"p_plus", r.p_plus},
          {"two_s", 2 * r.s},
          {"chain_holds", r.chain_holds()}};
}

auto to_json(SupersolutionSpec const &w) -> json
{
  json j = {{"kind", to_string(w.kind)},
            {"theta", w.theta},
            {"A", w.A},
            {"window", {w.window_lo, w.window_hi}},
            {"R", w.R},
            {"margin", w.margin},
            {"gamma_minus_lambda", w.gamma_minus_lambda}};
  if (w.kind == SupersolutionKind::Damped) {
    j["alpha_damp"] = w.alpha_damp;
    j["c_star"] = w.c_star;
  }
  return j;
}

auto spec_from_json(json const &j) -> SupersolutionSpec
{
  Section const     sec(j, "supersolution");
  SupersolutionSpec w;
  w.kind = supersolution_kind_from_string(sec.string("kind"));
  w.theta = sec.number("theta");
  w.A = sec.number("A");
  auto const &win = sec.raw("window");
  if (!win.is_array() || win.size() != 2 || !win[0].is_number() || !win[1].is_number()) {
    throw ConfigError(sec.key_path("window") + ": expected [lo, hi]");
  }
  w.window_lo = win[0].get<double>();
  w.window_hi = win[1].get<double>();
  w.R = sec.number("R", 1.0);
  w.margin = sec.number("margin", 0.0);
  w.gamma_minus_lambda = sec.number("gamma_minus_lambda", 0.0);
  w.alpha_damp = sec.number("alpha_damp", 0.0);
  w.c_star = sec.number("c_star", 0.0);
  sec.finish();
  return w;
}

auto to_json(OracleResult const &r) -> json
{
  return {{"theta", r.theta},
          {"multiplier", r.multiplier},
          {"max_rel_error", r.max_rel_error},
          {"max_abs_error", r.max_abs_error},
          {"criterion", r.absolute ? "absolute" : "relative"},
          {"error", r.error()},
          {"first_node", r.first_node},
          {"nodes_checked", r.nodes_checked}};
}

auto to_json(SolverReport const &r) -> json
{
  return {{"status", to_string(r.status)},
          {"reason", r.reason},
          {"outer_steps", r.trace.size()},
          {"final_n", r.trace.empty() ? 0.0 : r.trace.back().n},
          {"sup_norm", r.trace.empty() ? 0.0 : r.trace.back().sup_norm},
          {"monotonicity_violations", r.monotonicity_violations},
          {"barrier_violations", r.barrier_violations},
          {"barrier_sup", r.barrier_sup},
          {"fixed_point_residual", r.fixed_point_residual},
          {"gradient_integral", r.gradient_integral},
          {"hardy_integral", r.hardy_integral}};
}

auto to_json(ProbeResult const &r) -> json
{
  json j = {{"conclusive", r.conclusive}, {"solves", r.solves}, {"reason", r.reason}};
  if (r.conclusive) {
    j["mu_lo"] = r.mu_lo;
    j["mu_hi"] = r.mu_hi;
    j["mu_estimate"] = r.estimate();
  }
  return j;
}

auto to_json(RegionMap const &m) -> json
{
  json counts = json::object();
  for (auto c : {CellStatus::Converged, CellStatus::BlowUp, CellStatus::MaxIterations, CellStatus::Inconclusive}) {
    counts[to_string(c)] = 0;
  }
  for (auto const &c : m.cells) { counts[to_string(c.status)] = counts[to_string(c.status)].get<int>() + 1; }
  json overlay = json::array();
  for (auto const &o : m.overlay) {
    overlay.push_back(
        {{"lambda", o.lambda}, {"p_minus", o.p_minus}, {"p_plus", o.p_plus}, {"p_star", o.p_star}, {"two_s", o.two_s}});
  }
  json j = {{"axes", m.axis_names}, {"cells", m.cells.size()}, {"counts", counts}, {"overlay", overlay}};
  if (m.band.found) {
    j["band"] = {{"last_converged", m.band.last_converged},
                 {"first_blowup", m.band.first_blowup},
                 {"width", m.band.width()},
                 {"p_plus", m.band.p_plus},
                 {"contains_p_plus", m.band.contains_p_plus()}};
  } else {
    j["band"] = nullptr;
  }
  return j;
}

} // namespace hk::io
