#pragma once

#include "construct.hpp"
#include "solver.hpp"
#include "sweep.hpp"

#include <json.hpp>

#include <set>
#include <string>

namespace hk::io {

using json = nlohmann::json;

auto sha256_hex(std::string const &bytes) -> std::string;
// Indented JSON with 17-digit doubles; keys are sorted, so the text (and hash) does not
// depend on input key order.
auto canonical_text(json const &j) -> std::string;
auto config_hash(json const &j) -> std::string;

// Typed access to a JSON object with dotted key paths in error messages; unknown keys are errors.
class Section
{
public:
  Section(json const &j, std::string path);

  auto has(std::string const &key) const -> bool;
  auto number(std::string const &key) const -> double;
  auto number(std::string const &key, double fallback) const -> double;
  auto integer(std::string const &key) const -> long;
  auto integer(std::string const &key, long fallback) const -> long;
  auto boolean(std::string const &key, bool fallback) const -> bool;
  auto string(std::string const &key) const -> std::string;
  auto string(std::string const &key, std::string const &fallback) const -> std::string;
  auto child(std::string const &key) const -> Section;
  auto raw(std::string const &key) const -> json const &;
  auto key_path(std::string const &key) const -> std::string;
  auto path() const -> std::string const & { return path_; }
  // throws on any key not read so far
  void finish() const;

private:
  json const                    &j_;
  std::string                    path_;
  mutable std::set<std::string> used_;
};

// Readers resolve convenience keys (lambda_fraction, p_fraction, "2s+mu") into plain numbers;
// the matching writers emit only the resolved form.
auto read_problem(Section const &sec, bool need_p, bool need_mu) -> ProblemParams;
auto write_problem(ProblemParams const &p, bool with_p, bool with_mu) -> json;
auto read_grid(Section const &sec) -> GridSpec;
auto write_grid(GridSpec const &g) -> json;
auto read_controls(Section const &sec) -> SolverControls;
auto write_controls(SolverControls const &c) -> json;
auto read_source(Section const &sec, ProblemParams const &p) -> Source;
auto write_source(Source const &f) -> json;
auto read_sweep_plan(Section const &sec) -> SweepPlan;
auto write_sweep_plan(SweepPlan const &plan) -> json;

auto to_json(ExponentReport const &r) -> json;
auto to_json(SupersolutionSpec const &w) -> json;
auto spec_from_json(json const &j) -> SupersolutionSpec;
auto to_json(OracleResult const &r) -> json;
auto to_json(SolverReport const &r) -> json; // without the field
auto to_json(ProbeResult const &r) -> json;
auto to_json(RegionMap const &m) -> json;  // sidecar: overlay, band, counts

// doubles with 17 significant digits
auto number_text(double x) -> std::string;

} // namespace hk::io
