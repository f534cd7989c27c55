#include "fixtures.hpp"

#include "hardykpz/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hk;

namespace {

auto base_plan() -> SweepPlan
{
  SweepPlan plan;
  plan.fixed = fixture::params(0.9, 1e-3);
  plan.source = Source::power(1.5 + fixture::report().mu_lambda, 1.0);
  plan.grid = {1.0, 64, 2.0};
  return plan;
}

auto csv(RegionMap const &m) -> std::string
{
  std::ostringstream os;
  write_region_csv(os, m);
  return os.str();
}

} // namespace

TEST_CASE("axis values hit both ends exactly")
{
  SweepAxis const a{"lambda", 0.1, fixture::Lambda(), 7};
  auto const      v = a.values();
  CHECK(v.size() == 7);
  CHECK(v.front() == 0.1);
  CHECK(v.back() == fixture::Lambda());
  CHECK(SweepAxis{"p", 1.2, 1.3, 1}.values() == std::vector<double>{1.2});
  CHECK(SweepAxis{"p", 1.2, 1.3, 0}.values().empty());
}

TEST_CASE("plan validation")
{
  auto plan = base_plan();
  plan.axes = {{"p", 1.2, 1.3, 0}};
  auto const empty = run_sweep(plan);
  CHECK(empty.cells.empty());

  plan.axes = {{"p", 1.2, 1.3, 3}, {"mu", 1e-4, 1e-3, 3}, {"lambda", 0.1, 0.2, 2}};
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan.axes = {{"q", 1.2, 1.3, 3}};
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan.axes = {{"p", 1.2, 1.3, 3}, {"p", 1.2, 1.3, 3}};
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan.axes = {{"p", 1.2, 1.3, 50}, {"mu", 1e-4, 1e-3, 50}};
  plan.budget = 100;
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan.budget = 10000;
  plan.axes = {{"lambda", 0.1, 1.0, 3}};
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan.axes = {{"p", 0.9, 1.3, 3}};
  CHECK_THROWS_AS(plan.validate(), ConfigError);
}

TEST_CASE("cells at p = p+ are inconclusive; band and overlay")
{
  auto        plan = base_plan();
  auto const &r = fixture::report();
  plan.axes = {{"p", 0.9 * r.p_plus, 1.1 * r.p_plus, 3}};
  auto const map = run_sweep(plan);
  REQUIRE(map.cells.size() == 3);
  CHECK(map.cells[1].status == CellStatus::Inconclusive);
  CHECK(map.cells[0].status == CellStatus::Converged);
  CHECK(map.cells[2].status == CellStatus::BlowUp);
  CHECK(map.band.found);
  CHECK(map.band.contains_p_plus());
  REQUIRE(map.overlay.size() == 1);
  CHECK(map.overlay[0].p_plus == r.p_plus);
  CHECK(map.overlay[0].p_minus == r.p_minus);
  CHECK(map.overlay[0].p_star == r.p_star);
  CHECK(map.overlay[0].two_s == 1.5);
}

TEST_CASE("thread count does not change the output")
{
  auto plan = base_plan();
  plan.axes = {{"mu", 1e-4, 1e-1, 4}, {"p", 1.25, 1.35, 2}};
  SweepOptions one;
  SweepOptions four;
  four.threads = 4;
  auto const a = run_sweep(plan, one);
  auto const b = run_sweep(plan, four);
  CHECK(csv(a) == csv(b));
  CHECK(csv(a).rfind("index,mu,p,status,sup_norm,iters\n", 0) == 0);
}

TEST_CASE("checkpoint resume")
{
  auto plan = base_plan();
  plan.axes = {{"mu", 1e-4, 1e-2, 3}};
  auto const path = std::filesystem::temp_directory_path() / "hardykpz_test_sweep.ckpt";
  std::filesystem::remove(path);
  SweepOptions opts;
  opts.checkpoint = path.string();
  auto const first = run_sweep(plan, opts);
  CHECK(first.computed == 3);
  auto const again = run_sweep(plan, opts);
  CHECK(again.computed == 0);
  CHECK(csv(first) == csv(again));

  // a partial checkpoint: only the missing cells run
  {
    std::ifstream     in(path);
    std::string       line, kept;
    std::getline(in, line);
    kept = line + "\n";
    in.close();
    std::ofstream(path) << kept;
  }
  auto const resumed = run_sweep(plan, opts);
  CHECK(resumed.computed == 2);
  CHECK(csv(resumed) == csv(first));

  auto moved = plan;
  moved.axes = {{"mu", 2e-4, 1e-2, 3}};
  CHECK_THROWS_AS(run_sweep(moved, opts), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("exponent table")
{
  double const L = fixture::Lambda();
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) { grid.push_back(L * k / 20); }
  grid.push_back(1.2 * L);
  grid.push_back(-0.1);
  auto const rows = exponent_table(3, 0.75, grid);
  REQUIRE(rows.size() == grid.size());
  for (std::size_t i = 0; i + 2 < rows.size(); ++i) {
    CHECK(rows[i].valid);
    CHECK(rows[i].chain);
    if (i > 0 && i + 3 < rows.size()) {
      CHECK(rows[i].p_plus < rows[i - 1].p_plus);
      CHECK(rows[i].p_minus > rows[i - 1].p_minus);
    }
  }
  auto const &last = rows[19];
  CHECK(last.p_plus == last.p_minus);
  CHECK(last.p_plus == doctest::Approx((3 + 1.5) / (3 - 1.5 + 2)).epsilon(1e-14));
  CHECK_FALSE(rows[20].valid);
  CHECK_FALSE(rows[21].valid);
  CHECK_FALSE(rows[20].note.empty());

  auto const low = exponent_table(3, 0.75, {1e-12})[0];
  CHECK(std::abs(low.p_plus - 1.5) < 1e-5);
  CHECK(std::abs(low.p_minus - 3 / (3 - 1.5 + 1)) < 1e-5);

  std::ostringstream os;
  write_exponent_table_csv(os, rows);
  CHECK(os.str().rfind("lambda,alpha,mu,mubar,p_minus,p_plus,valid,chain,note\n", 0) == 0);
}
