#pragma once

#include "solver.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hk {

struct GridSpec
{
  double R = 1.0;
  int    M = 200;
  double g = 2.0;
};

// Assembly used by the solver front ends: the singular exponent mu(lambda) is built in.
auto solver_assembly(int N, double s, double lambda) -> AssemblyOptions;

// steps points from..to inclusive; steps = 0 is an empty axis
struct SweepAxis
{
  std::string name; // p, lambda, mu, alpha_damp
  double      from = 0.0;
  double      to = 0.0;
  int         steps = 0;

  auto values() const -> std::vector<double>;
};

struct SweepPlan
{
  std::vector<SweepAxis> axes;
  ProblemParams          fixed;
  double                 alpha_damp = 0.0; // > 0 selects the damped problem
  GridSpec               grid;
  SolverControls         controls;
  Source                 source = Source::power(0.0, 0.0);
  int                    budget = 10000;

  auto cell_count() const -> long;
  void validate() const;
};

enum class CellStatus { Converged, BlowUp, MaxIterations, Inconclusive };

auto to_string(CellStatus s) -> std::string;
auto cell_status_from_string(std::string const &name) -> CellStatus;

struct SweepCell
{
  long                index = 0;
  std::vector<double> coords;
  CellStatus          status = CellStatus::Inconclusive;
  double              sup_norm = 0.0;
  int                 iterations = 0; // total inner iterations
  std::string         note;
};

struct OverlayRow
{
  double lambda = 0;
  double p_minus = 0;
  double p_plus = 0;
  double p_star = 0;
  double two_s = 0;
};

// Converged -> BlowUp transition along a 1D p axis.
struct TransitionBand
{
  bool   found = false;
  double last_converged = 0.0;
  double first_blowup = 0.0;
  double p_plus = 0.0;

  auto width() const -> double { return first_blowup - last_converged; }
  auto contains_p_plus() const -> bool { return found && last_converged <= p_plus && p_plus <= first_blowup; }
};

struct RegionMap
{
  std::vector<std::string> axis_names;
  std::vector<SweepCell>   cells;
  std::vector<OverlayRow>  overlay;
  TransitionBand           band;
  long                     computed = 0; // cells run in this call, the rest came from the checkpoint
};

struct SweepOptions
{
  int         threads = 1;
  std::string checkpoint; // empty: no checkpointing
  std::function<void(SweepCell const &)> on_cell;
};

auto run_sweep(SweepPlan const &plan, SweepOptions const &opts = {}) -> RegionMap;

void write_region_csv(std::ostream &os, RegionMap const &map);

struct ExponentRow
{
  double      lambda = 0;
  bool        valid = false;
  bool        chain = false;
  double      alpha = 0;
  double      mu = 0;
  double      mubar = 0;
  double      p_minus = 0;
  double      p_plus = 0;
  std::string note;
};

auto exponent_table(int N, double s, std::vector<double> const &lambda_grid) -> std::vector<ExponentRow>;
void write_exponent_table_csv(std::ostream &os, std::vector<ExponentRow> const &rows);

} // namespace hk
