#pragma once

#include <stdexcept>
#include <string>

namespace hk {

// Argument outside the analytic domain of a formula.
struct DomainError : std::domain_error
{
  using std::domain_error::domain_error;
};

// Malformed grid, controls or config.
struct ConfigError : std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

// Mixing fields/operators built on different grids.
struct UsageError : std::logic_error
{
  using std::logic_error::logic_error;
};

struct AssemblyError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

// A construction whose margin could not be made positive.
struct ConstructionError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

// NaN/Inf inside an iteration. Not the same thing as a BlowUp classification.
struct NumericalDivergence : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct InternalError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

} // namespace hk
