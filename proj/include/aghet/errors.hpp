#pragma once

#include <stdexcept>
#include <string>

namespace aghet {

/// Out-of-range or inconsistent model parameter.
class ParameterError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// A KPI could not be computed (e.g. percentile of an empty sample).
class EvaluationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unknown configuration input.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A requested search exceeds the configured evaluation budget.
class BudgetError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace aghet
