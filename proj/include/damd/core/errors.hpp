#pragma once

#include <stdexcept>
#include <string>

namespace damd {

/// A caller broke a documented precondition (mismatched grids, bad sizes).
class ContractError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Input is valid in shape but carries no usable information
/// (zero-mass density, identical samples, data far outside the prior).
class DegenerateInput : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Linear algebra or quadrature failed to produce finite numbers.
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Configuration or file contents rejected during validation.
class ValidationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace damd
