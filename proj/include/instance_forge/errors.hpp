#pragma once

#include <stdexcept>
#include <string>

namespace instance_forge {

/// Input violates a documented precondition (bad sizes, out-of-range values).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed file or document. The message names the offending line or field.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The exact solver was asked for an instance larger than it supports.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An optimal-tour oracle failed or returned a value inconsistent with 2-OPT.
class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bootstrap could not find a feasible instance within its evaluation budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace instance_forge
