#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace glep {

// Bad input: caller-side contract violation (CLI exit code 2).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure during a computation on valid input (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BadBracket : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonConvergence : public NumericalError {
public:
    NonConvergence(const std::string& what, double lo, double hi)
        : NumericalError(what), lo(lo), hi(hi) {}
    double lo;
    double hi;
};

// phi endpoint signs disagree with the bracket theory beyond rounding slack.
class BracketInconsistency : public NumericalError {
public:
    BracketInconsistency(const std::string& what, double epsilon, double c_low,
                         double c_high, double phi_low, double phi_high)
        : NumericalError(what),
          epsilon(epsilon),
          c_low(c_low),
          c_high(c_high),
          phi_low(phi_low),
          phi_high(phi_high) {}
    double epsilon;
    double c_low;
    double c_high;
    double phi_low;
    double phi_high;
};

class GroupFailure : public NumericalError {
public:
    GroupFailure(std::size_t group, const std::string& what)
        : NumericalError("group " + std::to_string(group) + ": " + what), group(group) {}
    std::size_t group;
};

class Divergence : public NumericalError {
public:
    Divergence(int iteration, const std::string& what)
        : NumericalError("iteration " + std::to_string(iteration) + ": " + what),
          iteration(iteration) {}
    int iteration;
};

class PathFailure : public NumericalError {
public:
    PathFailure(std::size_t index, const std::string& what)
        : NumericalError("path point " + std::to_string(index) + ": " + what), index(index) {}
    std::size_t index;
};

class OracleFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace glep
