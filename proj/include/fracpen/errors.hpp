#pragma once

#include <stdexcept>
#include <string>

namespace fracpen {

/// A parameter lies outside its admissible domain (alpha, eta, semi-axes, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Vector or matrix dimensions do not match.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A dense materialization was requested beyond the configured cap.
class SizeCapError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A resolvent denominator vanished (shift equals an eigenvalue).
class SingularOperatorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// NaN or Inf appeared in an operator output during an iterative solve.
class NumericBreakdownError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fracpen
