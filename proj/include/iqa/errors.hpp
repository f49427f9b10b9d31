#pragma once

#include <stdexcept>
#include <string>

namespace iqa {

// Input data violates an operation precondition (dimension mismatch,
// unsupported channel count, image too small, ...).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// A configuration value is out of its legal range.
class InvalidParameter : public std::invalid_argument {
 public:
  explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

// File or stream problem; message names the offending path.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric failure at evaluation time (singular matrix, log of a
// non-positive value, non-finite intermediate).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// A statistical fit cannot be carried out on the given samples.
class EstimationError : public std::runtime_error {
 public:
  explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

// Correlation is undefined (zero variance in one of the sequences).
class UndefinedCorrelation : public NumericError {
 public:
  explicit UndefinedCorrelation(const std::string& what) : NumericError(what) {}
};

}  // namespace iqa
