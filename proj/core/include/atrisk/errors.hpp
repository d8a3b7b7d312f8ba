#pragma once

#include <stdexcept>
#include <string>

namespace atrisk {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed cell or date while reading an input file.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Structurally invalid input (missing tcode row, tcode outside {1..7}, ...).
class SchemaError : public Error {
public:
  using Error::Error;
};

/// Value outside the mathematical domain of a transformation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// No common non-missing window across the retained series.
class AlignmentError : public Error {
public:
  using Error::Error;
};

/// Invalid argument value (h <= 0, tau outside (0,1), ...).
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// Operation called before a required resolution step.
class StateError : public Error {
public:
  using Error::Error;
};

/// Numerically singular problem (perfectly collinear regressors, ...).
class SingularityError : public Error {
public:
  using Error::Error;
};

/// Invalid run configuration; maps to CLI exit code 1.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace atrisk
