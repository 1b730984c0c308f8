#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace parsetactic {

// Base of every error thrown by the library. The subclasses are grouped by
// the CLI exit code they map to.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input-format errors.
class FormatError : public Error {
 public:
  using Error::Error;
};
class EmptyInput : public FormatError {
 public:
  using FormatError::FormatError;
};
class MalformedTree : public FormatError {
 public:
  using FormatError::FormatError;
};
class NotStripped : public FormatError {
 public:
  using FormatError::FormatError;
};
class Unbalanced : public FormatError {
 public:
  using FormatError::FormatError;
};

// Configuration errors.
class ConfigError : public Error {
 public:
  using Error::Error;
};
class InvalidSegmentCount : public ConfigError {
 public:
  using ConfigError::ConfigError;
};
class InvalidFraction : public ConfigError {
 public:
  using ConfigError::ConfigError;
};
class InvalidThreshold : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Data errors: the input is well-formed but cannot support the request.
class DataError : public Error {
 public:
  using Error::Error;
};
class EmptyCategory : public DataError {
 public:
  using DataError::DataError;
};
class MissingTactic : public DataError {
 public:
  explicit MissingTactic(std::string tactic_name)
      : DataError("no arguments for tactic '" + tactic_name + "'"),
        tactic_name_(std::move(tactic_name)) {}

  const std::string& tactic_name() const noexcept { return tactic_name_; }

 private:
  std::string tactic_name_;
};
class EmptyEvaluation : public DataError {
 public:
  using DataError::DataError;
};
class InvalidSampleSize : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace parsetactic
