#pragma once

#include <stdexcept>
#include <string>

namespace fmetric {

enum class ErrorCode {
  invalid_argument = 1,
  out_of_range = 2,
  inconsistent_metric = 3,
  io = 4,
  invalid_spec = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

class IndexOutOfRange : public Error {
 public:
  explicit IndexOutOfRange(const std::string& what) : Error(ErrorCode::out_of_range, what) {}
};

// A revealed distance contradicts the bounds derived from earlier reveals.
class InconsistentMetric : public Error {
 public:
  explicit InconsistentMetric(const std::string& what)
      : Error(ErrorCode::inconsistent_metric, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

class SpecError : public Error {
 public:
  explicit SpecError(const std::string& what) : Error(ErrorCode::invalid_spec, what) {}
};

}  // namespace fmetric
