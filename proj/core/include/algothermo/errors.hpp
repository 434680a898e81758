#pragma once

#include <stdexcept>
#include <string>

namespace algothermo {

// Failure categories. Each maps to a distinct CLI exit code.
enum class ErrorKind {
  kConfig,      // malformed input, unknown machine, bad flag values
  kResource,    // a configured size/budget limit would be exceeded
  kDomain,      // numeric domain violation (log of nonpositive, division by an interval containing 0)
  kUnsolvable,  // an inverse problem has no solution in the admissible range
};

const char* ToString(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error(ErrorKind::kConfig, message) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& message) : Error(ErrorKind::kResource, message) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error(ErrorKind::kDomain, message) {}
};

class UnsolvableError : public Error {
 public:
  explicit UnsolvableError(const std::string& message)
      : Error(ErrorKind::kUnsolvable, message) {}
};

}  // namespace algothermo
