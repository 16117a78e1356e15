#pragma once

#include <stdexcept>
#include <string>

namespace ionkick {

// Error categories map one-to-one onto CLI exit codes and C-API status values.
enum class ErrorCategory : int {
  config = 2,
  numeric = 3,
  io = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory cat, const std::string& what)
      : std::runtime_error(what), category_(cat) {}
  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& what) : Error(ErrorCategory::numeric, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

}  // namespace ionkick
