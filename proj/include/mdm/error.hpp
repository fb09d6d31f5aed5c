#pragma once

#include <stdexcept>
#include <string>

namespace mdm {

// Category of a failure; the CLI maps each kind to an exit code.
enum class ErrorKind {
  kConfig,     // bad flags or violated preconditions
  kIo,         // unreadable/unwritable files, malformed input data
  kEmpty,      // a pipeline produced no output
  kAlignment,  // predictions and references do not line up
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error ConfigError(const std::string& what) { return {ErrorKind::kConfig, what}; }
inline Error IoError(const std::string& what) { return {ErrorKind::kIo, what}; }

}  // namespace mdm
