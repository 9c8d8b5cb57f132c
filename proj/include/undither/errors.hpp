#pragma once

#include <stdexcept>
#include <string>

namespace undither {

// PGM decode/encode failure; `kind` identifies the condition so callers
// (and tests) can tell them apart without parsing messages.
class CodecError : public std::runtime_error {
 public:
  enum class Kind {
    bad_magic,
    bad_maxval,
    bad_dimensions,
    truncated,
    bad_sample,
  };

  CodecError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Non-finite values where the algorithm requires finite ones.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& message)
      : std::runtime_error(message) {}
};

}  // namespace undither
