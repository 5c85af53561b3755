#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qtomo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Fock-space truncation cannot represent the requested state.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Operand dimensions or subsystem layouts do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numerical input violates a documented precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Configuration rejected; carries every violation found, not only the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

}  // namespace qtomo
