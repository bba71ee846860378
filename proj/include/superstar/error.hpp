#pragma once

#include <stdexcept>
#include <string>

namespace superstar {

class Error : public std::runtime_error {
 public:
  enum class Kind {
    BackendMismatch,
    Aliasing,
    Quadrature,
    NotIntegrable,
    NonHomogeneous,
    Precondition,
    InvariantViolation,
    Unsupported,
    Io,
  };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace superstar
