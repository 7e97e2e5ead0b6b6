#pragma once

#include <stdexcept>
#include <string>

namespace texlab {

class TexlabError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a product space or input would exceed the desk-scale limit.
class DimensionError : public TexlabError {
 public:
  using TexlabError::TexlabError;
};

// Input failed a structural invariant. `field` names what was wrong so that
// CLI users can fix the offending entry.
class ValidationError : public TexlabError {
 public:
  ValidationError(std::string field, const std::string& what)
      : TexlabError(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ConvergenceError : public TexlabError {
 public:
  using TexlabError::TexlabError;
};

// The identification protocol could not reach a unique answer.
class IdentificationError : public TexlabError {
 public:
  using TexlabError::TexlabError;
};

}  // namespace texlab
