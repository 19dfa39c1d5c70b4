#pragma once

#include <stdexcept>
#include <string>

namespace hesslab {

// Input failed a precondition (bad dimension, index, degree, parameter).
class invalid_input : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Eigenvalue vector left the operator's cone (or was never in it).
class not_admissible : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Solver failures, reported distinctly so callers can react per kind.
class solve_error : public std::runtime_error {
public:
  enum class Kind { MaxIterExceeded, LineSearchStagnation, LinearSolveFailure };
  solve_error(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

}  // namespace hesslab
