#ifndef LEGPRO_ERRORS_HPP
#define LEGPRO_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace legpro {

/// Malformed or inconsistent input (bad file contents, wrong dimensions,
/// algebra outside csp(V)).
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A sampled point is unusable for the requested computation; pick another.
class ResampleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Tangent frame of rank below n + 1.
class NonImmersiveError : public ResampleError {
public:
  using ResampleError::ResampleError;
};

/// Osculating flag dimensions differ from the generic ones.
class NonGeneralPointError : public ResampleError {
public:
  using ResampleError::ResampleError;
};

/// The stabilizer sampler did not settle within its batch budget.
class UnstableError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Error raised inside a pipeline stage, prefixed with the stage name.
class StageError : public std::runtime_error {
public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

}  // namespace legpro

#endif  // LEGPRO_ERRORS_HPP
