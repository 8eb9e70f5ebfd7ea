#pragma once

#include <stdexcept>
#include <string>

namespace ptfw {

/// Bad user input: malformed config, out-of-domain parameters.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure could not deliver its contract
/// (singular controller, root finder or eigen solver did not converge).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NearSingularController : public NumericalError {
 public:
  NearSingularController(double det, double scale, double t)
      : NumericalError("on-site controller near singular at t=" + std::to_string(t) +
                       " (det=" + std::to_string(det) + ", scale=" + std::to_string(scale) + ")"),
        det_(det),
        time_(t) {}
  double det() const { return det_; }
  double time() const { return time_; }

 private:
  double det_;
  double time_;
};

class BrokenPhase : public InputError {
 public:
  using InputError::InputError;
};

class InitialConditionViolated : public InputError {
 public:
  using InputError::InputError;
};

class NoEmbedding : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OutOfRange : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ptfw
