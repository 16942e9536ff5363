#pragma once

#include <stdexcept>
#include <string>

namespace rovib {

// Invalid parameters, presets or config files. Raised before any output is
// written; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A trajectory entered the guarded neighbourhood of a coordinate singularity
// (polar axis or the bottom of the action range). Carries the time at which
// the guard tripped. The CLI maps it to exit code 3.
class SingularTrajectoryError : public std::runtime_error {
 public:
  SingularTrajectoryError(const std::string& what, double tau)
      : std::runtime_error(what + " at tau=" + std::to_string(tau)), tau_(tau) {}
  double tau() const { return tau_; }

 private:
  double tau_;
};

// The adaptive step-size controller shrank the step below the resolution of
// the time variable.
class StepSizeUnderflowError : public std::runtime_error {
 public:
  explicit StepSizeUnderflowError(double tau)
      : std::runtime_error("step size underflow at tau=" + std::to_string(tau)), tau_(tau) {}
  double tau() const { return tau_; }

 private:
  double tau_;
};

}  // namespace rovib
