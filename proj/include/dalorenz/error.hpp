#pragma once

#include <stdexcept>
#include <string>

namespace dalorenz {

enum class ErrorKind {
  OutOfDomain,        // point outside the region where a field is defined
  OnStableManifold,   // section point on L, the orbit converges to the singularity
  Escape,             // orbit left the attracting region without returning
  DegenerateInput,    // singular matrix, degenerate plane, empty data
  NearSingularity,    // orbit passes too close to the equilibrium
  NonPeriodic,        // return residual above tolerance
  StepUnderflow,      // adaptive step size collapsed
  DegenerateCurve,    // curve inside the on-leaf band
  Precondition,       // contract violation (e.g. curve not tangent to the cone)
  Config,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dalorenz
