#pragma once

#include <stdexcept>
#include <string>

namespace dnp2d {

// Integration or iteration failure; `location` is the independent variable
// (y, t, ...) at which the solver gave up.
class solver_error : public std::runtime_error {
 public:
  solver_error(const std::string& what, double location)
      : std::runtime_error(what), location_(location) {}
  double location() const noexcept { return location_; }

 private:
  double location_;
};

// A single time step violated a structural invariant; the caller is expected
// to halve dt and retry.
class step_rejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dnp2d
