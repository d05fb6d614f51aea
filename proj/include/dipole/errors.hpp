#pragma once

#include <stdexcept>
#include <string>

namespace dipole {

// Invalid parameters or incompatible combinations (basis/model pairing, bad flags).
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A grid that cannot hold the wavefunction tail; carries the half-width that would.
class grid_too_small_error : public config_error {
 public:
  grid_too_small_error(const std::string& what, double required_half_width)
      : config_error(what), required_half_width_(required_half_width) {}
  double required_half_width() const noexcept { return required_half_width_; }

 private:
  double required_half_width_;
};

// An iterative search or basis expansion did not settle.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Results that violate a structural property they must satisfy (pairing, positivity).
class numerical_quality_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dipole
