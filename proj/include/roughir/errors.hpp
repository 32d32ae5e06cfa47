#ifndef ROUGHIR_ERRORS_HPP
#define ROUGHIR_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roughir {

/// Argument outside the mathematical domain of an operation (H outside (0,1), alpha outside (0,2], ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Index outside the valid range, or a statistic outside the range of a limit function.
///
/// When raised by an inversion, `boundary()` holds the parameter-space endpoint nearest to the
/// offending value and `[lower(), upper()]` the attainable statistic range, so callers can clamp.
class range_error : public std::range_error {
 public:
  explicit range_error(const std::string& what) : std::range_error(what) {}
  range_error(const std::string& what, double boundary, double lower, double upper)
      : std::range_error(what), boundary_(boundary), lower_(lower), upper_(upper), has_bounds_(true) {}

  bool has_bounds() const noexcept { return has_bounds_; }
  double boundary() const noexcept { return boundary_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double boundary_ = 0.0;
  double lower_ = 0.0;
  double upper_ = 0.0;
  bool has_bounds_ = false;
};

/// Input too short for the requested statistic or increment order.
class size_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Malformed text input. `line()` is 1-based.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A simulator produced a non-finite value. `step()` is the offending internal step.
class simulation_error : public std::runtime_error {
 public:
  simulation_error(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class factorization_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lookup outside the grid of a tabulated function (extrapolation is never performed).
class interpolation_error : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Spectral discretisation too coarse for the requested grid.
class resolution_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace roughir

#endif  // ROUGHIR_ERRORS_HPP
