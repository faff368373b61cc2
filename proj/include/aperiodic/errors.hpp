#ifndef APERIODIC_ERRORS_HPP
#define APERIODIC_ERRORS_HPP

#include <limits>
#include <stdexcept>
#include <string>

namespace aperiodic {

// Malformed or non-finite input.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Index or window outside the available data.
struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Request exceeding a size or memory cap.
struct SizeError : std::length_error {
  using std::length_error::length_error;
};

// Energy too close to the spectrum of the restricted operator.
// `distance` carries the measured distance when known, NaN otherwise.
struct NearSingularError : std::runtime_error {
  explicit NearSingularError(const std::string& what,
                             double dist = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), distance(dist) {}
  double distance;
};

}  // namespace aperiodic

#endif
