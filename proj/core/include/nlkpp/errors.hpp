#pragma once

#include <stdexcept>
#include <string>

namespace nlkpp {

// Scenario / sweep files that fail to parse or validate.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A mathematical hypothesis of the model was violated by the inputs
// (initial data out of [0,1], non-monotone kernel table, increasing phi, ...).
class HypothesisError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Requested fit/diagnostic cannot be produced from the available records.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Blow-up, NaN or positivity failure during time stepping.
// Carries the time and location at which the check tripped.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& what, double t, double x)
      : std::runtime_error(what + " at t=" + std::to_string(t) +
                           ", x=" + std::to_string(x)),
        time_(t),
        location_(x) {}

  double time() const { return time_; }
  double location() const { return location_; }

private:
  double time_;
  double location_;
};

}  // namespace nlkpp
