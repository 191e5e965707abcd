#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace gravgas {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NegativeDensity : Error {
  using Error::Error;
};

struct NonIntegrable : Error {
  using Error::Error;
};

struct OutOfRange : Error {
  using Error::Error;
};

// Thrown when a requested time is at or past a density singularity.
// event_time carries the collapse time when it is known, NaN otherwise.
struct CollapseSingularity : Error {
  double event_time;
  explicit CollapseSingularity(const std::string& msg,
                               double when = std::numeric_limits<double>::quiet_NaN())
      : Error(msg), event_time(when) {}
};

struct ShellCrossing : Error {
  double event_time;
  explicit ShellCrossing(const std::string& msg,
                         double when = std::numeric_limits<double>::quiet_NaN())
      : Error(msg), event_time(when) {}
};

struct SheetCrossing : Error {
  double event_time;
  explicit SheetCrossing(const std::string& msg,
                         double when = std::numeric_limits<double>::quiet_NaN())
      : Error(msg), event_time(when) {}
};

struct NoBracket : Error {
  using Error::Error;
};

struct NegativeRadicand : Error {
  using Error::Error;
};

struct DerivativeUnavailable : Error {
  using Error::Error;
};

struct StepFailure : Error {
  using Error::Error;
};

struct GridMismatch : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace gravgas
