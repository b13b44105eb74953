#pragma once

#include <stdexcept>
#include <string>

namespace qnet {

// Root of the library's error hierarchy. Every failure the library can
// diagnose is thrown as a subclass so callers can map errors to exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid construction or mismatched shapes ------------------------------

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class AsymmetricCoupling : public Error {
 public:
  using Error::Error;
};

class NonpositiveSiteEnergy : public Error {
 public:
  using Error::Error;
};

// Propagation failures ----------------------------------------------------

class NonFiniteResult : public Error {
 public:
  using Error::Error;
};

class StepTooLarge : public Error {
 public:
  using Error::Error;
};

class LossNotSupported : public Error {
 public:
  using Error::Error;
};

// Parameter-mapping failures ----------------------------------------------

class AsymmetryBeyondTolerance : public Error {
 public:
  using Error::Error;
};

class InfeasibleInductance : public Error {
 public:
  using Error::Error;
};

class PositiveJUnsupported : public Error {
 public:
  using Error::Error;
};

class ControlOutOfRange : public Error {
 public:
  using Error::Error;
};

// Analysis failures ---------------------------------------------------------

class UndersampledSignal : public Error {
 public:
  using Error::Error;
};

class DisjointTimeRanges : public Error {
 public:
  using Error::Error;
};

class NonpositiveEnergy : public Error {
 public:
  using Error::Error;
};

class AllZero : public Error {
 public:
  using Error::Error;
};

class TimeOutOfRange : public Error {
 public:
  using Error::Error;
};

// Configuration / I/O -------------------------------------------------------

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qnet
