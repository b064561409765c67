#pragma once

#include <stdexcept>
#include <string>

namespace ousig {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested dense tensor exceeds the storage cap, or sym() above the
// supported level.
struct CapacityError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

// M has an eigenvalue with non-positive real part; the model hypotheses fail.
struct NonHurwitzError : Error {
  using Error::Error;
};

// A quantity that is contractually real/symmetric/finite came out otherwise.
struct NumericalError : Error {
  using Error::Error;
};

struct QuadratureError : Error {
  using Error::Error;
};

// Slope fit has fewer than two usable points above the error floor.
struct DegenerateFitError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace ousig
