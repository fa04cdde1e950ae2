#pragma once

#include <stdexcept>
#include <string>

namespace rsf {

// Root of every exception thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad inputs: malformed matrices, inconsistent model data, config mistakes.
struct ValidationError : Error {
  using Error::Error;
};

// Failures of the numerical machinery on otherwise well-formed inputs.
struct NumericError : Error {
  using Error::Error;
};

struct NonSquare : ValidationError {
  using ValidationError::ValidationError;
};
struct NegativeOffDiagonal : ValidationError {
  using ValidationError::ValidationError;
};
struct RowSumNonzero : ValidationError {
  using ValidationError::ValidationError;
};
struct MeasureInequivalence : ValidationError {
  using ValidationError::ValidationError;
};
struct RegimeOutOfRange : ValidationError {
  using ValidationError::ValidationError;
};
struct TimeBeyondMaturity : ValidationError {
  using ValidationError::ValidationError;
};
struct LengthNotPowerOfTwo : ValidationError {
  using ValidationError::ValidationError;
};
struct GridTooCoarse : ValidationError {
  using ValidationError::ValidationError;
};
struct StepTooLarge : ValidationError {
  using ValidationError::ValidationError;
};
struct KappasDiffer : ValidationError {
  using ValidationError::ValidationError;
};
struct DegenerateRates : ValidationError {
  using ValidationError::ValidationError;
};
struct ConfigInvalid : ValidationError {
  using ValidationError::ValidationError;
};

struct NonFinite : NumericError {
  using NumericError::NumericError;
};
struct ZeroPivot : NumericError {
  using NumericError::NumericError;
};
struct UnstableParameters : NumericError {
  using NumericError::NumericError;
};
struct OutOfGrid : NumericError {
  using NumericError::NumericError;
};
struct SingularGamma : NumericError {
  using NumericError::NumericError;
};

}  // namespace rsf
