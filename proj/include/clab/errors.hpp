#pragma once

#include <stdexcept>
#include <string>

namespace clab {

// Base for all recoverable numerical-lab errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridMismatchError : Error { using Error::Error; };
struct GridTooCoarseError : Error { using Error::Error; };
struct SupportClippedError : Error { using Error::Error; };
struct BoundaryMassError : Error { using Error::Error; };
struct ResolutionLossError : Error { using Error::Error; };
struct FrameDegeneracyError : Error { using Error::Error; };
struct DimensionMismatchError : Error { using Error::Error; };
struct OutOfIntervalError : Error { using Error::Error; };
struct DetectorOutsideGridError : Error { using Error::Error; };
struct SchemeError : Error { using Error::Error; };
struct BinningMismatchError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

} // namespace clab
