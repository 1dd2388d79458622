#pragma once

#include <stdexcept>
#include <string>

namespace hilbertlab {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CollinearityViolation : Error { using Error::Error; };
struct DegenerateConfiguration : Error { using Error::Error; };
struct InvalidMatrix : Error { using Error::Error; };
struct PointAtInfinity : Error { using Error::Error; };

struct PointOutsideBody : Error { using Error::Error; };
struct DegenerateBody : Error { using Error::Error; };
struct UnsupportedFamily : Error { using Error::Error; };
struct UnsupportedDimension : Error { using Error::Error; };
struct NotAnAutomorphism : Error { using Error::Error; };

struct UnboundedInChart : Error { using Error::Error; };
struct NotStandard : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };

struct BallCapExceeded : Error { using Error::Error; };
struct NotTransitive : Error { using Error::Error; };
struct NotGenerating : Error { using Error::Error; };

struct SchemaError : Error { using Error::Error; };

}  // namespace hilbertlab
