#ifndef ISOFLOW_ERRORS_HPP
#define ISOFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace isoflow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments to a numerical routine (violated precondition).
struct InvalidParams : Error { using Error::Error; };
// Adaptive step control could not meet its tolerance.
struct StepFailure : Error { using Error::Error; };
// Argument outside the mathematical domain of a formula.
struct DomainError : Error { using Error::Error; };
// s(t) requested before taudot becomes positive.
struct NotYetMonotone : Error { using Error::Error; };
// Adaptive quadrature could not reach its tolerance.
struct QuadratureFailure : Error { using Error::Error; };
// Time step exceeds the stability bound.
struct CFLViolation : Error { using Error::Error; };
// A density cell dropped below the tolerated negative round-off band.
struct NegativeDensity : Error { using Error::Error; };
// Explicit diffusion step above its stability bound.
struct StabilityViolation : Error { using Error::Error; };
// Parameter combination outside the regime a functional is defined for.
struct InvalidRegime : Error { using Error::Error; };
// Config file unreadable or syntactically malformed.
struct ParseError : Error { using Error::Error; };
// Config well-formed but violating module preconditions.
struct ValidationError : Error { using Error::Error; };

}  // namespace isoflow

#endif
