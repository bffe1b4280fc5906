#pragma once

#include <stdexcept>
#include <string>

namespace lls {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// geometry
struct DegenerateQuery : Error { using Error::Error; };
struct DegeneratePoints : Error { using Error::Error; };
struct InfeasibleGeometry : Error { using Error::Error; };

// tracking
struct StepTooLarge : Error { using Error::Error; };
struct NoSolution : Error { using Error::Error; };

// stance dynamics
struct NoCompression : Error { using Error::Error; };
struct QuadratureFailure : Error { using Error::Error; };
struct IntegrationDiverged : Error { using Error::Error; };
struct MaxStepExceeded : Error { using Error::Error; };

// leg solver
struct Unachievable : Error { using Error::Error; };
struct NoConstrainedSolution : Error { using Error::Error; };
struct ConeEmpty : Error { using Error::Error; };

// body control
struct OutOfWindow : Error { using Error::Error; };

// harness / cli
struct PlanFailure : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct UsageError : Error { using Error::Error; };

}  // namespace lls
