#pragma once

#include <stdexcept>
#include <string>

namespace carlift {

/// Root of the library's exception hierarchy.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A caller-side contract was violated; the requested computation was never
/// meaningful for these inputs.
struct PreconditionError : Error {
    using Error::Error;
};

/// The computation itself failed or left its domain of validity.
struct NumericError : Error {
    using Error::Error;
};

struct DomainError : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct NotUpperTriangular : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct InsufficientCoefficients : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct OutOfTimeRange : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct InvalidBound : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct NegativeFrequencyPresent : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct InitialOutOfStrip : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct GateFailed : PreconditionError {
    using PreconditionError::PreconditionError;
};

/// Carries the name of the first failed clause in what().
struct AssumptionViolated : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct UnknownFigureId : PreconditionError {
    using PreconditionError::PreconditionError;
};

/// Adaptive step fell below the resolvable scale; signals stiffness or
/// finite-time blow-up of the integrated system.
struct StepSizeUnderflow : NumericError {
    double t;
    StepSizeUnderflow(const std::string& msg, double t_fail)
        : NumericError(msg), t(t_fail) {}
};

/// Consecutive recovered-state samples moved by more than pi; the sampling
/// grid is too coarse to track the logarithm branch.
struct BranchJump : NumericError {
    using NumericError::NumericError;
};

/// The closed-form solution left its domain: the logarithm argument crossed
/// zero at t0.
struct BlowUpReached : NumericError {
    double t0;
    BlowUpReached(const std::string& msg, double t_blow)
        : NumericError(msg), t0(t_blow) {}
};

}  // namespace carlift
