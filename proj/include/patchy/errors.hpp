#pragma once

#include <stdexcept>
#include <string>

namespace patchy {

enum class ErrorCode {
    NonpositiveDiffusion,
    DimensionMismatch,
    InvalidRepetition,
    NegativeWidth,
    NonpositiveWidth,
    TooManyStages,
    InvalidParameter,
    ParseError,
    NonpositiveGrowth,
    Uncontrollable,
    InsufficientMortality,
    AssumptionViolated,
    NonpositiveLeadEigenvalue,
    NoRealEigenvalue,
    NotSymmetric,
    ComplexOrRepeatedEigenvalues,
    NoRoot,
    InvalidBracket,
    SingularBasis,
    NoConvergence,
    Instability,
    TransientNotResolved,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Validation failures are the codes a user can trigger with a malformed scenario.
bool is_validation_error(ErrorCode code);

} // namespace patchy
