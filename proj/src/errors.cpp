#include "patchy/errors.hpp"

namespace patchy {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NonpositiveDiffusion: return "NonpositiveDiffusion";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidRepetition: return "InvalidRepetition";
    case ErrorCode::NegativeWidth: return "NegativeWidth";
    case ErrorCode::NonpositiveWidth: return "NonpositiveWidth";
    case ErrorCode::TooManyStages: return "TooManyStages";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonpositiveGrowth: return "NonpositiveGrowth";
    case ErrorCode::Uncontrollable: return "Uncontrollable";
    case ErrorCode::InsufficientMortality: return "InsufficientMortality";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::NonpositiveLeadEigenvalue: return "NonpositiveLeadEigenvalue";
    case ErrorCode::NoRealEigenvalue: return "NoRealEigenvalue";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ComplexOrRepeatedEigenvalues: return "ComplexOrRepeatedEigenvalues";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::InvalidBracket: return "InvalidBracket";
    case ErrorCode::SingularBasis: return "SingularBasis";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Instability: return "Instability";
    case ErrorCode::TransientNotResolved: return "TransientNotResolved";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

bool is_validation_error(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NonpositiveDiffusion:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::InvalidRepetition:
    case ErrorCode::NegativeWidth:
    case ErrorCode::NonpositiveWidth:
    case ErrorCode::TooManyStages:
    case ErrorCode::InvalidParameter:
    case ErrorCode::ParseError:
    case ErrorCode::NonpositiveGrowth:
    case ErrorCode::NonpositiveLeadEigenvalue:
    case ErrorCode::AssumptionViolated:
        return true;
    default:
        return false;
    }
}

} // namespace patchy
