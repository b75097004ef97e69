#include "hamrep/errors.hpp"

namespace hamrep {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyBody: return "EmptyBody";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::ImproperFunction: return "ImproperFunction";
        case ErrorCode::UnboundedSummand: return "UnboundedSummand";
        case ErrorCode::CapTooLow: return "CapTooLow";
        case ErrorCode::EmptyResult: return "EmptyResult";
        case ErrorCode::UnknownName: return "UnknownName";
        case ErrorCode::HypothesisViolation: return "HypothesisViolation";
        case ErrorCode::GridUnderflow: return "GridUnderflow";
        case ErrorCode::MissingC: return "MissingC";
        case ErrorCode::BLCViolation: return "BLCViolation";
        case ErrorCode::NoncompactControl: return "NoncompactControl";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::CheckFailure: return "CheckFailure";
    }
    return "Error";
}

}  // namespace hamrep
