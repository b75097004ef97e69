#pragma once

#include <stdexcept>
#include <string>

namespace hamrep {

enum class ErrorCode {
    EmptyBody,
    DimMismatch,
    ImproperFunction,
    UnboundedSummand,
    CapTooLow,
    EmptyResult,
    UnknownName,
    HypothesisViolation,
    GridUnderflow,
    MissingC,
    BLCViolation,
    NoncompactControl,
    InvalidArgument,
    ConfigError,
    CheckFailure,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace hamrep
