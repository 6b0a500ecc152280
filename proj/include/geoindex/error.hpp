#pragma once

#include <stdexcept>
#include <string>

namespace geoindex {

// Machine-readable failure categories. The CLI prints the name returned by
// error_code_name() so scripts can branch on it.
enum class ErrorCode {
    PrecisionInsufficient,
    UnresolvedSpectrum,
    InvalidArgument,
    Range,
    ZeroMeanIndex,
    Unbounded,
    NotFound,
    IdentityViolation,
    ScaleMismatch,
    Precondition,
    TruncationUnsound,
    JumpBoundsViolation,
    Degenerate,
    Admissibility,
    Schema,
    Io,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace geoindex
