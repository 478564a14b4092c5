#pragma once

#include <stdexcept>
#include <string>

namespace p2pa {

enum class ErrorCode {
    NearZeroVector,
    DegenerateVertex,
    ParallelInputs,
    IncongruentPairs,
    CameraAtLandmark,
    DegenerateDenominator,
    BadIndexChoice,
    SingularInput,
    NotCoaltitude,
    MixedHemisphere,
    NoIntersection,
    TheoremViolation,
    ConfigInvalid,
    InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace p2pa
