#pragma once

#include <stdexcept>
#include <string>

namespace corrector {

// Failure identifiers carried by every exception thrown from this library.
// Grouped by where they surface so the CLI can map them to exit codes:
// input validation -> 2, solver failures -> 3, file I/O -> 4.
enum class Errc {
    // input / configuration
    ConfigError,
    UnsupportedDimension,
    DegenerateInput,
    SingularVolatility,
    NonFiniteValue,
    DegenerateDiffusion,
    IllPosedCorrector,
    UnboundedDirection,
    InapplicableStructure,
    // solver
    StencilOutOfDomain,
    SingularSystem,
    LinearSolveFailure,
    MaxItersExceeded,
    NonConvergence,
    DomainTooSmall,
    EmptyNTRegion,
    NoNTRegion,
    // output
    IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

    // Exit code the CLI should terminate with when this error escapes.
    int exit_code() const {
        switch (code_) {
            case Errc::ConfigError:
            case Errc::UnsupportedDimension:
            case Errc::DegenerateInput:
            case Errc::SingularVolatility:
            case Errc::NonFiniteValue:
            case Errc::DegenerateDiffusion:
            case Errc::IllPosedCorrector:
            case Errc::UnboundedDirection:
            case Errc::InapplicableStructure:
                return 2;
            case Errc::IoError:
                return 4;
            default:
                return 3;
        }
    }

  private:
    Errc code_;
};

inline const char* errc_name(Errc code) {
    switch (code) {
        case Errc::ConfigError: return "ConfigError";
        case Errc::UnsupportedDimension: return "UnsupportedDimension";
        case Errc::DegenerateInput: return "DegenerateInput";
        case Errc::SingularVolatility: return "SingularVolatility";
        case Errc::NonFiniteValue: return "NonFiniteValue";
        case Errc::DegenerateDiffusion: return "DegenerateDiffusion";
        case Errc::IllPosedCorrector: return "IllPosedCorrector";
        case Errc::UnboundedDirection: return "UnboundedDirection";
        case Errc::InapplicableStructure: return "InapplicableStructure";
        case Errc::StencilOutOfDomain: return "StencilOutOfDomain";
        case Errc::SingularSystem: return "SingularSystem";
        case Errc::LinearSolveFailure: return "LinearSolveFailure";
        case Errc::MaxItersExceeded: return "MaxItersExceeded";
        case Errc::NonConvergence: return "NonConvergence";
        case Errc::DomainTooSmall: return "DomainTooSmall";
        case Errc::EmptyNTRegion: return "EmptyNTRegion";
        case Errc::NoNTRegion: return "NoNTRegion";
        case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

}  // namespace corrector
