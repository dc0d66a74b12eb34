#include "kitepump/errors.hpp"

namespace kitepump {

std::string_view error_name(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::NoTension: return "NoTension";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::NoQuasiSteadySolution: return "NoQuasiSteadySolution";
    case ErrorKind::SagTooLarge: return "SagTooLarge";
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::NonTermination: return "NonTermination";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::EmptyPhase: return "EmptyPhase";
    case ErrorKind::Io: return "IoError";
    }
    return "UnknownError";
}

ErrorFamily error_family(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Domain:
    case ErrorKind::Parse:
    case ErrorKind::Validation:
        return ErrorFamily::Input;
    case ErrorKind::Io:
        return ErrorFamily::Io;
    default:
        return ErrorFamily::Solver;
    }
}

}  // namespace kitepump
