#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kitepump {

/// Error categories surfaced by the library. The C API maps each one to a
/// status code; the CLI maps the `family()` to an exit code.
enum class ErrorKind {
    Domain,
    Parse,
    Validation,
    NoTension,
    NoSolution,
    NoQuasiSteadySolution,
    SagTooLarge,
    Unreachable,
    NonTermination,
    NonConvergence,
    EmptyPhase,
    Io,
};

enum class ErrorFamily { Input, Solver, Io };

std::string_view error_name(ErrorKind kind) noexcept;
ErrorFamily error_family(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return error_name(kind_); }
    ErrorFamily family() const noexcept { return error_family(kind_); }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) {
        fail(kind, message);
    }
}

}  // namespace kitepump
