#pragma once

#include <stdexcept>
#include <string>

namespace hetpanel {

/// Process exit codes used by the CLI: 0 success, 1 usage, 2 data/format,
/// 3 numeric fault.
enum class ExitCode : int {
    ok = 0,
    usage = 1,
    data = 2,
    numeric = 3,
};

/// Base class for all hetpanel errors; carries the exit-code category.
class Error : public std::runtime_error {
public:
    Error(ExitCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}

    ExitCode code() const noexcept { return code_; }

private:
    ExitCode code_;
};

/// Invalid configuration (bad ranges, illegal variant, bad hyperparameters).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(ExitCode::usage, msg) {}
};

/// API misuse or bad command-line arguments.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& msg) : Error(ExitCode::usage, msg) {}
};

/// Mathematical precondition violated (negative strain, too few samples).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(ExitCode::usage, msg) {}
};

/// Malformed or truncated files, bad magic, unsupported versions.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error(ExitCode::data, msg) {}
};

/// Non-finite values, singular systems, residual blowups.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(ExitCode::numeric, msg) {}
};

/// Inconsistent input data (topology mismatches, schema violations).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(ExitCode::data, msg) {}
};

}  // namespace hetpanel
