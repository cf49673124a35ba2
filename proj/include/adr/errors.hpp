#pragma once

#include <stdexcept>
#include <string>

namespace adr {

/// Precondition or range violation on a public entry point.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative solve stopped before reaching the requested residual.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual_(residual), iterations_(iterations)
    {
    }

    [[nodiscard]] double residual() const noexcept { return residual_; }
    [[nodiscard]] int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

/// Zero pivot or empty row met while factorizing.
class SingularMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure inside one stage of a time step (evolve, indicator or filter).
class StageError : public std::runtime_error {
public:
    StageError(const std::string& what, std::string stage, int step, double residual)
        : std::runtime_error(what), stage_(std::move(stage)), step_(step), residual_(residual)
    {
    }

    [[nodiscard]] const std::string& stage() const noexcept { return stage_; }
    [[nodiscard]] int step() const noexcept { return step_; }
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    std::string stage_;
    int step_;
    double residual_;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
    {
    }

    /// 1-based line number, 0 for errors not tied to a line (overrides, cross-key checks).
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace adr
