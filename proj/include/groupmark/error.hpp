#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace groupmark {

enum class ErrorKind {
    EmptyPopulation,
    Parameter,
    Divisibility,
    Shape,
    Coverage,
    IncompleteAssessment,
    Domain,
    NonConvergence,
    Degenerate,
    DegenerateRegression,
    UnsupportedSchemeForData,
    Input,
};

/// Stable machine-readable name, used as the first token of CLI error output.
std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when power iteration fails to settle within its budget.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(std::size_t iterations, double residual);

    std::size_t iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

} // namespace groupmark
