#include "groupmark/error.hpp"

namespace groupmark {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::EmptyPopulation: return "empty_population";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Divisibility: return "divisibility";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Coverage: return "coverage";
    case ErrorKind::IncompleteAssessment: return "incomplete_assessment";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NonConvergence: return "non_convergence";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::DegenerateRegression: return "degenerate_regression";
    case ErrorKind::UnsupportedSchemeForData: return "unsupported_scheme_for_data";
    case ErrorKind::Input: return "input";
    }
    return "unknown";
}

NonConvergenceError::NonConvergenceError(std::size_t iterations, double residual)
    : Error(ErrorKind::NonConvergence,
            "power iteration did not converge after " + std::to_string(iterations) +
                " iterations (last residual " + std::to_string(residual) + ")"),
      iterations_(iterations), residual_(residual) {}

} // namespace groupmark
