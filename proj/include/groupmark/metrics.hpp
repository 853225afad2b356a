#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace groupmark {

enum class RmsConvention {
    /// sqrt(sum (q - x)^2 / n^2)
    Paper,
    /// sqrt(sum (q - x)^2 / n)
    Standard,
};

std::string_view to_string(RmsConvention convention);

struct ErrorSummary {
    double e_max = 0.0;
    double e_mean = 0.0;
    double e_rms = 0.0;          ///< n^2 denominator
    double e_rms_standard = 0.0; ///< n denominator
    std::size_t n = 0;
    std::int64_t replicate_id = 0;

    double rms(RmsConvention convention) const {
        return convention == RmsConvention::Paper ? e_rms : e_rms_standard;
    }
};

ErrorSummary error_summary(std::span<const double> ideal, std::span<const double> assigned,
                           std::int64_t replicate_id = 0);

/// Ordinary least-squares slope of assigned on ideal marks.
double bias_slope(std::span<const double> ideal, std::span<const double> assigned);

} // namespace groupmark
