#include "groupmark/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "groupmark/error.hpp"

namespace groupmark {

std::string_view to_string(RmsConvention convention) {
    return convention == RmsConvention::Paper ? "paper" : "standard";
}

ErrorSummary error_summary(std::span<const double> ideal, std::span<const double> assigned,
                           std::int64_t replicate_id) {
    if (ideal.size() != assigned.size()) {
        throw Error(ErrorKind::Shape, "error_summary: ideal and assigned marks differ in length");
    }
    if (ideal.empty()) {
        throw Error(ErrorKind::EmptyPopulation, "error_summary: no marks to compare");
    }
    ErrorSummary s;
    s.n = ideal.size();
    s.replicate_id = replicate_id;
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    for (std::size_t i = 0; i < ideal.size(); ++i) {
        const double d = std::abs(ideal[i] - assigned[i]);
        s.e_max = std::max(s.e_max, d);
        abs_sum += d;
        sq_sum += d * d;
    }
    const auto n = static_cast<double>(s.n);
    s.e_mean = abs_sum / n;
    s.e_rms = std::sqrt(sq_sum / (n * n));
    s.e_rms_standard = std::sqrt(sq_sum / n);
    return s;
}

double bias_slope(std::span<const double> ideal, std::span<const double> assigned) {
    if (ideal.size() != assigned.size()) {
        throw Error(ErrorKind::Shape, "bias_slope: ideal and assigned marks differ in length");
    }
    if (ideal.size() < 2) {
        throw Error(ErrorKind::DegenerateRegression, "bias_slope: need at least two students");
    }
    const auto n = static_cast<double>(ideal.size());
    double mq = 0.0;
    double mx = 0.0;
    for (std::size_t i = 0; i < ideal.size(); ++i) {
        mq += ideal[i];
        mx += assigned[i];
    }
    mq /= n;
    mx /= n;
    double sqq = 0.0;
    double sqx = 0.0;
    for (std::size_t i = 0; i < ideal.size(); ++i) {
        sqq += (ideal[i] - mq) * (ideal[i] - mq);
        sqx += (ideal[i] - mq) * (assigned[i] - mx);
    }
    if (sqq == 0.0) {
        throw Error(ErrorKind::DegenerateRegression, "bias_slope: ideal marks are constant");
    }
    return sqx / sqq;
}

} // namespace groupmark
