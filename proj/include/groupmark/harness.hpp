#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "groupmark/metrics.hpp"
#include "groupmark/participation.hpp"
#include "groupmark/schemes.hpp"

namespace groupmark {

struct ExperimentConfig {
    std::size_t n = 52;
    std::size_t group_size = 4;
    std::size_t rounds = 4;
    double mean = 60.0;
    double sd = 12.0;
    std::vector<Scheme> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
    SchemeParams params{};
    AssignmentOptions assignment{};
    std::size_t replicates = 1;
    std::uint64_t master_seed = 1;
    /// Worker threads for replicates; output order never depends on it.
    std::size_t threads = 1;
    RmsConvention rms = RmsConvention::Paper;

    void validate() const;
};

struct SchemeOutcome {
    Scheme scheme = Scheme::SOPP;
    std::vector<double> assigned;
    ErrorSummary errors;
    std::vector<std::string> diagnostics;
};

struct ReplicateOutcome {
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    StudentPopulation population;
    ParticipationMatrix matrix;
    GroupMarkVector group_marks;
    AssessmentBundle assessments;
    std::vector<SchemeOutcome> schemes;
    std::vector<std::string> warnings;
};

/// One full replicate: population, grouping, simulated assessments and
/// every configured scheme.
ReplicateOutcome run_replicate(const ExperimentConfig& cfg, std::size_t replicate);

struct ScenarioResult {
    ExperimentConfig config;
    std::vector<ReplicateOutcome> replicates;
};

/// Runs all replicates. If a replicate throws, the completed prefix is
/// handed to `on_partial` (when given) before the error propagates.
ScenarioResult run_scenario(const ExperimentConfig& cfg,
                            const std::function<void(const ScenarioResult&)>& on_partial = {});

struct MeanErrors {
    Scheme scheme = Scheme::SOPP;
    double e_max = 0.0;
    double e_mean = 0.0;
    double e_rms = 0.0;
    double e_rms_standard = 0.0;
};

/// Replicate-averaged errors per scheme, in configured scheme order.
std::vector<MeanErrors> mean_errors(const ScenarioResult& result);

/// `replicate,scheme,metric,value` with metrics e_max, e_mean, e_rms.
void write_summary_csv(std::ostream& out, const ScenarioResult& result);

/// `replicate,scheme,student,ideal,assigned`.
void write_scatter_csv(std::ostream& out, const ScenarioResult& result);

struct SweepResult {
    /// "m" or "n".
    std::string axis;
    std::vector<std::size_t> values;
    std::vector<ScenarioResult> points;
    std::vector<std::string> diagnostics;
};

/// One scenario per group size with rounds = group size (rounds = 1 when
/// the group spans the whole cohort). Values that do not divide the cohort
/// are skipped with a diagnostic.
SweepResult sweep_group_size(const ExperimentConfig& cfg, const std::vector<std::size_t>& m_values);

/// One scenario per cohort size at the configured group size and rounds.
SweepResult sweep_population(const ExperimentConfig& cfg, const std::vector<std::size_t>& n_values);

/// `scheme,<axis>,replicate,metric,value`.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

} // namespace groupmark
