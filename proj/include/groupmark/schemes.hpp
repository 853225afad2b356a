#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "groupmark/numerics.hpp"
#include "groupmark/participation.hpp"
#include "groupmark/population.hpp"

namespace groupmark {

enum class Scheme { SOPP, RA, MRA, NPA, PR, PiM };

inline constexpr Scheme kAllSchemes[] = {Scheme::SOPP, Scheme::RA, Scheme::MRA,
                                         Scheme::NPA,  Scheme::PR, Scheme::PiM};

std::string_view to_string(Scheme scheme);

/// Case-insensitive lookup of a scheme name ("sopp", "PiM", ...).
std::optional<Scheme> parse_scheme(std::string_view name);

struct SchemeParams {
    double ra_alpha = 0.7;
    double pr_a = 0.25;
    double pr_b = 1.0;
    double pr_alpha = 0.65;
    NoiseModel noise{};
    /// Relative singular-value cut-off for pseudoinverse marking; negative
    /// selects default_rank_tolerance.
    double pinv_rank_tol = -1.0;
    PowerIterationOptions power{};

    /// Throws ErrorKind::Parameter when a weight or ranking constant is out of range.
    void validate() const;
};

/// Per-project rankings: for each member (in member order), the other
/// members' student ids from strongest to weakest.
using ProjectRankings = std::vector<std::vector<std::size_t>>;

/// Auxiliary assessments aligned with a ParticipationMatrix. Missing
/// individual entries are NaN.
struct AssessmentBundle {
    /// reflexive[j][n]: mark for the n-th member of project j.
    std::optional<std::vector<std::vector<double>>> reflexive;
    /// peer[j](k, n): mark rater k gives member n of project j (member
    /// order); the diagonal is ignored.
    std::optional<std::vector<DenseMatrix>> peer;
    std::optional<std::vector<ProjectRankings>> rankings;
};

struct ProjectMark {
    std::size_t student = 0;
    std::size_t project = 0;
    double mark = 0.0;

    friend bool operator==(const ProjectMark&, const ProjectMark&) = default;
};

struct MarkResult {
    std::vector<double> assigned;
    /// r_ij ordered by project, then student. Empty for global schemes.
    std::vector<ProjectMark> per_project;
    Scheme scheme = Scheme::SOPP;
    SchemeParams params{};
    std::vector<std::string> diagnostics;
};

MarkResult sopp(std::span<const double> w, const ParticipationMatrix& m);

MarkResult reflexive_accounts(std::span<const double> w, const ParticipationMatrix& m,
                              const std::vector<std::vector<double>>& reflexive, double alpha);

MarkResult mark_adjusted_reflexive(std::span<const double> w, const ParticipationMatrix& m,
                                   const std::vector<std::vector<double>>& reflexive);

MarkResult normalised_peer_assessment(std::span<const double> w, const ParticipationMatrix& m,
                                      const std::vector<DenseMatrix>& peer);

/// Pairwise comparison matrix for one project: A(i, k) = n_a * a + n_b * b,
/// where n_a counts raters placing member i below member k and n_b counts
/// raters placing i above k. Indices follow member order.
DenseMatrix ranking_matrix(std::span<const std::size_t> members, const ProjectRankings& rankings, double a,
                           double b);

MarkResult peer_ranking(std::span<const double> w, const ParticipationMatrix& m,
                        const std::vector<ProjectRankings>& rankings, const SchemeParams& params);

MarkResult pseudoinverse_marking(std::span<const double> w, const ParticipationMatrix& m,
                                 double rank_tol = -1.0);

struct AssessmentSelection {
    bool reflexive = true;
    bool peer = true;
    bool rankings = true;
};

/// Simulated auxiliary data. Every draw is an independent perturbation of
/// the assessed student's ideal mark; each kind uses its own substream of `seed`.
AssessmentBundle simulate_assessments(const StudentPopulation& pop, const ParticipationMatrix& m,
                                      const NoiseModel& noise, AssessmentSelection which, std::uint64_t seed);

/// Auxiliary data `scheme` needs.
AssessmentSelection requirements(Scheme scheme);

/// Dispatches to the scheme. Throws ErrorKind::UnsupportedSchemeForData
/// naming the absent inputs when the bundle lacks what the scheme needs.
MarkResult apply_scheme(Scheme scheme, std::span<const double> w, const ParticipationMatrix& m,
                        const AssessmentBundle& bundle, const SchemeParams& params);

} // namespace groupmark
