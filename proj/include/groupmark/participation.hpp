#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "groupmark/numerics.hpp"
#include "groupmark/population.hpp"

namespace groupmark {

/// Binary project x student incidence. Rows are projects, columns are
/// students. Stored as sorted member lists per project.
class ParticipationMatrix {
public:
    ParticipationMatrix() = default;

    /// Throws ErrorKind::Shape for out-of-range or duplicate members and
    /// ErrorKind::Coverage for an empty project or a student in no project.
    ParticipationMatrix(std::size_t num_students, std::vector<std::vector<std::size_t>> project_members);

    /// Builds from a 0/1 matrix (rows = projects).
    static ParticipationMatrix from_dense(const DenseMatrix& m);

    std::size_t num_projects() const noexcept { return members_.size(); }
    std::size_t num_students() const noexcept { return projects_of_.size(); }

    std::span<const std::size_t> members(std::size_t project) const { return members_[project]; }
    std::span<const std::size_t> projects_of(std::size_t student) const { return projects_of_[student]; }

    std::size_t project_size(std::size_t project) const { return members_[project].size(); }
    std::size_t projects_per_student(std::size_t student) const { return projects_of_[student].size(); }

    bool contains(std::size_t project, std::size_t student) const;

    /// Position of `student` inside the sorted member list of `project`.
    std::size_t local_index(std::size_t project, std::size_t student) const;

    DenseMatrix dense() const;

    /// Q with Q_ji = M_ji / n_j.
    DenseMatrix row_normalised() const;

    friend bool operator==(const ParticipationMatrix&, const ParticipationMatrix&) = default;

private:
    std::vector<std::vector<std::size_t>> members_;
    std::vector<std::vector<std::size_t>> projects_of_;
};

using GroupMarkVector = std::vector<double>;

struct AssignmentOptions {
    /// Shuffles tried per round.
    std::size_t max_attempts = 1000;
    /// Stop a round early after this many consecutive shuffles without a
    /// better assignment.
    std::size_t stall_limit = 50;
};

struct GroupAssignment {
    ParticipationMatrix matrix;
    /// Number of (pair, later round) co-memberships that repeat an earlier pairing.
    std::size_t repeated_pairs = 0;
    std::vector<std::string> warnings;
};

/// Round-structured grouping: every round partitions all n students into
/// n / group_size groups. Each round keeps the shuffle (after swap-based
/// repair) with the fewest repeated pairings.
GroupAssignment assign_groups(std::size_t n, std::size_t group_size, std::size_t rounds, std::uint64_t seed,
                              const AssignmentOptions& options = {});

/// Number of distinct co-members per student.
std::vector<std::size_t> distinct_partner_counts(const ParticipationMatrix& m);

/// w_j = sum_i M_ji q_i / n_j.
GroupMarkVector group_marks(const StudentPopulation& pop, const ParticipationMatrix& m);

} // namespace groupmark
