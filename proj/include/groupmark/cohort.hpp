#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "groupmark/participation.hpp"
#include "groupmark/schemes.hpp"

namespace groupmark {

struct Membership {
    std::string project_id;
    std::string student_id;
};

struct GroupMarkRecord {
    std::string project_id;
    double mark = 0.0;
};

struct ReflexiveRecord {
    std::string student_id;
    std::string project_id;
    double mark = 0.0;
};

struct PeerRecord {
    std::string project_id;
    std::string rater_id;
    std::string target_id;
    double mark = 0.0;
};

struct RankingRecord {
    std::string project_id;
    std::string rater_id;
    std::string target_id;
    /// 1 = strongest.
    std::size_t rank_position = 0;
};

/// Real (or exported synthetic) cohort data in edge-list form.
struct CohortData {
    std::vector<Membership> memberships;
    std::vector<GroupMarkRecord> group_marks;
    std::optional<std::vector<ReflexiveRecord>> reflexive;
    std::optional<std::vector<PeerRecord>> peer;
    std::optional<std::vector<RankingRecord>> rankings;
};

/// Cohort data resolved onto dense indices. Ids are ordered numerically when
/// every id is an integer, otherwise by first appearance in the memberships.
struct CohortProblem {
    std::vector<std::string> student_ids;
    std::vector<std::string> project_ids;
    ParticipationMatrix matrix;
    GroupMarkVector group_marks;
    AssessmentBundle bundle;
};

/// Validates the cohort and maps it onto indices. Throws ErrorKind::Input
/// for dangling references, duplicate entries, self-ratings and non-strict
/// rankings.
CohortProblem resolve(const CohortData& cohort);

/// Inverse of `resolve` for synthetic data; ids are the decimal indices.
CohortData export_cohort(const ParticipationMatrix& m, const GroupMarkVector& w, const AssessmentBundle& bundle);

/// Files: memberships.csv, group_marks.csv and, when present,
/// reflexive.csv, peer.csv, rankings.csv.
CohortData read_cohort(const std::filesystem::path& dir);
void write_cohort(const std::filesystem::path& dir, const CohortData& cohort);

void write_memberships_csv(std::ostream& out, const ParticipationMatrix& m);
ParticipationMatrix read_memberships_csv(std::istream& in);

struct CohortMarks {
    std::vector<std::string> student_ids;
    std::vector<std::string> project_ids;
    MarkResult result;
};

/// Applies one scheme to ingested data. Missing auxiliary data surfaces as
/// ErrorKind::UnsupportedSchemeForData; nothing is simulated.
CohortMarks ingest_and_mark(const CohortData& cohort, Scheme scheme, const SchemeParams& params);

/// Header `student_id,assigned_mark,per_project`; per_project lists
/// `project_id:mark` pairs separated by ';'.
void write_marks_csv(std::ostream& out, const CohortMarks& marks);

} // namespace groupmark
