#include "groupmark/cohort.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <unordered_map>

#include "groupmark/csv.hpp"
#include "groupmark/error.hpp"

namespace groupmark {

namespace {

using IdIndex = std::unordered_map<std::string, std::size_t>;

std::optional<long long> as_integer(const std::string& id) {
    long long v = 0;
    const auto* end = id.data() + id.size();
    const auto [ptr, ec] = std::from_chars(id.data(), end, v);
    if (ec != std::errc{} || ptr != end || id.empty()) {
        return std::nullopt;
    }
    return v;
}

std::vector<std::string> order_ids(std::vector<std::string> ids) {
    const bool numeric = std::all_of(ids.begin(), ids.end(), [](const auto& id) { return as_integer(id).has_value(); });
    if (numeric) {
        std::stable_sort(ids.begin(), ids.end(),
                         [](const auto& x, const auto& y) { return *as_integer(x) < *as_integer(y); });
    }
    return ids;
}

IdIndex index_of(const std::vector<std::string>& ids) {
    IdIndex index;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        index.emplace(ids[k], k);
    }
    return index;
}

std::size_t lookup(const IdIndex& index, const std::string& id, const char* what) {
    const auto it = index.find(id);
    if (it == index.end()) {
        throw Error(ErrorKind::Input, std::string("unknown ") + what + " id '" + id + "'");
    }
    return it->second;
}

std::size_t member_slot(const ParticipationMatrix& m, std::size_t project, std::size_t student,
                        const std::string& student_id, const std::string& project_id) {
    if (!m.contains(project, student)) {
        throw Error(ErrorKind::Input, "student '" + student_id + "' is not a member of project '" + project_id + "'");
    }
    return m.local_index(project, student);
}

void write_table(const std::filesystem::path& path, const std::string& header,
                 const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::Input, "cannot write " + path.string());
    }
    out << header << '\n';
    for (const auto& line : lines) {
        out << line << '\n';
    }
}

// Fills ids and the participation matrix of `problem`.
void resolve_memberships(const std::vector<Membership>& memberships, CohortProblem& problem) {
    if (memberships.empty()) {
        throw Error(ErrorKind::Input, "cohort has no memberships");
    }
    std::vector<std::string> students;
    std::vector<std::string> projects;
    {
        IdIndex seen_s;
        IdIndex seen_p;
        for (const auto& mem : memberships) {
            if (seen_s.emplace(mem.student_id, students.size()).second) {
                students.push_back(mem.student_id);
            }
            if (seen_p.emplace(mem.project_id, projects.size()).second) {
                projects.push_back(mem.project_id);
            }
        }
    }

    problem.student_ids = order_ids(std::move(students));
    problem.project_ids = order_ids(std::move(projects));
    const IdIndex sidx = index_of(problem.student_ids);
    const IdIndex pidx = index_of(problem.project_ids);

    std::vector<std::vector<std::size_t>> rows(problem.project_ids.size());
    for (const auto& mem : memberships) {
        rows[pidx.at(mem.project_id)].push_back(sidx.at(mem.student_id));
    }
    for (std::size_t j = 0; j < rows.size(); ++j) {
        auto sorted = rows[j];
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw Error(ErrorKind::Input, "duplicate membership in project '" + problem.project_ids[j] + "'");
        }
    }
    problem.matrix = ParticipationMatrix(problem.student_ids.size(), std::move(rows));
}

} // namespace

CohortProblem resolve(const CohortData& cohort) {
    CohortProblem problem;
    resolve_memberships(cohort.memberships, problem);
    const IdIndex sidx = index_of(problem.student_ids);
    const IdIndex pidx = index_of(problem.project_ids);
    const auto& m = problem.matrix;

    problem.group_marks.assign(m.num_projects(), std::numeric_limits<double>::quiet_NaN());
    for (const auto& gm : cohort.group_marks) {
        const std::size_t j = lookup(pidx, gm.project_id, "project");
        if (!std::isnan(problem.group_marks[j])) {
            throw Error(ErrorKind::Input, "project '" + gm.project_id + "' has more than one group mark");
        }
        if (!std::isfinite(gm.mark)) {
            throw Error(ErrorKind::Input, "group mark for project '" + gm.project_id + "' is not finite");
        }
        problem.group_marks[j] = gm.mark;
    }
    for (std::size_t j = 0; j < m.num_projects(); ++j) {
        if (std::isnan(problem.group_marks[j])) {
            throw Error(ErrorKind::Input, "project '" + problem.project_ids[j] + "' has no group mark");
        }
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();

    if (cohort.reflexive) {
        auto& out = problem.bundle.reflexive.emplace();
        for (std::size_t j = 0; j < m.num_projects(); ++j) {
            out.emplace_back(m.project_size(j), nan);
        }
        for (const auto& rec : *cohort.reflexive) {
            const std::size_t j = lookup(pidx, rec.project_id, "project");
            const std::size_t i = lookup(sidx, rec.student_id, "student");
            const std::size_t slot = member_slot(m, j, i, rec.student_id, rec.project_id);
            if (!std::isnan(out[j][slot])) {
                throw Error(ErrorKind::Input, "duplicate reflexive mark for student '" + rec.student_id +
                                                  "' on project '" + rec.project_id + "'");
            }
            out[j][slot] = rec.mark;
        }
    }

    if (cohort.peer) {
        auto& out = problem.bundle.peer.emplace();
        for (std::size_t j = 0; j < m.num_projects(); ++j) {
            DenseMatrix s(m.project_size(j), m.project_size(j), nan);
            for (std::size_t k = 0; k < m.project_size(j); ++k) {
                s(k, k) = 0.0;
            }
            out.push_back(std::move(s));
        }
        for (const auto& rec : *cohort.peer) {
            if (rec.rater_id == rec.target_id) {
                throw Error(ErrorKind::Input, "student '" + rec.rater_id + "' rates themselves on project '" +
                                                  rec.project_id + "'");
            }
            const std::size_t j = lookup(pidx, rec.project_id, "project");
            const std::size_t k = member_slot(m, j, lookup(sidx, rec.rater_id, "student"), rec.rater_id, rec.project_id);
            const std::size_t n =
                member_slot(m, j, lookup(sidx, rec.target_id, "student"), rec.target_id, rec.project_id);
            if (!std::isnan(out[j](k, n))) {
                throw Error(ErrorKind::Input, "duplicate peer mark from '" + rec.rater_id + "' for '" +
                                                  rec.target_id + "' on project '" + rec.project_id + "'");
            }
            out[j](k, n) = rec.mark;
        }
    }

    if (cohort.rankings) {
        // slots[j][k]: (position, student) pairs given by rater k.
        std::vector<std::vector<std::vector<std::pair<std::size_t, std::size_t>>>> slots(m.num_projects());
        for (std::size_t j = 0; j < m.num_projects(); ++j) {
            slots[j].resize(m.project_size(j));
        }
        for (const auto& rec : *cohort.rankings) {
            if (rec.rater_id == rec.target_id) {
                throw Error(ErrorKind::Input, "student '" + rec.rater_id + "' ranks themselves on project '" +
                                                  rec.project_id + "'");
            }
            const std::size_t j = lookup(pidx, rec.project_id, "project");
            const std::size_t k = member_slot(m, j, lookup(sidx, rec.rater_id, "student"), rec.rater_id, rec.project_id);
            const std::size_t target = lookup(sidx, rec.target_id, "student");
            member_slot(m, j, target, rec.target_id, rec.project_id);
            slots[j][k].emplace_back(rec.rank_position, target);
        }
        auto& out = problem.bundle.rankings.emplace();
        for (std::size_t j = 0; j < m.num_projects(); ++j) {
            ProjectRankings project;
            for (std::size_t k = 0; k < slots[j].size(); ++k) {
                auto entries = slots[j][k];
                std::sort(entries.begin(), entries.end());
                for (std::size_t p = 1; p < entries.size(); ++p) {
                    if (entries[p].first == entries[p - 1].first) {
                        throw Error(ErrorKind::Input, "ranking by '" + problem.student_ids[m.members(j)[k]] +
                                                          "' on project '" + problem.project_ids[j] +
                                                          "' has a tie");
                    }
                    if (entries[p].second == entries[p - 1].second) {
                        throw Error(ErrorKind::Input, "ranking by '" + problem.student_ids[m.members(j)[k]] +
                                                          "' lists a groupmate twice");
                    }
                }
                std::vector<std::size_t> order;
                for (const auto& [pos, student] : entries) {
                    order.push_back(student);
                }
                project.push_back(std::move(order));
            }
            out.push_back(std::move(project));
        }
    }
    return problem;
}

CohortData export_cohort(const ParticipationMatrix& m, const GroupMarkVector& w, const AssessmentBundle& bundle) {
    if (w.size() != m.num_projects()) {
        throw Error(ErrorKind::Shape, "group marks do not match the participation matrix");
    }
    CohortData cohort;
    for (std::size_t j = 0; j < m.num_projects(); ++j) {
        const auto pid = std::to_string(j);
        cohort.group_marks.push_back({pid, w[j]});
        for (std::size_t i : m.members(j)) {
            cohort.memberships.push_back({pid, std::to_string(i)});
        }
    }
    if (bundle.reflexive) {
        auto& out = cohort.reflexive.emplace();
        for (std::size_t j = 0; j < m.num_projects(); ++j) {
            const auto members = m.members(j);
            for (std::size_t n = 0; n < members.size(); ++n) {
                out.push_back({std::to_string(members[n]), std::to_string(j), (*bundle.reflexive)[j][n]});
            }
        }
    }
    if (bundle.peer) {
        auto& out = cohort.peer.emplace();
        for (std::size_t j = 0; j < m.num_projects(); ++j) {
            const auto members = m.members(j);
            for (std::size_t k = 0; k < members.size(); ++k) {
                for (std::size_t n = 0; n < members.size(); ++n) {
                    if (n != k) {
                        out.push_back({std::to_string(j), std::to_string(members[k]), std::to_string(members[n]),
                                       (*bundle.peer)[j](k, n)});
                    }
                }
            }
        }
    }
    if (bundle.rankings) {
        auto& out = cohort.rankings.emplace();
        for (std::size_t j = 0; j < m.num_projects(); ++j) {
            const auto members = m.members(j);
            for (std::size_t k = 0; k < members.size(); ++k) {
                const auto& order = (*bundle.rankings)[j][k];
                for (std::size_t p = 0; p < order.size(); ++p) {
                    out.push_back({std::to_string(j), std::to_string(members[k]), std::to_string(order[p]), p + 1});
                }
            }
        }
    }
    return cohort;
}

CohortData read_cohort(const std::filesystem::path& dir) {
    CohortData cohort;
    {
        const auto t = csv::read_file((dir / "memberships.csv").string());
        const auto pc = t.column("project_id");
        const auto sc = t.column("student_id");
        for (const auto& row : t.rows) {
            cohort.memberships.push_back({row[pc], row[sc]});
        }
    }
    {
        const auto path = (dir / "group_marks.csv").string();
        const auto t = csv::read_file(path);
        const auto pc = t.column("project_id");
        const auto mc = t.column("mark");
        for (const auto& row : t.rows) {
            cohort.group_marks.push_back({row[pc], csv::parse_number(row[mc], path)});
        }
    }
    if (const auto path = dir / "reflexive.csv"; std::filesystem::exists(path)) {
        const auto t = csv::read_file(path.string());
        const auto sc = t.column("student_id");
        const auto pc = t.column("project_id");
        const auto mc = t.column("mark");
        auto& out = cohort.reflexive.emplace();
        for (const auto& row : t.rows) {
            out.push_back({row[sc], row[pc], csv::parse_number(row[mc], path.string())});
        }
    }
    if (const auto path = dir / "peer.csv"; std::filesystem::exists(path)) {
        const auto t = csv::read_file(path.string());
        const auto pc = t.column("project_id");
        const auto rc = t.column("rater_id");
        const auto tc = t.column("target_id");
        const auto mc = t.column("mark");
        auto& out = cohort.peer.emplace();
        for (const auto& row : t.rows) {
            out.push_back({row[pc], row[rc], row[tc], csv::parse_number(row[mc], path.string())});
        }
    }
    if (const auto path = dir / "rankings.csv"; std::filesystem::exists(path)) {
        const auto t = csv::read_file(path.string());
        const auto pc = t.column("project_id");
        const auto rc = t.column("rater_id");
        const auto tc = t.column("target_id");
        const auto kc = t.column("rank_position");
        auto& out = cohort.rankings.emplace();
        for (const auto& row : t.rows) {
            const double pos = csv::parse_number(row[kc], path.string());
            if (pos < 1.0 || pos != std::floor(pos)) {
                throw Error(ErrorKind::Input, path.string() + ": rank_position must be a positive integer");
            }
            out.push_back({row[pc], row[rc], row[tc], static_cast<std::size_t>(pos)});
        }
    }
    return cohort;
}

void write_cohort(const std::filesystem::path& dir, const CohortData& cohort) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> lines;
    for (const auto& mem : cohort.memberships) {
        lines.push_back(mem.project_id + "," + mem.student_id);
    }
    write_table(dir / "memberships.csv", "project_id,student_id", lines);

    lines.clear();
    for (const auto& gm : cohort.group_marks) {
        lines.push_back(gm.project_id + "," + csv::format_exact(gm.mark));
    }
    write_table(dir / "group_marks.csv", "project_id,mark", lines);

    if (cohort.reflexive) {
        lines.clear();
        for (const auto& r : *cohort.reflexive) {
            lines.push_back(r.student_id + "," + r.project_id + "," + csv::format_exact(r.mark));
        }
        write_table(dir / "reflexive.csv", "student_id,project_id,mark", lines);
    }
    if (cohort.peer) {
        lines.clear();
        for (const auto& r : *cohort.peer) {
            lines.push_back(r.project_id + "," + r.rater_id + "," + r.target_id + "," + csv::format_exact(r.mark));
        }
        write_table(dir / "peer.csv", "project_id,rater_id,target_id,mark", lines);
    }
    if (cohort.rankings) {
        lines.clear();
        for (const auto& r : *cohort.rankings) {
            lines.push_back(r.project_id + "," + r.rater_id + "," + r.target_id + "," +
                            std::to_string(r.rank_position));
        }
        write_table(dir / "rankings.csv", "project_id,rater_id,target_id,rank_position", lines);
    }
}

void write_memberships_csv(std::ostream& out, const ParticipationMatrix& m) {
    out << "project_id,student_id\n";
    for (std::size_t j = 0; j < m.num_projects(); ++j) {
        for (std::size_t i : m.members(j)) {
            out << j << ',' << i << '\n';
        }
    }
}

ParticipationMatrix read_memberships_csv(std::istream& in) {
    const auto t = csv::read(in, "memberships");
    const auto pc = t.column("project_id");
    const auto sc = t.column("student_id");
    std::vector<Membership> memberships;
    for (const auto& row : t.rows) {
        memberships.push_back({row[pc], row[sc]});
    }
    CohortProblem problem;
    resolve_memberships(memberships, problem);
    return std::move(problem.matrix);
}

CohortMarks ingest_and_mark(const CohortData& cohort, Scheme scheme, const SchemeParams& params) {
    CohortProblem problem = resolve(cohort);
    CohortMarks marks;
    marks.result = apply_scheme(scheme, problem.group_marks, problem.matrix, problem.bundle, params);
    marks.student_ids = std::move(problem.student_ids);
    marks.project_ids = std::move(problem.project_ids);
    return marks;
}

void write_marks_csv(std::ostream& out, const CohortMarks& marks) {
    const auto& r = marks.result;
    std::vector<std::string> breakdown(r.assigned.size());
    for (const auto& pm : r.per_project) {
        auto& cell = breakdown[pm.student];
        if (!cell.empty()) {
            cell += ';';
        }
        cell += marks.project_ids[pm.project] + ':' + csv::format(pm.mark);
    }
    out << "student_id,assigned_mark,per_project\n";
    for (std::size_t i = 0; i < r.assigned.size(); ++i) {
        out << marks.student_ids[i] << ',' << csv::format(r.assigned[i]) << ',' << breakdown[i] << '\n';
    }
}

} // namespace groupmark
