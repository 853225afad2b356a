#include "groupmark/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "groupmark/error.hpp"

namespace groupmark {

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
    case Scheme::SOPP: return "SOPP";
    case Scheme::RA: return "RA";
    case Scheme::MRA: return "MRA";
    case Scheme::NPA: return "NPA";
    case Scheme::PR: return "PR";
    case Scheme::PiM: return "PiM";
    }
    return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
    for (Scheme s : kAllSchemes) {
        const auto label = to_string(s);
        if (label.size() == name.size() &&
            std::equal(label.begin(), label.end(), name.begin(), [](char x, char y) {
                return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
            })) {
            return s;
        }
    }
    return std::nullopt;
}

void SchemeParams::validate() const {
    auto unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    if (!unit(ra_alpha)) {
        throw Error(ErrorKind::Parameter, "ra_alpha must lie in [0, 1]");
    }
    if (!unit(pr_alpha)) {
        throw Error(ErrorKind::Parameter, "pr_alpha must lie in [0, 1]");
    }
    if (!(std::isfinite(pr_a) && pr_a > 0.0) || !(std::isfinite(pr_b) && pr_b > 0.0)) {
        throw Error(ErrorKind::Parameter, "pr_a and pr_b must be positive");
    }
    if (!std::isfinite(noise.half_range) || noise.half_range < 0.0) {
        throw Error(ErrorKind::Parameter, "noise half-range must be finite and non-negative");
    }
}

namespace {

void check_marks(std::span<const double> w, const ParticipationMatrix& m) {
    if (w.size() != m.num_projects()) {
        throw Error(ErrorKind::Shape, "group mark vector has " + std::to_string(w.size()) +
                                          " entries for " + std::to_string(m.num_projects()) + " projects");
    }
    for (std::size_t i = 0; i < m.num_students(); ++i) {
        if (m.projects_per_student(i) == 0) {
            throw Error(ErrorKind::Coverage, "student " + std::to_string(i) + " is in no project");
        }
    }
}

template <typename T>
void check_per_project(const std::vector<T>& data, const ParticipationMatrix& m, const char* what) {
    if (data.size() != m.num_projects()) {
        throw Error(ErrorKind::Shape, std::string(what) + " data covers " + std::to_string(data.size()) +
                                          " projects, expected " + std::to_string(m.num_projects()));
    }
}

// Fills `assigned` with the per-student mean of the recorded r_ij.
MarkResult finish(MarkResult result, const ParticipationMatrix& m) {
    result.assigned.assign(m.num_students(), 0.0);
    for (const auto& pm : result.per_project) {
        result.assigned[pm.student] += pm.mark;
    }
    for (std::size_t i = 0; i < m.num_students(); ++i) {
        result.assigned[i] /= static_cast<double>(m.projects_per_student(i));
    }
    return result;
}

double reflexive_entry(const std::vector<std::vector<double>>& reflexive, const ParticipationMatrix& m,
                       std::size_t j, std::size_t n) {
    if (reflexive[j].size() != m.project_size(j)) {
        throw Error(ErrorKind::Shape, "reflexive marks for project " + std::to_string(j) +
                                          " do not match its member count");
    }
    const double y = reflexive[j][n];
    if (std::isnan(y)) {
        throw Error(ErrorKind::IncompleteAssessment, "missing reflexive mark for student " +
                                                         std::to_string(m.members(j)[n]) + " on project " +
                                                         std::to_string(j));
    }
    return y;
}

} // namespace

MarkResult sopp(std::span<const double> w, const ParticipationMatrix& m) {
    check_marks(w, m);
    MarkResult result;
    result.scheme = Scheme::SOPP;
    for (std::size_t j = 0; j < m.num_projects(); ++j) {
        for (std::size_t i : m.members(j)) {
            result.per_project.push_back({i, j, w[j]});
        }
    }
    return finish(std::move(result), m);
}

MarkResult reflexive_accounts(std::span<const double> w, const ParticipationMatrix& m,
                              const std::vector<std::vector<double>>& reflexive, double alpha) {
    check_marks(w, m);
    check_per_project(reflexive, m, "reflexive");
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error(ErrorKind::Parameter, "ra_alpha must lie in [0, 1]");
    }
    MarkResult result;
    result.scheme = Scheme::RA;
    result.params.ra_alpha = alpha;
    for (std::size_t j = 0; j < m.num_projects(); ++j) {
        const auto members = m.members(j);
        for (std::size_t n = 0; n < members.size(); ++n) {
            const double y = reflexive_entry(reflexive, m, j, n);
            result.per_project.push_back({members[n], j, alpha * w[j] + (1.0 - alpha) * y});
        }
    }
    return finish(std::move(result), m);
}

MarkResult mark_adjusted_reflexive(std::span<const double> w, const ParticipationMatrix& m,
                                   const std::vector<std::vector<double>>& reflexive) {
    check_marks(w, m);
    check_per_project(reflexive, m, "reflexive");
    MarkResult result;
    result.scheme = Scheme::MRA;
    for (std::size_t j = 0; j < m.num_projects(); ++j) {
        const auto members = m.members(j);
        const double pool = w[j] * static_cast<double>(members.size());
        double total = 0.0;
        for (std::size_t n = 0; n < members.size(); ++n) {
            const double y = reflexive_entry(reflexive, m, j, n);
            if (y < 0.0) {
                throw Error(ErrorKind::Domain, "negative reflexive mark for student " +
                                                   std::to_string(members[n]) + " on project " +
                                                   std::to_string(j));
            }
            total += y;
        }
        if (total == 0.0) {
            result.diagnostics.push_back("project " + std::to_string(j) +
                                         ": all reflexive marks are zero; mark pool split equally");
        }
        for (std::size_t n = 0; n < members.size(); ++n) {
            const double share = total > 0.0 ? reflexive[j][n] / total : 1.0 / static_cast<double>(members.size());
            result.per_project.push_back({members[n], j, share * pool});
        }
    }
    return finish(std::move(result), m);
}

MarkResult normalised_peer_assessment(std::span<const double> w, const ParticipationMatrix& m,
                                      const std::vector<DenseMatrix>& peer) {
    check_marks(w, m);
    check_per_project(peer, m, "peer");
    MarkResult result;
    result.scheme = Scheme::NPA;
    for (std::size_t j = 0; j < m.num_projects(); ++j) {
        const auto members = m.members(j);
        const std::size_t size = members.size();
        const auto& s = peer[j];
        if (s.rows() != size || s.cols() != size) {
            throw Error(ErrorKind::Shape, "peer matrix for project " + std::to_string(j) +
                                              " does not match its member count");
        }
        if (size == 1) {
            result.per_project.push_back({members[0], j, w[j]});
            continue;
        }

        std::vector<double> received(size, 0.0);
        for (std::size_t k = 0; k < size; ++k) {
            double row_total = 0.0;
            for (std::size_t n = 0; n < size; ++n) {
                if (n == k) {
                    continue;
                }
                const double v = s(k, n);
                if (std::isnan(v)) {
                    throw Error(ErrorKind::IncompleteAssessment,
                                "missing peer mark from student " + std::to_string(members[k]) + " for student " +
                                    std::to_string(members[n]) + " on project " + std::to_string(j));
                }
                if (v < 0.0) {
                    throw Error(ErrorKind::Domain, "negative peer mark on project " + std::to_string(j));
                }
                row_total += v;
            }
            if (row_total == 0.0) {
                result.diagnostics.push_back("project " + std::to_string(j) + ": student " +
                                             std::to_string(members[k]) +
                                             " gave every groupmate zero; using a uniform split for this rater");
            }
            for (std::size_t n = 0; n < size; ++n) {
                if (n != k) {
                    received[n] += row_total > 0.0 ? s(k, n) / row_total : 1.0 / static_cast<double>(size - 1);
                }
            }
        }

        const double pool = w[j] * static_cast<double>(size);
        for (std::size_t n = 0; n < size; ++n) {
            result.per_project.push_back({members[n], j, pool * received[n] / static_cast<double>(size)});
        }
    }
    return finish(std::move(result), m);
}

DenseMatrix ranking_matrix(std::span<const std::size_t> members, const ProjectRankings& rankings, double a,
                           double b) {
    const std::size_t size = members.size();
    if (rankings.size() != size) {
        throw Error(ErrorKind::IncompleteAssessment, "expected one ranking per group member");
    }
    auto local = [&](std::size_t student) {
        const auto it = std::find(members.begin(), members.end(), student);
        if (it == members.end()) {
            throw Error(ErrorKind::Domain, "ranking references student " + std::to_string(student) +
                                               " who is not in the group");
        }
        return static_cast<std::size_t>(it - members.begin());
    };

    // position[r][n]: place of member n in rater r's list (0 = strongest).
    std::vector<std::vector<std::size_t>> position(size, std::vector<std::size_t>(size, size));
    for (std::size_t r = 0; r < size; ++r) {
        const auto& order = rankings[r];
        if (order.size() != size - 1) {
            throw Error(ErrorKind::IncompleteAssessment, "ranking by student " + std::to_string(members[r]) +
                                                             " must list each groupmate exactly once");
        }
        for (std::size_t p = 0; p < order.size(); ++p) {
            const std::size_t n = local(order[p]);
            if (n == r || position[r][n] != size) {
                throw Error(ErrorKind::Domain, "ranking by student " + std::to_string(members[r]) +
                                                   " includes themselves or repeats a groupmate");
            }
            position[r][n] = p;
        }
    }

    DenseMatrix adj(size, size);
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t k = 0; k < size; ++k) {
            if (i == k) {
                continue;
            }
            double value = 0.0;
            for (std::size_t r = 0; r < size; ++r) {
                if (r == i || r == k) {
                    continue;
                }
                value += position[r][i] > position[r][k] ? a : b;
            }
            adj(i, k) = value;
        }
    }
    return adj;
}

MarkResult peer_ranking(std::span<const double> w, const ParticipationMatrix& m,
                        const std::vector<ProjectRankings>& rankings, const SchemeParams& params) {
    check_marks(w, m);
    check_per_project(rankings, m, "ranking");
    params.validate();
    MarkResult result;
    result.scheme = Scheme::PR;
    result.params = params;
    for (std::size_t j = 0; j < m.num_projects(); ++j) {
        const auto members = m.members(j);
        const DenseMatrix adj = ranking_matrix(members, rankings[j], params.pr_a, params.pr_b);
        const Eigenpair eig = leading_eigenvector(adj, static_cast<double>(members.size()), params.power);
        for (std::size_t n = 0; n < members.size(); ++n) {
            const double factor = params.pr_alpha + (1.0 - params.pr_alpha) * eig.vector[n];
            result.per_project.push_back({members[n], j, w[j] * factor});
        }
    }
    return finish(std::move(result), m);
}

MarkResult pseudoinverse_marking(std::span<const double> w, const ParticipationMatrix& m, double rank_tol) {
    check_marks(w, m);
    MarkResult result;
    result.scheme = Scheme::PiM;
    result.params.pinv_rank_tol = rank_tol;

    std::size_t largest_group = 0;
    std::size_t fewest_projects = m.num_projects();
    for (std::size_t j = 0; j < m.num_projects(); ++j) {
        largest_group = std::max(largest_group, m.project_size(j));
    }
    for (std::size_t i = 0; i < m.num_students(); ++i) {
        fewest_projects = std::min(fewest_projects, m.projects_per_student(i));
    }
    if (fewest_projects < largest_group) {
        result.diagnostics.push_back("some students take part in " + std::to_string(fewest_projects) +
                                     " projects, fewer than the largest group size " +
                                     std::to_string(largest_group) + "; pseudoinverse marks will be coarse");
    }

    result.assigned = pinv_solve(m.row_normalised(), w, rank_tol);
    return result;
}

AssessmentBundle simulate_assessments(const StudentPopulation& pop, const ParticipationMatrix& m,
                                      const NoiseModel& noise, AssessmentSelection which, std::uint64_t seed) {
    if (pop.size() != m.num_students()) {
        throw Error(ErrorKind::Shape, "population and participation matrix disagree on the cohort size");
    }
    const auto& q = pop.ideal_marks;
    AssessmentBundle bundle;

    if (which.reflexive) {
        NoiseSource source(noise, seed, Stream::Reflexive);
        auto& out = bundle.reflexive.emplace();
        out.reserve(m.num_projects());
        for (std::size_t j = 0; j < m.num_projects(); ++j) {
            std::vector<double> row;
            for (std::size_t i : m.members(j)) {
                row.push_back(source.perturb(q[i]));
            }
            out.push_back(std::move(row));
        }
    }

    if (which.peer) {
        NoiseSource source(noise, seed, Stream::Peer);
        auto& out = bundle.peer.emplace();
        out.reserve(m.num_projects());
        for (std::size_t j = 0; j < m.num_projects(); ++j) {
            const auto members = m.members(j);
            DenseMatrix s(members.size(), members.size());
            for (std::size_t k = 0; k < members.size(); ++k) {
                for (std::size_t n = 0; n < members.size(); ++n) {
                    if (n != k) {
                        s(k, n) = source.perturb(q[members[n]]);
                    }
                }
            }
            out.push_back(std::move(s));
        }
    }

    if (which.rankings) {
        NoiseSource source(noise, seed, Stream::Ranking);
        auto& out = bundle.rankings.emplace();
        out.reserve(m.num_projects());
        for (std::size_t j = 0; j < m.num_projects(); ++j) {
            const auto members = m.members(j);
            ProjectRankings project;
            for (std::size_t k = 0; k < members.size(); ++k) {
                std::vector<std::pair<double, std::size_t>> perceived;
                for (std::size_t n = 0; n < members.size(); ++n) {
                    if (n != k) {
                        perceived.emplace_back(source.perturb(q[members[n]]), members[n]);
                    }
                }
                std::sort(perceived.begin(), perceived.end(), [](const auto& x, const auto& y) {
                    return x.first != y.first ? x.first > y.first : x.second < y.second;
                });
                std::vector<std::size_t> order;
                for (const auto& [mark, id] : perceived) {
                    order.push_back(id);
                }
                project.push_back(std::move(order));
            }
            out.push_back(std::move(project));
        }
    }
    return bundle;
}

AssessmentSelection requirements(Scheme scheme) {
    switch (scheme) {
    case Scheme::RA:
    case Scheme::MRA: return {true, false, false};
    case Scheme::NPA: return {false, true, false};
    case Scheme::PR: return {false, false, true};
    case Scheme::SOPP:
    case Scheme::PiM: break;
    }
    return {false, false, false};
}

MarkResult apply_scheme(Scheme scheme, std::span<const double> w, const ParticipationMatrix& m,
                        const AssessmentBundle& bundle, const SchemeParams& params) {
    params.validate();
    const auto need = requirements(scheme);
    std::string absent;
    if (need.reflexive && !bundle.reflexive) {
        absent += " reflexive";
    }
    if (need.peer && !bundle.peer) {
        absent += " peer";
    }
    if (need.rankings && !bundle.rankings) {
        absent += " rankings";
    }
    if (!absent.empty()) {
        throw Error(ErrorKind::UnsupportedSchemeForData,
                    std::string(to_string(scheme)) + " needs data that is absent:" + absent);
    }

    MarkResult result;
    switch (scheme) {
    case Scheme::SOPP: result = sopp(w, m); break;
    case Scheme::RA: result = reflexive_accounts(w, m, *bundle.reflexive, params.ra_alpha); break;
    case Scheme::MRA: result = mark_adjusted_reflexive(w, m, *bundle.reflexive); break;
    case Scheme::NPA: result = normalised_peer_assessment(w, m, *bundle.peer); break;
    case Scheme::PR: result = peer_ranking(w, m, *bundle.rankings, params); break;
    case Scheme::PiM: result = pseudoinverse_marking(w, m, params.pinv_rank_tol); break;
    }
    result.params = params;
    return result;
}

} // namespace groupmark
