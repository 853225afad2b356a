#include "groupmark/participation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "groupmark/error.hpp"

namespace groupmark {

ParticipationMatrix::ParticipationMatrix(std::size_t num_students,
                                         std::vector<std::vector<std::size_t>> project_members)
    : members_(std::move(project_members)), projects_of_(num_students) {
    for (std::size_t j = 0; j < members_.size(); ++j) {
        auto& row = members_[j];
        if (row.empty()) {
            throw Error(ErrorKind::Coverage, "project " + std::to_string(j) + " has no members");
        }
        std::sort(row.begin(), row.end());
        if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
            throw Error(ErrorKind::Shape, "project " + std::to_string(j) + " lists a student twice");
        }
        if (row.back() >= num_students) {
            throw Error(ErrorKind::Shape, "project " + std::to_string(j) + " references student " +
                                              std::to_string(row.back()) + " outside the cohort");
        }
        for (std::size_t i : row) {
            projects_of_[i].push_back(j);
        }
    }
    for (std::size_t i = 0; i < num_students; ++i) {
        if (projects_of_[i].empty()) {
            throw Error(ErrorKind::Coverage, "student " + std::to_string(i) + " is in no project");
        }
    }
}

ParticipationMatrix ParticipationMatrix::from_dense(const DenseMatrix& m) {
    std::vector<std::vector<std::size_t>> rows(m.rows());
    for (std::size_t j = 0; j < m.rows(); ++j) {
        for (std::size_t i = 0; i < m.cols(); ++i) {
            const double v = m(j, i);
            if (v == 1.0) {
                rows[j].push_back(i);
            } else if (v != 0.0) {
                throw Error(ErrorKind::Domain, "participation entries must be 0 or 1");
            }
        }
    }
    return ParticipationMatrix(m.cols(), std::move(rows));
}

bool ParticipationMatrix::contains(std::size_t project, std::size_t student) const {
    const auto& row = members_[project];
    return std::binary_search(row.begin(), row.end(), student);
}

std::size_t ParticipationMatrix::local_index(std::size_t project, std::size_t student) const {
    const auto& row = members_[project];
    const auto it = std::lower_bound(row.begin(), row.end(), student);
    if (it == row.end() || *it != student) {
        throw Error(ErrorKind::Shape, "student " + std::to_string(student) + " is not in project " +
                                          std::to_string(project));
    }
    return static_cast<std::size_t>(it - row.begin());
}

DenseMatrix ParticipationMatrix::dense() const {
    DenseMatrix m(num_projects(), num_students());
    for (std::size_t j = 0; j < members_.size(); ++j) {
        for (std::size_t i : members_[j]) {
            m(j, i) = 1.0;
        }
    }
    return m;
}

DenseMatrix ParticipationMatrix::row_normalised() const {
    DenseMatrix q(num_projects(), num_students());
    for (std::size_t j = 0; j < members_.size(); ++j) {
        const double share = 1.0 / static_cast<double>(members_[j].size());
        for (std::size_t i : members_[j]) {
            q(j, i) = share;
        }
    }
    return q;
}

namespace {

// Symmetric co-membership counts from earlier rounds.
class PairCounts {
public:
    explicit PairCounts(std::size_t n) : n_(n), counts_(n * n, 0) {}

    std::size_t operator()(std::size_t a, std::size_t b) const { return counts_[a * n_ + b]; }

    void add_group(std::span<const std::size_t> group) {
        for (std::size_t x = 0; x < group.size(); ++x) {
            for (std::size_t y = x + 1; y < group.size(); ++y) {
                ++counts_[group[x] * n_ + group[y]];
                ++counts_[group[y] * n_ + group[x]];
            }
        }
    }

private:
    std::size_t n_;
    std::vector<std::size_t> counts_;
};

std::size_t partition_cost(const std::vector<std::size_t>& order, std::size_t group_size, const PairCounts& pc) {
    std::size_t cost = 0;
    for (std::size_t start = 0; start < order.size(); start += group_size) {
        for (std::size_t x = start; x < start + group_size; ++x) {
            for (std::size_t y = x + 1; y < start + group_size; ++y) {
                cost += pc(order[x], order[y]);
            }
        }
    }
    return cost;
}

// First-improvement swap descent over students in different groups.
void repair(std::vector<std::size_t>& order, std::size_t group_size, const PairCounts& pc) {
    const std::size_t n = order.size();
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t p = 0; p < n; ++p) {
            const std::size_t gp = p / group_size;
            for (std::size_t r = (gp + 1) * group_size; r < n; ++r) {
                const std::size_t gr = r / group_size;
                const std::size_t x = order[p];
                const std::size_t y = order[r];
                long delta = 0;
                for (std::size_t k = gp * group_size; k < (gp + 1) * group_size; ++k) {
                    if (k != p) {
                        delta += static_cast<long>(pc(y, order[k])) - static_cast<long>(pc(x, order[k]));
                    }
                }
                for (std::size_t k = gr * group_size; k < (gr + 1) * group_size; ++k) {
                    if (k != r) {
                        delta += static_cast<long>(pc(x, order[k])) - static_cast<long>(pc(y, order[k]));
                    }
                }
                if (delta < 0) {
                    std::swap(order[p], order[r]);
                    improved = true;
                }
            }
        }
    }
}

} // namespace

GroupAssignment assign_groups(std::size_t n, std::size_t group_size, std::size_t rounds, std::uint64_t seed,
                              const AssignmentOptions& options) {
    if (n == 0) {
        throw Error(ErrorKind::EmptyPopulation, "cannot group an empty cohort");
    }
    if (group_size < 2 || rounds < 1) {
        throw Error(ErrorKind::Parameter, "group size must be >= 2 and rounds >= 1");
    }
    if (n % group_size != 0) {
        throw Error(ErrorKind::Divisibility, "group size " + std::to_string(group_size) +
                                                 " does not divide cohort size " + std::to_string(n));
    }

    GroupAssignment out;
    if ((group_size - 1) * rounds > n - 1) {
        out.warnings.push_back("group size " + std::to_string(group_size) + " with " + std::to_string(rounds) +
                               " rounds needs more distinct partners than a cohort of " + std::to_string(n) +
                               " provides; some pairings must repeat");
    }

    auto rng = make_engine(seed, Stream::Grouping);
    PairCounts pairs(n);
    std::vector<std::vector<std::size_t>> projects;
    projects.reserve(rounds * n / group_size);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t round = 0; round < rounds; ++round) {
        std::vector<std::size_t> best = order;
        std::size_t best_cost = std::numeric_limits<std::size_t>::max();
        std::size_t stall = 0;
        const std::size_t attempts = std::max<std::size_t>(options.max_attempts, 1);
        for (std::size_t attempt = 0; attempt < attempts && best_cost > 0; ++attempt) {
            std::shuffle(order.begin(), order.end(), rng);
            if (round > 0) {
                repair(order, group_size, pairs);
            }
            const std::size_t cost = partition_cost(order, group_size, pairs);
            if (cost < best_cost) {
                best_cost = cost;
                best = order;
                stall = 0;
            } else if (++stall >= options.stall_limit) {
                break;
            }
        }
        out.repeated_pairs += best_cost;
        for (std::size_t start = 0; start < n; start += group_size) {
            std::vector<std::size_t> group(best.begin() + static_cast<long>(start),
                                           best.begin() + static_cast<long>(start + group_size));
            std::sort(group.begin(), group.end());
            pairs.add_group(group);
            projects.push_back(std::move(group));
        }
    }

    if (out.repeated_pairs > 0) {
        out.warnings.push_back(std::to_string(out.repeated_pairs) + " repeated pairings remain after grouping");
    }
    out.matrix = ParticipationMatrix(n, std::move(projects));
    return out;
}

std::vector<std::size_t> distinct_partner_counts(const ParticipationMatrix& m) {
    std::vector<std::size_t> counts(m.num_students(), 0);
    std::vector<std::size_t> seen(m.num_students(), std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < m.num_students(); ++i) {
        for (std::size_t j : m.projects_of(i)) {
            for (std::size_t k : m.members(j)) {
                if (k != i && seen[k] != i) {
                    seen[k] = i;
                    ++counts[i];
                }
            }
        }
    }
    return counts;
}

GroupMarkVector group_marks(const StudentPopulation& pop, const ParticipationMatrix& m) {
    if (pop.size() != m.num_students()) {
        throw Error(ErrorKind::Shape, "population has " + std::to_string(pop.size()) +
                                          " students but the participation matrix has " +
                                          std::to_string(m.num_students()) + " columns");
    }
    GroupMarkVector w(m.num_projects(), 0.0);
    for (std::size_t j = 0; j < m.num_projects(); ++j) {
        double acc = 0.0;
        for (std::size_t i : m.members(j)) {
            acc += pop.ideal_marks[i];
        }
        w[j] = acc / static_cast<double>(m.project_size(j));
    }
    return w;
}

} // namespace groupmark
