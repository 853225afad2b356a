#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "groupmark/cohort.hpp"
#include "groupmark/error.hpp"
#include "groupmark/participation.hpp"

using namespace groupmark;

namespace {

// Four students in four pairs: {1,2}, {3,4}, {1,3}, {2,4}.
DenseMatrix example_matrix() {
    return DenseMatrix(4, 4, {1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 1, 0, 0, 1, 0, 1});
}

// True when some relabelling of students and reordering of projects maps `m` onto `target`.
bool equivalent_up_to_labels(const ParticipationMatrix& m, const ParticipationMatrix& target) {
    if (m.num_students() != target.num_students() || m.num_projects() != target.num_projects()) {
        return false;
    }
    std::multiset<std::vector<std::size_t>> goal;
    for (std::size_t j = 0; j < target.num_projects(); ++j) {
        goal.emplace(target.members(j).begin(), target.members(j).end());
    }
    std::vector<std::size_t> perm(m.num_students());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
        std::multiset<std::vector<std::size_t>> mapped;
        for (std::size_t j = 0; j < m.num_projects(); ++j) {
            std::vector<std::size_t> row;
            for (std::size_t i : m.members(j)) {
                row.push_back(perm[i]);
            }
            std::sort(row.begin(), row.end());
            mapped.insert(row);
        }
        if (mapped == goal) {
            return true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// Distinct partners from the dense incidence matrix.
std::vector<std::size_t> count_partners_dense(const ParticipationMatrix& pm) {
    const DenseMatrix m = pm.dense();
    std::vector<std::size_t> out(m.cols(), 0);
    for (std::size_t i = 0; i < m.cols(); ++i) {
        for (std::size_t k = 0; k < m.cols(); ++k) {
            if (k == i) {
                continue;
            }
            bool together = false;
            for (std::size_t j = 0; j < m.rows(); ++j) {
                together |= m(j, i) == 1.0 && m(j, k) == 1.0;
            }
            out[i] += together ? 1 : 0;
        }
    }
    return out;
}

} // namespace

TEST_CASE("four students in two rounds of pairs reproduce the illustration design") {
    const auto target = ParticipationMatrix::from_dense(example_matrix());
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = assign_groups(4, 2, 2, seed);
        CHECK(g.matrix.num_projects() == 4);
        CHECK(g.repeated_pairs == 0);
        CHECK(equivalent_up_to_labels(g.matrix, target));
    }
}

TEST_CASE("one group containing everyone") {
    const auto g = assign_groups(4, 4, 1, 9);
    REQUIRE(g.matrix.num_projects() == 1);
    const DenseMatrix dense = g.matrix.dense();
    CHECK(dense.data().size() == 4);
    for (double v : dense.data()) {
        CHECK(v == 1.0);
    }
    CHECK(g.warnings.empty());
}

TEST_CASE("52 students, groups of four, four rounds") {
    std::size_t students = 0;
    std::size_t full = 0;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto g = assign_groups(52, 4, 4, seed);
        const auto& m = g.matrix;
        REQUIRE(m.num_projects() == 52);
        std::size_t total = 0;
        for (std::size_t j = 0; j < m.num_projects(); ++j) {
            CHECK(m.project_size(j) == 4);
            total += m.project_size(j);
        }
        CHECK(total == 52 * 4);
        // One project per student per round.
        for (std::size_t round = 0; round < 4; ++round) {
            std::vector<int> seen(52, 0);
            for (std::size_t j = round * 13; j < (round + 1) * 13; ++j) {
                for (std::size_t i : m.members(j)) {
                    ++seen[i];
                }
            }
            CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
        }
        const auto partners = count_partners_dense(m);
        CHECK(partners == distinct_partner_counts(m));
        students += partners.size();
        full += static_cast<std::size_t>(std::count(partners.begin(), partners.end(), std::size_t{12}));
    }
    CHECK(static_cast<double>(full) >= 0.95 * static_cast<double>(students));
}

TEST_CASE("assignment is seed deterministic") {
    CHECK(assign_groups(52, 4, 4, 3).matrix == assign_groups(52, 4, 4, 3).matrix);
    CHECK_FALSE(assign_groups(52, 4, 4, 3).matrix == assign_groups(52, 4, 4, 4).matrix);
}

TEST_CASE("assignment errors and warnings") {
    try {
        assign_groups(10, 4, 2, 1);
        FAIL("expected divisibility error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Divisibility);
    }
    CHECK_THROWS_AS(assign_groups(10, 1, 2, 1), Error);
    CHECK_THROWS_AS(assign_groups(10, 2, 0, 1), Error);

    const auto crowded = assign_groups(8, 4, 4, 1);
    CHECK_FALSE(crowded.warnings.empty());
    CHECK(crowded.matrix.num_projects() == 8);
}

TEST_CASE("participation matrix validation") {
    CHECK_THROWS_AS(ParticipationMatrix(3, {{0, 1}}), Error);       // student 2 uncovered
    CHECK_THROWS_AS(ParticipationMatrix(2, {{0, 1}, {}}), Error);   // empty project
    CHECK_THROWS_AS(ParticipationMatrix(2, {{0, 0, 1}}), Error);    // duplicate
    CHECK_THROWS_AS(ParticipationMatrix(2, {{0, 2}}), Error);       // out of range
    CHECK_THROWS_AS(ParticipationMatrix::from_dense(DenseMatrix(1, 2, {1.0, 0.5})), Error);

    const auto m = ParticipationMatrix::from_dense(example_matrix());
    CHECK(m.projects_per_student(0) == 2);
    CHECK(m.local_index(2, 2) == 1);
    CHECK(m.contains(3, 3));
    CHECK_FALSE(m.contains(3, 0));
}

TEST_CASE("group marks examples") {
    const auto single = ParticipationMatrix(4, {{0, 1, 2, 3}});
    CHECK(group_marks(population_from_marks({80, 80, 80, 0}), single) == GroupMarkVector{60.0});

    const auto m = ParticipationMatrix::from_dense(example_matrix());
    CHECK(group_marks(population_from_marks({40, 50, 60, 70}), m) == GroupMarkVector{45, 65, 50, 60});
    CHECK(group_marks(population_from_marks({7, 7, 7, 7}), m) == GroupMarkVector{7, 7, 7, 7});

    try {
        group_marks(population_from_marks({1, 2, 3}), m);
        FAIL("expected shape error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Shape);
    }
}

TEST_CASE("group marks are permutation equivariant and lie in the convex hull") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto pop = generate_population(24, 60.0, 12.0, seed);
        const auto g = assign_groups(24, 3, 3, seed);
        const auto w = group_marks(pop, g.matrix);
        const auto [lo, hi] = std::minmax_element(pop.ideal_marks.begin(), pop.ideal_marks.end());
        for (double x : w) {
            CHECK(x >= *lo);
            CHECK(x <= *hi);
        }

        std::vector<std::vector<std::size_t>> reversed;
        for (std::size_t j = g.matrix.num_projects(); j-- > 0;) {
            reversed.emplace_back(g.matrix.members(j).begin(), g.matrix.members(j).end());
        }
        const auto w_rev = group_marks(pop, ParticipationMatrix(24, reversed));
        CHECK(std::equal(w.begin(), w.end(), w_rev.rbegin()));
    }
}

TEST_CASE("membership CSV round trip") {
    const auto g = assign_groups(12, 3, 2, 5);
    std::stringstream buf;
    write_memberships_csv(buf, g.matrix);
    const std::string text = buf.str();
    CHECK(text.rfind("project_id,student_id\n", 0) == 0);
    CHECK(read_memberships_csv(buf) == g.matrix);
}
