#include <doctest.h>

#include <sstream>
#include <string>

#include "groupmark/error.hpp"
#include "groupmark/harness.hpp"

using namespace groupmark;

namespace {

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) {
        n += c == '\n' ? 1 : 0;
    }
    return n;
}

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.n = 24;
    cfg.group_size = 4;
    cfg.rounds = 4;
    cfg.replicates = 3;
    cfg.master_seed = 77;
    return cfg;
}

} // namespace

TEST_CASE("scenario output is deterministic and independent of thread count") {
    auto cfg = small_config();
    std::ostringstream a_summary, a_scatter, b_summary, b_scatter;
    const auto a = run_scenario(cfg);
    write_summary_csv(a_summary, a);
    write_scatter_csv(a_scatter, a);

    cfg.threads = 3;
    const auto b = run_scenario(cfg);
    write_summary_csv(b_summary, b);
    write_scatter_csv(b_scatter, b);

    CHECK(a_summary.str() == b_summary.str());
    CHECK(a_scatter.str() == b_scatter.str());

    // Header plus replicates x schemes x metrics, and replicates x schemes x N.
    CHECK(count_lines(a_summary.str()) == 1 + 3 * 6 * 3);
    CHECK(count_lines(a_scatter.str()) == 1 + 3 * 6 * 24);
    CHECK(a_summary.str().rfind("replicate,scheme,metric,value\n", 0) == 0);

    cfg.master_seed = 78;
    std::ostringstream c_summary;
    write_summary_csv(c_summary, run_scenario(cfg));
    CHECK(c_summary.str() != a_summary.str());
}

TEST_CASE("noiseless constant population gives zero error") {
    auto cfg = small_config();
    cfg.schemes = {Scheme::SOPP, Scheme::RA, Scheme::MRA, Scheme::NPA, Scheme::PiM};
    cfg.sd = 0.0;
    cfg.params.noise.half_range = 0.0;
    const auto result = run_scenario(cfg);
    for (const auto& m : mean_errors(result)) {
        CHECK(m.e_max == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(m.e_mean == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("failing replicates flush the completed prefix") {
    auto cfg = small_config();
    cfg.group_size = 5;  // does not divide 24
    std::size_t flushed = 99;
    try {
        run_scenario(cfg, [&](const ScenarioResult& partial) { flushed = partial.replicates.size(); });
        FAIL("expected divisibility error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Divisibility);
    }
    CHECK(flushed == 0);

    cfg = small_config();
    cfg.replicates = 0;
    CHECK_THROWS_AS(run_scenario(cfg), Error);
}

TEST_CASE("group size sweep") {
    auto cfg = small_config();
    cfg.replicates = 2;
    cfg.schemes = {Scheme::SOPP, Scheme::NPA};
    const auto sweep = sweep_group_size(cfg, {2, 4, 5, 24});
    CHECK(sweep.values == std::vector<std::size_t>{2, 4, 24});
    CHECK(sweep.diagnostics.size() == 1);
    CHECK(sweep.points[0].config.rounds == 2);
    CHECK(sweep.points[2].config.rounds == 1);

    // A single group spanning everyone hands each student the cohort mean.
    for (const auto& rep : sweep.points[2].replicates) {
        double mean = 0.0;
        for (double q : rep.population.ideal_marks) {
            mean += q;
        }
        mean /= 24.0;
        for (double x : rep.schemes[0].assigned) {
            CHECK(x == doctest::Approx(mean));
        }
    }

    std::ostringstream out;
    write_sweep_csv(out, sweep);
    CHECK(out.str().rfind("scheme,m,replicate,metric,value\n", 0) == 0);
    CHECK(count_lines(out.str()) == 1 + 3 * 2 * 2 * 3);
}

TEST_CASE("population sweep") {
    auto cfg = small_config();
    cfg.replicates = 2;
    cfg.schemes = {Scheme::SOPP, Scheme::PiM};
    const auto sweep = sweep_population(cfg, {4, 10, 16});
    CHECK(sweep.values == std::vector<std::size_t>{4, 16});
    CHECK(sweep.diagnostics.size() == 1);

    // One group per round: every row of Q is identical, so PiM collapses to SOPP.
    for (const auto& rep : sweep.points[0].replicates) {
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(rep.schemes[1].assigned[i] == doctest::Approx(rep.schemes[0].assigned[i]).epsilon(1e-10));
        }
    }
    std::ostringstream out;
    write_sweep_csv(out, sweep);
    CHECK(out.str().rfind("scheme,n,replicate,metric,value\n", 0) == 0);
}

TEST_CASE("rms convention selects the reported e_rms") {
    auto cfg = small_config();
    cfg.replicates = 1;
    cfg.schemes = {Scheme::SOPP};
    std::ostringstream paper, standard;
    write_summary_csv(paper, run_scenario(cfg));
    cfg.rms = RmsConvention::Standard;
    write_summary_csv(standard, run_scenario(cfg));
    CHECK(paper.str() != standard.str());
}
