// Acceptance suite: one PASS/FAIL line per criterion. `--only N` runs a
// single criterion; `--cli PATH` points at the groupmark binary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "groupmark/cohort.hpp"
#include "groupmark/harness.hpp"
#include "groupmark/metrics.hpp"
#include "groupmark/schemes.hpp"

using namespace groupmark;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Context {
    std::string cli;
    fs::path workdir;
};

constexpr std::size_t kReplicates = 200;

ExperimentConfig table_scenario() {
    ExperimentConfig cfg;
    cfg.n = 52;
    cfg.group_size = 4;
    cfg.rounds = 4;
    cfg.replicates = kReplicates;
    cfg.master_seed = 2024;
    cfg.params.noise.half_range = 16.0;
    return cfg;
}

const MeanErrors& find(const std::vector<MeanErrors>& all, Scheme s) {
    return *std::find_if(all.begin(), all.end(), [s](const MeanErrors& m) { return m.scheme == s; });
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

const std::vector<MeanErrors>& table_means() {
    static const std::vector<MeanErrors> means = mean_errors(run_scenario(table_scenario()));
    return means;
}

// Mean absolute errors reported for the six schemes in the comparison table.
struct Reference {
    Scheme scheme;
    double e_mean;
    double e_max;
};
constexpr Reference kTable[] = {
    {Scheme::SOPP, 5.5, 13.8}, {Scheme::RA, 3.7, 10.6}, {Scheme::MRA, 3.5, 11.3},
    {Scheme::NPA, 1.7, 4.5},   {Scheme::PR, 3.3, 12.3}, {Scheme::PiM, 1.3, 1.9},
};

Outcome table_reproduction(const Context&) {
    const auto& means = table_means();
    bool bands = true;
    std::ostringstream detail;
    for (const auto& ref : kTable) {
        const auto& m = find(means, ref.scheme);
        const bool in_band = std::abs(m.e_mean - ref.e_mean) <= 0.25 * ref.e_mean;
        bands &= in_band;
        detail << to_string(ref.scheme) << " e_mean=" << fmt("%.3f", m.e_mean) << " (ref " << ref.e_mean
               << (in_band ? ", in band" : ", OUT of band") << "; e_rms paper=" << fmt("%.3f", m.e_rms)
               << " standard=" << fmt("%.3f", m.e_rms_standard) << ") ";
    }
    const double pim = find(means, Scheme::PiM).e_mean;
    const double npa = find(means, Scheme::NPA).e_mean;
    const double middle = std::min({find(means, Scheme::RA).e_mean, find(means, Scheme::MRA).e_mean,
                                    find(means, Scheme::PR).e_mean});
    const double sopp = find(means, Scheme::SOPP).e_mean;
    const bool ordered = pim < npa && npa < middle && middle < sopp;
    detail << "| ordering PiM<NPA<min(RA,MRA,PR)<SOPP " << (ordered ? "holds" : "FAILS");
    return {bands && ordered, detail.str()};
}

Outcome pim_max_error(const Context&) {
    const auto& means = table_means();
    const double pim = find(means, Scheme::PiM).e_max;
    bool smallest = true;
    std::ostringstream detail;
    detail << "PiM e_max=" << fmt("%.3f", pim) << " (limit 3.0); others:";
    for (const auto& m : means) {
        if (m.scheme != Scheme::PiM) {
            smallest &= pim < m.e_max;
            detail << ' ' << to_string(m.scheme) << '=' << fmt("%.3f", m.e_max);
        }
    }
    return {pim < 3.0 && smallest, detail.str()};
}

// Rank of a square matrix by Gaussian elimination with partial pivoting.
std::size_t elimination_rank(DenseMatrix m) {
    const std::size_t n = m.rows();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < n && rank < n; ++c) {
        std::size_t piv = rank;
        for (std::size_t r = rank; r < n; ++r) {
            if (std::abs(m(r, c)) > std::abs(m(piv, c))) {
                piv = r;
            }
        }
        if (std::abs(m(piv, c)) < 1e-9) {
            continue;
        }
        for (std::size_t k = 0; k < n; ++k) {
            std::swap(m(rank, k), m(piv, k));
        }
        for (std::size_t r = rank + 1; r < n; ++r) {
            const double f = m(r, c) / m(rank, c);
            for (std::size_t k = c; k < n; ++k) {
                m(r, k) -= f * m(rank, k);
            }
        }
        ++rank;
    }
    return rank;
}

Outcome exact_recovery(const Context&) {
    std::mt19937_64 rng(314159);
    std::size_t fixtures = 0;
    double worst = 0.0;
    while (fixtures < 100) {
        const std::size_t n = 4 + rng() % 13;
        std::vector<std::vector<std::size_t>> rows(n);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                if (i == j || rng() % 3 == 0) {
                    rows[j].push_back(i);
                }
            }
        }
        const ParticipationMatrix m(n, rows);
        if (elimination_rank(m.row_normalised()) != n) {
            continue;
        }
        const auto pop = generate_population(n, 60.0, 12.0, rng());
        const auto x = pseudoinverse_marking(group_marks(pop, m), m).assigned;
        for (std::size_t i = 0; i < n; ++i) {
            worst = std::max(worst, std::abs(x[i] - pop.ideal_marks[i]));
        }
        ++fixtures;
    }
    return {worst < 1e-8, "100 invertible fixtures, max |x-q| = " + fmt("%.3e", worst) + " (limit 1e-8)"};
}

Outcome sopp_regression(const Context&) {
    auto cfg = table_scenario();
    cfg.replicates = 100;
    cfg.schemes = {Scheme::SOPP};
    const auto result = run_scenario(cfg);
    std::size_t inside = 0;
    double lo = 1e9;
    double hi = -1e9;
    for (const auto& rep : result.replicates) {
        const double slope = bias_slope(rep.population.ideal_marks, rep.schemes[0].assigned);
        lo = std::min(lo, slope);
        hi = std::max(hi, slope);
        inside += slope > 0.0 && slope < 1.0 ? 1 : 0;
    }
    return {inside >= 99, std::to_string(inside) + "/100 slopes in (0,1); range [" + fmt("%.3f", lo) + ", " +
                              fmt("%.3f", hi) + "]"};
}

Outcome npa_group_trend(const Context&) {
    auto cfg = table_scenario();
    cfg.n = 56;
    cfg.schemes = {Scheme::NPA};
    auto at = [&](std::size_t m) {
        auto c = cfg;
        c.group_size = m;
        c.rounds = m;
        return mean_errors(run_scenario(c)).front().e_mean;
    };
    const double four = at(4);
    const double eight = at(8);
    return {eight < four, "N=56 NPA e_mean m=p=4: " + fmt("%.3f", four) + ", m=p=8: " + fmt("%.3f", eight)};
}

Outcome pim_population_trend(const Context&) {
    auto cfg = table_scenario();
    cfg.schemes = {Scheme::PiM};
    auto at = [&](std::size_t n) {
        auto c = cfg;
        c.n = n;
        return mean_errors(run_scenario(c)).front().e_mean;
    };
    const double n28 = at(28);
    const double n52 = at(52);
    const double n104 = at(104);
    return {n104 < n52 && n52 < n28, "PiM e_mean N=28: " + fmt("%.3f", n28) + ", N=52: " + fmt("%.3f", n52) +
                                         ", N=104: " + fmt("%.3f", n104)};
}

Outcome worked_examples(const Context&) {
    const ParticipationMatrix group(4, {{0, 1, 2, 3}});
    const GroupMarkVector w{60.0};
    const auto ra = reflexive_accounts(w, group, {{80, 80, 80, 0}}, 0.7);
    const bool ra_ok = ra.assigned[0] == 68.0 && ra.assigned[3] == 42.0;

    const auto mra = mark_adjusted_reflexive(w, group, {{80, 80, 80, 0}});
    const bool mra_ok = std::abs(mra.assigned[0] - 80.0) < 1e-12 && std::abs(mra.assigned[1] - 80.0) < 1e-12 &&
                        std::abs(mra.assigned[2] - 80.0) < 1e-12 && mra.assigned[3] == 0.0;

    const auto effort = mark_adjusted_reflexive(w, group, {{80, 80, 80, 51}});
    const bool effort_ok = std::abs(effort.assigned[3] - 42.0) <= 0.1;

    std::ostringstream detail;
    detail << "RA engaged=" << fmt("%.6g", ra.assigned[0]) << " (expect 68) defector=" << fmt("%.6g", ra.assigned[3])
           << " (expect 42); MRA " << fmt("%.6g", mra.assigned[0]) << '/' << fmt("%.6g", mra.assigned[1]) << '/'
           << fmt("%.6g", mra.assigned[2]) << '/' << fmt("%.6g", mra.assigned[3]) << " (expect 80/80/80/0); MRA y=51 -> "
           << fmt("%.4f", effort.assigned[3]) << " (expect 42 +/- 0.1)";
    return {ra_ok && mra_ok && effort_ok, detail.str()};
}

Outcome conservation(const Context&) {
    std::mt19937_64 rng(271828);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t size = 2 + rng() % 11;
        std::vector<std::size_t> all(size);
        for (std::size_t i = 0; i < size; ++i) {
            all[i] = i;
        }
        const ParticipationMatrix m(size, {all});
        const auto pop = generate_population(size, 60.0, 12.0, rng());
        const auto w = group_marks(pop, m);
        const auto bundle = simulate_assessments(pop, m, NoiseModel{}, {true, true, false}, rng());
        const double pool = w[0] * static_cast<double>(size);
        for (const auto& r :
             {mark_adjusted_reflexive(w, m, *bundle.reflexive), normalised_peer_assessment(w, m, *bundle.peer)}) {
            double total = 0.0;
            for (const auto& pm : r.per_project) {
                total += pm.mark;
            }
            worst = std::max(worst, std::abs(total - pool) / std::abs(pool));
        }
    }
    return {worst <= 1e-9, "10^4 projects, max relative pool deviation " + fmt("%.3e", worst) + " (limit 1e-9)"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism(const Context& ctx) {
    if (ctx.cli.empty()) {
        return {false, "no --cli binary given"};
    }
    const fs::path root = ctx.workdir / "determinism";
    fs::remove_all(root);
    fs::create_directories(root);

    auto run = [&](const std::string& args) {
        const std::string cmd = "\"" + ctx.cli + "\" " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    bool ok = true;
    std::vector<std::string> compared;
    for (int pass = 0; pass < 2; ++pass) {
        const fs::path d = root / ("run" + std::to_string(pass));
        const std::string common = " --replicates 2 --seed 9";
        ok &= run("scenario" + common + " --out \"" + (d / "scenario").string() + "\" --export-cohort \"" +
                  (d / "cohort").string() + "\"");
        ok &= run("sweep-m --students 24" + common + " --m-values 2,4,6 --out \"" + (d / "sweep_m.csv").string() + "\"");
        ok &= run("sweep-n" + common + " --n-values 16,28 --out \"" + (d / "sweep_n.csv").string() + "\"");
        for (const char* scheme : {"SOPP", "RA", "MRA", "NPA", "PR", "PiM"}) {
            ok &= run(std::string("mark --cohort \"") + (root / "run0" / "cohort").string() + "\" --scheme " + scheme +
                      " --out \"" + (d / (std::string("mark_") + scheme + ".csv")).string() + "\"");
        }
    }
    if (!ok) {
        return {false, "a CLI invocation failed"};
    }
    std::size_t files = 0;
    for (const auto& entry : fs::recursive_directory_iterator(root / "run0")) {
        if (!entry.is_regular_file()) {
            continue;
        }
        const auto rel = fs::relative(entry.path(), root / "run0");
        const auto twin = root / "run1" / rel;
        if (!fs::exists(twin) || slurp(entry.path()) != slurp(twin)) {
            return {false, "output differs: " + rel.string()};
        }
        ++files;
    }
    return {files >= 13, std::to_string(files) + " output files byte-identical across two runs"};
}

Outcome ranking_figure(const Context&) {
    const double a = 0.25;
    const double b = 1.0;
    // A: B > C > D; B: C > A > D; C: B > A > D; D: B > A > C (A..D = 0..3).
    const ProjectRankings rankings{{1, 2, 3}, {2, 0, 3}, {1, 0, 3}, {1, 0, 2}};
    const std::vector<std::size_t> members{0, 1, 2, 3};
    const auto adj = ranking_matrix(members, rankings, a, b);
    const double expected[4][4] = {
        {0, 2 * a, a + b, 2 * b}, {2 * b, 0, 2 * b, 2 * b}, {a + b, 2 * a, 0, 2 * b}, {2 * a, 2 * a, 2 * a, 0}};
    bool ok = true;
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            ok &= adj(r, c) == expected[r][c];
        }
    }
    return {ok, ok ? "adjacency equals {0, 2a, a+b, 2b} pattern entrywise" : "adjacency mismatch"};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome(const Context&)> run;
};

} // namespace

int main(int argc, char** argv) {
    Context ctx;
    ctx.workdir = fs::temp_directory_path() / "groupmark_acceptance";
    int only = 0;
    for (int k = 1; k < argc; ++k) {
        const std::string arg = argv[k];
        if (arg == "--only" && k + 1 < argc) {
            only = std::atoi(argv[++k]);
        } else if (arg == "--cli" && k + 1 < argc) {
            ctx.cli = argv[++k];
        } else if (arg == "--workdir" && k + 1 < argc) {
            ctx.workdir = argv[++k];
        }
    }

    const std::vector<Criterion> criteria{
        {1, "table reproduction (e_mean bands and ordering)", table_reproduction},
        {2, "PiM maximum error", pim_max_error},
        {3, "exact recovery on invertible designs", exact_recovery},
        {4, "SOPP regression to the mean", sopp_regression},
        {5, "NPA improves with group size", npa_group_trend},
        {6, "PiM improves with cohort size", pim_population_trend},
        {7, "worked defector examples", worked_examples},
        {8, "MRA/NPA mark conservation", conservation},
        {9, "CLI determinism", cli_determinism},
        {10, "peer-ranking figure matrix", ranking_figure},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run(ctx);
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s -- %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                    out.detail.c_str(), secs);
        failures += out.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
