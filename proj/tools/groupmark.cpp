// Command-line front end: synthetic experiments and marking of real cohorts.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "groupmark/cohort.hpp"
#include "groupmark/csv.hpp"
#include "groupmark/error.hpp"
#include "groupmark/harness.hpp"

namespace fs = std::filesystem;
using namespace groupmark;

namespace {

struct CommonOptions {
    ExperimentConfig cfg;
    std::string schemes = "all";
    std::string rms = "paper";
    std::string out;
};

void add_experiment_options(CLI::App& cmd, CommonOptions& o) {
    cmd.add_option("--students", o.cfg.n, "Cohort size N")->capture_default_str();
    cmd.add_option("--group-size", o.cfg.group_size, "Students per project")->capture_default_str();
    cmd.add_option("--rounds", o.cfg.rounds, "Projects per student")->capture_default_str();
    cmd.add_option("--mean", o.cfg.mean, "Mean ideal mark")->capture_default_str();
    cmd.add_option("--sd", o.cfg.sd, "Standard deviation of ideal marks")->capture_default_str();
    cmd.add_option("--schemes", o.schemes, "Comma-separated schemes or 'all'")->capture_default_str();
    cmd.add_option("--replicates", o.cfg.replicates, "Monte-Carlo replicates")->capture_default_str();
    cmd.add_option("--seed", o.cfg.master_seed, "Master seed")->capture_default_str();
    cmd.add_option("--threads", o.cfg.threads, "Worker threads")->capture_default_str();
    cmd.add_option("--noise-half-range", o.cfg.params.noise.half_range, "Assessment noise half-range")
        ->capture_default_str();
    cmd.add_option("--ra-alpha", o.cfg.params.ra_alpha, "RA group-mark weight")->capture_default_str();
    cmd.add_option("--pr-a", o.cfg.params.pr_a, "PR weight for 'ranked below'")->capture_default_str();
    cmd.add_option("--pr-b", o.cfg.params.pr_b, "PR weight for 'ranked above'")->capture_default_str();
    cmd.add_option("--pr-alpha", o.cfg.params.pr_alpha, "PR group-mark weight")->capture_default_str();
    cmd.add_option("--rms-convention", o.rms, "e_rms denominator: paper (n^2) or standard (n)")
        ->check(CLI::IsMember({"paper", "standard"}))
        ->capture_default_str();
}

std::vector<Scheme> parse_schemes(const std::string& list) {
    if (list == "all") {
        return {std::begin(kAllSchemes), std::end(kAllSchemes)};
    }
    std::vector<Scheme> out;
    std::set<Scheme> seen;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto comma = list.find(',', start);
        const auto name = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto scheme = parse_scheme(name);
        if (!scheme) {
            throw Error(ErrorKind::Parameter, "unknown scheme '" + name + "'");
        }
        if (seen.insert(*scheme).second) {
            out.push_back(*scheme);
        }
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

void finalise(CommonOptions& o) {
    o.cfg.schemes = parse_schemes(o.schemes);
    o.cfg.rms = o.rms == "standard" ? RmsConvention::Standard : RmsConvention::Paper;
    o.cfg.validate();
}

void warn(const std::string& message) {
    std::cerr << nlohmann::json{{"warning", message}}.dump() << '\n';
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::Input, "cannot write " + path.string());
    }
    return out;
}

void write_scenario_files(const fs::path& dir, const ScenarioResult& result) {
    fs::create_directories(dir);
    auto summary = open_output(dir / "summary.csv");
    write_summary_csv(summary, result);
    auto scatter = open_output(dir / "scatter.csv");
    write_scatter_csv(scatter, result);
}

void print_means(const ScenarioResult& result) {
    std::printf("%-5s %10s %10s %10s\n", "scheme", "e_mean", "e_max", "e_rms");
    for (const auto& m : mean_errors(result)) {
        const double rms = result.config.rms == RmsConvention::Paper ? m.e_rms : m.e_rms_standard;
        std::printf("%-6s %10.4f %10.4f %10.4f\n", std::string(to_string(m.scheme)).c_str(), m.e_mean, m.e_max, rms);
    }
}

void report_warnings(const ScenarioResult& result) {
    std::set<std::string> seen;
    for (const auto& rep : result.replicates) {
        for (const auto& w : rep.warnings) {
            if (seen.insert(w).second) {
                warn(w);
            }
        }
    }
}

void emit_sweep(const SweepResult& sweep, const std::string& out) {
    for (const auto& d : sweep.diagnostics) {
        warn(d);
    }
    if (out.empty()) {
        write_sweep_csv(std::cout, sweep);
    } else {
        auto file = open_output(out);
        write_sweep_csv(file, sweep);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Individualised marks from group-project marks"};
    app.require_subcommand(1);

    CommonOptions scenario_opts;
    std::string export_dir;
    auto* scenario = app.add_subcommand("scenario", "Run one Monte-Carlo scenario");
    add_experiment_options(*scenario, scenario_opts);
    scenario->add_option("--out", scenario_opts.out, "Directory for summary.csv and scatter.csv")->required();
    scenario->add_option("--export-cohort", export_dir, "Also export replicate 0 as cohort CSVs");

    CommonOptions sweep_m_opts;
    std::vector<std::size_t> m_values{2, 4, 6, 8};
    auto* sweep_m = app.add_subcommand("sweep-m", "Sweep group size with rounds equal to group size");
    add_experiment_options(*sweep_m, sweep_m_opts);
    sweep_m->add_option("--m-values", m_values, "Group sizes")->delimiter(',')->capture_default_str();
    sweep_m->add_option("--out", sweep_m_opts.out, "Output CSV (stdout when omitted)");

    CommonOptions sweep_n_opts;
    std::vector<std::size_t> n_values{28, 52, 104};
    auto* sweep_n = app.add_subcommand("sweep-n", "Sweep cohort size at fixed group size and rounds");
    add_experiment_options(*sweep_n, sweep_n_opts);
    sweep_n->add_option("--n-values", n_values, "Cohort sizes")->delimiter(',')->capture_default_str();
    sweep_n->add_option("--out", sweep_n_opts.out, "Output CSV (stdout when omitted)");

    CommonOptions mark_opts;
    std::string cohort_dir;
    std::string scheme_name;
    auto* mark = app.add_subcommand("mark", "Apply one scheme to cohort CSV files");
    mark->add_option("--cohort", cohort_dir, "Directory with memberships.csv, group_marks.csv, ...")->required();
    mark->add_option("--scheme", scheme_name, "SOPP, RA, MRA, NPA, PR or PiM")->required();
    mark->add_option("--ra-alpha", mark_opts.cfg.params.ra_alpha, "RA group-mark weight")->capture_default_str();
    mark->add_option("--pr-a", mark_opts.cfg.params.pr_a, "PR weight for 'ranked below'")->capture_default_str();
    mark->add_option("--pr-b", mark_opts.cfg.params.pr_b, "PR weight for 'ranked above'")->capture_default_str();
    mark->add_option("--pr-alpha", mark_opts.cfg.params.pr_alpha, "PR group-mark weight")->capture_default_str();
    mark->add_option("--out", mark_opts.out, "Output CSV (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (scenario->parsed()) {
            finalise(scenario_opts);
            const fs::path dir = scenario_opts.out;
            const auto result = run_scenario(scenario_opts.cfg, [&](const ScenarioResult& partial) {
                write_scenario_files(dir, partial);
            });
            report_warnings(result);
            write_scenario_files(dir, result);
            if (!export_dir.empty()) {
                const auto& rep = result.replicates.front();
                write_cohort(export_dir, export_cohort(rep.matrix, rep.group_marks, rep.assessments));
            }
            print_means(result);
        } else if (sweep_m->parsed()) {
            finalise(sweep_m_opts);
            emit_sweep(sweep_group_size(sweep_m_opts.cfg, m_values), sweep_m_opts.out);
        } else if (sweep_n->parsed()) {
            finalise(sweep_n_opts);
            emit_sweep(sweep_population(sweep_n_opts.cfg, n_values), sweep_n_opts.out);
        } else if (mark->parsed()) {
            const auto scheme = parse_scheme(scheme_name);
            if (!scheme) {
                throw Error(ErrorKind::Parameter, "unknown scheme '" + scheme_name + "'");
            }
            const auto marks = ingest_and_mark(read_cohort(cohort_dir), *scheme, mark_opts.cfg.params);
            for (const auto& d : marks.result.diagnostics) {
                warn(d);
            }
            if (mark_opts.out.empty()) {
                write_marks_csv(std::cout, marks);
            } else {
                auto file = open_output(mark_opts.out);
                write_marks_csv(file, marks);
            }
        }
    } catch (const Error& e) {
        std::cerr << nlohmann::json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
        return 1;
    }
    return 0;
}
