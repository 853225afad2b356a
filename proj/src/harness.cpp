#include "groupmark/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <ostream>
#include <thread>

#include "groupmark/csv.hpp"
#include "groupmark/error.hpp"

namespace groupmark {

void ExperimentConfig::validate() const {
    if (replicates < 1) {
        throw Error(ErrorKind::Parameter, "replicates must be >= 1");
    }
    if (schemes.empty()) {
        throw Error(ErrorKind::Parameter, "no schemes selected");
    }
    params.validate();
}

ReplicateOutcome run_replicate(const ExperimentConfig& cfg, std::size_t replicate) {
    ReplicateOutcome out;
    out.replicate = replicate;
    out.seed = derive_seed(cfg.master_seed, replicate);
    out.population = generate_population(cfg.n, cfg.mean, cfg.sd, out.seed);

    auto grouping = assign_groups(cfg.n, cfg.group_size, cfg.rounds, out.seed, cfg.assignment);
    out.matrix = std::move(grouping.matrix);
    out.warnings = std::move(grouping.warnings);
    out.group_marks = group_marks(out.population, out.matrix);

    AssessmentSelection need{false, false, false};
    for (Scheme s : cfg.schemes) {
        const auto r = requirements(s);
        need.reflexive |= r.reflexive;
        need.peer |= r.peer;
        need.rankings |= r.rankings;
    }
    out.assessments = simulate_assessments(out.population, out.matrix, cfg.params.noise, need, out.seed);

    for (Scheme s : cfg.schemes) {
        MarkResult r = apply_scheme(s, out.group_marks, out.matrix, out.assessments, cfg.params);
        SchemeOutcome so;
        so.scheme = s;
        so.errors = error_summary(out.population.ideal_marks, r.assigned, static_cast<std::int64_t>(replicate));
        so.assigned = std::move(r.assigned);
        so.diagnostics = std::move(r.diagnostics);
        out.schemes.push_back(std::move(so));
    }
    return out;
}

ScenarioResult run_scenario(const ExperimentConfig& cfg,
                            const std::function<void(const ScenarioResult&)>& on_partial) {
    cfg.validate();
    std::vector<std::optional<ReplicateOutcome>> slots(cfg.replicates);
    std::vector<std::exception_ptr> errors(cfg.replicates);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r = next++; r < cfg.replicates; r = next++) {
            try {
                slots[r] = run_replicate(cfg, r);
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(cfg.threads, 1, cfg.replicates);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }

    ScenarioResult result;
    result.config = cfg;
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
        if (errors[r]) {
            if (on_partial) {
                on_partial(result);
            }
            std::rethrow_exception(errors[r]);
        }
        result.replicates.push_back(std::move(*slots[r]));
    }
    return result;
}

std::vector<MeanErrors> mean_errors(const ScenarioResult& result) {
    std::vector<MeanErrors> out;
    for (std::size_t k = 0; k < result.config.schemes.size(); ++k) {
        MeanErrors m;
        m.scheme = result.config.schemes[k];
        for (const auto& rep : result.replicates) {
            const auto& e = rep.schemes[k].errors;
            m.e_max += e.e_max;
            m.e_mean += e.e_mean;
            m.e_rms += e.e_rms;
            m.e_rms_standard += e.e_rms_standard;
        }
        const auto count = static_cast<double>(std::max<std::size_t>(result.replicates.size(), 1));
        m.e_max /= count;
        m.e_mean /= count;
        m.e_rms /= count;
        m.e_rms_standard /= count;
        out.push_back(m);
    }
    return out;
}

namespace {

void write_metric_rows(std::ostream& out, const std::string& prefix, const ReplicateOutcome& rep,
                       const SchemeOutcome& so, RmsConvention rms) {
    const std::string lead = prefix + std::to_string(rep.replicate) + ",";
    out << lead << "e_max," << csv::format(so.errors.e_max) << '\n';
    out << lead << "e_mean," << csv::format(so.errors.e_mean) << '\n';
    out << lead << "e_rms," << csv::format(so.errors.rms(rms)) << '\n';
}

} // namespace

void write_summary_csv(std::ostream& out, const ScenarioResult& result) {
    out << "replicate,scheme,metric,value\n";
    for (const auto& rep : result.replicates) {
        for (const auto& so : rep.schemes) {
            const std::string lead = std::to_string(rep.replicate) + "," + std::string(to_string(so.scheme)) + ",";
            out << lead << "e_max," << csv::format(so.errors.e_max) << '\n';
            out << lead << "e_mean," << csv::format(so.errors.e_mean) << '\n';
            out << lead << "e_rms," << csv::format(so.errors.rms(result.config.rms)) << '\n';
        }
    }
}

void write_scatter_csv(std::ostream& out, const ScenarioResult& result) {
    out << "replicate,scheme,student,ideal,assigned\n";
    for (const auto& rep : result.replicates) {
        for (const auto& so : rep.schemes) {
            for (std::size_t i = 0; i < so.assigned.size(); ++i) {
                out << rep.replicate << ',' << to_string(so.scheme) << ',' << i << ','
                    << csv::format(rep.population.ideal_marks[i]) << ',' << csv::format(so.assigned[i]) << '\n';
            }
        }
    }
}

SweepResult sweep_group_size(const ExperimentConfig& cfg, const std::vector<std::size_t>& m_values) {
    SweepResult sweep;
    sweep.axis = "m";
    for (std::size_t m : m_values) {
        if (m < 2 || cfg.n % m != 0) {
            sweep.diagnostics.push_back("skipping m=" + std::to_string(m) + ": does not divide n=" +
                                        std::to_string(cfg.n) + " into groups of at least two");
            continue;
        }
        ExperimentConfig point = cfg;
        point.group_size = m;
        point.rounds = m == cfg.n ? 1 : m;
        sweep.values.push_back(m);
        sweep.points.push_back(run_scenario(point));
    }
    return sweep;
}

SweepResult sweep_population(const ExperimentConfig& cfg, const std::vector<std::size_t>& n_values) {
    SweepResult sweep;
    sweep.axis = "n";
    for (std::size_t n : n_values) {
        if (n == 0 || n % cfg.group_size != 0) {
            sweep.diagnostics.push_back("skipping n=" + std::to_string(n) + ": not divisible by group size " +
                                        std::to_string(cfg.group_size));
            continue;
        }
        ExperimentConfig point = cfg;
        point.n = n;
        sweep.values.push_back(n);
        sweep.points.push_back(run_scenario(point));
    }
    return sweep;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
    out << "scheme," << sweep.axis << ",replicate,metric,value\n";
    for (std::size_t p = 0; p < sweep.points.size(); ++p) {
        const auto& point = sweep.points[p];
        for (std::size_t k = 0; k < point.config.schemes.size(); ++k) {
            const std::string prefix =
                std::string(to_string(point.config.schemes[k])) + "," + std::to_string(sweep.values[p]) + ",";
            for (const auto& rep : point.replicates) {
                write_metric_rows(out, prefix, rep, rep.schemes[k], point.config.rms);
            }
        }
    }
}

} // namespace groupmark
