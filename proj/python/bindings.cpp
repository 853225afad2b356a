#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "groupmark/error.hpp"
#include "groupmark/harness.hpp"
#include "groupmark/metrics.hpp"
#include "groupmark/numerics.hpp"
#include "groupmark/participation.hpp"
#include "groupmark/population.hpp"
#include "groupmark/schemes.hpp"

namespace py = pybind11;
using namespace groupmark;

namespace {

using Rows = std::vector<std::vector<double>>;

DenseMatrix to_dense(const Rows& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows[0].size();
    DenseMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) {
            throw Error(ErrorKind::Shape, "ragged matrix rows");
        }
        for (std::size_t k = 0; k < c; ++k) {
            m(i, k) = rows[i][k];
        }
    }
    return m;
}

Rows to_rows(const DenseMatrix& m) {
    Rows out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        out[i].assign(r.begin(), r.end());
    }
    return out;
}

Scheme scheme_arg(const std::string& name) {
    auto s = parse_scheme(name);
    if (!s) {
        throw Error(ErrorKind::Parameter, "unknown scheme '" + name + "'");
    }
    return *s;
}

SchemeParams params_from(double ra_alpha, double pr_a, double pr_b, double pr_alpha, double noise_half_range) {
    SchemeParams p;
    p.ra_alpha = ra_alpha;
    p.pr_a = pr_a;
    p.pr_b = pr_b;
    p.pr_alpha = pr_alpha;
    p.noise.half_range = noise_half_range;
    p.validate();
    return p;
}

py::dict bundle_to_dict(const AssessmentBundle& b) {
    py::dict d;
    if (b.reflexive) {
        d["reflexive"] = *b.reflexive;
    }
    if (b.peer) {
        py::list peer;
        for (const auto& m : *b.peer) {
            peer.append(to_rows(m));
        }
        d["peer"] = peer;
    }
    if (b.rankings) {
        d["rankings"] = *b.rankings;
    }
    return d;
}

AssessmentBundle bundle_from(std::optional<Rows> reflexive, std::optional<std::vector<Rows>> peer,
                             std::optional<std::vector<ProjectRankings>> rankings) {
    AssessmentBundle b;
    b.reflexive = std::move(reflexive);
    if (peer) {
        std::vector<DenseMatrix> mats;
        for (const auto& p : *peer) {
            mats.push_back(to_dense(p));
        }
        b.peer = std::move(mats);
    }
    b.rankings = std::move(rankings);
    return b;
}

} // namespace

PYBIND11_MODULE(_groupmark, mod) {
    mod.doc() = "Group-project mark allocation core";

    static py::exception<Error> error(mod, "Error", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(
                std::string(to_string(e.kind())) + ": " + e.what());
            exc.attr("kind") = std::string(to_string(e.kind()));
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    mod.attr("schemes") = [] {
        std::vector<std::string> names;
        for (auto s : kAllSchemes) {
            names.emplace_back(to_string(s));
        }
        return names;
    }();

    py::class_<StudentPopulation>(mod, "Population")
        .def_readonly("ideal_marks", &StudentPopulation::ideal_marks)
        .def_readonly("seed", &StudentPopulation::seed)
        .def_readonly("mean", &StudentPopulation::mean)
        .def_readonly("sd", &StudentPopulation::sd)
        .def("__len__", [](const StudentPopulation& p) { return p.ideal_marks.size(); });

    mod.def("generate_population", &generate_population, py::arg("n"), py::arg("mean") = 60.0,
            py::arg("sd") = 12.0, py::arg("seed") = 1);

    py::class_<ParticipationMatrix>(mod, "ParticipationMatrix")
        .def(py::init<std::size_t, std::vector<std::vector<std::size_t>>>(), py::arg("num_students"),
             py::arg("projects"))
        .def_static("from_dense", [](const Rows& rows) { return ParticipationMatrix::from_dense(to_dense(rows)); })
        .def_property_readonly("num_students", &ParticipationMatrix::num_students)
        .def_property_readonly("num_projects", &ParticipationMatrix::num_projects)
        .def("members",
             [](const ParticipationMatrix& m, std::size_t j) {
                 auto s = m.members(j);
                 return std::vector<std::size_t>(s.begin(), s.end());
             })
        .def("projects_of",
             [](const ParticipationMatrix& m, std::size_t i) {
                 auto s = m.projects_of(i);
                 return std::vector<std::size_t>(s.begin(), s.end());
             })
        .def("dense", [](const ParticipationMatrix& m) { return to_rows(m.dense()); })
        .def("__eq__", [](const ParticipationMatrix& a, const ParticipationMatrix& b) { return a == b; });

    mod.def(
        "assign_groups",
        [](std::size_t n, std::size_t group_size, std::size_t rounds, std::uint64_t seed) {
            auto g = assign_groups(n, group_size, rounds, seed, {});
            return py::make_tuple(g.matrix, g.repeated_pairs, g.warnings);
        },
        py::arg("n"), py::arg("group_size"), py::arg("rounds"), py::arg("seed") = 1,
        "Returns (matrix, repeated_pairs, warnings).");

    mod.def("group_marks", &group_marks, py::arg("population"), py::arg("matrix"));

    py::class_<MarkResult>(mod, "MarkResult")
        .def_readonly("assigned", &MarkResult::assigned)
        .def_readonly("diagnostics", &MarkResult::diagnostics)
        .def_property_readonly("scheme", [](const MarkResult& r) { return std::string(to_string(r.scheme)); })
        .def_property_readonly("per_project", [](const MarkResult& r) {
            py::list out;
            for (const auto& pm : r.per_project) {
                out.append(py::make_tuple(pm.student, pm.project, pm.mark));
            }
            return out;
        });

    using W = const std::vector<double>&;
    mod.def("sopp", [](W w, const ParticipationMatrix& m) { return sopp(w, m); });
    mod.def(
        "reflexive_accounts",
        [](W w, const ParticipationMatrix& m, const Rows& y, double alpha) {
            return reflexive_accounts(w, m, y, alpha);
        },
        py::arg("w"), py::arg("matrix"), py::arg("reflexive"), py::arg("alpha") = 0.7);
    mod.def("mark_adjusted_reflexive",
            [](W w, const ParticipationMatrix& m, const Rows& y) { return mark_adjusted_reflexive(w, m, y); });
    mod.def("normalised_peer_assessment", [](W w, const ParticipationMatrix& m, const std::vector<Rows>& peer) {
        std::vector<DenseMatrix> mats;
        for (const auto& p : peer) {
            mats.push_back(to_dense(p));
        }
        return normalised_peer_assessment(w, m, mats);
    });
    mod.def(
        "peer_ranking",
        [](W w, const ParticipationMatrix& m, const std::vector<ProjectRankings>& rankings, double a, double b,
           double alpha) { return peer_ranking(w, m, rankings, params_from(0.7, a, b, alpha, 16.0)); },
        py::arg("w"), py::arg("matrix"), py::arg("rankings"), py::arg("a") = 0.25, py::arg("b") = 1.0,
        py::arg("alpha") = 0.65);
    mod.def(
        "pseudoinverse_marking",
        [](W w, const ParticipationMatrix& m, double tol) { return pseudoinverse_marking(w, m, tol); },
        py::arg("w"), py::arg("matrix"), py::arg("rank_tol") = -1.0);
    mod.def(
        "ranking_matrix",
        [](const std::vector<std::size_t>& members, const ProjectRankings& rankings, double a, double b) {
            return to_rows(ranking_matrix(members, rankings, a, b));
        },
        py::arg("members"), py::arg("rankings"), py::arg("a") = 0.25, py::arg("b") = 1.0);

    mod.def(
        "simulate_assessments",
        [](const StudentPopulation& pop, const ParticipationMatrix& m, double half_range, std::uint64_t seed) {
            NoiseModel noise;
            noise.half_range = half_range;
            return bundle_to_dict(simulate_assessments(pop, m, noise, {true, true, true}, seed));
        },
        py::arg("population"), py::arg("matrix"), py::arg("noise_half_range") = 16.0, py::arg("seed") = 1,
        "Returns a dict with 'reflexive', 'peer' and 'rankings'.");

    mod.def(
        "mark",
        [](const std::string& scheme, W w, const ParticipationMatrix& m, std::optional<Rows> reflexive,
           std::optional<std::vector<Rows>> peer, std::optional<std::vector<ProjectRankings>> rankings,
           double ra_alpha, double pr_a, double pr_b, double pr_alpha) {
            return apply_scheme(scheme_arg(scheme), w, m, bundle_from(reflexive, peer, rankings),
                                params_from(ra_alpha, pr_a, pr_b, pr_alpha, 16.0));
        },
        py::arg("scheme"), py::arg("w"), py::arg("matrix"), py::arg("reflexive") = py::none(),
        py::arg("peer") = py::none(), py::arg("rankings") = py::none(), py::arg("ra_alpha") = 0.7,
        py::arg("pr_a") = 0.25, py::arg("pr_b") = 1.0, py::arg("pr_alpha") = 0.65);

    mod.def(
        "pinv_solve", [](const Rows& q, W w, double tol) { return pinv_solve(to_dense(q), w, tol); }, py::arg("q"),
        py::arg("w"), py::arg("rank_tol") = -1.0);

    mod.def(
        "leading_eigenvector",
        [](const Rows& a, double total, double tol, std::size_t max_iter) {
            PowerIterationOptions opts;
            opts.tol = tol;
            opts.max_iter = max_iter;
            auto e = leading_eigenvector(to_dense(a), total, opts);
            return py::make_tuple(e.vector, e.value, e.iterations);
        },
        py::arg("a"), py::arg("total") = 1.0, py::arg("tol") = 1e-12, py::arg("max_iter") = 100000,
        "Returns (vector, eigenvalue, iterations).");

    mod.def(
        "error_summary",
        [](W ideal, W assigned) {
            auto s = error_summary(ideal, assigned);
            py::dict d;
            d["e_max"] = s.e_max;
            d["e_mean"] = s.e_mean;
            d["e_rms"] = s.e_rms;
            d["e_rms_standard"] = s.e_rms_standard;
            d["n"] = s.n;
            return d;
        },
        py::arg("ideal"), py::arg("assigned"));
    mod.def("bias_slope", [](W ideal, W assigned) { return bias_slope(ideal, assigned); });

    mod.def(
        "run_scenario",
        [](std::size_t n, std::size_t group_size, std::size_t rounds, double mean, double sd,
           std::optional<std::vector<std::string>> schemes, std::size_t replicates, std::uint64_t seed,
           std::size_t threads, double noise_half_range) {
            ExperimentConfig cfg;
            cfg.n = n;
            cfg.group_size = group_size;
            cfg.rounds = rounds;
            cfg.mean = mean;
            cfg.sd = sd;
            if (schemes) {
                cfg.schemes.clear();
                for (const auto& s : *schemes) {
                    cfg.schemes.push_back(scheme_arg(s));
                }
            }
            cfg.replicates = replicates;
            cfg.master_seed = seed;
            cfg.threads = threads;
            cfg.params.noise.half_range = noise_half_range;
            ScenarioResult result;
            {
                py::gil_scoped_release release;
                result = run_scenario(cfg);
            }
            py::list rows;
            for (const auto& rep : result.replicates) {
                for (const auto& s : rep.schemes) {
                    py::dict d;
                    d["replicate"] = rep.replicate;
                    d["scheme"] = std::string(to_string(s.scheme));
                    d["e_max"] = s.errors.e_max;
                    d["e_mean"] = s.errors.e_mean;
                    d["e_rms"] = s.errors.e_rms;
                    d["e_rms_standard"] = s.errors.e_rms_standard;
                    rows.append(d);
                }
            }
            return rows;
        },
        py::arg("n") = 52, py::arg("group_size") = 4, py::arg("rounds") = 4, py::arg("mean") = 60.0,
        py::arg("sd") = 12.0, py::arg("schemes") = py::none(), py::arg("replicates") = 1, py::arg("seed") = 1,
        py::arg("threads") = 1, py::arg("noise_half_range") = 16.0,
        "Per-replicate, per-scheme error rows.");
}
