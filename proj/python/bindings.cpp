#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hclab/causal_dag.hpp"
#include "hclab/dynamics.hpp"
#include "hclab/errors.hpp"
#include "hclab/experiments.hpp"
#include "hclab/inference.hpp"
#include "hclab/io.hpp"
#include "hclab/network.hpp"
#include "hclab/population.hpp"

namespace py = pybind11;
using namespace hclab;

namespace {

Eigen::MatrixXd panel_matrix(const OutcomePanel& panel) {
    Eigen::MatrixXd m(panel.slices(), panel.nodes());
    for (std::size_t t = 0; t < panel.slices(); ++t)
        for (std::size_t i = 0; i < panel.nodes(); ++i) m(t, i) = panel.at(t, i);
    return m;
}

OutcomePanel matrix_panel(const Eigen::MatrixXd& m, OutcomeKind kind) {
    std::vector<std::vector<double>> values(m.rows(), std::vector<double>(m.cols()));
    for (Eigen::Index t = 0; t < m.rows(); ++t)
        for (Eigen::Index i = 0; i < m.cols(); ++i) values[t][i] = m(t, i);
    return OutcomePanel(std::move(values), kind);
}

std::vector<Edge> to_edges(const std::vector<std::pair<NodeId, NodeId>>& pairs) {
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (auto [a, b] : pairs) edges.push_back({a, b});
    return edges;
}

py::dict fit_dict(const RegressionFit& fit) {
    py::dict d;
    d["names"] = fit.names;
    d["coefficients"] = fit.coefficients;
    d["standard_errors"] = fit.standard_errors;
    d["statistics"] = fit.statistics;
    d["covariance"] = fit.covariance;
    d["residuals"] = fit.residuals;
    d["dof"] = fit.dof;
    d["converged"] = fit.converged;
    d["separated"] = fit.separated;
    d["iterations"] = fit.iterations;
    d["log_likelihood"] = fit.log_likelihood;
    return d;
}

DesignMatrix design(const Eigen::MatrixXd& X, std::vector<std::string> names) {
    if (names.empty())
        for (Eigen::Index k = 0; k < X.cols(); ++k) names.push_back("x" + std::to_string(k));
    return DesignMatrix{X, std::move(names)};
}

ExperimentConfig make_config(const std::string& kind, const std::map<std::string, std::string>& overrides) {
    ExperimentConfig cfg;
    if (kind == "asymmetry")
        cfg = default_config(ExperimentKind::asymmetry);
    else if (kind == "voter")
        cfg = default_config(ExperimentKind::voter);
    else if (kind == "halves")
        cfg = default_config(ExperimentKind::halves);
    else
        throw LookupError("unknown experiment '" + kind + "'");
    for (const auto& [k, v] : overrides) set_config_value(cfg, k, v);
    validate(cfg);
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "hclab core: homophily and contagion simulations";
    m.attr("__version__") = HCLAB_VERSION;

    py::register_exception<SingularDesignError>(m, "SingularDesignError", PyExc_ValueError);
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const LookupError& e) {
            PyErr_SetString(PyExc_KeyError, e.what());
        }
    });

    py::class_<SocialNetwork>(m, "SocialNetwork")
        .def(py::init([](std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
                 return SocialNetwork::from_edges(n, to_edges(edges));
             }),
             py::arg("n"), py::arg("edges"))
        .def_static("undirected", [](std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
            return SocialNetwork::undirected_from_edges(n, to_edges(edges));
        })
        .def("__len__", &SocialNetwork::size)
        .def_property_readonly("edge_count", &SocialNetwork::edge_count)
        .def("edges", [](const SocialNetwork& net) {
            std::vector<std::pair<NodeId, NodeId>> out;
            for (const Edge& e : net.edges()) out.emplace_back(e.from, e.to);
            return out;
        })
        .def("out_neighbors", [](const SocialNetwork& net, NodeId i) {
            auto s = net.out_neighbors(i);
            return std::vector<NodeId>(s.begin(), s.end());
        })
        .def("in_neighbors", [](const SocialNetwork& net, NodeId i) {
            auto s = net.in_neighbors(i);
            return std::vector<NodeId>(s.begin(), s.end());
        })
        .def("has_edge", &SocialNetwork::has_edge)
        .def("is_symmetric", &SocialNetwork::is_symmetric)
        .def("mean_degree", &SocialNetwork::mean_degree);

    m.def("sample_latent_uniform", [](std::size_t n, std::uint64_t seed) {
        Rng rng = derive_stream(seed, 0);
        return sample_latent_uniform(n, rng).x;
    }, py::arg("n"), py::arg("seed"));

    m.def("nomination_network", [](const std::vector<double>& x, std::size_t k, std::uint64_t seed) {
        TraitAssignment traits{x, std::nullopt, TraitKind::continuous};
        Rng rng = derive_stream(seed, 0);
        return nomination_network(traits, k, rng);
    }, py::arg("traits"), py::arg("nominations"), py::arg("seed"));

    m.def("uniform_nomination_network", [](std::size_t n, std::size_t k, std::uint64_t seed) {
        Rng rng = derive_stream(seed, 0);
        return uniform_nomination_network(n, k, rng);
    }, py::arg("n"), py::arg("nominations"), py::arg("seed"));

    m.def("planted_partition_network", [](std::size_t n, double p_in, double p_out, std::uint64_t seed) {
        Rng rng = derive_stream(seed, 0);
        PlantedPartition pp = planted_partition_network(n, p_in, p_out, rng);
        return py::make_tuple(pp.network, pp.traits.x);
    }, py::arg("n"), py::arg("p_in"), py::arg("p_out"), py::arg("seed"));

    m.def("matched_control_network", [](std::size_t n, double degree, std::uint64_t seed) {
        Rng rng = derive_stream(seed, 0);
        return matched_control_network(n, degree, rng);
    }, py::arg("n"), py::arg("mean_degree"), py::arg("seed"));

    m.def("latent_trend_panel", [](const std::vector<double>& x, double noise_sd, double trend, std::size_t periods,
                                   std::uint64_t seed) {
        TraitAssignment traits{x, std::nullopt, TraitKind::continuous};
        Rng rng = derive_stream(seed, 0);
        return panel_matrix(latent_trend_panel(traits, noise_sd, trend, rng, periods));
    }, py::arg("traits"), py::arg("noise_sd") = 0.02, py::arg("trend") = 0.4, py::arg("periods") = 2,
       py::arg("seed") = 0);

    m.def("voter_run", [](const SocialNetwork& net, const std::vector<int>& y0, std::size_t steps, double flip_prob,
                          const std::vector<std::size_t>& checkpoints, std::uint64_t seed) {
        Rng rng = derive_stream(seed, 0);
        return panel_matrix(voter_run(net, y0, steps, flip_prob, checkpoints, rng));
    }, py::arg("network"), py::arg("initial"), py::arg("steps"), py::arg("flip_prob"), py::arg("checkpoints"),
       py::arg("seed"));

    m.def("contagion_panel", [](const SocialNetwork& net, double strength, std::size_t periods, double noise_sd,
                                std::uint64_t seed) {
        Rng rng = derive_stream(seed, 0);
        return panel_matrix(contagion_panel(net, strength, periods, noise_sd, rng));
    }, py::arg("network"), py::arg("strength"), py::arg("periods"), py::arg("noise_sd") = 1.0, py::arg("seed") = 0);

    m.def("ols", [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<std::string> names) {
        return fit_dict(ols(design(X, std::move(names)), y));
    }, py::arg("X"), py::arg("y"), py::arg("names") = std::vector<std::string>{});

    m.def("logistic_irls", [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<std::string> names) {
        return fit_dict(logistic_irls(design(X, std::move(names)), y));
    }, py::arg("X"), py::arg("y"), py::arg("names") = std::vector<std::string>{});

    m.def("asymmetry_fit", [](const SocialNetwork& net, const Eigen::MatrixXd& panel, bool exclude_isolates,
                              bool own_lag0) {
        AsymmetryDesign d = build_asymmetry_design(net, matrix_panel(panel, OutcomeKind::continuous),
                                                   {exclude_isolates, own_lag0});
        return fit_dict(ols(d.X, d.y));
    }, py::arg("network"), py::arg("panel"), py::arg("exclude_isolates") = false, py::arg("own_lag0") = false);

    m.def("halves_test", [](const SocialNetwork& net, const Eigen::MatrixXd& panel, std::size_t repetitions,
                            std::size_t permutations, double alpha, std::uint64_t seed) {
        Rng rng = derive_stream(seed, 0);
        HalvesResult r = run_halves_test(net, matrix_panel(panel, OutcomeKind::continuous),
                                         {repetitions, permutations, alpha}, rng);
        py::dict d;
        d["mean_coefficient"] = r.mean_coefficient;
        d["dispersion"] = r.dispersion;
        d["p_value"] = r.p_value;
        d["reject"] = r.reject;
        d["coefficients"] = r.coefficients;
        return d;
    }, py::arg("network"), py::arg("panel"), py::arg("repetitions") = 10, py::arg("permutations") = 199,
       py::arg("alpha") = 0.05, py::arg("seed") = 0);

    m.def("spurious_coefficient", &spurious_coefficient, py::arg("rho_jy"), py::arg("rho_xx"), py::arg("rho_xy"));

    py::class_<CausalDag>(m, "CausalDag")
        .def_static("template", [](const std::string& name) { return build_template(name); })
        .def_static("parse", [](const std::string& text) { return parse_dag_text(text); })
        .def_static("template_names", &template_names)
        .def("to_text", [](const CausalDag& dag) { return to_dag_text(dag); })
        .def("__len__", &CausalDag::size)
        .def("contains", &CausalDag::contains)
        .def("latent_nodes", &CausalDag::latent_nodes)
        .def("observed_nodes", &CausalDag::observed_nodes)
        .def("without_edge", &CausalDag::without_edge)
        .def("d_separated", [](const CausalDag& dag, const std::string& a, const std::string& b,
                               const std::vector<std::string>& given) { return d_separated(dag, a, b, given); },
             py::arg("a"), py::arg("b"), py::arg("given") = std::vector<std::string>{})
        .def("open_backdoor_paths", [](const CausalDag& dag, const std::string& treatment, const std::string& outcome,
                                       const std::vector<std::string>& given) {
            std::vector<std::string> out;
            for (const auto& p : open_backdoor_paths(dag, treatment, outcome, given)) out.push_back(p.to_string());
            return out;
        }, py::arg("treatment"), py::arg("outcome"), py::arg("given") = std::vector<std::string>{})
        .def("observed_except", [](const CausalDag& dag, const std::vector<std::string>& excluded) {
            return observed_except(dag, excluded);
        });

    m.def("run_experiment", [](const std::string& kind, const std::map<std::string, std::string>& overrides) {
        ExperimentConfig cfg = make_config(kind, overrides);
        nlohmann::ordered_json j;
        {
            py::gil_scoped_release release;
            switch (cfg.kind) {
                case ExperimentKind::asymmetry: j = io::summary_to_json(cfg, run_asymmetry_experiment(cfg)); break;
                case ExperimentKind::voter: j = io::summary_to_json(cfg, run_voter_experiment(cfg)); break;
                case ExperimentKind::halves: j = io::summary_to_json(cfg, run_halves_experiment(cfg)); break;
            }
        }
        return io::dump(j);
    }, py::arg("kind"), py::arg("overrides") = std::map<std::string, std::string>{});
}
