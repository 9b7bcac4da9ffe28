#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rhbm/embedding.hpp"
#include "rhbm/experiment.hpp"
#include "rhbm/generate.hpp"
#include "rhbm/io.hpp"
#include "rhbm/latent.hpp"
#include "rhbm/metrics.hpp"
#include "rhbm/mixing.hpp"
#include "rhbm/partition.hpp"
#include "rhbm/rng.hpp"

namespace py = pybind11;
using namespace rhbm;

namespace {

std::vector<std::vector<double>> matrix_rows(const SquareMatrix& m) {
    std::vector<std::vector<double>> rows(m.n, std::vector<double>(m.n));
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) rows[i][j] = m.at(i, j);
    return rows;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Random Hyperbolic Block Model: calibration, sampling and evaluation";

    py::class_<SplitMix64>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("uniform01", &SplitMix64::uniform01);

    m.def("pair_uniform", &pair_uniform, py::arg("seed"), py::arg("i"), py::arg("j"));
    m.def("derive_stream", &derive_stream, py::arg("seed"), py::arg("tag"));

    py::class_<BlockPartition>(m, "BlockPartition")
        .def_static("from_assignments", &BlockPartition::from_assignments, py::arg("block_of"))
        .def_property_readonly("num_nodes", &BlockPartition::num_nodes)
        .def_property_readonly("num_blocks", &BlockPartition::num_blocks)
        .def("block_of", &BlockPartition::block_of, py::arg("node"))
        .def("block_size", &BlockPartition::block_size, py::arg("block"))
        .def("assignments", &BlockPartition::assignments)
        .def("members", &BlockPartition::members, py::arg("block"));

    m.def("make_partition", &make_partition, py::arg("num_nodes"), py::arg("num_blocks"),
          py::arg("sizes") = std::vector<std::uint32_t>{});

    py::enum_<MixingScale>(m, "MixingScale")
        .value("normalized", MixingScale::normalized)
        .value("edge_counts", MixingScale::edge_counts);

    py::class_<MixingMatrix>(m, "MixingMatrix")
        .def_readonly("n", &MixingMatrix::n)
        .def_readonly("scale", &MixingMatrix::scale)
        .def("at", [](const MixingMatrix& f, std::size_t i, std::size_t j) { return f.at(i, j); })
        .def("rows", [](const MixingMatrix& f) { return matrix_rows(f); })
        .def("total", &MixingMatrix::total);

    py::class_<MixingParams>(m, "MixingParams")
        .def(py::init([](std::size_t n, double rho, double q) {
                 return MixingParams{n, rho, q};
             }),
             py::arg("n"), py::arg("rho"), py::arg("q"));

    m.def("build_normalized_mixing", &build_normalized_mixing, py::arg("params"));
    m.def(
        "build_normalized_mixing",
        [](std::size_t n, double rho, double q) {
            return build_normalized_mixing({n, rho, q});
        },
        py::arg("n"), py::arg("rho"), py::arg("q"));
    m.def("scale_mixing_to_edges", &scale_mixing_to_edges, py::arg("normalized"),
          py::arg("num_nodes"), py::arg("avg_degree"));

    py::class_<TargetReport>(m, "TargetReport")
        .def("ok", &TargetReport::ok)
        .def("__str__", &TargetReport::to_string)
        .def_property_readonly("num_violations",
                               [](const TargetReport& r) { return r.violations.size(); });

    m.def("validate_targets", &validate_targets, py::arg("edge_targets"), py::arg("partition"),
          py::arg("shares"));

    py::class_<LatentState>(m, "LatentState")
        .def_readonly("theta", &LatentState::theta)
        .def_readonly("phi", &LatentState::phi)
        .def_readonly("beta", &LatentState::beta)
        .def_readonly("radius", &LatentState::radius)
        .def_readonly("mu_tilde", &LatentState::mu_tilde)
        .def_property_readonly("partition",
                               [](const LatentState& s) { return s.partition; })
        .def("forces", [](const LatentState& s) { return matrix_rows(s.forces); })
        .def("validate", &LatentState::validate);

    m.def("rescale_block_gauge", &rescale_block_gauge, py::arg("state"), py::arg("block"),
          py::arg("factor"));
    m.def("default_radius", &default_radius, py::arg("num_nodes"));
    m.def("mu_tilde_of", &mu_tilde_of, py::arg("beta"), py::arg("radius"));
    m.def("sample_fitness", &sample_fitness, py::arg("partition"), py::arg("gamma"),
          py::arg("rng"));
    m.def("sample_angles", &sample_angles, py::arg("num_nodes"), py::arg("rng"));
    m.def("angular_connection_kernel", &angular_connection_kernel, py::arg("a"), py::arg("beta"),
          py::arg("radius"));
    m.def("expected_block_degrees",
          py::overload_cast<const LatentState&>(&expected_block_degrees), py::arg("state"));

    py::class_<CalibrationReport>(m, "CalibrationReport")
        .def_readonly("iterations", &CalibrationReport::iterations)
        .def_readonly("max_degree_residual", &CalibrationReport::max_degree_residual)
        .def_readonly("max_block_residual", &CalibrationReport::max_block_residual)
        .def_readonly("max_pair_residual", &CalibrationReport::max_pair_residual)
        .def_readonly("converged", &CalibrationReport::converged)
        .def_readonly("residual_trace", &CalibrationReport::residual_trace);

    m.def(
        "calibrate",
        [](const std::vector<double>& theta, const std::vector<double>& shares,
           const MixingMatrix& targets, double beta, double radius, const BlockPartition& part,
           double tol, std::size_t max_iter) {
            CalibrateOptions options;
            options.tol = tol;
            options.max_iter = max_iter;
            auto result = calibrate(theta, shares, targets, beta, radius, part, options);
            return py::make_tuple(std::move(result.state), std::move(result.report));
        },
        py::arg("theta"), py::arg("shares"), py::arg("edge_targets"), py::arg("beta"),
        py::arg("radius"), py::arg("partition"), py::arg("tol") = 1e-2,
        py::arg("max_iter") = 1000);

    py::class_<Graph>(m, "Graph")
        .def(py::init([](std::uint32_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>> e) {
                 Graph g;
                 g.num_nodes = n;
                 g.edges = std::move(e);
                 return g;
             }),
             py::arg("num_nodes"), py::arg("edges"))
        .def_readonly("num_nodes", &Graph::num_nodes)
        .def_readonly("edges", &Graph::edges)
        .def_property_readonly("num_edges", &Graph::num_edges);

    m.def("edge_probability", &edge_probability, py::arg("i"), py::arg("j"), py::arg("state"));
    m.def("sample_graph", &sample_graph, py::arg("state"), py::arg("seed"));
    m.def("sample_graph_blockwise", &sample_graph_blockwise, py::arg("state"), py::arg("seed"));

    py::class_<S1Params>(m, "S1Params")
        .def(py::init([](std::vector<double> kappa, double beta, double mu, double radius) {
                 return S1Params{std::move(kappa), beta, mu, radius};
             }),
             py::arg("kappa"), py::arg("beta"), py::arg("mu"), py::arg("radius"))
        .def_readonly("kappa", &S1Params::kappa)
        .def_readonly("beta", &S1Params::beta)
        .def_readonly("mu", &S1Params::mu)
        .def_readonly("radius", &S1Params::radius);

    m.def("s1_default_mu", &s1_default_mu, py::arg("beta"), py::arg("avg_degree"));
    m.def("s1_edge_probability", &s1_edge_probability, py::arg("params"), py::arg("theta"),
          py::arg("i"), py::arg("j"));
    m.def("sample_s1_graph", &sample_s1_graph, py::arg("params"), py::arg("theta"),
          py::arg("seed"));
    m.def("sample_hidden_degrees", &sample_hidden_degrees, py::arg("count"), py::arg("gamma"),
          py::arg("avg_degree"), py::arg("rng"));

    m.def("empirical_mixing", &empirical_mixing, py::arg("graph"), py::arg("partition"));
    m.def("degree_sequence", &degree_sequence, py::arg("graph"));
    m.def("global_clustering", &global_clustering, py::arg("graph"));
    m.def("average_local_clustering", &average_local_clustering, py::arg("graph"),
          py::arg("exclude_low_degree") = false);
    m.def("mixing_relative_error", &mixing_relative_error, py::arg("observed"), py::arg("target"));
    m.def("clustering_relative_error", &clustering_relative_error, py::arg("observed"),
          py::arg("target"));

    py::class_<StatsReport>(m, "StatsReport")
        .def_readonly("nodes", &StatsReport::nodes)
        .def_readonly("edges", &StatsReport::edges)
        .def_readonly("mean_degree", &StatsReport::mean_degree)
        .def_readonly("global_clustering", &StatsReport::global_clustering)
        .def_readonly("avg_local_clustering", &StatsReport::avg_local_clustering)
        .def_readonly("isolated_nodes", &StatsReport::isolated_nodes)
        .def_readonly("mixing", &StatsReport::mixing)
        .def_readonly("degrees", &StatsReport::degrees);

    m.def("compute_stats", &compute_stats, py::arg("graph"), py::arg("partition"));

    py::class_<EmbeddingSD>(m, "EmbeddingSD")
        .def(py::init([](std::size_t dimension, double beta, double mu, double radius,
                         std::vector<double> kappa, std::vector<double> positions) {
                 EmbeddingSD e;
                 e.dimension = dimension;
                 e.beta = beta;
                 e.mu = mu;
                 e.radius = radius;
                 e.kappa = std::move(kappa);
                 e.positions = std::move(positions);
                 e.validate();
                 return e;
             }),
             py::arg("dimension"), py::arg("beta"), py::arg("mu"), py::arg("radius"),
             py::arg("kappa"), py::arg("positions"))
        .def_readonly("dimension", &EmbeddingSD::dimension)
        .def_readonly("beta", &EmbeddingSD::beta)
        .def_readonly("mu", &EmbeddingSD::mu)
        .def_readonly("radius", &EmbeddingSD::radius)
        .def_readonly("kappa", &EmbeddingSD::kappa)
        .def_readonly("positions", &EmbeddingSD::positions);

    m.def("load_embedding", &load_embedding, py::arg("path"));
    m.def("save_embedding", &save_embedding, py::arg("embedding"), py::arg("path"));
    m.def("sd_edge_probability", &sd_edge_probability, py::arg("embedding"), py::arg("i"),
          py::arg("j"));
    m.def("expected_mixing_from_embedding", &expected_mixing_from_embedding,
          py::arg("embedding"), py::arg("partition"));
    m.def("expected_degrees_from_embedding", &expected_degrees_from_embedding,
          py::arg("embedding"));
    m.def("sample_graphs_from_embedding", &sample_graphs_from_embedding, py::arg("embedding"),
          py::arg("count"), py::arg("seed"));
    m.def("standard_grid_values", &standard_grid_values, py::arg("parameter"));
    m.def("embedding_from_s1", &embedding_from_s1, py::arg("params"), py::arg("theta"));
    m.def("default_sphere_radius", &default_sphere_radius, py::arg("num_nodes"),
          py::arg("dimension"));

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("nodes", &ExperimentConfig::nodes)
        .def_readwrite("avg_degree", &ExperimentConfig::avg_degree)
        .def_readwrite("gamma", &ExperimentConfig::gamma)
        .def_readwrite("beta", &ExperimentConfig::beta)
        .def_readwrite("communities", &ExperimentConfig::communities)
        .def_readwrite("rho", &ExperimentConfig::rho)
        .def_readwrite("q", &ExperimentConfig::q)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("tol", &ExperimentConfig::tol)
        .def_readwrite("max_iter", &ExperimentConfig::max_iter)
        .def_readwrite("samples", &ExperimentConfig::samples)
        .def_readwrite("out", &ExperimentConfig::out)
        .def("config_hash", &ExperimentConfig::config_hash);

    py::class_<GenerateResult>(m, "GenerateResult")
        .def_readonly("converged", &GenerateResult::converged)
        .def_readonly("isolated_nodes", &GenerateResult::isolated_nodes)
        .def_readonly("mixing_error", &GenerateResult::mixing_error)
        .def_readonly("files", &GenerateResult::files);

    m.def("run_generate", &run_generate, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    m.def("load_partition", &load_partition, py::arg("path"));
    m.def("save_partition", &save_partition, py::arg("partition"), py::arg("path"));
    m.def("load_mixing", &load_mixing, py::arg("path"));
    m.def("save_mixing", &save_mixing, py::arg("matrix"), py::arg("path"));
    m.def("load_edge_list", &load_edge_list, py::arg("path"), py::arg("num_nodes"));
    m.def("save_edge_list", &save_edge_list, py::arg("graph"), py::arg("path"));

#ifdef RHBM_VERSION
    m.attr("__version__") = RHBM_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
