#include "rhbm/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rhbm/rng.hpp"

namespace rhbm {

void EmbeddingSD::validate() const {
    if (dimension < 1) throw std::invalid_argument("embedding: dimension must be >= 1");
    if (!(beta > static_cast<double>(dimension)))
        throw std::invalid_argument("embedding: beta must exceed D");
    if (!(mu > 0.0)) throw std::invalid_argument("embedding: mu must be positive");
    if (!(radius > 0.0)) throw std::invalid_argument("embedding: radius must be positive");
    if (positions.size() != kappa.size() * (dimension + 1))
        throw std::invalid_argument("embedding: positions do not match node count");
    for (double k : kappa)
        if (!(k > 0.0)) throw std::invalid_argument("embedding: hidden degrees must be positive");
    for (std::size_t node = 0; node < num_nodes(); ++node) {
        double norm2 = 0.0;
        const double* u = position(node);
        for (std::size_t d = 0; d <= dimension; ++d) norm2 += u[d] * u[d];
        if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9)
            throw std::invalid_argument("embedding: position of node " + std::to_string(node) +
                                        " is not unit length");
    }
}

double default_sphere_radius(std::size_t num_nodes, std::size_t dimension) {
    // Surface of the unit D-sphere embedded in D+1 dimensions.
    const double surface = 2.0 * std::pow(std::numbers::pi, (dimension + 1.0) / 2.0) /
                           std::tgamma((dimension + 1.0) / 2.0);
    return std::pow(static_cast<double>(num_nodes) / surface, 1.0 / static_cast<double>(dimension));
}

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line_no,
                             const std::string& why) {
    throw std::runtime_error("embedding: " + path.string() + ":" + std::to_string(line_no) + ": " +
                             why);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

} // namespace

EmbeddingSD load_embedding(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("embedding: cannot open " + path.string());

    EmbeddingSD e;
    bool have_radius = false;
    std::string line;
    std::size_t line_no = 0;

    // `# D=.. beta=.. mu=.. R=..` header
    if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
    ++line_no;
    if (line.empty() || line[0] != '#') parse_fail(path, line_no, "missing parameter header");
    {
        std::istringstream header(line.substr(1));
        std::string token;
        bool have_d = false, have_beta = false, have_mu = false;
        while (header >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = token.substr(0, eq);
            const double value = std::stod(token.substr(eq + 1));
            if (key == "D") {
                e.dimension = static_cast<std::size_t>(value);
                have_d = true;
            } else if (key == "beta") {
                e.beta = value;
                have_beta = true;
            } else if (key == "mu") {
                e.mu = value;
                have_mu = true;
            } else if (key == "R") {
                e.radius = value;
                have_radius = true;
            }
        }
        if (!have_d || !have_beta || !have_mu)
            parse_fail(path, line_no, "header must supply D, beta and mu");
    }

    std::vector<std::uint32_t> ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("node", 0) == 0) continue; // column header
        const auto fields = split_csv(line);
        if (fields.size() != 2 + e.dimension + 1)
            parse_fail(path, line_no,
                       "expected " + std::to_string(2 + e.dimension + 1) + " fields, got " +
                           std::to_string(fields.size()));
        try {
            ids.push_back(static_cast<std::uint32_t>(std::stoul(fields[0])));
            const double k = std::stod(fields[1]);
            if (!std::isfinite(k) || !(k > 0.0))
                parse_fail(path, line_no, "hidden degree must be positive and finite");
            e.kappa.push_back(k);
            double norm2 = 0.0;
            std::vector<double> u(e.dimension + 1);
            for (std::size_t d = 0; d <= e.dimension; ++d) {
                u[d] = std::stod(fields[2 + d]);
                if (!std::isfinite(u[d])) parse_fail(path, line_no, "non-finite coordinate");
                norm2 += u[d] * u[d];
            }
            const double norm = std::sqrt(norm2);
            if (std::abs(norm - 1.0) > 1e-6)
                parse_fail(path, line_no,
                           "position norm " + std::to_string(norm) + " deviates from 1");
            for (double& c : u) c /= norm;
            e.positions.insert(e.positions.end(), u.begin(), u.end());
        } catch (const std::invalid_argument&) {
            parse_fail(path, line_no, "malformed number");
        } catch (const std::out_of_range&) {
            parse_fail(path, line_no, "number out of range");
        }
    }
    if (e.kappa.empty()) parse_fail(path, line_no, "no node rows");
    for (std::size_t k = 0; k < ids.size(); ++k)
        if (ids[k] != k)
            throw std::runtime_error("embedding: node ids must be 0..N-1 in order (saw " +
                                     std::to_string(ids[k]) + " at row " + std::to_string(k) + ")");

    if (!have_radius) e.radius = default_sphere_radius(e.num_nodes(), e.dimension);
    e.validate();
    return e;
}

void save_embedding(const EmbeddingSD& embedding, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("embedding: cannot write " + path.string());
    out.precision(17);
    out << "# D=" << embedding.dimension << " beta=" << embedding.beta << " mu=" << embedding.mu
        << " R=" << embedding.radius << "\n";
    out << "node,kappa";
    for (std::size_t d = 0; d <= embedding.dimension; ++d) out << ",x" << d + 1;
    out << "\n";
    for (std::size_t node = 0; node < embedding.num_nodes(); ++node) {
        out << node << ',' << embedding.kappa[node];
        const double* u = embedding.position(node);
        for (std::size_t d = 0; d <= embedding.dimension; ++d) out << ',' << u[d];
        out << "\n";
    }
}

double sd_edge_probability(const EmbeddingSD& embedding, std::uint32_t i, std::uint32_t j) {
    if (i == j) throw std::invalid_argument("sd_edge_probability: self-pairs are excluded");
    const double* ui = embedding.position(i);
    const double* uj = embedding.position(j);
    double dot = 0.0;
    for (std::size_t d = 0; d <= embedding.dimension; ++d) dot += ui[d] * uj[d];
    dot = std::clamp(dot, -1.0, 1.0);
    const double x = embedding.radius * std::acos(dot);
    const double scale = std::pow(embedding.mu * embedding.kappa[i] * embedding.kappa[j],
                                  1.0 / static_cast<double>(embedding.dimension));
    if (!(scale > 0.0)) return 0.0;
    if (x <= 0.0) return 1.0;
    return 1.0 / (1.0 + std::pow(x / scale, embedding.beta));
}

MixingMatrix expected_mixing_from_embedding(const EmbeddingSD& embedding,
                                            const BlockPartition& partition) {
    if (partition.num_nodes() != embedding.num_nodes())
        throw std::invalid_argument("expected_mixing: partition does not cover the embedding");
    MixingMatrix expected(partition.num_blocks(), MixingScale::edge_counts);
    const std::uint32_t n = partition.num_nodes();
    for (std::uint32_t i = 0; i + 1 < n; ++i) {
        const std::size_t bi = partition.block_of(i);
        for (std::uint32_t j = i + 1; j < n; ++j) {
            const std::size_t bj = partition.block_of(j);
            const double p = sd_edge_probability(embedding, i, j);
            if (bi == bj) {
                expected.at(bi, bi) += 2.0 * p;
            } else {
                expected.at(bi, bj) += p;
                expected.at(bj, bi) += p;
            }
        }
    }
    return expected;
}

std::vector<double> expected_degrees_from_embedding(const EmbeddingSD& embedding) {
    const std::uint32_t n = static_cast<std::uint32_t>(embedding.num_nodes());
    std::vector<double> deg(n, 0.0);
    for (std::uint32_t i = 0; i + 1 < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) {
            const double p = sd_edge_probability(embedding, i, j);
            deg[i] += p;
            deg[j] += p;
        }
    return deg;
}

std::vector<Graph> sample_graphs_from_embedding(const EmbeddingSD& embedding, std::size_t count,
                                                std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample_graphs_from_embedding: count must be >= 1");
    const std::uint32_t n = static_cast<std::uint32_t>(embedding.num_nodes());
    std::vector<Graph> graphs;
    graphs.reserve(count);
    for (std::size_t sample = 0; sample < count; ++sample) {
        const std::uint64_t sample_seed = derive_stream(seed, sample);
        Graph g;
        g.num_nodes = n;
        for (std::uint32_t i = 0; i + 1 < n; ++i)
            for (std::uint32_t j = i + 1; j < n; ++j)
                if (pair_uniform(sample_seed, i, j) < sd_edge_probability(embedding, i, j))
                    g.edges.emplace_back(i, j);
        graphs.push_back(std::move(g));
    }
    return graphs;
}

EmbeddingSD embedding_from_s1(const S1Params& params, const std::vector<double>& theta) {
    EmbeddingSD e;
    e.dimension = 1;
    e.beta = params.beta;
    e.mu = params.mu;
    e.radius = params.radius;
    e.kappa = params.kappa;
    e.positions.reserve(theta.size() * 2);
    for (double t : theta) {
        e.positions.push_back(std::cos(t));
        e.positions.push_back(std::sin(t));
    }
    e.validate();
    return e;
}

} // namespace rhbm
