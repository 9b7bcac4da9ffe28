#include "rhbm/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rhbm {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line_no,
                       const std::string& why) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + why);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.precision(17);
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return in;
}

} // namespace

void save_partition(const BlockPartition& partition, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "node,block\n";
    for (std::uint32_t node = 0; node < partition.num_nodes(); ++node)
        out << node << ',' << partition.block_of(node) << "\n";
}

BlockPartition load_partition(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::uint32_t> block_of;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line.rfind("node", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) fail(path, line_no, "expected `node,block`");
        try {
            const auto node = std::stoul(line.substr(0, comma));
            const auto block = std::stoul(line.substr(comma + 1));
            if (node != block_of.size()) fail(path, line_no, "node ids must be 0..N-1 in order");
            block_of.push_back(static_cast<std::uint32_t>(block));
        } catch (const std::invalid_argument&) {
            fail(path, line_no, "malformed id");
        } catch (const std::out_of_range&) {
            fail(path, line_no, "id out of range");
        }
    }
    if (block_of.empty()) fail(path, line_no, "no rows");
    return BlockPartition::from_assignments(std::move(block_of));
}

void save_mixing(const MixingMatrix& matrix, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << (matrix.scale == MixingScale::normalized ? "# normalized\n" : "# edge-counts\n");
    for (std::size_t i = 0; i < matrix.n; ++i) {
        for (std::size_t j = 0; j < matrix.n; ++j) {
            if (j) out << ',';
            out << matrix.at(i, j);
        }
        out << "\n";
    }
}

MixingMatrix load_mixing(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) fail(path, 1, "empty file");
    ++line_no;
    MixingScale scale;
    if (line.find("normalized") != std::string::npos) {
        scale = MixingScale::normalized;
    } else if (line.find("edge-counts") != std::string::npos) {
        scale = MixingScale::edge_counts;
    } else {
        fail(path, line_no, "first line must declare `# normalized` or `# edge-counts`");
    }

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            try {
                row.push_back(std::stod(field));
            } catch (const std::invalid_argument&) {
                fail(path, line_no, "malformed entry");
            } catch (const std::out_of_range&) {
                fail(path, line_no, "entry out of range");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(path, line_no, "no matrix rows");
    const std::size_t n = rows.size();
    MixingMatrix m(n, scale);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            fail(path, 0, "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                              " entries, expected " + std::to_string(n));
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

void save_edge_list(const Graph& graph, const std::filesystem::path& path) {
    auto out = open_out(path);
    for (const auto& [i, j] : graph.edges) out << i << ' ' << j << "\n";
}

Graph load_edge_list(const std::filesystem::path& path, std::uint32_t num_nodes) {
    auto in = open_in(path);
    Graph graph;
    graph.num_nodes = num_nodes;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::uint64_t a = 0, b = 0;
        if (!(fields >> a >> b)) fail(path, line_no, "expected `i j`");
        if (a == b) fail(path, line_no, "self-loop");
        if (a >= num_nodes || b >= num_nodes)
            fail(path, line_no, "node id " + std::to_string(std::max(a, b)) + " out of range");
        graph.edges.emplace_back(static_cast<std::uint32_t>(std::min(a, b)),
                                 static_cast<std::uint32_t>(std::max(a, b)));
    }
    std::sort(graph.edges.begin(), graph.edges.end());
    const auto dup = std::adjacent_find(graph.edges.begin(), graph.edges.end());
    if (dup != graph.edges.end())
        throw std::runtime_error(path.string() + ": duplicate edge " + std::to_string(dup->first) +
                                 " " + std::to_string(dup->second));
    return graph;
}

void save_latent_state(const LatentState& state, std::uint64_t seed,
                       const std::filesystem::path& state_path,
                       const std::filesystem::path& forces_path) {
    {
        auto out = open_out(state_path);
        out << "node,block,theta,phi\n";
        for (std::uint32_t node = 0; node < state.partition.num_nodes(); ++node)
            out << node << ',' << state.partition.block_of(node) << ',' << state.theta[node] << ','
                << state.phi[node] << "\n";
    }
    auto out = open_out(forces_path);
    out << "# beta=" << state.beta << " R=" << state.radius << " seed=" << seed << "\n";
    for (std::size_t i = 0; i < state.forces.n; ++i) {
        for (std::size_t j = 0; j < state.forces.n; ++j) {
            if (j) out << ',';
            out << state.forces.at(i, j);
        }
        out << "\n";
    }
}

LatentState load_latent_state(const std::filesystem::path& state_path,
                              const std::filesystem::path& forces_path) {
    LatentState state;

    {
        auto in = open_in(state_path);
        std::string line;
        std::size_t line_no = 0;
        std::vector<std::uint32_t> block_of;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#' || line.rfind("node", 0) == 0) continue;
            std::istringstream fields(line);
            std::string field;
            std::vector<std::string> parts;
            while (std::getline(fields, field, ',')) parts.push_back(field);
            if (parts.size() != 4) fail(state_path, line_no, "expected `node,block,theta,phi`");
            try {
                if (std::stoul(parts[0]) != block_of.size())
                    fail(state_path, line_no, "node ids must be 0..N-1 in order");
                block_of.push_back(static_cast<std::uint32_t>(std::stoul(parts[1])));
                state.theta.push_back(std::stod(parts[2]));
                state.phi.push_back(std::stod(parts[3]));
            } catch (const std::invalid_argument&) {
                fail(state_path, line_no, "malformed field");
            } catch (const std::out_of_range&) {
                fail(state_path, line_no, "field out of range");
            }
        }
        if (block_of.empty()) fail(state_path, line_no, "no rows");
        state.partition = BlockPartition::from_assignments(std::move(block_of));
    }

    {
        auto in = open_in(forces_path);
        std::string line;
        if (!std::getline(in, line) || line.empty() || line[0] != '#')
            fail(forces_path, 1, "missing `# beta=.. R=.. seed=..` header");
        std::istringstream header(line.substr(1));
        std::string token;
        bool have_beta = false, have_radius = false;
        while (header >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = token.substr(0, eq);
            if (key == "beta") {
                state.beta = std::stod(token.substr(eq + 1));
                have_beta = true;
            } else if (key == "R") {
                state.radius = std::stod(token.substr(eq + 1));
                have_radius = true;
            }
        }
        if (!have_beta || !have_radius) fail(forces_path, 1, "header must supply beta and R");

        std::size_t line_no = 1;
        std::vector<std::vector<double>> rows;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#') continue;
            std::vector<double> row;
            std::istringstream fields(line);
            std::string field;
            while (std::getline(fields, field, ',')) {
                try {
                    row.push_back(std::stod(field));
                } catch (const std::exception&) {
                    fail(forces_path, line_no, "malformed force entry");
                }
            }
            rows.push_back(std::move(row));
        }
        const std::size_t n = state.partition.num_blocks();
        if (rows.size() != n) fail(forces_path, line_no, "force matrix does not match block count");
        state.forces = SquareMatrix(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n) fail(forces_path, 0, "ragged force matrix");
            for (std::size_t j = 0; j < n; ++j) state.forces.at(i, j) = rows[i][j];
        }
    }

    state.mu_tilde = mu_tilde_of(state.beta, state.radius);
    state.validate();
    return state;
}

void save_calibration_report(const CalibrationReport& report, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "iterations=" << report.iterations << "\n";
    out << "converged=" << (report.converged ? "true" : "false") << "\n";
    out << "max_degree_residual=" << report.max_degree_residual << "\n";
    out << "max_block_residual=" << report.max_block_residual << "\n";
    out << "\n";
    out << "sweep,max_degree_residual,max_block_residual\n";
    for (std::size_t s = 0; s < report.residual_trace.size(); ++s)
        out << s << ',' << report.residual_trace[s] << ',' << report.block_residual_trace[s]
            << "\n";
}

void save_stats(const StatsReport& stats, const std::filesystem::path& stats_path,
                const std::filesystem::path& mixing_path) {
    auto out = open_out(stats_path);
    out << "nodes,edges,mean_degree,global_clustering,avg_local_clustering,isolated_nodes\n";
    out << stats.nodes << ',' << stats.edges << ',' << stats.mean_degree << ','
        << stats.global_clustering << ',' << stats.avg_local_clustering << ','
        << stats.isolated_nodes << "\n";
    save_mixing(stats.mixing, mixing_path);
}

void save_metadata(const std::vector<std::pair<std::string, std::string>>& entries,
                   const std::filesystem::path& path) {
    auto out = open_out(path);
    for (const auto& [key, value] : entries) out << key << '=' << value << "\n";
}

} // namespace rhbm
