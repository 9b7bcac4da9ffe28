#include "rhbm/partition.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace rhbm {

BlockPartition BlockPartition::from_assignments(std::vector<std::uint32_t> block_of) {
    if (block_of.empty()) throw std::invalid_argument("partition: no nodes");

    std::uint32_t max_block = 0;
    for (std::uint32_t b : block_of) max_block = std::max(max_block, b);
    const std::uint32_t n = max_block + 1;

    BlockPartition part;
    part.block_of_ = std::move(block_of);
    part.sizes_.assign(n, 0);
    for (std::uint32_t b : part.block_of_) ++part.sizes_[b];
    for (std::uint32_t b = 0; b < n; ++b)
        if (part.sizes_[b] == 0)
            throw std::invalid_argument("partition: block " + std::to_string(b) +
                                        " is empty; block ids must be contiguous");

    part.members_.resize(n);
    for (std::uint32_t b = 0; b < n; ++b) part.members_[b].reserve(part.sizes_[b]);
    for (std::uint32_t node = 0; node < part.block_of_.size(); ++node)
        part.members_[part.block_of_[node]].push_back(node);
    return part;
}

BlockPartition make_partition(std::uint32_t num_nodes, std::uint32_t num_blocks,
                              const std::vector<std::uint32_t>& sizes) {
    if (num_blocks == 0) throw std::invalid_argument("make_partition: need at least one block");
    if (num_blocks > num_nodes)
        throw std::invalid_argument("make_partition: more blocks than nodes");

    std::vector<std::uint32_t> resolved;
    if (!sizes.empty()) {
        if (sizes.size() != num_blocks)
            throw std::invalid_argument("make_partition: expected one size per block");
        std::uint64_t total = 0;
        for (std::uint32_t s : sizes) {
            if (s == 0) throw std::invalid_argument("make_partition: empty block in explicit sizes");
            total += s;
        }
        if (total != num_nodes)
            throw std::invalid_argument("make_partition: explicit sizes sum to " +
                                        std::to_string(total) + ", expected " +
                                        std::to_string(num_nodes));
        resolved = sizes;
    } else {
        // Near-equal split: the first (N mod n) blocks take the extra node.
        const std::uint32_t base = num_nodes / num_blocks;
        const std::uint32_t remainder = num_nodes % num_blocks;
        resolved.assign(num_blocks, base);
        for (std::uint32_t b = 0; b < remainder; ++b) ++resolved[b];
    }

    std::vector<std::uint32_t> block_of(num_nodes);
    std::uint32_t node = 0;
    for (std::uint32_t b = 0; b < num_blocks; ++b)
        for (std::uint32_t k = 0; k < resolved[b]; ++k) block_of[node++] = b;
    return BlockPartition::from_assignments(std::move(block_of));
}

} // namespace rhbm
