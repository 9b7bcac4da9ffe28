#pragma once

#include <cstdint>
#include <vector>

namespace rhbm {

// Assignment of N nodes to n disjoint, non-empty blocks with contiguous ids
// 0..n-1. Immutable after construction; member lists are kept sorted.
class BlockPartition {
public:
    BlockPartition() = default;

    // Validates and indexes an arbitrary node -> block assignment.
    static BlockPartition from_assignments(std::vector<std::uint32_t> block_of);

    std::uint32_t num_nodes() const { return static_cast<std::uint32_t>(block_of_.size()); }
    std::uint32_t num_blocks() const { return static_cast<std::uint32_t>(sizes_.size()); }

    std::uint32_t block_of(std::uint32_t node) const { return block_of_[node]; }
    std::uint32_t block_size(std::uint32_t block) const { return sizes_[block]; }

    const std::vector<std::uint32_t>& assignments() const { return block_of_; }
    const std::vector<std::uint32_t>& sizes() const { return sizes_; }
    const std::vector<std::uint32_t>& members(std::uint32_t block) const { return members_[block]; }

private:
    std::vector<std::uint32_t> block_of_;
    std::vector<std::uint32_t> sizes_;
    std::vector<std::vector<std::uint32_t>> members_;
};

// Near-equal partition into contiguous id ranges: the first (N mod n) blocks
// get one extra node. Explicit sizes override the default split.
BlockPartition make_partition(std::uint32_t num_nodes, std::uint32_t num_blocks,
                              const std::vector<std::uint32_t>& sizes = {});

} // namespace rhbm
