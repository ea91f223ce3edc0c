#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disambig/record.hpp"

namespace disambig {

// Name-prefix blocking key. A prefix length of kFull uses the whole name
// part; otherwise the first N characters (shorter names are used whole).
struct BlockingKeySpec {
    static constexpr std::uint32_t kFull = 0;
    std::uint32_t first_name_prefix = 1;
    std::uint32_t last_name_prefix = kFull;
};

// Spec string syntax: "FN(n|f)+LN(n|f)", case-insensitive, e.g. "FN(1)+LN(f)"
// or "LN(3)+FN(1)". Throws UsageError on malformed input.
BlockingKeySpec parse_block_spec(const std::string& s);
std::string format_block_spec(const BlockingKeySpec& spec);

// "<last_part>|<first_part>". The separator keeps ("ab","c") and ("a","bc")
// in different blocks.
std::string block_key(const Mention& m, const BlockingKeySpec& spec);

struct Block {
    std::string key;
    std::vector<std::string> member_ids;  // ascending mention_id
};

// Exhaustive, disjoint partition; blocks ordered by key, members ascending.
std::vector<Block> partition(const std::vector<Mention>& mentions, const BlockingKeySpec& spec);

struct BlockGroup {
    std::vector<Block> blocks;
    std::uint32_t cap;  // concurrency cap for this size class
};

// Buckets blocks by member count: bucket i holds blocks with size <
// thresholds[i], the final bucket everything at or above the last threshold.
// Requires strictly ascending thresholds and |caps| == |thresholds| + 1.
std::vector<BlockGroup> group_by_size(std::vector<Block> blocks,
                                      const std::vector<std::size_t>& thresholds,
                                      const std::vector<std::uint32_t>& caps);

}  // namespace disambig
