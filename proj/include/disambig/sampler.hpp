#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disambig/blocking.hpp"
#include "disambig/forest.hpp"
#include "disambig/record.hpp"

namespace disambig {

struct PairSample {
    std::string a_id;  // a_id < b_id
    std::string b_id;
    PairLabel label = PairLabel::kNonMatch;
};

// Builds the pairwise training sample from labeled clusters. Singleton
// clusters contribute no positives; their members still appear as negative
// endpoints. Positives are every within-cluster unordered pair; negatives
// are cross-cluster pairs sharing a coarse block, sampled uniformly without
// replacement down to at most max_neg_per_pos * |positives|. Deterministic
// given seed. Throws DataError when labels reference unknown mentions or no
// positive pair exists.
std::vector<PairSample> build_pairs(const Dataset& ds,
                                    const std::vector<LabeledCluster>& labels,
                                    const BlockingKeySpec& coarse_key,
                                    double max_neg_per_pos,
                                    std::uint64_t seed);

// Audit dump: CSV a_id,b_id,label with label in {match, non-match}.
void write_pairs_csv(const std::vector<PairSample>& pairs, const std::string& path);

}  // namespace disambig
