#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "disambig/record.hpp"

namespace disambig {

struct PairwiseMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t matched_pairs = 0;
    std::uint64_t predicted_pairs = 0;
    std::uint64_t truth_pairs = 0;
    // Zero-denominator conventions report here instead of failing.
    std::vector<std::string> warnings;
};

// Pairwise precision/recall/F1 of a predicted assignment (mention_id ->
// cluster label) against labeled truth clusters. Predicted mentions outside
// the truth are ignored; a truth mention missing from pred is a DataError
// naming the ids. Zero denominators yield metric 0 plus a warning.
PairwiseMetrics pairwise_metrics(const std::map<std::string, std::string>& pred,
                                 const std::vector<LabeledCluster>& truth);

struct ClusterSizeReport {
    std::map<std::size_t, std::uint64_t> histogram;  // size -> frequency
    double mean_size = 0.0;
};

ClusterSizeReport cluster_size_histogram(const std::map<std::string, std::string>& pred);

}  // namespace disambig
