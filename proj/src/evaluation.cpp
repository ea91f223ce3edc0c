#include "disambig/evaluation.hpp"

#include <unordered_map>

#include "disambig/errors.hpp"

namespace disambig {

namespace {

std::uint64_t pairs_of(std::uint64_t n) { return n * (n - 1) / 2; }

}  // namespace

PairwiseMetrics pairwise_metrics(const std::map<std::string, std::string>& pred,
                                 const std::vector<LabeledCluster>& truth) {
    std::vector<std::string> missing;
    std::unordered_map<std::string, std::uint64_t> truth_sizes;
    std::unordered_map<std::string, std::uint64_t> pred_sizes;
    std::map<std::pair<std::string, std::string>, std::uint64_t> joint_sizes;
    for (const auto& cluster : truth) {
        for (const auto& id : cluster.member_ids) {
            const auto it = pred.find(id);
            if (it == pred.end()) {
                if (missing.size() < 10) missing.push_back(id);
                continue;
            }
            ++truth_sizes[cluster.cluster_id];
            ++pred_sizes[it->second];
            ++joint_sizes[{it->second, cluster.cluster_id}];
        }
    }
    if (!missing.empty()) {
        std::string msg = "truth mentions missing from the prediction:";
        for (const auto& id : missing) msg += " " + id;
        throw DataError(msg);
    }

    PairwiseMetrics m;
    for (const auto& [label, size] : pred_sizes) {
        (void)label;
        m.predicted_pairs += pairs_of(size);
    }
    for (const auto& [label, size] : truth_sizes) {
        (void)label;
        m.truth_pairs += pairs_of(size);
    }
    for (const auto& [labels, size] : joint_sizes) {
        (void)labels;
        m.matched_pairs += pairs_of(size);
    }

    if (m.predicted_pairs == 0) {
        m.warnings.push_back("no predicted pairs; precision reported as 0");
    } else {
        m.precision = static_cast<double>(m.matched_pairs) / static_cast<double>(m.predicted_pairs);
    }
    if (m.truth_pairs == 0) {
        m.warnings.push_back("no truth pairs; recall reported as 0");
    } else {
        m.recall = static_cast<double>(m.matched_pairs) / static_cast<double>(m.truth_pairs);
    }
    if (m.precision + m.recall > 0.0)
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

ClusterSizeReport cluster_size_histogram(const std::map<std::string, std::string>& pred) {
    ClusterSizeReport report;
    std::unordered_map<std::string, std::uint64_t> sizes;
    for (const auto& [id, label] : pred) {
        (void)id;
        ++sizes[label];
    }
    for (const auto& [label, size] : sizes) {
        (void)label;
        ++report.histogram[static_cast<std::size_t>(size)];
    }
    if (!sizes.empty())
        report.mean_size = static_cast<double>(pred.size()) / static_cast<double>(sizes.size());
    return report;
}

}  // namespace disambig
