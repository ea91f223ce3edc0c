#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "disambig/features.hpp"

namespace disambig {

enum class PairLabel : std::uint8_t { kNonMatch = 0, kMatch = 1 };

struct TrainingSet {
    std::vector<FeatureVector> vectors;
    std::vector<PairLabel> labels;
};

// One tree node. Internal nodes carry feature >= 0 and both children; leaves
// carry feature == -1 and the bootstrap class counts.
struct TreeNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double n_neg = 0.0;
    double n_pos = 0.0;
};

struct DecisionTree {
    // Pre-order layout, root at index 0.
    std::vector<TreeNode> nodes;

    // 0 = non-match, 1 = match. Leaf majority; an exact tie votes non-match.
    int vote(const FeatureVector& x) const;
};

struct Forest {
    std::vector<DecisionTree> trees;
    std::uint32_t m_try = 5;
    std::uint64_t seed = 0;
    double oob_error = 0.0;
    std::array<double, kFeatureCount> importance{};
    std::string feature_order_id;

    // Per-tree in-bag flags over the training examples. Populated by train,
    // not serialized; oob_error() needs them.
    std::vector<std::vector<std::uint8_t>> inbag;
};

struct TrainOptions {
    std::uint32_t n_trees = 100;
    std::uint32_t m_try = 5;
    std::uint32_t min_leaf = 1;
    std::uint64_t seed = 0;
    // 0 lets the runtime pick; 1 forces the serial path. Results are
    // bit-identical either way: every tree derives its own seed.
    int n_threads = 0;
};

// Fits n_trees CART trees, each on a same-size bootstrap sample, choosing at
// every split the best Gini threshold among m_try features drawn without
// replacement. Ties break to the lowest feature index, then the lowest
// threshold. Populates oob_error and importance. Throws DataError on
// single-class or malformed data, UsageError on out-of-range options.
Forest train(const TrainingSet& data, const TrainOptions& opts);

// (neg_votes, pos_votes); the counts always sum to |trees|.
std::pair<std::uint32_t, std::uint32_t> predict_votes(const Forest& f, const FeatureVector& x);

// Fraction of non-match votes, the clustering distance: neg_votes / |trees|.
double distance(const Forest& f, const FeatureVector& x);

// Fraction of examples misclassified by the majority of the trees that did
// not sample them. Examples in every bag are excluded from the denominator;
// throws ModelError if no example is out-of-bag anywhere or if f carries no
// in-bag record for this data.
double oob_error(const Forest& f, const TrainingSet& data);

// Mean over trees of the per-feature Gini impurity decrease, each node's
// contribution weighted by its share of the root sample.
std::array<double, kFeatureCount> gini_importance(const Forest& f);

// Binary model file; byte layout documented in the README. Loading verifies
// magic, format version, and the feature-order id, and throws ModelError on
// any mismatch, truncation, or trailing bytes.
void save_forest(const Forest& f, const std::string& path);
Forest load_forest(const std::string& path);

}  // namespace disambig
