#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disambig/blocking.hpp"
#include "disambig/synth.hpp"

namespace disambig {

// Fully resolved run configuration. The CLI layer assembles this from flags,
// an optional key=value config file, and built-in defaults, in that
// precedence order.
struct PipelineConfig {
    std::string mentions_path;
    std::string labels_path;
    std::string model_path;
    std::string out_path;
    std::string clusters_path;   // evaluate: the predicted assignment
    std::string stopwords_path;  // empty = built-in list
    std::string pairs_out_path;  // train: optional sampled-pair audit dump

    BlockingKeySpec block{1, BlockingKeySpec::kFull};  // FN(1)+LN(f)
    BlockingKeySpec coarse_block{1, 3};                // FN(1)+LN(3)

    std::uint32_t n_trees = 100;
    std::uint32_t m_try = 5;
    double max_neg_per_pos = 1.0;

    double eps = 0.5;
    std::uint32_t min_pts = 2;
    std::size_t cache_cap = 5000;

    std::uint64_t seed = 0;
    std::uint32_t max_threads = 0;  // 0 = use the runtime's thread count
    std::vector<std::size_t> thresholds = {500, 5000};
    std::vector<std::uint32_t> caps = {24, 12, 6};
    // Explicit --caps are used verbatim; otherwise the defaults above are
    // scaled by max_threads relative to the 24-thread reference machine.
    bool caps_explicit = false;

    std::uint32_t top_n = 10;  // importance report depth

    SynthParams synth;
};

// The caps actually applied: cfg.caps when explicit, else the defaults scaled
// to max(1, cap * threads / 24).
std::vector<std::uint32_t> effective_caps(const PipelineConfig& cfg);

// Thread count used for tree building and feature extraction.
std::uint32_t effective_threads(const PipelineConfig& cfg);

// Commands return 0 on success and throw Usage/Data/ModelError otherwise.
int cmd_train(const PipelineConfig& cfg);
int cmd_disambiguate(const PipelineConfig& cfg);
int cmd_evaluate(const PipelineConfig& cfg);
int cmd_synth(const PipelineConfig& cfg);
int cmd_importance(const PipelineConfig& cfg);

}  // namespace disambig
