#pragma once

#include <array>
#include <string>
#include <unordered_set>
#include <vector>

#include "disambig/record.hpp"
#include "disambig/text_metrics.hpp"

namespace disambig {

inline constexpr std::size_t kFeatureCount = 26;

// Canonical feature order. Serialized models carry kFeatureOrderId and refuse
// to load against a different order, so this list is frozen.
extern const std::array<const char*, kFeatureCount> kFeatureNames;
extern const std::string kFeatureOrderId;

enum FeatureIndex : std::size_t {
    FN_TIER = 0, FN_JW, FN_SDX,
    MN_TIER, MN_JW, MN_SDX,
    LN_TIER, LN_JW, LN_SDX, LN_IDF,
    SUFFIX_EQ, ORDER_CMP,
    CITY_EQ, CITY_JW, CITY_SDX,
    STATE_EQ, COUNTRY_EQ,
    COAUTH_SHARED, COAUTH_IDF, COAUTH_JACC,
    ASG_EQ, ASG_JW, ASG_SDX,
    GROUP_EQ, SUBGROUP_EQ,
    TITLE_SHARED,
};

using FeatureVector = std::array<double, kFeatureCount>;

// Shared context for pairwise extraction: corpus-level last-name IDF and the
// stop-word list used by the title term comparison.
struct FeatureContext {
    NameIdfTable last_name_idf;
    std::unordered_set<std::string> stop_words;
};

// The built-in English stop-word list (~50 words).
const std::unordered_set<std::string>& default_stop_words();

// One lowercase word per line; '#' starts a comment. Throws DataError if the
// file is unreadable or yields an empty list.
std::unordered_set<std::string> load_stop_words(const std::string& path);

FeatureContext make_context(const Dataset& ds,
                            std::unordered_set<std::string> stop_words = default_stop_words());

// Order comparison: 2 if both mentions are first inventor, 1 if both are
// last, 0 otherwise. The first-inventor test has precedence, so two
// single-inventor patents compare as 2.
int order_feature(const Mention& a, const Mention& b);

// Builds the pairwise comparison vector in canonical order. Symmetric in its
// mention arguments.
FeatureVector extract(const Mention& a, const Mention& b, const FeatureContext& ctx);

}  // namespace disambig
