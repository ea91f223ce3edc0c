#include "disambig/features.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "disambig/errors.hpp"

namespace disambig {

const std::array<const char*, kFeatureCount> kFeatureNames = {
    "fn_tier", "fn_jw", "fn_sdx",
    "mn_tier", "mn_jw", "mn_sdx",
    "ln_tier", "ln_jw", "ln_sdx", "ln_idf",
    "suffix_eq", "order_cmp",
    "city_eq", "city_jw", "city_sdx",
    "state_eq", "country_eq",
    "coauth_shared", "coauth_idf", "coauth_jacc",
    "asg_eq", "asg_jw", "asg_sdx",
    "group_eq", "subgroup_eq",
    "title_shared",
};

namespace {

std::string join_names() {
    std::string s;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (i) s += ',';
        s += kFeatureNames[i];
    }
    return s;
}

}  // namespace

const std::string kFeatureOrderId = join_names();

const std::unordered_set<std::string>& default_stop_words() {
    static const std::unordered_set<std::string> words = {
        "a", "about", "above", "after", "all", "an", "and", "any", "are",
        "as", "at", "be", "between", "both", "by", "during", "each", "for",
        "from", "has", "have", "in", "into", "is", "it", "its", "not", "of",
        "on", "or", "over", "per", "such", "than", "that", "the", "these",
        "this", "through", "to", "under", "using", "via", "when", "where",
        "which", "while", "with", "within", "without",
    };
    return words;
}

std::unordered_set<std::string> load_stop_words(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open stop-word file: " + path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string word;
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c)))
                word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        if (!word.empty()) words.insert(word);
    }
    if (words.empty()) throw DataError("stop-word file yields no words: " + path);
    return words;
}

FeatureContext make_context(const Dataset& ds, std::unordered_set<std::string> stop_words) {
    if (stop_words.empty()) throw DataError("stop-word set must be non-empty");
    std::vector<std::string> last_names;
    last_names.reserve(ds.mentions.size());
    for (const auto& m : ds.mentions) last_names.push_back(m.last_name);
    FeatureContext ctx;
    ctx.last_name_idf = NameIdfTable::build(last_names);
    ctx.stop_words = std::move(stop_words);
    return ctx;
}

int order_feature(const Mention& a, const Mention& b) {
    if (a.inventor_order == 1 && b.inventor_order == 1) return 2;
    if (a.inventor_order == a.inventor_count && b.inventor_order == b.inventor_count) return 1;
    return 0;
}

namespace {

double exact(const std::string& a, const std::string& b) {
    return a == b ? 1.0 : 0.0;
}

double soundex_eq(const std::string& a, const std::string& b) {
    return soundex(a) == soundex(b) ? 1.0 : 0.0;
}

std::vector<std::string> distinct_sorted(const std::vector<std::string>& v) {
    std::vector<std::string> out = v;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

FeatureVector extract(const Mention& a, const Mention& b, const FeatureContext& ctx) {
    FeatureVector f{};

    f[FN_TIER] = tiered_exact(a.first_name, b.first_name);
    f[FN_JW] = jaro_winkler(a.first_name, b.first_name);
    f[FN_SDX] = soundex_eq(a.first_name, b.first_name);

    f[MN_TIER] = tiered_exact(a.middle_name, b.middle_name);
    f[MN_JW] = jaro_winkler(a.middle_name, b.middle_name);
    f[MN_SDX] = soundex_eq(a.middle_name, b.middle_name);

    f[LN_TIER] = tiered_exact(a.last_name, b.last_name);
    f[LN_JW] = jaro_winkler(a.last_name, b.last_name);
    f[LN_SDX] = soundex_eq(a.last_name, b.last_name);
    f[LN_IDF] = a.last_name == b.last_name
                    ? ctx.last_name_idf.idf(a.last_name)
                    : std::min(ctx.last_name_idf.idf(a.last_name),
                               ctx.last_name_idf.idf(b.last_name));

    f[SUFFIX_EQ] = exact(a.suffix, b.suffix);
    f[ORDER_CMP] = order_feature(a, b);

    f[CITY_EQ] = exact(a.city, b.city);
    f[CITY_JW] = jaro_winkler(a.city, b.city);
    f[CITY_SDX] = soundex_eq(a.city, b.city);

    f[STATE_EQ] = exact(a.state, b.state);
    f[COUNTRY_EQ] = exact(a.country, b.country);

    const auto ca = distinct_sorted(a.coinventor_last_names);
    const auto cb = distinct_sorted(b.coinventor_last_names);
    std::vector<std::string> shared;
    std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(),
                          std::back_inserter(shared));
    double idf_sum = 0.0;
    for (const auto& name : shared) idf_sum += ctx.last_name_idf.idf(name);
    f[COAUTH_SHARED] = static_cast<double>(shared.size());
    f[COAUTH_IDF] = idf_sum;
    f[COAUTH_JACC] = jaccard(a.coinventor_last_names, b.coinventor_last_names);

    f[ASG_EQ] = exact(a.assignee_name, b.assignee_name);
    f[ASG_JW] = jaro_winkler(a.assignee_name, b.assignee_name);
    f[ASG_SDX] = soundex_eq(a.assignee_name, b.assignee_name);

    f[GROUP_EQ] = exact(a.group, b.group);
    f[SUBGROUP_EQ] = exact(a.subgroup, b.subgroup);

    const auto ta = distinct_sorted(a.title_terms);
    const auto tb = distinct_sorted(b.title_terms);
    std::vector<std::string> shared_terms;
    std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(),
                          std::back_inserter(shared_terms));
    std::size_t n_shared = 0;
    for (const auto& term : shared_terms) {
        if (!ctx.stop_words.count(term)) ++n_shared;
    }
    f[TITLE_SHARED] = static_cast<double>(n_shared);

    return f;
}

}  // namespace disambig
