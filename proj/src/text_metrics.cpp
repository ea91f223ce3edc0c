#include "disambig/text_metrics.hpp"

#include <algorithm>
#include <cctype>

namespace disambig {

int tiered_exact(const std::string& a, const std::string& b) {
    if (a.empty() || b.empty()) return 1;
    const bool full_a = a.size() > 1;
    const bool full_b = b.size() > 1;
    if (full_a && full_b) return a == b ? 3 : 0;
    return a[0] == b[0] ? 2 : 1;
}

double jaro(const std::string& s1, const std::string& s2) {
    const std::size_t len1 = s1.size(), len2 = s2.size();
    if (len1 == 0 && len2 == 0) return 1.0;  // vacuously identical
    if (len1 == 0 || len2 == 0) return 0.0;

    const std::size_t max_len = std::max(len1, len2);
    const std::size_t window = max_len / 2 > 0 ? max_len / 2 - 1 : 0;

    std::vector<bool> matched1(len1, false), matched2(len2, false);
    std::size_t n_match = 0;
    for (std::size_t i = 0; i < len1; ++i) {
        const std::size_t lo = i > window ? i - window : 0;
        const std::size_t hi = std::min(i + window + 1, len2);
        for (std::size_t j = lo; j < hi; ++j) {
            if (!matched2[j] && s1[i] == s2[j]) {
                matched1[i] = true;
                matched2[j] = true;
                ++n_match;
                break;
            }
        }
    }
    if (n_match == 0) return 0.0;

    // Count matched characters whose order differs between the two match
    // sequences; the score halves this count.
    std::size_t n_trans = 0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < len1; ++i) {
        if (!matched1[i]) continue;
        while (!matched2[k]) ++k;
        if (s1[i] != s2[k]) ++n_trans;
        ++k;
    }

    const double m = static_cast<double>(n_match);
    return (m / static_cast<double>(len1) + m / static_cast<double>(len2) +
            (m - 0.5 * static_cast<double>(n_trans)) / m) /
           3.0;
}

double jaro_winkler(const std::string& s1, const std::string& s2) {
    const double d = jaro(s1, s2);
    std::size_t prefix = 0;
    const std::size_t limit = std::min({s1.size(), s2.size(), std::size_t{4}});
    while (prefix < limit && s1[prefix] == s2[prefix]) ++prefix;
    return d + static_cast<double>(prefix) * 0.1 * (1.0 - d);
}

namespace {

// 0 = not coded (vowels, y, non-letters), 7 = transparent (h, w).
int soundex_code(char c) {
    switch (std::tolower(static_cast<unsigned char>(c))) {
        case 'b': case 'f': case 'p': case 'v': return 1;
        case 'c': case 'g': case 'j': case 'k': case 'q': case 's': case 'x': case 'z': return 2;
        case 'd': case 't': return 3;
        case 'l': return 4;
        case 'm': case 'n': return 5;
        case 'r': return 6;
        case 'h': case 'w': return 7;
        default: return 0;
    }
}

}  // namespace

std::string soundex(const std::string& s) {
    std::size_t first = 0;
    while (first < s.size() && !std::isalpha(static_cast<unsigned char>(s[first]))) ++first;
    if (first == s.size()) return "0000";

    std::string out;
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(s[first]))));
    int last_code = soundex_code(s[first]);
    if (last_code == 7) last_code = 0;

    for (std::size_t i = first + 1; i < s.size() && out.size() < 4; ++i) {
        if (!std::isalpha(static_cast<unsigned char>(s[i]))) {
            last_code = 0;  // separator, like a vowel
            continue;
        }
        const int code = soundex_code(s[i]);
        if (code == 7) continue;  // h/w: transparent, last_code unchanged
        if (code == 0) {
            last_code = 0;
            continue;
        }
        if (code != last_code) out.push_back(static_cast<char>('0' + code));
        last_code = code;
    }
    out.resize(4, '0');
    return out;
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::vector<std::string> sa(a), sb(b);
    std::sort(sa.begin(), sa.end());
    sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
    std::sort(sb.begin(), sb.end());
    sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
    std::size_t inter = 0;
    std::size_t i = 0, j = 0;
    while (i < sa.size() && j < sb.size()) {
        if (sa[i] == sb[j]) { ++inter; ++i; ++j; }
        else if (sa[i] < sb[j]) ++i;
        else ++j;
    }
    const std::size_t uni = sa.size() + sb.size() - inter;
    if (uni == 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double NameIdfTable::idf(const std::string& name) const {
    auto it = name_counts_.find(name);
    if (it == name_counts_.end()) {
        unseen_lookups_.fetch_add(1, std::memory_order_relaxed);
        return static_cast<double>(total_records_);
    }
    return static_cast<double>(total_records_) / static_cast<double>(it->second);
}

std::uint64_t NameIdfTable::count(const std::string& name) const {
    auto it = name_counts_.find(name);
    return it == name_counts_.end() ? 0 : it->second;
}

}  // namespace disambig
