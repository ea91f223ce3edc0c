#include "disambig/blocking.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "disambig/errors.hpp"

namespace disambig {

namespace {

// Parses one "XX(n|f)" clause, returning the prefix length (kFull for 'f').
std::uint32_t parse_clause(const std::string& clause, const std::string& tag,
                           const std::string& whole) {
    const auto fail = [&] {
        throw UsageError("bad blocking spec '" + whole +
                         "': expected FN(n|f)+LN(n|f), e.g. \"FN(1)+LN(f)\"");
    };
    if (clause.size() < 5 || clause[2] != '(' || clause.back() != ')') fail();
    std::string head;
    head += static_cast<char>(std::toupper(static_cast<unsigned char>(clause[0])));
    head += static_cast<char>(std::toupper(static_cast<unsigned char>(clause[1])));
    if (head != tag) fail();
    const std::string arg = clause.substr(3, clause.size() - 4);
    if (arg == "f" || arg == "F") return BlockingKeySpec::kFull;
    std::uint32_t n = 0;
    for (char c : arg) {
        if (!std::isdigit(static_cast<unsigned char>(c))) fail();
        n = n * 10 + static_cast<std::uint32_t>(c - '0');
        if (n > 1000) fail();
    }
    if (n < 1) fail();
    return n;
}

std::string truncate(const std::string& name, std::uint32_t prefix) {
    if (prefix == BlockingKeySpec::kFull || name.size() <= prefix) return name;
    return name.substr(0, prefix);
}

std::string format_clause(std::uint32_t prefix) {
    return prefix == BlockingKeySpec::kFull ? "f" : std::to_string(prefix);
}

}  // namespace

BlockingKeySpec parse_block_spec(const std::string& s) {
    const auto plus = s.find('+');
    if (plus == std::string::npos || plus == 0 || plus + 1 >= s.size())
        throw UsageError("bad blocking spec '" + s +
                         "': expected FN(n|f)+LN(n|f), e.g. \"FN(1)+LN(f)\"");
    const std::string a = s.substr(0, plus);
    const std::string b = s.substr(plus + 1);
    BlockingKeySpec spec;
    const bool fn_first =
        a.size() >= 2 && std::toupper(static_cast<unsigned char>(a[0])) == 'F';
    const std::string& fn = fn_first ? a : b;
    const std::string& ln = fn_first ? b : a;
    spec.first_name_prefix = parse_clause(fn, "FN", s);
    spec.last_name_prefix = parse_clause(ln, "LN", s);
    return spec;
}

std::string format_block_spec(const BlockingKeySpec& spec) {
    return "FN(" + format_clause(spec.first_name_prefix) + ")+LN(" +
           format_clause(spec.last_name_prefix) + ")";
}

std::string block_key(const Mention& m, const BlockingKeySpec& spec) {
    return truncate(m.last_name, spec.last_name_prefix) + "|" +
           truncate(m.first_name, spec.first_name_prefix);
}

std::vector<Block> partition(const std::vector<Mention>& mentions, const BlockingKeySpec& spec) {
    std::map<std::string, std::vector<std::string>> by_key;
    for (const auto& m : mentions) by_key[block_key(m, spec)].push_back(m.mention_id);
    std::vector<Block> blocks;
    blocks.reserve(by_key.size());
    for (auto& [key, ids] : by_key) {
        std::sort(ids.begin(), ids.end());
        blocks.push_back(Block{key, std::move(ids)});
    }
    return blocks;
}

std::vector<BlockGroup> group_by_size(std::vector<Block> blocks,
                                      const std::vector<std::size_t>& thresholds,
                                      const std::vector<std::uint32_t>& caps) {
    if (caps.size() != thresholds.size() + 1)
        throw UsageError("size grouping needs exactly one more cap than thresholds");
    for (std::size_t i = 0; i + 1 < thresholds.size(); ++i) {
        if (thresholds[i] >= thresholds[i + 1])
            throw UsageError("size thresholds must be strictly ascending");
    }
    for (auto c : caps) {
        if (c < 1) throw UsageError("concurrency caps must be at least 1");
    }
    std::vector<BlockGroup> groups(caps.size());
    for (std::size_t i = 0; i < caps.size(); ++i) groups[i].cap = caps[i];
    for (auto& b : blocks) {
        std::size_t bucket = thresholds.size();
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
            if (b.member_ids.size() < thresholds[i]) {
                bucket = i;
                break;
            }
        }
        groups[bucket].blocks.push_back(std::move(b));
    }
    return groups;
}

}  // namespace disambig
