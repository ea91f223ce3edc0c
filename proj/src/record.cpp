#include "disambig/record.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "disambig/csv.hpp"
#include "disambig/errors.hpp"

namespace disambig {

namespace {

const std::vector<std::string> kCsvHeader = {
    "mention_id", "patent_id",  "first_name", "middle_name", "last_name",
    "suffix",     "inventor_order", "inventor_count", "city", "state",
    "country",    "assignee",   "group",      "subgroup",    "title"};

std::string ascii_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::uint32_t parse_count(const std::string& s, std::size_t line_no, const char* field) {
    std::uint32_t value = 0;
    bool any = false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw DataError("row at line " + std::to_string(line_no) + ": field '" + field +
                            "' is not a non-negative integer: '" + s + "'");
        }
        value = value * 10 + static_cast<std::uint32_t>(c - '0');
        any = true;
    }
    if (!any) {
        throw DataError("row at line " + std::to_string(line_no) + ": field '" + field +
                        "' is empty");
    }
    return value;
}

void validate_mention(const Mention& m, std::size_t line_no) {
    if (m.mention_id.empty()) {
        throw DataError("row at line " + std::to_string(line_no) + ": field 'mention_id' is empty");
    }
    if (m.last_name.empty()) {
        throw DataError("row at line " + std::to_string(line_no) +
                        ": field 'last_name' is empty after normalization (mention " +
                        m.mention_id + ")");
    }
    if (m.inventor_order < 1 || m.inventor_order > m.inventor_count) {
        throw DataError("row at line " + std::to_string(line_no) + ": field 'inventor_order' (" +
                        std::to_string(m.inventor_order) + ") outside [1, inventor_count=" +
                        std::to_string(m.inventor_count) + "] (mention " + m.mention_id + ")");
    }
}

Mention from_fields(const std::vector<std::string>& f, std::size_t line_no) {
    Mention m;
    m.mention_id = f[0];
    m.patent_id = f[1];
    m.first_name = normalize_name(f[2]);
    m.middle_name = normalize_name(f[3]);
    m.last_name = normalize_name(f[4]);
    m.suffix = normalize_name(f[5]);
    m.inventor_order = parse_count(f[6], line_no, "inventor_order");
    m.inventor_count = parse_count(f[7], line_no, "inventor_count");
    m.city = normalize_name(f[8]);
    m.state = normalize_name(f[9]);
    m.country = normalize_name(f[10]);
    m.assignee_name = normalize_name(f[11]);
    m.group = normalize_name(f[12]);
    m.subgroup = normalize_name(f[13]);
    m.title_terms = tokenize_title(f[14]);
    validate_mention(m, line_no);
    return m;
}

Mention from_json(const std::string& line, std::size_t line_no) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("row at line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) {
        throw DataError("row at line " + std::to_string(line_no) + ": not a JSON object");
    }
    auto str = [&](const char* key, bool required) -> std::string {
        auto it = j.find(key);
        if (it == j.end() || it->is_null()) {
            if (required) {
                throw DataError("row at line " + std::to_string(line_no) + ": field '" + key +
                                "' is missing");
            }
            return "";
        }
        if (!it->is_string()) {
            throw DataError("row at line " + std::to_string(line_no) + ": field '" + key +
                            "' is not a string");
        }
        return it->get<std::string>();
    };
    auto num = [&](const char* key) -> std::uint32_t {
        auto it = j.find(key);
        if (it == j.end() || !it->is_number_unsigned()) {
            throw DataError("row at line " + std::to_string(line_no) + ": field '" + key +
                            "' is missing or not a non-negative integer");
        }
        return it->get<std::uint32_t>();
    };
    Mention m;
    m.mention_id = str("mention_id", true);
    m.patent_id = str("patent_id", true);
    m.first_name = normalize_name(str("first_name", false));
    m.middle_name = normalize_name(str("middle_name", false));
    m.last_name = normalize_name(str("last_name", true));
    m.suffix = normalize_name(str("suffix", false));
    m.inventor_order = num("inventor_order");
    m.inventor_count = num("inventor_count");
    m.city = normalize_name(str("city", false));
    m.state = normalize_name(str("state", false));
    m.country = normalize_name(str("country", false));
    m.assignee_name = normalize_name(str("assignee", false));
    m.group = normalize_name(str("group", false));
    m.subgroup = normalize_name(str("subgroup", false));
    m.title_terms = tokenize_title(str("title", false));
    validate_mention(m, line_no);
    return m;
}

}  // namespace

std::string normalize_name(const std::string& raw) {
    std::size_t begin = 0, end = raw.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(raw[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
    while (end > begin && raw[end - 1] == '.') --end;
    // A trailing period may expose more whitespace ("J. "), so trim again.
    while (end > begin && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
    return ascii_lower(raw.substr(begin, end - begin));
}

std::vector<std::string> tokenize_title(const std::string& raw) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : raw) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

const Mention& Dataset::by_id(const std::string& id) const {
    auto it = index.find(id);
    if (it == index.end()) throw DataError("unknown mention_id: " + id);
    return mentions[it->second];
}

void Dataset::build_index() {
    index.clear();
    index.reserve(mentions.size());
    for (std::size_t i = 0; i < mentions.size(); ++i) {
        auto [it, inserted] = index.emplace(mentions[i].mention_id, i);
        if (!inserted) {
            throw DataError("duplicate mention_id: " + mentions[i].mention_id);
        }
    }
    // Materialize co-inventor last names from patent grouping so feature
    // extraction never needs cross-record lookups.
    std::unordered_map<std::string, std::vector<std::size_t>> by_patent;
    for (std::size_t i = 0; i < mentions.size(); ++i) {
        by_patent[mentions[i].patent_id].push_back(i);
    }
    for (auto& m : mentions) m.coinventor_last_names.clear();
    for (auto& [patent, members] : by_patent) {
        if (members.size() < 2) continue;
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            return mentions[a].inventor_order < mentions[b].inventor_order;
        });
        for (std::size_t i : members) {
            auto& names = mentions[i].coinventor_last_names;
            for (std::size_t j : members) {
                if (j != i) names.push_back(mentions[j].last_name);
            }
        }
    }
}

Dataset load_mentions(const std::string& path, MentionFormat format) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open mentions file: " + path);

    Dataset ds;
    if (format == MentionFormat::csv) {
        auto rows = csv::read_all(in);
        if (rows.empty()) throw DataError(path + ": missing header row");
        if (rows.front().fields != kCsvHeader) {
            throw DataError(path + ": bad CSV header; expected mention_id,patent_id,first_name,"
                            "middle_name,last_name,suffix,inventor_order,inventor_count,city,"
                            "state,country,assignee,group,subgroup,title");
        }
        ds.mentions.reserve(rows.size() - 1);
        for (std::size_t r = 1; r < rows.size(); ++r) {
            if (rows[r].fields.size() != kCsvHeader.size()) {
                throw DataError("row at line " + std::to_string(rows[r].line_no) + ": expected " +
                                std::to_string(kCsvHeader.size()) + " fields, got " +
                                std::to_string(rows[r].fields.size()));
            }
            ds.mentions.push_back(from_fields(rows[r].fields, rows[r].line_no));
        }
    } else {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            ds.mentions.push_back(from_json(line, line_no));
        }
    }
    ds.build_index();
    return ds;
}

void write_mentions_csv(const std::string& path, const std::vector<Mention>& mentions) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write mentions file: " + path);
    csv::write_row(out, kCsvHeader);
    for (const auto& m : mentions) {
        std::string title;
        for (std::size_t i = 0; i < m.title_terms.size(); ++i) {
            if (i) title.push_back(' ');
            title += m.title_terms[i];
        }
        csv::write_row(out, {m.mention_id, m.patent_id, m.first_name, m.middle_name, m.last_name,
                             m.suffix, std::to_string(m.inventor_order),
                             std::to_string(m.inventor_count), m.city, m.state, m.country,
                             m.assignee_name, m.group, m.subgroup, title});
    }
}

std::vector<LabeledCluster> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open labels file: " + path);
    auto rows = csv::read_all(in);
    if (rows.empty()) return {};  // empty file: empty list

    std::size_t first = 0;
    if (rows[0].fields == std::vector<std::string>{"mention_id", "cluster_id"}) {
        first = 1;
    } else if (rows[0].fields.size() != 2) {
        throw DataError(path + ": expected header mention_id,cluster_id");
    }

    std::unordered_map<std::string, std::string> assigned;
    std::map<std::string, std::vector<std::string>> clusters;
    for (std::size_t r = first; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 2) {
            throw DataError("row at line " + std::to_string(row.line_no) +
                            ": expected 2 fields, got " + std::to_string(row.fields.size()));
        }
        const auto& mention = row.fields[0];
        const auto& cluster = row.fields[1];
        if (mention.empty() || cluster.empty()) {
            throw DataError("row at line " + std::to_string(row.line_no) + ": empty id");
        }
        auto [it, inserted] = assigned.emplace(mention, cluster);
        if (!inserted) {
            if (it->second != cluster) {
                throw DataError("mention_id " + mention + " appears under two cluster_ids (" +
                                it->second + ", " + cluster + ")");
            }
            continue;  // duplicate identical row
        }
        clusters[cluster].push_back(mention);
    }

    std::vector<LabeledCluster> out;
    out.reserve(clusters.size());
    for (auto& [id, members] : clusters) {
        std::sort(members.begin(), members.end());
        out.push_back(LabeledCluster{id, std::move(members)});
    }
    return out;
}

void write_labels_csv(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write labels file: " + path);
    csv::write_row(out, {"mention_id", "cluster_id"});
    for (const auto& [mention, cluster] : rows) {
        csv::write_row(out, {mention, cluster});
    }
}

}  // namespace disambig
