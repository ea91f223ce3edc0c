#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace disambig {

// One appearance of an inventor name on one patent. This is the unit being
// clustered. Name fields are stored normalized (see normalize_name).
struct Mention {
    std::string mention_id;
    std::string patent_id;
    std::string first_name;
    std::string middle_name;
    std::string last_name;
    std::string suffix;
    std::uint32_t inventor_order = 1;   // 1-based position in the patent's inventor list
    std::uint32_t inventor_count = 1;
    std::string city;
    std::string state;
    std::string country;
    std::string assignee_name;
    std::string group;
    std::string subgroup;
    std::vector<std::string> title_terms;              // lowercase tokens
    std::vector<std::string> coinventor_last_names;    // filled from patent_id grouping at load
};

// Ground-truth cluster: the set of mention ids belonging to one real person.
struct LabeledCluster {
    std::string cluster_id;
    std::vector<std::string> member_ids;  // sorted, unique
};

// A loaded mention set plus an id -> index lookup.
struct Dataset {
    std::vector<Mention> mentions;
    std::unordered_map<std::string, std::size_t> index;

    const Mention& by_id(const std::string& id) const;
    void build_index();  // also materializes coinventor_last_names
};

enum class MentionFormat { csv, jsonl };

// Case-folds ASCII, strips surrounding whitespace and trailing periods.
// A single surviving character is an initial. Idempotent.
std::string normalize_name(const std::string& raw);

// Splits on runs of non-alphanumeric characters and lowercases.
std::vector<std::string> tokenize_title(const std::string& raw);

// Loads mentions from a CSV (fixed header) or JSONL file. Validates ids and
// order invariants, normalizes names, and materializes co-inventor last names
// from patent_id grouping. Throws DataError naming the row and field.
Dataset load_mentions(const std::string& path, MentionFormat format);

// Writes mentions back out in the CSV schema. Title terms are joined with
// single spaces, so load(write(load(x))) is field-identical to load(x).
void write_mentions_csv(const std::string& path, const std::vector<Mention>& mentions);

// Loads a two-column mention_id,cluster_id file. A mention id listed under
// two different cluster ids is an error. Returns clusters sorted by id.
std::vector<LabeledCluster> load_labels(const std::string& path);

void write_labels_csv(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& rows);

}  // namespace disambig
