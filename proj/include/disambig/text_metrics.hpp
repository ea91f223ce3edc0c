#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace disambig {

// Tiered exact match over normalized name parts. A part of length >= 2 is a
// full name; a single character is an initial.
//   3  both full and equal
//   2  not both full, initials agree
//   1  not both full, initials disagree; also any empty side (no evidence)
//   0  both full and unequal
int tiered_exact(const std::string& a, const std::string& b);

// Jaro similarity in [0,1]. Characters match when equal and within
// floor(max(|s1|,|s2|)/2) - 1 positions; the transposition count is the
// number of matched characters whose order differs between the two match
// sequences, halved in the score. Two empty strings compare as 1.
double jaro(const std::string& s1, const std::string& s2);

// Jaro with a common-prefix bonus: d + l * 0.1 * (1 - d), prefix capped at 4.
double jaro_winkler(const std::string& s1, const std::string& s2);

// Classic 4-character Soundex code. The first letter is kept (uppercased);
// later consonants map to digit groups {bfpv}=1 {cgjkqsxz}=2 {dt}=3 {l}=4
// {mn}=5 {r}=6. Adjacent equal digits collapse, including across h and w;
// vowels, y, and non-letters separate runs. Empty input (or input with no
// letters) codes as "0000".
std::string soundex(const std::string& s);

// |a ∩ b| / |a ∪ b| over string sets; 0 when both are empty.
double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Inverse document frequency of names: total records divided by records
// carrying the name (a raw ratio, no logarithm). Immutable once built.
class NameIdfTable {
public:
    NameIdfTable() = default;
    NameIdfTable(const NameIdfTable& o)
        : total_records_(o.total_records_),
          name_counts_(o.name_counts_),
          unseen_lookups_(o.unseen_lookups_.load()) {}
    NameIdfTable(NameIdfTable&& o) noexcept
        : total_records_(o.total_records_),
          name_counts_(std::move(o.name_counts_)),
          unseen_lookups_(o.unseen_lookups_.load()) {}
    NameIdfTable& operator=(const NameIdfTable& o) {
        total_records_ = o.total_records_;
        name_counts_ = o.name_counts_;
        unseen_lookups_.store(o.unseen_lookups_.load());
        return *this;
    }
    NameIdfTable& operator=(NameIdfTable&& o) noexcept {
        total_records_ = o.total_records_;
        name_counts_ = std::move(o.name_counts_);
        unseen_lookups_.store(o.unseen_lookups_.load());
        return *this;
    }

    template <typename Range>
    static NameIdfTable build(const Range& names) {
        NameIdfTable t;
        for (const auto& n : names) {
            ++t.name_counts_[n];
            ++t.total_records_;
        }
        return t;
    }

    // Unseen names are treated as maximally rare (count 1) and counted so
    // callers can log how often that fallback fired.
    double idf(const std::string& name) const;

    std::uint64_t total_records() const { return total_records_; }
    std::uint64_t count(const std::string& name) const;
    std::uint64_t unseen_lookups() const { return unseen_lookups_.load(); }

private:
    std::uint64_t total_records_ = 0;
    std::unordered_map<std::string, std::uint64_t> name_counts_;
    mutable std::atomic<std::uint64_t> unseen_lookups_{0};
};

}  // namespace disambig
