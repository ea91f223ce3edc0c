#pragma once

#include <cstdint>
#include <vector>

#include "disambig/record.hpp"

namespace disambig {

// Synthetic labeled corpus: persons with stable identities (names, home city,
// employer, field, collaborators) emitting patent mentions, with name
// corruption applied per mention. The uncorrupted person assignment is the
// ground truth, so the generator is its own oracle.
struct SynthParams {
    std::uint32_t n_persons = 200;
    std::uint32_t min_patents = 2;     // base patents per person, uniform range
    std::uint32_t max_patents = 3;
    std::uint32_t max_coinventors = 2;  // extra team members per patent, 0..max
    std::uint32_t surname_pool = 120;   // smaller pool -> more shared surnames
    // Corruption rates, each applied independently per mention. First-name
    // typos keep the first character, so they survive FN(1) blocking; the
    // last-name typo and the name-order swap move a mention across blocks.
    double initial_rate = 0.25;  // full first/middle name reduced to its initial
    double typo_rate = 0.10;     // one edit inside the first name
    double last_typo_rate = 0.01;
    double swap_rate = 0.01;     // first and last name exchanged
    std::uint64_t seed = 0;
};

struct SynthCorpus {
    std::vector<Mention> mentions;
    // mention_id -> person cluster id rows, ready for write_labels_csv.
    std::vector<std::pair<std::string, std::string>> labels;
};

// Deterministic given params.seed. Throws UsageError on invalid parameters
// (zero persons, min > max, rates outside [0,1]).
SynthCorpus generate_corpus(const SynthParams& params);

}  // namespace disambig
