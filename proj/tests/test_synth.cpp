#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "disambig/blocking.hpp"
#include "disambig/errors.hpp"
#include "disambig/record.hpp"
#include "disambig/synth.hpp"

using namespace disambig;

namespace {

bool same_corpus(const SynthCorpus& a, const SynthCorpus& b) {
    if (a.labels != b.labels) return false;
    if (a.mentions.size() != b.mentions.size()) return false;
    for (std::size_t i = 0; i < a.mentions.size(); ++i) {
        const Mention& x = a.mentions[i];
        const Mention& y = b.mentions[i];
        if (x.mention_id != y.mention_id || x.patent_id != y.patent_id ||
            x.first_name != y.first_name || x.middle_name != y.middle_name ||
            x.last_name != y.last_name || x.suffix != y.suffix ||
            x.inventor_order != y.inventor_order || x.inventor_count != y.inventor_count ||
            x.city != y.city || x.state != y.state || x.country != y.country ||
            x.assignee_name != y.assignee_name || x.group != y.group ||
            x.subgroup != y.subgroup || x.title_terms != y.title_terms)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("synth is deterministic per seed") {
    SynthParams p;
    p.n_persons = 50;
    p.seed = 123;
    const auto a = generate_corpus(p);
    const auto b = generate_corpus(p);
    CHECK(same_corpus(a, b));

    SynthParams q = p;
    q.seed = 124;
    CHECK(!same_corpus(a, generate_corpus(q)));
}

TEST_CASE("synth output is a valid loadable dataset") {
    SynthParams p;
    p.n_persons = 80;
    p.seed = 5;
    const auto corpus = generate_corpus(p);

    Dataset ds;
    ds.mentions = corpus.mentions;
    ds.build_index();  // throws on duplicate ids or broken invariants

    REQUIRE(corpus.labels.size() == corpus.mentions.size());
    std::set<std::string> persons;
    for (const auto& [mid, pid] : corpus.labels) {
        CHECK(ds.index.count(mid) == 1);
        persons.insert(pid);
    }
    CHECK(persons.size() == 80);

    // Expected volume: 2..3 patents per person plus team appearances.
    CHECK(corpus.mentions.size() >= 160);
    CHECK(corpus.mentions.size() <= 800);

    for (const auto& m : ds.mentions) {
        CHECK(!m.last_name.empty());
        CHECK(m.inventor_order >= 1);
        CHECK(m.inventor_order <= m.inventor_count);
        CHECK(!m.title_terms.empty());
    }

    // Multi-inventor patents exist, so coinventor features have signal.
    std::size_t with_coinventors = 0;
    for (const auto& m : ds.mentions)
        if (!m.coinventor_last_names.empty()) ++with_coinventors;
    CHECK(with_coinventors > corpus.mentions.size() / 4);
}

TEST_CASE("zero corruption reproduces each person identically") {
    SynthParams p;
    p.n_persons = 40;
    p.initial_rate = 0.0;
    p.typo_rate = 0.0;
    p.last_typo_rate = 0.0;
    p.swap_rate = 0.0;
    p.seed = 77;
    const auto corpus = generate_corpus(p);

    std::map<std::string, std::string> person_of(corpus.labels.begin(), corpus.labels.end());
    struct Identity {
        std::string fn, mn, ln, sfx;
    };
    std::map<std::string, Identity> seen;
    for (const auto& m : corpus.mentions) {
        const auto& pid = person_of.at(m.mention_id);
        auto it = seen.find(pid);
        if (it == seen.end()) {
            seen.emplace(pid, Identity{m.first_name, m.middle_name, m.last_name, m.suffix});
        } else {
            CHECK(it->second.fn == m.first_name);
            CHECK(it->second.mn == m.middle_name);
            CHECK(it->second.ln == m.last_name);
            CHECK(it->second.sfx == m.suffix);
        }
    }
}

TEST_CASE("corruption rates leave visible traces") {
    SynthParams p;
    p.n_persons = 120;
    p.initial_rate = 0.5;
    p.typo_rate = 0.3;
    p.seed = 31;
    const auto corpus = generate_corpus(p);
    std::map<std::string, std::string> person_of(corpus.labels.begin(), corpus.labels.end());

    std::map<std::string, std::set<std::string>> first_names;
    std::size_t initials = 0;
    for (const auto& m : corpus.mentions) {
        first_names[person_of.at(m.mention_id)].insert(m.first_name);
        if (m.first_name.size() == 1) ++initials;
    }
    std::size_t varied = 0;
    for (const auto& [pid, names] : first_names)
        if (names.size() > 1) ++varied;
    CHECK(varied > first_names.size() / 3);  // many persons show name variants
    CHECK(initials > corpus.mentions.size() / 5);

    // First-name typos keep the head character: every variant of a person
    // still starts with the same letter unless a swap happened. With swaps
    // disabled the invariant is exact.
    SynthParams ns = p;
    ns.swap_rate = 0.0;
    const auto stable = generate_corpus(ns);
    std::map<std::string, std::string> sp(stable.labels.begin(), stable.labels.end());
    std::map<std::string, char> head;
    for (const auto& m : stable.mentions) {
        const auto& pid = sp.at(m.mention_id);
        auto it = head.find(pid);
        if (it == head.end())
            head.emplace(pid, m.first_name[0]);
        else
            CHECK(it->second == m.first_name[0]);
    }
}

TEST_CASE("swap corruption crosses blocks") {
    SynthParams p;
    p.n_persons = 100;
    p.swap_rate = 0.5;  // exaggerate to observe it
    p.initial_rate = 0.0;
    p.typo_rate = 0.0;
    p.last_typo_rate = 0.0;
    p.seed = 8;
    const auto corpus = generate_corpus(p);
    std::map<std::string, std::string> person_of(corpus.labels.begin(), corpus.labels.end());

    std::map<std::string, std::set<std::string>> blocks;
    const BlockingKeySpec spec{};
    for (const auto& m : corpus.mentions)
        blocks[person_of.at(m.mention_id)].insert(block_key(m, spec));
    std::size_t split_persons = 0;
    for (const auto& [pid, keys] : blocks)
        if (keys.size() > 1) ++split_persons;
    CHECK(split_persons > 20);  // half the mentions swapped: many persons split
}

TEST_CASE("synth parameter validation") {
    SynthParams p;
    SUBCASE("zero persons") {
        p.n_persons = 0;
        CHECK_THROWS_AS(generate_corpus(p), UsageError);
    }
    SUBCASE("min above max") {
        p.min_patents = 5;
        p.max_patents = 2;
        CHECK_THROWS_AS(generate_corpus(p), UsageError);
    }
    SUBCASE("rate out of range") {
        p.typo_rate = 1.5;
        CHECK_THROWS_AS(generate_corpus(p), UsageError);
        p.typo_rate = -0.1;
        CHECK_THROWS_AS(generate_corpus(p), UsageError);
    }
    SUBCASE("zero surname pool") {
        p.surname_pool = 0;
        CHECK_THROWS_AS(generate_corpus(p), UsageError);
    }
}
