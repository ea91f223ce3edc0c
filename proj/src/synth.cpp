#include "disambig/synth.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "disambig/errors.hpp"
#include "disambig/rng.hpp"

namespace disambig {

namespace {

constexpr std::array<const char*, 26> kSyllables = {
    "an", "bar", "cor", "dan", "el",   "fen", "gar", "hol", "in",
    "jor", "kel", "lin", "mar", "nor", "os",  "pel", "quin", "ros",
    "sten", "tor", "ul", "ven", "wil", "xan", "yor", "zel"};

struct Place {
    const char* city;
    const char* state;
    const char* country;
};

constexpr std::array<Place, 16> kPlaces = {{
    {"arlington", "va", "us"}, {"boulder", "co", "us"}, {"cambridge", "ma", "us"},
    {"dayton", "oh", "us"},    {"eugene", "or", "us"},  {"fresno", "ca", "us"},
    {"geneva", "", "ch"},      {"hamburg", "", "de"},   {"incheon", "", "kr"},
    {"kyoto", "", "jp"},       {"leeds", "", "gb"},     {"munich", "", "de"},
    {"nagoya", "", "jp"},      {"oslo", "", "no"},      {"porto", "", "pt"},
    {"quebec", "qc", "ca"},
}};

constexpr std::array<const char*, 5> kOrgSuffixes = {"labs", "systems", "research",
                                                     "industries", "technologies"};

constexpr std::array<const char*, 10> kGroups = {"g06", "h01", "a61", "b23", "c07",
                                                 "e04", "f16", "g02", "h04", "b60"};

constexpr std::array<const char*, 48> kTopicWords = {
    "adaptive",  "array",    "battery",   "beam",       "catalyst",  "circuit",
    "coating",   "composite", "compression", "control",  "cooling",   "coupling",
    "detection", "display",  "encoding",  "engine",     "fastener",  "filter",
    "flow",      "gear",     "imaging",   "injection",  "laser",     "lattice",
    "membrane",  "memory",   "modulation", "network",   "optical",   "oscillator",
    "polymer",   "processor", "pump",     "reactor",    "resin",     "routing",
    "semiconductor", "sensor", "signal",  "solvent",    "stabilizer", "substrate",
    "switching", "terminal", "turbine",   "valve",      "wavelength", "welding"};

constexpr std::array<const char*, 6> kFillerWords = {"method", "apparatus", "system",
                                                     "device", "process", "assembly"};

constexpr std::array<const char*, 4> kTitleStopWords = {"for", "of", "and", "with"};

std::string make_name(Rng& rng) {
    std::string s;
    const auto n_syl = 2 + rng.next_below(2);
    for (std::uint64_t i = 0; i < n_syl; ++i)
        s += kSyllables[rng.next_below(kSyllables.size())];
    return s;
}

std::vector<std::string> make_pool(Rng& rng, std::size_t size) {
    std::vector<std::string> pool;
    std::unordered_set<std::string> seen;
    while (pool.size() < size) {
        auto name = make_name(rng);
        if (seen.insert(name).second) pool.push_back(std::move(name));
    }
    return pool;
}

// One random edit. keep_head pins the first character so the name's initial
// (and an FN(1) block key) survives.
std::string typo(Rng& rng, const std::string& s, bool keep_head) {
    const std::size_t lo = keep_head ? 1 : 0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::string t = s;
        const auto op = rng.next_below(4);
        const auto letter = static_cast<char>('a' + rng.next_below(26));
        switch (op) {
            case 0:  // substitute
                if (t.size() > lo) t[lo + rng.next_below(t.size() - lo)] = letter;
                break;
            case 1:  // delete
                if (t.size() > lo && t.size() >= 2) t.erase(lo + rng.next_below(t.size() - lo), 1);
                break;
            case 2:  // insert
                t.insert(lo + rng.next_below(t.size() - lo + 1), 1, letter);
                break;
            default:  // transpose adjacent
                if (t.size() >= lo + 2) {
                    const auto p = lo + rng.next_below(t.size() - lo - 1);
                    std::swap(t[p], t[p + 1]);
                }
                break;
        }
        if (!t.empty() && t != s) return t;
    }
    return s + "x";
}

struct Person {
    std::string first, middle, last, suffix;
    std::size_t place = 0, alt_place = 0;
    std::string org;
    std::string group, subgroup_a, subgroup_b;
    std::vector<std::string> topic;
    std::vector<std::size_t> collaborators;
    std::uint32_t n_patents = 0;
};

std::string pad_id(const char* prefix, std::size_t k, int width) {
    auto digits = std::to_string(k);
    std::string s = prefix;
    for (int i = static_cast<int>(digits.size()); i < width; ++i) s += '0';
    return s + digits;
}

}  // namespace

SynthCorpus generate_corpus(const SynthParams& p) {
    if (p.n_persons < 1) throw UsageError("synth: n_persons must be at least 1");
    if (p.surname_pool < 1) throw UsageError("synth: surname_pool must be at least 1");
    if (p.min_patents < 1 || p.max_patents < p.min_patents)
        throw UsageError("synth: need 1 <= min_patents <= max_patents");
    for (double r : {p.initial_rate, p.typo_rate, p.last_typo_rate, p.swap_rate}) {
        if (!(r >= 0.0 && r <= 1.0)) throw UsageError("synth: corruption rates must be in [0,1]");
    }

    Rng pool_rng(derive_seed(p.seed, 10));
    const auto first_pool = make_pool(pool_rng, 80);
    const auto surname_pool = make_pool(pool_rng, p.surname_pool);
    std::vector<std::string> org_pool;
    for (std::size_t i = 0; i < 24; ++i) {
        org_pool.push_back(make_name(pool_rng) + " " +
                           kOrgSuffixes[pool_rng.next_below(kOrgSuffixes.size())]);
    }

    Rng person_rng(derive_seed(p.seed, 11));
    std::vector<Person> persons(p.n_persons);
    for (auto& q : persons) {
        q.first = first_pool[person_rng.next_below(first_pool.size())];
        if (person_rng.next_double() < 0.5)
            q.middle = first_pool[person_rng.next_below(first_pool.size())];
        q.last = surname_pool[person_rng.next_below(surname_pool.size())];
        if (person_rng.next_double() < 0.06)
            q.suffix = person_rng.next_double() < 0.5 ? "jr" : "iii";
        q.place = person_rng.next_below(kPlaces.size());
        q.alt_place = person_rng.next_below(kPlaces.size());
        q.org = org_pool[person_rng.next_below(org_pool.size())];
        q.group = kGroups[person_rng.next_below(kGroups.size())];
        q.subgroup_a = q.group + std::to_string(10 + person_rng.next_below(90));
        q.subgroup_b = q.group + std::to_string(10 + person_rng.next_below(90));
        std::vector<std::string> topic_pool(kTopicWords.begin(), kTopicWords.end());
        person_rng.shuffle(topic_pool);
        q.topic.assign(topic_pool.begin(), topic_pool.begin() + 4);
        q.n_patents =
            p.min_patents +
            static_cast<std::uint32_t>(person_rng.next_below(p.max_patents - p.min_patents + 1));
    }
    if (p.n_persons >= 2) {
        for (std::size_t i = 0; i < persons.size(); ++i) {
            const auto want = std::max<std::size_t>(3, p.max_coinventors);
            std::unordered_set<std::size_t> picked;
            while (picked.size() < std::min<std::size_t>(want, persons.size() - 1)) {
                const auto j = person_rng.next_below(persons.size());
                if (j != i) picked.insert(j);
            }
            persons[i].collaborators.assign(picked.begin(), picked.end());
            std::sort(persons[i].collaborators.begin(), persons[i].collaborators.end());
        }
    }

    Rng rng(derive_seed(p.seed, 12));
    SynthCorpus out;
    std::size_t patent_counter = 0, mention_counter = 0;
    for (std::size_t pi = 0; pi < persons.size(); ++pi) {
        const auto& owner = persons[pi];
        for (std::uint32_t k = 0; k < owner.n_patents; ++k) {
            const auto patent_id = pad_id("pt", patent_counter++, 5);

            std::vector<std::size_t> team = {pi};
            if (!owner.collaborators.empty() && p.max_coinventors > 0) {
                auto extras = owner.collaborators;
                rng.shuffle(extras);
                const auto n_extra =
                    std::min<std::size_t>(rng.next_below(p.max_coinventors + 1), extras.size());
                team.insert(team.end(), extras.begin(),
                            extras.begin() + static_cast<std::ptrdiff_t>(n_extra));
            }
            rng.shuffle(team);

            std::vector<std::string> title = owner.topic;
            rng.shuffle(title);
            title.resize(2 + rng.next_below(2));
            title.push_back(kFillerWords[rng.next_below(kFillerWords.size())]);
            if (rng.next_double() < 0.3)
                title.push_back(kTitleStopWords[rng.next_below(kTitleStopWords.size())]);

            const auto& subgroup = rng.next_double() < 0.5 ? owner.subgroup_a : owner.subgroup_b;
            const auto& assignee = owner.org;

            for (std::size_t pos = 0; pos < team.size(); ++pos) {
                const auto& member = persons[team[pos]];
                Mention m;
                m.mention_id = pad_id("m", mention_counter++, 6);
                m.patent_id = patent_id;
                m.first_name = member.first;
                m.middle_name = member.middle;
                m.last_name = member.last;
                m.suffix = member.suffix;
                if (rng.next_double() < p.swap_rate) std::swap(m.first_name, m.last_name);
                if (rng.next_double() < p.initial_rate && !m.first_name.empty())
                    m.first_name.resize(1);
                if (rng.next_double() < p.initial_rate && !m.middle_name.empty())
                    m.middle_name.resize(1);
                if (rng.next_double() < p.typo_rate && m.first_name.size() >= 2)
                    m.first_name = typo(rng, m.first_name, true);
                if (rng.next_double() < p.last_typo_rate)
                    m.last_name = typo(rng, m.last_name, false);
                m.inventor_order = static_cast<std::uint32_t>(pos + 1);
                m.inventor_count = static_cast<std::uint32_t>(team.size());
                const auto& place =
                    kPlaces[rng.next_double() < 0.12 ? member.alt_place : member.place];
                m.city = place.city;
                m.state = place.state;
                m.country = place.country;
                m.assignee_name = assignee;
                m.group = owner.group;
                m.subgroup = subgroup;
                m.title_terms = title;
                out.mentions.push_back(std::move(m));
                out.labels.emplace_back(out.mentions.back().mention_id,
                                        pad_id("p", team[pos], 4));
            }
        }
    }
    return out;
}

}  // namespace disambig
