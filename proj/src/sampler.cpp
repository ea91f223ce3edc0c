#include "disambig/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <tuple>
#include <unordered_map>

#include "disambig/csv.hpp"
#include "disambig/errors.hpp"
#include "disambig/rng.hpp"

namespace disambig {

std::vector<PairSample> build_pairs(const Dataset& ds,
                                    const std::vector<LabeledCluster>& labels,
                                    const BlockingKeySpec& coarse_key,
                                    double max_neg_per_pos,
                                    std::uint64_t seed) {
    if (!(max_neg_per_pos >= 0.0) || !std::isfinite(max_neg_per_pos))
        throw UsageError("max_neg_per_pos must be a finite non-negative number");

    std::unordered_map<std::string, std::size_t> cluster_of;
    for (std::size_t c = 0; c < labels.size(); ++c) {
        for (const auto& id : labels[c].member_ids) {
            if (!ds.index.count(id))
                throw DataError("label references unknown mention_id: " + id);
            cluster_of.emplace(id, c);
        }
    }

    std::vector<PairSample> out;
    for (const auto& cluster : labels) {
        const auto& m = cluster.member_ids;
        for (std::size_t i = 0; i < m.size(); ++i) {
            for (std::size_t j = i + 1; j < m.size(); ++j) {
                const auto& [lo, hi] = std::minmax(m[i], m[j]);
                out.push_back(PairSample{lo, hi, PairLabel::kMatch});
            }
        }
    }
    const std::size_t n_pos = out.size();
    if (n_pos == 0)
        throw DataError("no multi-member clusters in the labels; cannot build positive pairs");

    // Negative candidates: same coarse block, different clusters. Blocks and
    // members iterate in sorted order so the candidate list is canonical
    // before sampling.
    std::map<std::string, std::vector<std::string>> block_members;
    for (const auto& [id, c] : cluster_of) {
        (void)c;
        block_members[block_key(ds.by_id(id), coarse_key)].push_back(id);
    }
    std::vector<PairSample> candidates;
    for (auto& [key, ids] : block_members) {
        (void)key;
        std::sort(ids.begin(), ids.end());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) {
                if (cluster_of.at(ids[i]) != cluster_of.at(ids[j]))
                    candidates.push_back(PairSample{ids[i], ids[j], PairLabel::kNonMatch});
            }
        }
    }

    const auto cap = static_cast<std::size_t>(
        std::floor(max_neg_per_pos * static_cast<double>(n_pos)));
    if (candidates.size() > cap) {
        Rng rng(derive_seed(seed, 1));
        rng.shuffle(candidates);
        candidates.resize(cap);
        std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
            return std::tie(a.a_id, a.b_id) < std::tie(b.a_id, b.b_id);
        });
    }
    out.insert(out.end(), candidates.begin(), candidates.end());
    return out;
}

void write_pairs_csv(const std::vector<PairSample>& pairs, const std::string& path) {
    std::ofstream outf(path);
    if (!outf) throw DataError("cannot open pair-dump file for writing: " + path);
    csv::write_row(outf, {"a_id", "b_id", "label"});
    for (const auto& p : pairs) {
        csv::write_row(outf, {p.a_id, p.b_id,
                              p.label == PairLabel::kMatch ? "match" : "non-match"});
    }
    if (!outf) throw DataError("write failure on pair-dump file: " + path);
}

}  // namespace disambig
