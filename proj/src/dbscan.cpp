#include "disambig/dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "disambig/errors.hpp"
#include "disambig/features.hpp"

namespace disambig {

namespace {

constexpr std::uint16_t kUnsetVotes = 0xFFFF;

// Forest-backed pairwise distance with a lazily filled triangular cache of
// negative-vote counts. Votes are cached rather than distances so cached and
// uncached paths reconstruct bit-identical doubles.
class DistanceOracle {
  public:
    DistanceOracle(const std::vector<const Mention*>& mentions, const Forest& forest,
                   const FeatureContext& ctx, std::size_t cache_max_block)
        : mentions_(mentions), forest_(forest), ctx_(ctx) {
        const std::size_t n = mentions.size();
        use_cache_ = n >= 2 && n <= cache_max_block && forest.trees.size() < kUnsetVotes;
        if (use_cache_) cache_.assign(n * (n - 1) / 2, kUnsetVotes);
    }

    double operator()(std::size_t i, std::size_t j) {
        if (i == j) return 0.0;
        if (i > j) std::swap(i, j);
        std::uint32_t neg;
        if (use_cache_) {
            std::size_t slot = tri_index(i, j);
            if (cache_[slot] == kUnsetVotes) cache_[slot] = static_cast<std::uint16_t>(neg_votes(i, j));
            neg = cache_[slot];
        } else {
            neg = neg_votes(i, j);
        }
        return static_cast<double>(neg) / static_cast<double>(forest_.trees.size());
    }

  private:
    std::uint32_t neg_votes(std::size_t i, std::size_t j) const {
        FeatureVector x = extract(*mentions_[i], *mentions_[j], ctx_);
        return predict_votes(forest_, x).first;
    }

    std::size_t tri_index(std::size_t i, std::size_t j) const {
        const std::size_t n = mentions_.size();
        return i * (2 * n - i - 1) / 2 + (j - i - 1);
    }

    const std::vector<const Mention*>& mentions_;
    const Forest& forest_;
    const FeatureContext& ctx_;
    bool use_cache_ = false;
    std::vector<std::uint16_t> cache_;
};

// Union-find with path halving; used by the definitional oracle.
class UnionFind {
  public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

  private:
    std::vector<std::size_t> parent_;
};

}  // namespace

DbscanResult dbscan_scan(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist,
                         const DbscanParams& params) {
    if (params.min_pts < 1) throw UsageError("min_pts must be at least 1");
    if (!(params.eps > 0.0) || !(params.eps < 1.0)) throw UsageError("eps must lie in (0, 1)");

    constexpr std::int32_t kUnassigned = -1;
    DbscanResult out;
    out.labels.assign(n, kUnassigned);
    out.core.assign(n, 0);
    std::vector<std::uint8_t> visited(n, 0);
    std::int32_t next_cluster = 0;

    auto neighbors = [&](std::size_t i) {
        std::vector<std::size_t> hits;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && dist(i, j) <= params.eps) hits.push_back(j);
        return hits;
    };

    for (std::size_t i = 0; i < n; ++i) {
        if (visited[i]) continue;
        visited[i] = 1;
        std::vector<std::size_t> seeds = neighbors(i);
        if (seeds.size() + 1 < params.min_pts) continue;  // noise for now, maybe border later
        out.core[i] = 1;
        const std::int32_t c = next_cluster++;
        out.labels[i] = c;
        for (std::size_t head = 0; head < seeds.size(); ++head) {
            const std::size_t q = seeds[head];
            if (out.labels[q] == kUnassigned) out.labels[q] = c;
            if (visited[q]) continue;
            visited[q] = 1;
            std::vector<std::size_t> q_seeds = neighbors(q);
            if (q_seeds.size() + 1 < params.min_pts) continue;
            out.core[q] = 1;
            seeds.insert(seeds.end(), q_seeds.begin(), q_seeds.end());
        }
    }

    // Every mention belongs to exactly one cluster, so noise becomes trailing
    // singletons in scan order.
    for (std::size_t i = 0; i < n; ++i)
        if (out.labels[i] == kUnassigned) out.labels[i] = next_cluster++;
    return out;
}

DbscanResult dbscan_by_definition(const std::vector<std::vector<double>>& distances,
                                  const DbscanParams& params) {
    if (params.min_pts < 1) throw UsageError("min_pts must be at least 1");
    if (!(params.eps > 0.0) || !(params.eps < 1.0)) throw UsageError("eps must lie in (0, 1)");

    const std::size_t n = distances.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (distances[i].size() != n) throw DataError("distance matrix is not square");
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(distances[i][j])) throw DataError("distance matrix has a non-finite entry");
            if (distances[i][j] != distances[j][i]) throw DataError("distance matrix is not symmetric");
        }
    }

    DbscanResult out;
    out.labels.assign(n, -1);
    out.core.assign(n, 0);

    for (std::size_t i = 0; i < n; ++i) {
        std::size_t in_range = 1;  // the point itself
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && distances[i][j] <= params.eps) ++in_range;
        if (in_range >= params.min_pts) out.core[i] = 1;
    }

    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!out.core[i]) continue;
        for (std::size_t j = i + 1; j < n; ++j)
            if (out.core[j] && distances[i][j] <= params.eps) uf.unite(i, j);
    }

    // Dense labels for core components in order of first appearance.
    std::int32_t next_cluster = 0;
    std::vector<std::int32_t> root_label(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (!out.core[i]) continue;
        const std::size_t r = uf.find(i);
        if (root_label[r] == -1) root_label[r] = next_cluster++;
        out.labels[i] = root_label[r];
    }

    // Border points attach to the lowest-index core in range; the rest are
    // noise and become trailing singletons.
    for (std::size_t i = 0; i < n; ++i) {
        if (out.core[i]) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && out.core[j] && distances[i][j] <= params.eps) {
                out.labels[i] = out.labels[j];
                break;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (out.labels[i] == -1) out.labels[i] = next_cluster++;
    return out;
}

Clustering cluster_block(const Block& block, const Dataset& ds, const Forest& forest,
                         const FeatureContext& ctx, const DbscanParams& params) {
    if (forest.feature_order_id != kFeatureOrderId)
        throw ModelError("model feature order does not match this build: " + forest.feature_order_id);
    if (forest.trees.empty()) throw ModelError("model has no trees");

    std::vector<std::string> members = block.member_ids;
    std::sort(members.begin(), members.end());

    std::vector<const Mention*> mentions(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (!ds.index.count(members[i])) throw DataError("block references unknown mention_id: " + members[i]);
        mentions[i] = &ds.by_id(members[i]);
    }

    DistanceOracle oracle(mentions, forest, ctx, params.cache_max_block);
    DbscanResult res = dbscan_scan(
        members.size(), [&](std::size_t i, std::size_t j) { return oracle(i, j); }, params);

    Clustering out;
    for (std::size_t i = 0; i < members.size(); ++i) out.assignment[members[i]] = res.labels[i];
    return out;
}

Clustering brute_force_reference(const std::vector<std::string>& member_ids,
                                 const std::vector<std::vector<double>>& distances,
                                 const DbscanParams& params) {
    if (member_ids.size() != distances.size())
        throw DataError("distance matrix size does not match member count");
    DbscanResult res = dbscan_by_definition(distances, params);
    Clustering out;
    for (std::size_t i = 0; i < member_ids.size(); ++i) out.assignment[member_ids[i]] = res.labels[i];
    return out;
}

}  // namespace disambig
