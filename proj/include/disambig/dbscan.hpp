#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "disambig/blocking.hpp"
#include "disambig/forest.hpp"
#include "disambig/record.hpp"

namespace disambig {

struct DbscanParams {
    double eps = 0.5;
    // Neighborhood size includes the point itself: core iff |N_eps| + 1 >= min_pts.
    std::uint32_t min_pts = 2;
    // Blocks up to this many mentions keep a triangular vote cache; larger
    // blocks recompute distances on demand. Peak memory stays proportional to
    // the block, never the corpus.
    std::size_t cache_max_block = 5000;
};

struct Clustering {
    // mention_id -> dense cluster label, 0-based. Noise points are assigned
    // trailing singleton labels, so every mention lands in exactly one cluster.
    std::map<std::string, std::int32_t> assignment;
};

// Label assignment plus the core-point set, indexed by scan position.
struct DbscanResult {
    std::vector<std::int32_t> labels;  // dense; noise already singleton-labeled
    std::vector<std::uint8_t> core;
};

// Worklist DBSCAN over points 0..n-1 with an arbitrary symmetric distance
// callback. Scan order is index order; border points attach to the cluster
// that reaches them first.
DbscanResult dbscan_scan(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist,
                         const DbscanParams& params);

// DBSCAN by direct definition: core points counted from the full matrix,
// clusters as the transitive closure of core-core eps-edges, border points
// attached to the lowest-index core in range. Test oracle for dbscan_scan;
// the two agree exactly on core sets and on the partition restricted to core
// points. Throws DataError on a non-square or non-symmetric matrix.
DbscanResult dbscan_by_definition(const std::vector<std::vector<double>>& distances,
                                  const DbscanParams& params);

// DBSCAN over one block with distance = forest negative-vote fraction. Scan
// order (and thus border-point attachment) is ascending mention_id. Throws
// ModelError if the forest's feature order differs from this build's, or
// DataError if a member id is not in ds.
Clustering cluster_block(const Block& block, const Dataset& ds, const Forest& forest,
                         const FeatureContext& ctx, const DbscanParams& params);

// dbscan_by_definition with mention ids attached; only tests use this.
Clustering brute_force_reference(const std::vector<std::string>& member_ids,
                                 const std::vector<std::vector<double>>& distances,
                                 const DbscanParams& params);

}  // namespace disambig
