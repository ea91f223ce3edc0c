#include "disambig/forest.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "disambig/errors.hpp"
#include "disambig/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace disambig {

namespace {

double gini(double n_neg, double n_pos) {
    const double n = n_neg + n_pos;
    if (n <= 0.0) return 0.0;
    const double pn = n_neg / n;
    const double pp = n_pos / n;
    return 1.0 - pn * pn - pp * pp;
}

// Grows one tree over a bootstrap sample. Nodes are appended in pre-order;
// the index buffer is partitioned in place like quicksort.
struct Grower {
    const TrainingSet& data;
    std::uint32_t m_try;
    std::uint32_t min_leaf;
    Rng& rng;
    std::vector<std::uint32_t> idx;
    std::vector<TreeNode> nodes;
    std::vector<std::pair<double, std::uint8_t>> buf;

    std::int32_t grow(std::size_t begin, std::size_t end) {
        std::size_t n_neg = 0, n_pos = 0;
        for (std::size_t i = begin; i < end; ++i) {
            if (data.labels[idx[i]] == PairLabel::kMatch) ++n_pos;
            else ++n_neg;
        }
        const auto me = static_cast<std::int32_t>(nodes.size());
        nodes.emplace_back();
        nodes[me].n_neg = static_cast<double>(n_neg);
        nodes[me].n_pos = static_cast<double>(n_pos);

        const std::size_t n = end - begin;
        if (n_neg == 0 || n_pos == 0 || n < min_leaf) return me;

        // m_try distinct features by partial Fisher-Yates, then sorted so the
        // tie-break (lowest feature index, then lowest threshold) falls out of
        // the strictly-better comparison below.
        std::array<std::uint8_t, kFeatureCount> pool;
        std::iota(pool.begin(), pool.end(), std::uint8_t{0});
        for (std::uint32_t k = 0; k < m_try; ++k) {
            const auto j = k + rng.next_below(kFeatureCount - k);
            std::swap(pool[k], pool[j]);
        }
        std::sort(pool.begin(), pool.begin() + m_try);

        const double g_parent = gini(static_cast<double>(n_neg), static_cast<double>(n_pos));
        double best_decrease = 0.0;
        int best_feature = -1;
        double best_threshold = 0.0;

        for (std::uint32_t k = 0; k < m_try; ++k) {
            const int f = pool[k];
            buf.clear();
            for (std::size_t i = begin; i < end; ++i) {
                const auto row = idx[i];
                buf.emplace_back(data.vectors[row][f],
                                 static_cast<std::uint8_t>(data.labels[row]));
            }
            std::sort(buf.begin(), buf.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            double l_neg = 0.0, l_pos = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                if (buf[i].second) ++l_pos; else ++l_neg;
                if (!(buf[i + 1].first > buf[i].first)) continue;
                double thr = (buf[i].first + buf[i + 1].first) * 0.5;
                if (thr >= buf[i + 1].first) thr = buf[i].first;
                const double nl = l_neg + l_pos;
                const double nr = static_cast<double>(n) - nl;
                const double weighted =
                    (nl * gini(l_neg, l_pos) +
                     nr * gini(static_cast<double>(n_neg) - l_neg,
                               static_cast<double>(n_pos) - l_pos)) /
                    static_cast<double>(n);
                const double decrease = g_parent - weighted;
                if (decrease > best_decrease) {
                    best_decrease = decrease;
                    best_feature = f;
                    best_threshold = thr;
                }
            }
        }
        if (best_feature < 0) return me;

        const auto mid_it = std::partition(
            idx.begin() + static_cast<std::ptrdiff_t>(begin),
            idx.begin() + static_cast<std::ptrdiff_t>(end),
            [&](std::uint32_t row) { return data.vectors[row][best_feature] <= best_threshold; });
        const auto mid = static_cast<std::size_t>(mid_it - idx.begin());

        const auto left = grow(begin, mid);
        const auto right = grow(mid, end);
        nodes[me].feature = best_feature;
        nodes[me].threshold = best_threshold;
        nodes[me].left = left;
        nodes[me].right = right;
        return me;
    }
};

void build_tree(const TrainingSet& data, const TrainOptions& opts, std::uint64_t tree_seed,
                DecisionTree& out_tree, std::vector<std::uint8_t>& out_inbag) {
    const std::size_t n = data.vectors.size();
    Rng rng(tree_seed);
    Grower g{data, opts.m_try, opts.min_leaf, rng, {}, {}, {}};
    g.idx.resize(n);
    out_inbag.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        const auto u = rng.next_below(n);
        g.idx[j] = static_cast<std::uint32_t>(u);
        out_inbag[u] = 1;
    }
    g.buf.reserve(n);
    g.grow(0, n);
    out_tree.nodes = std::move(g.nodes);
}

void validate_training_set(const TrainingSet& data) {
    if (data.vectors.size() != data.labels.size())
        throw DataError("training set: vectors and labels differ in length");
    if (data.vectors.empty()) throw DataError("training set is empty");
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < data.vectors.size(); ++i) {
        for (double v : data.vectors[i]) {
            if (!std::isfinite(v))
                throw DataError("training vector " + std::to_string(i) + " has a non-finite entry");
        }
        if (data.labels[i] == PairLabel::kMatch) ++n_pos;
    }
    if (n_pos == 0 || n_pos == data.labels.size())
        throw DataError("training data has a single class; need both match and non-match examples");
}

}  // namespace

int DecisionTree::vote(const FeatureVector& x) const {
    std::size_t i = 0;
    while (nodes[i].feature >= 0) {
        const auto& nd = nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(nd.feature)] <= nd.threshold
                                         ? nd.left
                                         : nd.right);
    }
    return nodes[i].n_pos > nodes[i].n_neg ? 1 : 0;
}

Forest train(const TrainingSet& data, const TrainOptions& opts) {
    if (opts.n_trees < 1) throw UsageError("n_trees must be at least 1");
    if (opts.m_try < 1 || opts.m_try > kFeatureCount)
        throw UsageError("m_try must be in [1, " + std::to_string(kFeatureCount) + "]");
    if (opts.min_leaf < 1) throw UsageError("min_leaf must be at least 1");
    validate_training_set(data);

    Forest f;
    f.m_try = opts.m_try;
    f.seed = opts.seed;
    f.feature_order_id = kFeatureOrderId;
    f.trees.resize(opts.n_trees);
    f.inbag.resize(opts.n_trees);

    const auto n_trees = static_cast<int>(opts.n_trees);
#ifdef _OPENMP
    const int n_threads = opts.n_threads > 0 ? opts.n_threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
#endif
    for (int t = 0; t < n_trees; ++t) {
        build_tree(data, opts, derive_seed(opts.seed, static_cast<std::uint64_t>(t)),
                   f.trees[static_cast<std::size_t>(t)], f.inbag[static_cast<std::size_t>(t)]);
    }

    f.oob_error = oob_error(f, data);
    f.importance = gini_importance(f);
    return f;
}

std::pair<std::uint32_t, std::uint32_t> predict_votes(const Forest& f, const FeatureVector& x) {
    if (f.trees.empty()) throw ModelError("forest has no trees");
    std::uint32_t pos = 0;
    for (const auto& t : f.trees) pos += static_cast<std::uint32_t>(t.vote(x));
    const auto total = static_cast<std::uint32_t>(f.trees.size());
    return {total - pos, pos};
}

double distance(const Forest& f, const FeatureVector& x) {
    const auto [neg, pos] = predict_votes(f, x);
    (void)pos;
    return static_cast<double>(neg) / static_cast<double>(f.trees.size());
}

double oob_error(const Forest& f, const TrainingSet& data) {
    const std::size_t n = data.vectors.size();
    if (f.inbag.size() != f.trees.size())
        throw ModelError("forest carries no in-bag record; oob_error needs the training-time forest");
    for (const auto& bag : f.inbag) {
        if (bag.size() != n)
            throw ModelError("in-bag record does not match this training set");
    }
    std::size_t denom = 0, errors = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t neg = 0, pos = 0;
        for (std::size_t t = 0; t < f.trees.size(); ++t) {
            if (f.inbag[t][i]) continue;
            if (f.trees[t].vote(data.vectors[i])) ++pos; else ++neg;
        }
        if (neg + pos == 0) continue;
        ++denom;
        const auto pred = pos > neg ? PairLabel::kMatch : PairLabel::kNonMatch;
        if (pred != data.labels[i]) ++errors;
    }
    if (denom == 0)
        throw DataError("no out-of-bag examples; data set too small for an OOB estimate");
    return static_cast<double>(errors) / static_cast<double>(denom);
}

std::array<double, kFeatureCount> gini_importance(const Forest& f) {
    std::array<double, kFeatureCount> total{};
    for (const auto& tree : f.trees) {
        std::array<double, kFeatureCount> per_tree{};
        const double n_root = tree.nodes[0].n_neg + tree.nodes[0].n_pos;
        for (const auto& nd : tree.nodes) {
            if (nd.feature < 0) continue;
            const auto& l = tree.nodes[static_cast<std::size_t>(nd.left)];
            const auto& r = tree.nodes[static_cast<std::size_t>(nd.right)];
            const double n = nd.n_neg + nd.n_pos;
            const double weighted =
                ((l.n_neg + l.n_pos) * gini(l.n_neg, l.n_pos) +
                 (r.n_neg + r.n_pos) * gini(r.n_neg, r.n_pos)) / n;
            per_tree[static_cast<std::size_t>(nd.feature)] +=
                (n / n_root) * (gini(nd.n_neg, nd.n_pos) - weighted);
        }
        for (std::size_t j = 0; j < kFeatureCount; ++j) total[j] += per_tree[j];
    }
    for (auto& v : total) v /= static_cast<double>(f.trees.size());
    return total;
}

namespace {

constexpr char kMagic[8] = {'D', 'S', 'B', 'F', 'R', 'S', 'T', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::istream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw ModelError("truncated model file");
    return v;
}

void validate_tree(const DecisionTree& tree) {
    const auto n = static_cast<std::int32_t>(tree.nodes.size());
    if (n < 1) throw ModelError("model file: empty tree");
    for (std::int32_t i = 0; i < n; ++i) {
        const auto& nd = tree.nodes[static_cast<std::size_t>(i)];
        if (nd.n_neg < 0.0 || nd.n_pos < 0.0 || nd.n_neg + nd.n_pos <= 0.0)
            throw ModelError("model file: node with non-positive sample counts");
        if (nd.feature == -1) {
            if (nd.left != -1 || nd.right != -1)
                throw ModelError("model file: leaf with children");
            continue;
        }
        if (nd.feature < 0 || nd.feature >= static_cast<std::int32_t>(kFeatureCount))
            throw ModelError("model file: feature index out of range");
        if (!std::isfinite(nd.threshold))
            throw ModelError("model file: non-finite threshold");
        if (nd.left <= i || nd.left >= n || nd.right <= nd.left || nd.right >= n)
            throw ModelError("model file: malformed node links");
        const auto& l = tree.nodes[static_cast<std::size_t>(nd.left)];
        const auto& r = tree.nodes[static_cast<std::size_t>(nd.right)];
        if (l.n_neg + r.n_neg != nd.n_neg || l.n_pos + r.n_pos != nd.n_pos)
            throw ModelError("model file: child sample counts do not sum to parent");
    }
    // Every node must be reached exactly once from the root.
    std::vector<std::uint8_t> seen(tree.nodes.size(), 0);
    std::vector<std::int32_t> stack = {0};
    while (!stack.empty()) {
        const auto i = stack.back();
        stack.pop_back();
        if (seen[static_cast<std::size_t>(i)])
            throw ModelError("model file: node reachable twice");
        seen[static_cast<std::size_t>(i)] = 1;
        const auto& nd = tree.nodes[static_cast<std::size_t>(i)];
        if (nd.feature >= 0) {
            stack.push_back(nd.left);
            stack.push_back(nd.right);
        }
    }
    if (std::count(seen.begin(), seen.end(), std::uint8_t{1}) !=
        static_cast<std::ptrdiff_t>(tree.nodes.size()))
        throw ModelError("model file: unreachable nodes");
}

}  // namespace

void save_forest(const Forest& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelError("cannot open model file for writing: " + path);
    out.write(kMagic, sizeof kMagic);
    write_pod(out, kFormatVersion);
    write_pod(out, static_cast<std::uint32_t>(f.feature_order_id.size()));
    out.write(f.feature_order_id.data(),
              static_cast<std::streamsize>(f.feature_order_id.size()));
    write_pod(out, static_cast<std::uint32_t>(f.trees.size()));
    write_pod(out, f.m_try);
    write_pod(out, f.seed);
    write_pod(out, f.oob_error);
    for (const auto& tree : f.trees) {
        write_pod(out, static_cast<std::uint32_t>(tree.nodes.size()));
        for (const auto& nd : tree.nodes) {
            write_pod(out, nd.feature);
            write_pod(out, nd.threshold);
            write_pod(out, nd.left);
            write_pod(out, nd.right);
            write_pod(out, nd.n_neg);
            write_pod(out, nd.n_pos);
        }
    }
    if (!out) throw ModelError("write failure on model file: " + path);
}

Forest load_forest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open model file: " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw ModelError("not a model file (bad magic): " + path);
    const auto version = read_pod<std::uint32_t>(in);
    if (version != kFormatVersion)
        throw ModelError("unsupported model format version " + std::to_string(version) +
                         "; this build reads version " + std::to_string(kFormatVersion));
    const auto order_len = read_pod<std::uint32_t>(in);
    if (order_len > 4096) throw ModelError("model file: implausible feature-order length");
    std::string order(order_len, '\0');
    in.read(order.data(), order_len);
    if (!in) throw ModelError("truncated model file");
    if (order != kFeatureOrderId)
        throw ModelError("model built for a different feature order (" + order +
                         "); this build expects " + kFeatureOrderId);

    Forest f;
    f.feature_order_id = order;
    const auto n_trees = read_pod<std::uint32_t>(in);
    if (n_trees < 1) throw ModelError("model file: zero trees");
    f.m_try = read_pod<std::uint32_t>(in);
    if (f.m_try < 1 || f.m_try > kFeatureCount)
        throw ModelError("model file: m_try out of range");
    f.seed = read_pod<std::uint64_t>(in);
    f.oob_error = read_pod<double>(in);
    if (!(f.oob_error >= 0.0 && f.oob_error <= 1.0))
        throw ModelError("model file: oob_error outside [0,1]");
    f.trees.resize(n_trees);
    for (auto& tree : f.trees) {
        const auto n_nodes = read_pod<std::uint32_t>(in);
        if (n_nodes < 1 || n_nodes > (1u << 30))
            throw ModelError("model file: implausible node count");
        tree.nodes.resize(n_nodes);
        for (auto& nd : tree.nodes) {
            nd.feature = read_pod<std::int32_t>(in);
            nd.threshold = read_pod<double>(in);
            nd.left = read_pod<std::int32_t>(in);
            nd.right = read_pod<std::int32_t>(in);
            nd.n_neg = read_pod<double>(in);
            nd.n_pos = read_pod<double>(in);
        }
        validate_tree(tree);
    }
    in.peek();
    if (!in.eof()) throw ModelError("model file has trailing bytes: " + path);
    f.importance = gini_importance(f);
    return f;
}

}  // namespace disambig
