#include "disambig/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include "disambig/csv.hpp"
#include "disambig/dbscan.hpp"
#include "disambig/errors.hpp"
#include "disambig/evaluation.hpp"
#include "disambig/features.hpp"
#include "disambig/forest.hpp"
#include "disambig/rng.hpp"
#include "disambig/sampler.hpp"
#include "disambig/scheduler.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace disambig {

namespace {

// Stream ids for deriving stage seeds from the root seed. Fixed so adding a
// stage never disturbs the draws of existing ones.
constexpr std::uint64_t kStreamSampler = 1;
constexpr std::uint64_t kStreamForest = 2;

MentionFormat infer_format(const std::string& path) {
    const auto dot = path.rfind('.');
    const auto ext = dot == std::string::npos ? std::string() : path.substr(dot);
    return ext == ".jsonl" || ext == ".json" ? MentionFormat::jsonl : MentionFormat::csv;
}

std::string require_path(const std::string& path, const char* flag) {
    if (path.empty()) throw UsageError(std::string("missing required option ") + flag);
    return path;
}

FeatureContext build_context(const PipelineConfig& cfg, const Dataset& ds) {
    return cfg.stopwords_path.empty()
               ? make_context(ds)
               : make_context(ds, load_stop_words(cfg.stopwords_path));
}

// Feature extraction for the sampled pairs; order-stable regardless of the
// thread count because each slot is written independently.
TrainingSet extract_pairs(const Dataset& ds, const std::vector<PairSample>& pairs,
                          const FeatureContext& ctx, std::uint32_t n_threads) {
    TrainingSet data;
    data.vectors.resize(pairs.size());
    data.labels.resize(pairs.size());
    const auto n = static_cast<std::int64_t>(pairs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(static_cast<int>(n_threads))
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& p = pairs[static_cast<std::size_t>(i)];
        data.vectors[static_cast<std::size_t>(i)] = extract(ds.by_id(p.a_id), ds.by_id(p.b_id), ctx);
        data.labels[static_cast<std::size_t>(i)] = p.label;
    }
    return data;
}

std::vector<std::pair<std::size_t, double>> ranked_importance(const Forest& forest) {
    std::vector<std::pair<std::size_t, double>> ranked;
    for (std::size_t i = 0; i < kFeatureCount; ++i) ranked.emplace_back(i, forest.importance[i]);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return ranked;
}

void write_importance_report(std::ostream& out, const Forest& forest, std::uint32_t top_n) {
    const auto ranked = ranked_importance(forest);
    out << "rank,feature,importance\n";
    const auto limit = std::min<std::size_t>(top_n, ranked.size());
    for (std::size_t r = 0; r < limit; ++r) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", ranked[r].second);
        out << (r + 1) << "," << kFeatureNames[ranked[r].first] << "," << buf << "\n";
    }
}

}  // namespace

std::uint32_t effective_threads(const PipelineConfig& cfg) {
    if (cfg.max_threads > 0) return cfg.max_threads;
#ifdef _OPENMP
    return static_cast<std::uint32_t>(std::max(1, omp_get_max_threads()));
#else
    return std::max(1u, std::thread::hardware_concurrency());
#endif
}

std::vector<std::uint32_t> effective_caps(const PipelineConfig& cfg) {
    if (cfg.caps_explicit) return cfg.caps;
    const auto threads = static_cast<std::uint64_t>(effective_threads(cfg));
    std::vector<std::uint32_t> scaled;
    scaled.reserve(cfg.caps.size());
    for (auto cap : cfg.caps) {
        scaled.push_back(static_cast<std::uint32_t>(
            std::max<std::uint64_t>(1, cap * threads / 24)));
    }
    return scaled;
}

int cmd_train(const PipelineConfig& cfg) {
    const auto mentions_path = require_path(cfg.mentions_path, "--mentions");
    const auto labels_path = require_path(cfg.labels_path, "--labels");
    const auto model_path = require_path(cfg.model_path, "--model");

    const auto ds = load_mentions(mentions_path, infer_format(mentions_path));
    const auto labels = load_labels(labels_path);
    const auto ctx = build_context(cfg, ds);

    const auto pairs = build_pairs(ds, labels, cfg.coarse_block, cfg.max_neg_per_pos,
                                   derive_seed(cfg.seed, kStreamSampler));
    if (!cfg.pairs_out_path.empty()) write_pairs_csv(pairs, cfg.pairs_out_path);
    std::size_t n_pos = 0;
    for (const auto& p : pairs) n_pos += p.label == PairLabel::kMatch ? 1 : 0;

    const auto data = extract_pairs(ds, pairs, ctx, effective_threads(cfg));
    TrainOptions opts;
    opts.n_trees = cfg.n_trees;
    opts.m_try = cfg.m_try;
    opts.seed = derive_seed(cfg.seed, kStreamForest);
    opts.n_threads = static_cast<int>(effective_threads(cfg));
    const auto forest = train(data, opts);
    save_forest(forest, model_path);

    const auto report_path = model_path + ".report.txt";
    std::ofstream report(report_path);
    if (!report) throw DataError("cannot open training report for writing: " + report_path);
    report << "oob_error," << forest.oob_error << "\n";
    write_importance_report(report, forest, cfg.top_n);

    std::cout << "trained " << cfg.n_trees << " trees (m_try " << cfg.m_try << ", seed "
              << cfg.seed << ") on " << pairs.size() << " pairs (" << n_pos << " match, "
              << pairs.size() - n_pos << " non-match)\n";
    if (ctx.last_name_idf.unseen_lookups() > 0) {
        std::cout << "note: " << ctx.last_name_idf.unseen_lookups()
                  << " IDF lookups fell back to the unseen-name convention\n";
    }
    std::cout << "oob error: " << forest.oob_error << "\n"
              << "top features by gini importance:\n";
    write_importance_report(std::cout, forest, cfg.top_n);
    std::cout << "model written to " << model_path << "\nreport written to " << report_path
              << "\n";
    return 0;
}

int cmd_disambiguate(const PipelineConfig& cfg) {
    const auto mentions_path = require_path(cfg.mentions_path, "--mentions");
    const auto model_path = require_path(cfg.model_path, "--model");
    const auto out_path = require_path(cfg.out_path, "--out");

    // Loading the model validates format and feature order before any
    // clustering work begins.
    const auto forest = load_forest(model_path);
    const auto ds = load_mentions(mentions_path, infer_format(mentions_path));
    const auto ctx = build_context(cfg, ds);

    auto groups = group_by_size(partition(ds.mentions, cfg.block), cfg.thresholds,
                                effective_caps(cfg));
    // Largest size class first, and the biggest blocks inside each class
    // first, so the memory high-water mark is hit early and predictably.
    std::reverse(groups.begin(), groups.end());
    for (auto& g : groups) {
        std::stable_sort(g.blocks.begin(), g.blocks.end(), [](const auto& a, const auto& b) {
            return a.member_ids.size() > b.member_ids.size();
        });
    }

    DbscanParams params;
    params.eps = cfg.eps;
    params.min_pts = cfg.min_pts;
    params.cache_max_block = cfg.cache_cap;

    std::vector<GroupSpec> specs;
    specs.reserve(groups.size());
    for (const auto& g : groups) specs.push_back(GroupSpec{g.blocks.size(), g.cap});
    std::vector<std::vector<Clustering>> results(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) results[g].resize(groups[g].blocks.size());

    const auto stats = run_grouped(specs, [&](std::size_t g, std::size_t j) {
        results[g][j] = cluster_block(groups[g].blocks[j], ds, forest, ctx, params);
    });

    std::map<std::string, std::string> assignment;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t j = 0; j < groups[g].blocks.size(); ++j) {
            const auto& key = groups[g].blocks[j].key;
            for (const auto& [id, local] : results[g][j].assignment)
                assignment.emplace(id, key + "#" + std::to_string(local));
        }
    }

    std::ofstream out(out_path);
    if (!out) throw DataError("cannot open clusters file for writing: " + out_path);
    csv::write_row(out, {"mention_id", "cluster_id"});
    for (const auto& [id, label] : assignment) csv::write_row(out, {id, label});
    if (!out) throw DataError("write failure on clusters file: " + out_path);

    const auto report = cluster_size_histogram(assignment);
    std::size_t n_blocks = 0;
    for (const auto& g : groups) n_blocks += g.blocks.size();
    std::uint64_t n_clusters = 0;
    for (const auto& [size, count] : report.histogram) {
        (void)size;
        n_clusters += count;
    }
    std::cout << "clustered " << ds.mentions.size() << " mentions in " << n_blocks
              << " blocks into " << n_clusters << " clusters (mean size " << report.mean_size
              << ")\n";
    for (std::size_t g = 0; g < stats.size(); ++g) {
        std::cout << "group " << g << ": " << stats[g].n_jobs << " blocks, cap "
                  << stats[g].cap << ", max in flight " << stats[g].max_in_flight << "\n";
    }
    std::cout << "clusters written to " << out_path << "\n";
    return 0;
}

namespace {

std::map<std::string, std::string> assignment_from_labels(const std::vector<LabeledCluster>& cs) {
    std::map<std::string, std::string> out;
    for (const auto& c : cs) {
        for (const auto& id : c.member_ids) out.emplace(id, c.cluster_id);
    }
    return out;
}

std::string histogram_path(const std::string& out_path) {
    const std::string csv = ".csv";
    if (out_path.size() > csv.size() &&
        out_path.compare(out_path.size() - csv.size(), csv.size(), csv) == 0) {
        return out_path.substr(0, out_path.size() - csv.size()) + ".hist.csv";
    }
    return out_path + ".hist.csv";
}

}  // namespace

int cmd_evaluate(const PipelineConfig& cfg) {
    const auto clusters_path = require_path(cfg.clusters_path, "--clusters");
    const auto labels_path = require_path(cfg.labels_path, "--labels");

    const auto pred = assignment_from_labels(load_labels(clusters_path));
    const auto truth = load_labels(labels_path);

    // With --mentions, insist the prediction covers that file exactly.
    if (!cfg.mentions_path.empty()) {
        const auto ds = load_mentions(cfg.mentions_path, infer_format(cfg.mentions_path));
        std::vector<std::string> missing;
        for (const auto& mention : ds.mentions)
            if (!pred.count(mention.mention_id)) missing.push_back(mention.mention_id);
        if (!missing.empty()) {
            std::string msg = "clusters file does not cover the mentions file; missing:";
            for (std::size_t i = 0; i < missing.size() && i < 10; ++i) msg += " " + missing[i];
            if (missing.size() > 10) msg += " ...";
            throw DataError(msg);
        }
    }

    const auto m = pairwise_metrics(pred, truth);
    for (const auto& w : m.warnings) std::cerr << "warning: " << w << "\n";
    const auto report = cluster_size_histogram(pred);

    char line[128];
    std::snprintf(line, sizeof line,
                  "precision %.6f  recall %.6f  f1 %.6f", m.precision, m.recall, m.f1);
    std::cout << line << "\n"
              << "matched pairs " << m.matched_pairs << ", predicted pairs " << m.predicted_pairs
              << ", truth pairs " << m.truth_pairs << "\n"
              << "predicted assignment covers " << pred.size() << " mentions, mean cluster size "
              << report.mean_size << "\n";

    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path);
        if (!out) throw DataError("cannot open metrics file for writing: " + cfg.out_path);
        out << "metric,value\n";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.9f", m.precision);
        out << "precision," << buf << "\n";
        std::snprintf(buf, sizeof buf, "%.9f", m.recall);
        out << "recall," << buf << "\n";
        std::snprintf(buf, sizeof buf, "%.9f", m.f1);
        out << "f1," << buf << "\n";
        out << "matched_pairs," << m.matched_pairs << "\n"
            << "predicted_pairs," << m.predicted_pairs << "\n"
            << "truth_pairs," << m.truth_pairs << "\n";
        if (!out) throw DataError("write failure on metrics file: " + cfg.out_path);

        const auto hist_path = histogram_path(cfg.out_path);
        std::ofstream hist(hist_path);
        if (!hist) throw DataError("cannot open histogram file for writing: " + hist_path);
        hist << "size,count\n";
        for (const auto& [size, count] : report.histogram)
            hist << size << "," << count << "\n";
        if (!hist) throw DataError("write failure on histogram file: " + hist_path);
        std::cout << "metrics written to " << cfg.out_path << ", histogram to " << hist_path
                  << "\n";
    }
    return 0;
}

int cmd_synth(const PipelineConfig& cfg) {
    const auto mentions_path = require_path(cfg.mentions_path, "--mentions");
    const auto labels_path = require_path(cfg.labels_path, "--labels");
    auto params = cfg.synth;
    params.seed = cfg.seed;
    const auto corpus = generate_corpus(params);
    write_mentions_csv(mentions_path, corpus.mentions);
    write_labels_csv(labels_path, corpus.labels);

    std::map<std::string, std::size_t> per_person;
    for (const auto& [id, person] : corpus.labels) {
        (void)id;
        ++per_person[person];
    }
    std::cout << "generated " << corpus.mentions.size() << " mentions for " << per_person.size()
              << " persons (seed " << cfg.seed << ")\n"
              << "mentions written to " << mentions_path << ", labels to " << labels_path << "\n";
    return 0;
}

int cmd_importance(const PipelineConfig& cfg) {
    const auto model_path = require_path(cfg.model_path, "--model");
    const auto forest = load_forest(model_path);
    std::cout << "model: " << forest.trees.size() << " trees, m_try " << forest.m_try
              << ", seed " << forest.seed << ", oob error " << forest.oob_error << "\n";
    write_importance_report(std::cout, forest, cfg.top_n);
    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path);
        if (!out) throw DataError("cannot open importance file for writing: " + cfg.out_path);
        write_importance_report(out, forest, cfg.top_n);
        if (!out) throw DataError("write failure on importance file: " + cfg.out_path);
    }
    return 0;
}

}  // namespace disambig
