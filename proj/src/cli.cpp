#include "disambig/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "disambig/errors.hpp"
#include "disambig/pipeline.hpp"

namespace disambig {

namespace {

// Everything the flags and the config file can set, before defaults apply.
// CLI-parsed values land here first; config-file values fill only the fields
// the command line left unset.
struct RawOptions {
    std::optional<std::string> mentions, labels, model, out, clusters;
    std::optional<std::string> stopwords, pairs_out, config;
    std::optional<std::string> block, coarse_block, thresholds, caps;
    std::optional<std::uint32_t> trees, mtry, min_pts, max_threads, top;
    std::optional<double> eps, neg_ratio;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> cache_cap;
    std::optional<std::uint32_t> persons, surname_pool, min_patents, max_patents, max_coinventors;
    std::optional<double> initial_rate, typo_rate, last_typo_rate, swap_rate;
};

template <typename T>
T parse_number(const std::string& s, const std::string& what) {
    T value{};
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw UsageError("bad numeric value for " + what + ": '" + s + "'");
    return value;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        parts.push_back(s.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return parts;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(line_no) +
                             " is not key=value: '" + stripped + "'");
        const auto key = trim(stripped.substr(0, eq));
        const auto value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw UsageError("config line " + std::to_string(line_no) + " has an empty key");
        if (!kv.emplace(key, value).second)
            throw UsageError("duplicate config key: " + key);
    }
    return kv;
}

void apply_config(RawOptions& r, const std::map<std::string, std::string>& kv) {
    const auto set_str = [](std::optional<std::string>& slot, const std::string& v) {
        if (!slot) slot = v;
    };
    const auto set_u32 = [](std::optional<std::uint32_t>& slot, const std::string& v,
                            const std::string& k) {
        if (!slot) slot = parse_number<std::uint32_t>(v, k);
    };
    const auto set_f64 = [](std::optional<double>& slot, const std::string& v,
                            const std::string& k) {
        if (!slot) slot = parse_number<double>(v, k);
    };
    for (const auto& [k, v] : kv) {
        if (k == "mentions") set_str(r.mentions, v);
        else if (k == "labels") set_str(r.labels, v);
        else if (k == "model") set_str(r.model, v);
        else if (k == "out") set_str(r.out, v);
        else if (k == "clusters") set_str(r.clusters, v);
        else if (k == "stopwords") set_str(r.stopwords, v);
        else if (k == "pairs-out") set_str(r.pairs_out, v);
        else if (k == "block") set_str(r.block, v);
        else if (k == "coarse-block") set_str(r.coarse_block, v);
        else if (k == "thresholds") set_str(r.thresholds, v);
        else if (k == "caps") set_str(r.caps, v);
        else if (k == "trees") set_u32(r.trees, v, k);
        else if (k == "mtry") set_u32(r.mtry, v, k);
        else if (k == "min-pts") set_u32(r.min_pts, v, k);
        else if (k == "max-threads") set_u32(r.max_threads, v, k);
        else if (k == "top") set_u32(r.top, v, k);
        else if (k == "eps") set_f64(r.eps, v, k);
        else if (k == "neg-ratio") set_f64(r.neg_ratio, v, k);
        else if (k == "seed") { if (!r.seed) r.seed = parse_number<std::uint64_t>(v, k); }
        else if (k == "cache-cap") { if (!r.cache_cap) r.cache_cap = parse_number<std::size_t>(v, k); }
        else if (k == "persons") set_u32(r.persons, v, k);
        else if (k == "surname-pool") set_u32(r.surname_pool, v, k);
        else if (k == "min-patents") set_u32(r.min_patents, v, k);
        else if (k == "max-patents") set_u32(r.max_patents, v, k);
        else if (k == "max-coinventors") set_u32(r.max_coinventors, v, k);
        else if (k == "initial-rate") set_f64(r.initial_rate, v, k);
        else if (k == "typo-rate") set_f64(r.typo_rate, v, k);
        else if (k == "last-typo-rate") set_f64(r.last_typo_rate, v, k);
        else if (k == "swap-rate") set_f64(r.swap_rate, v, k);
        else throw UsageError("unknown config key: " + k);
    }
}

PipelineConfig resolve(const RawOptions& r) {
    PipelineConfig cfg;
    if (r.mentions) cfg.mentions_path = *r.mentions;
    if (r.labels) cfg.labels_path = *r.labels;
    if (r.model) cfg.model_path = *r.model;
    if (r.out) cfg.out_path = *r.out;
    if (r.clusters) cfg.clusters_path = *r.clusters;
    if (r.stopwords) cfg.stopwords_path = *r.stopwords;
    if (r.pairs_out) cfg.pairs_out_path = *r.pairs_out;
    if (r.block) cfg.block = parse_block_spec(*r.block);
    if (r.coarse_block) cfg.coarse_block = parse_block_spec(*r.coarse_block);
    if (r.trees) cfg.n_trees = *r.trees;
    if (r.mtry) cfg.m_try = *r.mtry;
    if (r.neg_ratio) cfg.max_neg_per_pos = *r.neg_ratio;
    if (r.eps) cfg.eps = *r.eps;
    if (r.min_pts) cfg.min_pts = *r.min_pts;
    if (r.cache_cap) cfg.cache_cap = *r.cache_cap;
    if (r.seed) cfg.seed = *r.seed;
    if (r.max_threads) cfg.max_threads = *r.max_threads;
    if (r.top) cfg.top_n = *r.top;
    if (r.thresholds) {
        cfg.thresholds.clear();
        for (const auto& part : split_commas(*r.thresholds))
            cfg.thresholds.push_back(parse_number<std::size_t>(trim(part), "thresholds"));
    }
    if (r.caps) {
        cfg.caps.clear();
        for (const auto& part : split_commas(*r.caps))
            cfg.caps.push_back(parse_number<std::uint32_t>(trim(part), "caps"));
        cfg.caps_explicit = true;
    }
    if (r.persons) cfg.synth.n_persons = *r.persons;
    if (r.surname_pool) cfg.synth.surname_pool = *r.surname_pool;
    if (r.min_patents) cfg.synth.min_patents = *r.min_patents;
    if (r.max_patents) cfg.synth.max_patents = *r.max_patents;
    if (r.max_coinventors) cfg.synth.max_coinventors = *r.max_coinventors;
    if (r.initial_rate) cfg.synth.initial_rate = *r.initial_rate;
    if (r.typo_rate) cfg.synth.typo_rate = *r.typo_rate;
    if (r.last_typo_rate) cfg.synth.last_typo_rate = *r.last_typo_rate;
    if (r.swap_rate) cfg.synth.swap_rate = *r.swap_rate;

    if (!(cfg.eps > 0.0 && cfg.eps < 1.0))
        throw UsageError("--eps must lie strictly between 0 and 1");
    if (cfg.min_pts < 1) throw UsageError("--min-pts must be at least 1");
    if (cfg.top_n < 1) throw UsageError("--top must be at least 1");
    if (cfg.caps.size() != cfg.thresholds.size() + 1)
        throw UsageError("--caps needs exactly one more entry than --thresholds (" +
                         std::to_string(cfg.thresholds.size() + 1) + " here, got " +
                         std::to_string(cfg.caps.size()) + ")");
    for (std::size_t i = 0; i + 1 < cfg.thresholds.size(); ++i)
        if (cfg.thresholds[i] >= cfg.thresholds[i + 1])
            throw UsageError("--thresholds must be strictly ascending");
    for (auto c : cfg.caps)
        if (c < 1) throw UsageError("--caps entries must be at least 1");
    return cfg;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"inventor-name disambiguation: pairwise forest + density clustering"};
    app.require_subcommand(1);
    RawOptions raw;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", raw.config, "key=value config file (flags win over file)");
        sub->add_option("--seed", raw.seed, "root seed for all randomized stages (default 0)");
    };

    auto* train = app.add_subcommand("train", "fit the pairwise random forest from labeled clusters");
    add_common(train);
    train->add_option("--mentions", raw.mentions, "mentions file (.csv or .jsonl)");
    train->add_option("--labels", raw.labels, "truth clusters CSV: mention_id,cluster_id");
    train->add_option("--model", raw.model, "output model file; also writes <model>.report.txt");
    train->add_option("--coarse-block", raw.coarse_block,
                      "sampling block spec (default FN(1)+LN(3))");
    train->add_option("--trees", raw.trees, "number of trees (default 100)");
    train->add_option("--mtry", raw.mtry, "features tried per split (default 5)");
    train->add_option("--neg-ratio", raw.neg_ratio,
                      "max negatives per positive pair (default 1.0)");
    train->add_option("--pairs-out", raw.pairs_out, "optional sampled-pair audit CSV");
    train->add_option("--stopwords", raw.stopwords, "stop-word file, one word per line");
    train->add_option("--max-threads", raw.max_threads, "thread budget (default: runtime)");
    train->add_option("--top", raw.top, "features in the importance report (default 10)");

    auto* dis = app.add_subcommand("disambiguate", "block and cluster a mentions file");
    add_common(dis);
    dis->add_option("--mentions", raw.mentions, "mentions file (.csv or .jsonl)");
    dis->add_option("--model", raw.model, "trained model file");
    dis->add_option("--out", raw.out, "output clusters CSV: mention_id,cluster_id");
    dis->add_option("--block", raw.block, "blocking spec (default FN(1)+LN(f))");
    dis->add_option("--eps", raw.eps, "DBSCAN eps over vote-fraction distance (default 0.5)");
    dis->add_option("--min-pts", raw.min_pts,
                    "DBSCAN min_pts, neighborhood counts the point itself (default 2)");
    dis->add_option("--cache-cap", raw.cache_cap,
                    "max block size with a cached distance table (default 5000)");
    dis->add_option("--max-threads", raw.max_threads, "thread budget (default: runtime)");
    dis->add_option("--thresholds", raw.thresholds,
                    "block-size group bounds, comma-separated (default 500,5000)");
    dis->add_option("--caps", raw.caps,
                    "per-group concurrency caps, comma-separated (default 24,12,6 scaled)");
    dis->add_option("--stopwords", raw.stopwords, "stop-word file, one word per line");

    auto* ev = app.add_subcommand("evaluate", "pairwise precision/recall/F1 against truth labels");
    add_common(ev);
    ev->add_option("--clusters", raw.clusters, "predicted clusters CSV (disambiguate output)");
    ev->add_option("--labels", raw.labels, "truth clusters CSV");
    ev->add_option("--mentions", raw.mentions,
                   "optional mentions file; the prediction must cover it exactly");
    ev->add_option("--out", raw.out,
                   "metric,value CSV; histogram lands next to it as *.hist.csv");

    auto* synth = app.add_subcommand("synth", "generate a labeled synthetic corpus");
    add_common(synth);
    synth->add_option("--mentions", raw.mentions, "output mentions CSV");
    synth->add_option("--labels", raw.labels, "output truth clusters CSV");
    synth->add_option("--persons", raw.persons, "number of distinct inventors (default 200)");
    synth->add_option("--surname-pool", raw.surname_pool,
                      "distinct surnames available (default 120)");
    synth->add_option("--min-patents", raw.min_patents, "patents per person, low end (default 2)");
    synth->add_option("--max-patents", raw.max_patents, "patents per person, high end (default 3)");
    synth->add_option("--max-coinventors", raw.max_coinventors,
                      "extra team members per patent (default 2)");
    synth->add_option("--initial-rate", raw.initial_rate,
                      "chance a name is reduced to its initial (default 0.25)");
    synth->add_option("--typo-rate", raw.typo_rate,
                      "chance of a first-name typo (default 0.10)");
    synth->add_option("--last-typo-rate", raw.last_typo_rate,
                      "chance of a last-name typo (default 0.01)");
    synth->add_option("--swap-rate", raw.swap_rate,
                      "chance first/last name are exchanged (default 0.01)");

    auto* imp = app.add_subcommand("importance", "print a model's Gini importance ranking");
    add_common(imp);
    imp->add_option("--model", raw.model, "trained model file");
    imp->add_option("--out", raw.out, "optional rank,feature,importance CSV");
    imp->add_option("--top", raw.top, "rows to print (default 10)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (raw.config) apply_config(raw, parse_config_file(*raw.config));
        const auto cfg = resolve(raw);
        if (train->parsed()) return cmd_train(cfg);
        if (dis->parsed()) return cmd_disambiguate(cfg);
        if (ev->parsed()) return cmd_evaluate(cfg);
        if (synth->parsed()) return cmd_synth(cfg);
        if (imp->parsed()) return cmd_importance(cfg);
        throw UsageError("no command given");
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace disambig
