#include <doctest.h>

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "disambig/cli.hpp"
#include "disambig/record.hpp"
#include "test_util.hpp"

using namespace disambig;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

// Invokes the real CLI entry point with captured streams.
CliResult run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("disambig");
    for (const auto& a : args) argv.push_back(a.c_str());

    std::ostringstream out_sink, err_sink;
    std::streambuf* out_old = std::cout.rdbuf(out_sink.rdbuf());
    std::streambuf* err_old = std::cerr.rdbuf(err_sink.rdbuf());
    CliResult r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(out_old);
    std::cerr.rdbuf(err_old);
    r.out = out_sink.str();
    r.err = err_sink.str();
    return r;
}

std::map<std::string, double> read_metrics(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::map<std::string, double> m;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        m[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
    }
    return m;
}

}  // namespace

TEST_CASE("cli end to end on a small corpus") {
    TempDir dir("e2e");
    const auto mentions = dir.file("m.csv");
    const auto labels = dir.file("l.csv");
    const auto model = dir.file("model.bin");
    const auto clusters = dir.file("c.csv");
    const auto metrics = dir.file("metrics.csv");

    CHECK(run({"synth", "--mentions", mentions, "--labels", labels, "--persons", "60",
               "--seed", "3"})
              .code == 0);
    const auto train_res =
        run({"train", "--mentions", mentions, "--labels", labels, "--model", model,
             "--trees", "60", "--seed", "3"});
    CHECK(train_res.code == 0);
    CHECK(train_res.out.find("oob error") != std::string::npos);

    CHECK(run({"disambiguate", "--mentions", mentions, "--model", model, "--out", clusters,
               "--seed", "3"})
              .code == 0);
    const auto eval_res = run({"evaluate", "--mentions", mentions, "--labels", labels,
                               "--clusters", clusters, "--out", metrics});
    CHECK(eval_res.code == 0);

    const auto m = read_metrics(metrics);
    REQUIRE(m.count("f1"));
    CHECK(m.at("f1") >= 0.9);
    CHECK(m.at("precision") <= 1.0);
    CHECK(m.at("recall") <= 1.0);
    // The histogram lands next to the metrics file.
    CHECK(TempDir::slurp(dir.file("metrics.hist.csv")).rfind("size,count\n", 0) == 0);

    // The model report exists and repeats the OOB number.
    const std::string report = TempDir::slurp(model + ".report.txt");
    CHECK(report.find("oob_error,") != std::string::npos);

    SUBCASE("reruns are byte-identical") {
        const auto model2 = dir.file("model2.bin");
        const auto clusters2 = dir.file("c2.csv");
        CHECK(run({"train", "--mentions", mentions, "--labels", labels, "--model", model2,
                   "--trees", "60", "--seed", "3"})
                  .code == 0);
        CHECK(TempDir::slurp(model) == TempDir::slurp(model2));
        CHECK(run({"disambiguate", "--mentions", mentions, "--model", model, "--out",
                   clusters2, "--seed", "3"})
                  .code == 0);
        CHECK(TempDir::slurp(clusters) == TempDir::slurp(clusters2));
    }

    SUBCASE("caps do not change the output bytes") {
        const auto c_tight = dir.file("c_tight.csv");
        const auto c_wide = dir.file("c_wide.csv");
        CHECK(run({"disambiguate", "--mentions", mentions, "--model", model, "--out", c_tight,
                   "--caps", "1,1,1", "--seed", "3"})
                  .code == 0);
        CHECK(run({"disambiguate", "--mentions", mentions, "--model", model, "--out", c_wide,
                   "--caps", "8,4,2", "--seed", "3"})
                  .code == 0);
        CHECK(TempDir::slurp(c_tight) == TempDir::slurp(c_wide));
        CHECK(TempDir::slurp(c_tight) == TempDir::slurp(clusters));
    }

    SUBCASE("cluster ids are block-scoped") {
        const auto loaded = load_labels(clusters);
        for (const auto& c : loaded) {
            const auto hash = c.cluster_id.find('#');
            REQUIRE(hash != std::string::npos);
            CHECK(c.cluster_id.find('|') < hash);  // "<last>|<first>#<n>"
        }
    }

    SUBCASE("importance reads the model back") {
        const auto imp = dir.file("imp.csv");
        const auto r = run({"importance", "--model", model, "--out", imp, "--top", "5"});
        CHECK(r.code == 0);
        CHECK(r.out.find("rank,feature,importance") != std::string::npos);
        const std::string csv = TempDir::slurp(imp);
        CHECK(csv.rfind("rank,feature,importance\n", 0) == 0);
        CHECK(csv.find("ln_") != std::string::npos);  // a last-name feature ranks
    }
}

TEST_CASE("config file fills gaps and the command line wins") {
    TempDir dir("config");
    const auto mentions = dir.file("m.csv");
    const auto labels = dir.file("l.csv");

    const auto config = dir.write("run.conf",
                                  "# corpus shape\n"
                                  "persons = 30\n"
                                  "seed = 11\n");
    CHECK(run({"synth", "--mentions", mentions, "--labels", labels, "--config", config}).code ==
          0);
    {
        std::set<std::string> persons;
        for (const auto& c : load_labels(labels))
            persons.insert(c.cluster_id);
        CHECK(persons.size() == 30);
    }

    // CLI --persons overrides the config value.
    CHECK(run({"synth", "--mentions", mentions, "--labels", labels, "--config", config,
               "--persons", "25"})
              .code == 0);
    {
        std::set<std::string> persons;
        for (const auto& c : load_labels(labels))
            persons.insert(c.cluster_id);
        CHECK(persons.size() == 25);
    }

    SUBCASE("unknown config key") {
        const auto bad = dir.write("bad.conf", "personz = 30\n");
        const auto r = run({"synth", "--mentions", mentions, "--labels", labels, "--config", bad});
        CHECK(r.code == 1);
        CHECK(r.err.find("personz") != std::string::npos);
    }
    SUBCASE("malformed config line") {
        const auto bad = dir.write("bad2.conf", "persons 30\n");
        CHECK(run({"synth", "--mentions", mentions, "--labels", labels, "--config", bad}).code ==
              1);
    }
    SUBCASE("duplicate config key") {
        const auto bad = dir.write("bad3.conf", "persons = 30\npersons = 40\n");
        CHECK(run({"synth", "--mentions", mentions, "--labels", labels, "--config", bad}).code ==
              1);
    }
}

TEST_CASE("cli exit codes") {
    TempDir dir("codes");

    SUBCASE("no subcommand is a usage error") {
        CHECK(run({}).code == 1);
    }
    SUBCASE("unknown flag is a usage error") {
        CHECK(run({"synth", "--bogus", "1"}).code == 1);
    }
    SUBCASE("missing required option") {
        const auto r = run({"train", "--labels", dir.file("l.csv")});
        CHECK(r.code == 1);
        CHECK(r.err.find("--mentions") != std::string::npos);
    }
    SUBCASE("unreadable data file") {
        const auto r = run({"train", "--mentions", dir.file("absent.csv"), "--labels",
                            dir.file("also-absent.csv"), "--model", dir.file("m.bin")});
        CHECK(r.code == 2);
    }
    SUBCASE("corrupt model file") {
        const auto model = dir.write("junk.bin", "this is not a model");
        const auto mentions = dir.file("m.csv");
        const auto labels = dir.file("l.csv");
        REQUIRE(run({"synth", "--mentions", mentions, "--labels", labels, "--persons", "10"})
                    .code == 0);
        const auto r = run({"disambiguate", "--mentions", mentions, "--model", model, "--out",
                            dir.file("c.csv")});
        CHECK(r.code == 3);
        CHECK(r.err.find("model error") != std::string::npos);
    }
    SUBCASE("prediction not covering the mentions file") {
        const auto mentions = dir.file("m.csv");
        const auto labels = dir.file("l.csv");
        REQUIRE(run({"synth", "--mentions", mentions, "--labels", labels, "--persons", "10"})
                    .code == 0);
        const auto partial = dir.write("partial.csv", "mention_id,cluster_id\nm000000,c0\n");
        const auto r =
            run({"evaluate", "--mentions", mentions, "--labels", labels, "--clusters", partial});
        CHECK(r.code == 2);
    }
    SUBCASE("bad eps range") {
        CHECK(run({"disambiguate", "--mentions", dir.file("x.csv"), "--model", dir.file("y.bin"),
                   "--out", dir.file("z.csv"), "--eps", "1.5"})
                  .code == 1);
    }
    SUBCASE("bad block spec") {
        CHECK(run({"disambiguate", "--mentions", dir.file("x.csv"), "--model", dir.file("y.bin"),
                   "--out", dir.file("z.csv"), "--block", "FN(0)+LN(f)"})
                  .code == 1);
    }
    SUBCASE("caps and thresholds must line up") {
        CHECK(run({"disambiguate", "--mentions", dir.file("x.csv"), "--model", dir.file("y.bin"),
                   "--out", dir.file("z.csv"), "--thresholds", "500", "--caps", "1,2,3"})
                  .code == 1);
    }
    SUBCASE("synth rejects out-of-range rates") {
        CHECK(run({"synth", "--mentions", dir.file("m.csv"), "--labels", dir.file("l.csv"),
                   "--initial-rate", "1.5"})
                  .code == 1);
    }
}
