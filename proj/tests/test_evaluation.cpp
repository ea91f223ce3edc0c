#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "disambig/errors.hpp"
#include "disambig/evaluation.hpp"
#include "disambig/rng.hpp"

using namespace disambig;

namespace {

std::vector<LabeledCluster> truth_of(const std::map<std::string, std::vector<std::string>>& m) {
    std::vector<LabeledCluster> out;
    for (const auto& [id, members] : m) out.push_back(LabeledCluster{id, members});
    return out;
}

}  // namespace

TEST_CASE("pairwise metrics worked example") {
    // Pred {a,b,c},{d} vs truth {a,b},{c,d}: predicted pairs {ab,ac,bc},
    // truth pairs {ab,cd}, matched {ab}. P=1/3, R=1/2, F1=0.4.
    const std::map<std::string, std::string> pred = {
        {"a", "x"}, {"b", "x"}, {"c", "x"}, {"d", "y"}};
    const auto truth = truth_of({{"t1", {"a", "b"}}, {"t2", {"c", "d"}}});
    const auto m = pairwise_metrics(pred, truth);
    CHECK(m.predicted_pairs == 3);
    CHECK(m.truth_pairs == 2);
    CHECK(m.matched_pairs == 1);
    CHECK(m.precision == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(m.recall == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.f1 == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(m.warnings.empty());
}

TEST_CASE("perfect prediction scores ones") {
    const std::map<std::string, std::string> pred = {
        {"a", "p"}, {"b", "p"}, {"c", "q"}, {"d", "q"}, {"e", "r"}};
    const auto truth = truth_of({{"t1", {"a", "b"}}, {"t2", {"c", "d"}}, {"t3", {"e"}}});
    const auto m = pairwise_metrics(pred, truth);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f1 == 1.0);
    CHECK(m.matched_pairs == 2);
}

TEST_CASE("metrics are invariant to label renaming") {
    const auto truth = truth_of({{"t1", {"a", "b", "c"}}, {"t2", {"d", "e"}}});
    const std::map<std::string, std::string> p1 = {
        {"a", "0"}, {"b", "0"}, {"c", "1"}, {"d", "1"}, {"e", "2"}};
    const std::map<std::string, std::string> p2 = {
        {"a", "zebra"}, {"b", "zebra"}, {"c", "kiwi"}, {"d", "kiwi"}, {"e", "moss"}};
    const auto m1 = pairwise_metrics(p1, truth);
    const auto m2 = pairwise_metrics(p2, truth);
    CHECK(m1.precision == m2.precision);
    CHECK(m1.recall == m2.recall);
    CHECK(m1.f1 == m2.f1);
    CHECK(m1.matched_pairs == m2.matched_pairs);
}

TEST_CASE("all-singleton prediction has zero predicted pairs") {
    const std::map<std::string, std::string> pred = {{"a", "0"}, {"b", "1"}, {"c", "2"}};
    const auto truth = truth_of({{"t1", {"a", "b", "c"}}});
    const auto m = pairwise_metrics(pred, truth);
    CHECK(m.predicted_pairs == 0);
    CHECK(m.precision == 0.0);  // zero denominator convention
    CHECK(m.recall == 0.0);
    CHECK(m.f1 == 0.0);
    CHECK(m.warnings.size() >= 1);
}

TEST_CASE("all-singleton truth has zero truth pairs") {
    const std::map<std::string, std::string> pred = {{"a", "0"}, {"b", "0"}};
    const auto truth = truth_of({{"t1", {"a"}}, {"t2", {"b"}}});
    const auto m = pairwise_metrics(pred, truth);
    CHECK(m.truth_pairs == 0);
    CHECK(m.recall == 0.0);
    CHECK(!m.warnings.empty());
}

TEST_CASE("truth mention missing from prediction is an error") {
    const std::map<std::string, std::string> pred = {{"a", "0"}};
    const auto truth = truth_of({{"t1", {"a", "b"}}});
    CHECK_THROWS_WITH_AS(pairwise_metrics(pred, truth), doctest::Contains("b"), DataError);
}

TEST_CASE("predicted mentions outside the truth are ignored") {
    const std::map<std::string, std::string> pred = {
        {"a", "0"}, {"b", "0"}, {"zz", "0"}, {"zy", "9"}};
    const auto truth = truth_of({{"t1", {"a", "b"}}});
    const auto m = pairwise_metrics(pred, truth);
    // zz sits in predicted cluster "0" but is not part of the evaluation set.
    CHECK(m.predicted_pairs == 1);
    CHECK(m.matched_pairs == 1);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
}

TEST_CASE("metrics agree with a brute-force pair scan on random partitions") {
    Rng rng(808);
    for (int iter = 0; iter < 200; ++iter) {
        const std::size_t n = 2 + rng.next_below(30);
        std::map<std::string, std::string> pred;
        std::map<std::string, std::vector<std::string>> truth_groups;
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < n; ++i) {
            const std::string id = "m" + std::to_string(100 + i);
            ids.push_back(id);
            pred[id] = "p" + std::to_string(rng.next_below(6));
            truth_groups["t" + std::to_string(rng.next_below(6))].push_back(id);
        }
        const auto truth = truth_of(truth_groups);

        std::map<std::string, std::string> truth_label;
        for (const auto& c : truth)
            for (const auto& id : c.member_ids) truth_label[id] = c.cluster_id;

        std::uint64_t tp = 0, pp = 0, rp = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const bool same_pred = pred[ids[i]] == pred[ids[j]];
                const bool same_truth = truth_label[ids[i]] == truth_label[ids[j]];
                if (same_pred) ++pp;
                if (same_truth) ++rp;
                if (same_pred && same_truth) ++tp;
            }
        }

        const auto m = pairwise_metrics(pred, truth);
        INFO("iter=", iter, " n=", n);
        CHECK(m.predicted_pairs == pp);
        CHECK(m.truth_pairs == rp);
        CHECK(m.matched_pairs == tp);
        if (pp > 0) CHECK(m.precision == doctest::Approx(double(tp) / double(pp)).epsilon(1e-12));
        if (rp > 0) CHECK(m.recall == doctest::Approx(double(tp) / double(rp)).epsilon(1e-12));
    }
}

TEST_CASE("cluster size histogram") {
    SUBCASE("worked example") {
        const std::map<std::string, std::string> pred = {
            {"a", "x"}, {"b", "x"}, {"c", "y"}, {"d", "y"}, {"e", "z"}, {"f", "z"}, {"g", "z"}};
        const auto r = cluster_size_histogram(pred);
        CHECK(r.histogram == std::map<std::size_t, std::uint64_t>{{2, 2}, {3, 1}});
        CHECK(r.mean_size == doctest::Approx(7.0 / 3.0));
    }
    SUBCASE("empty prediction") {
        const auto r = cluster_size_histogram({});
        CHECK(r.histogram.empty());
        CHECK(r.mean_size == 0.0);
    }
    SUBCASE("all singletons") {
        const std::map<std::string, std::string> pred = {
            {"a", "0"}, {"b", "1"}, {"c", "2"}, {"d", "3"}, {"e", "4"}};
        const auto r = cluster_size_histogram(pred);
        CHECK(r.histogram == std::map<std::size_t, std::uint64_t>{{1, 5}});
        CHECK(r.mean_size == 1.0);
    }
}
