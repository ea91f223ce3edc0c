#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "disambig/blocking.hpp"
#include "disambig/errors.hpp"
#include "disambig/record.hpp"
#include "disambig/rng.hpp"
#include "disambig/sampler.hpp"
#include "test_util.hpp"

using namespace disambig;

namespace {

Mention mk(const std::string& id, const std::string& fn, const std::string& ln) {
    Mention m;
    m.mention_id = id;
    m.patent_id = "p_" + id;
    m.first_name = fn;
    m.last_name = ln;
    return m;
}

Dataset dataset_of(std::vector<Mention> mentions) {
    Dataset ds;
    ds.mentions = std::move(mentions);
    ds.build_index();
    return ds;
}

std::vector<LabeledCluster> clusters_of(const std::map<std::string, std::vector<std::string>>& m) {
    std::vector<LabeledCluster> out;
    for (const auto& [id, members] : m) {
        LabeledCluster c;
        c.cluster_id = id;
        c.member_ids = members;
        std::sort(c.member_ids.begin(), c.member_ids.end());
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

TEST_CASE("sampler worked example") {
    // Two same-block inventors: one cluster of two, one singleton.
    Dataset ds = dataset_of({mk("m1", "john", "doe"), mk("m2", "j", "doe"), mk("m3", "jane", "doe")});
    const auto labels = clusters_of({{"c1", {"m1", "m2"}}, {"c2", {"m3"}}});
    const BlockingKeySpec coarse{};  // FN(1)+LN(f): all three share block "doe|j"

    const auto pairs = build_pairs(ds, labels, coarse, 10.0, 1);

    std::set<std::pair<std::string, std::string>> pos, neg;
    for (const auto& p : pairs) {
        CHECK(p.a_id < p.b_id);
        (p.label == PairLabel::kMatch ? pos : neg).insert({p.a_id, p.b_id});
    }
    CHECK(pos == std::set<std::pair<std::string, std::string>>{{"m1", "m2"}});
    // Singleton members still serve as negative endpoints.
    CHECK(neg == std::set<std::pair<std::string, std::string>>{{"m1", "m3"}, {"m2", "m3"}});
}

TEST_CASE("sampler caps negatives at floor(ratio * positives)") {
    // One positive pair, two negative candidates, ratio 1.0: exactly one kept.
    Dataset ds = dataset_of({mk("m1", "john", "doe"), mk("m2", "j", "doe"), mk("m3", "jane", "doe")});
    const auto labels = clusters_of({{"c1", {"m1", "m2"}}, {"c2", {"m3"}}});
    const auto pairs = build_pairs(ds, labels, BlockingKeySpec{}, 1.0, 1);

    std::size_t n_pos = 0, n_neg = 0;
    for (const auto& p : pairs) (p.label == PairLabel::kMatch ? n_pos : n_neg)++;
    CHECK(n_pos == 1);
    CHECK(n_neg == 1);

    // Ratio 0 drops negatives entirely.
    const auto only_pos = build_pairs(ds, labels, BlockingKeySpec{}, 0.0, 1);
    CHECK(only_pos.size() == 1);
    CHECK(only_pos[0].label == PairLabel::kMatch);
}

TEST_CASE("sampler positive count is n choose 2 per cluster") {
    Dataset ds = dataset_of({mk("a1", "x", "lee"), mk("a2", "x", "lee"), mk("a3", "x", "lee"),
                             mk("a4", "x", "lee")});
    const auto labels = clusters_of({{"c1", {"a1", "a2", "a3", "a4"}}});
    const auto pairs = build_pairs(ds, labels, BlockingKeySpec{}, 1.0, 1);
    std::size_t n_pos = 0;
    for (const auto& p : pairs)
        if (p.label == PairLabel::kMatch) ++n_pos;
    CHECK(n_pos == 6);
    // Nobody outside the cluster: no negative candidates at all.
    CHECK(pairs.size() == 6);
}

TEST_CASE("sampler never pairs across coarse blocks") {
    Rng rng(11);
    std::vector<Mention> mentions;
    std::map<std::string, std::vector<std::string>> clusters;
    const std::vector<std::string> lasts = {"doe", "smith", "lee"};
    for (int i = 0; i < 90; ++i) {
        const std::string id = "m" + std::to_string(100 + i);
        const std::string ln = lasts[rng.next_below(lasts.size())];
        mentions.push_back(mk(id, "q", ln));
        clusters["c" + ln + std::to_string(rng.next_below(4))].push_back(id);
    }
    Dataset ds = dataset_of(mentions);
    const auto pairs = build_pairs(ds, clusters_of(clusters), BlockingKeySpec{}, 2.0, 5);

    std::map<std::string, std::string> block_of;
    for (const auto& m : ds.mentions) block_of[m.mention_id] = block_key(m, BlockingKeySpec{});
    std::map<std::string, std::string> cluster_of;
    for (const auto& [cid, members] : clusters)
        for (const auto& id : members) cluster_of[id] = cid;

    std::size_t n_pos = 0, n_neg = 0;
    for (const auto& p : pairs) {
        CHECK(p.a_id < p.b_id);
        if (p.label == PairLabel::kMatch) {
            ++n_pos;
            CHECK(cluster_of[p.a_id] == cluster_of[p.b_id]);
        } else {
            ++n_neg;
            CHECK(cluster_of[p.a_id] != cluster_of[p.b_id]);
            CHECK(block_of[p.a_id] == block_of[p.b_id]);  // negatives share a coarse block
        }
    }
    CHECK(n_pos > 0);
    CHECK(n_neg <= static_cast<std::size_t>(2.0 * n_pos));

    // No duplicate pairs.
    std::set<std::pair<std::string, std::string>> uniq;
    for (const auto& p : pairs) CHECK(uniq.insert({p.a_id, p.b_id}).second);
}

TEST_CASE("sampler is deterministic and seed-sensitive") {
    Rng rng(23);
    std::vector<Mention> mentions;
    std::map<std::string, std::vector<std::string>> clusters;
    for (int i = 0; i < 40; ++i) {
        const std::string id = "m" + std::to_string(100 + i);
        mentions.push_back(mk(id, "q", "doe"));
        clusters["c" + std::to_string(rng.next_below(10))].push_back(id);
    }
    Dataset ds = dataset_of(mentions);
    const auto labels = clusters_of(clusters);

    const auto p1 = build_pairs(ds, labels, BlockingKeySpec{}, 0.5, 7);
    const auto p2 = build_pairs(ds, labels, BlockingKeySpec{}, 0.5, 7);
    REQUIRE(p1.size() == p2.size());
    for (std::size_t i = 0; i < p1.size(); ++i) {
        CHECK(p1[i].a_id == p2[i].a_id);
        CHECK(p1[i].b_id == p2[i].b_id);
        CHECK(p1[i].label == p2[i].label);
    }

    // A different seed picks a different negative subset (same counts).
    const auto p3 = build_pairs(ds, labels, BlockingKeySpec{}, 0.5, 8);
    REQUIRE(p3.size() == p1.size());
    bool any_diff = false;
    for (std::size_t i = 0; i < p1.size(); ++i)
        if (p1[i].a_id != p3[i].a_id || p1[i].b_id != p3[i].b_id) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("sampler error cases") {
    Dataset ds = dataset_of({mk("m1", "a", "doe"), mk("m2", "b", "doe")});

    // All singletons: no positive pair to learn from.
    CHECK_THROWS_WITH_AS(
        build_pairs(ds, clusters_of({{"c1", {"m1"}}, {"c2", {"m2"}}}), BlockingKeySpec{}, 1.0, 1),
        doctest::Contains("multi-member"), DataError);

    // Label referencing a mention that is not in the dataset.
    CHECK_THROWS_WITH_AS(
        build_pairs(ds, clusters_of({{"c1", {"m1", "zzz"}}}), BlockingKeySpec{}, 1.0, 1),
        doctest::Contains("unknown mention_id"), DataError);

    // Bad ratio.
    CHECK_THROWS_AS(
        build_pairs(ds, clusters_of({{"c1", {"m1", "m2"}}}), BlockingKeySpec{}, -1.0, 1),
        UsageError);
}

TEST_CASE("write_pairs_csv") {
    TempDir dir("pairs");
    std::vector<PairSample> pairs;
    pairs.push_back({"m1", "m2", PairLabel::kMatch});
    pairs.push_back({"m1", "m3", PairLabel::kNonMatch});
    const auto p = dir.file("pairs.csv");
    write_pairs_csv(pairs, p);
    CHECK(TempDir::slurp(p) == "a_id,b_id,label\nm1,m2,match\nm1,m3,non-match\n");
}
