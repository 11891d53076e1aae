#include <gtest/gtest.h>

#include "hsprop/catalog.hpp"

using namespace hsprop;
using namespace hsprop::catalog;

namespace {

// f(xy) = f(x) + sign(x) f(y) mod 3, checked over all pairs.
bool is_crossed_hom(const S3Sign& s, const Vec& f) {
    const auto& G = *s.g;
    for (Index x = 0; x < G.order(); ++x)
        for (Index y = 0; y < G.order(); ++y) {
            const Residue fy = s.m->act(x, Vec{f[y]})[0];
            if (f[G.mul(x, y)] != (f[x] + fy) % 3) return false;
        }
    return true;
}

std::vector<std::string> failing(const NamedScenario& s) {
    std::vector<std::string> out;
    for (const auto& e : s.expectations)
        if (!e.ok) out.push_back(e.what);
    return out;
}

} // namespace

TEST(Catalog, SignModuleOfS3) {
    auto s = build_s3_sign();
    EXPECT_EQ(s.g->order(), 6u);
    EXPECT_FALSE(is_crossed_hom(s, s.paper_cochain));
    EXPECT_TRUE(is_crossed_hom(s, s.corrected));

    auto r = run_scenario("ex2.4");
    EXPECT_EQ(r.facts["H1_G"], 1);
    EXPECT_EQ(r.facts["H_H"], json::array({0, 0, 0}));
    EXPECT_EQ(r.facts["hs_verdict"], "HTrivialGNontrivial");
    // the listed cochain is not a cocycle; everything else holds
    auto bad = failing(r);
    ASSERT_EQ(bad.size(), 1u);
    EXPECT_NE(bad[0].find("paper_cochain"), std::string::npos);
}

TEST(Catalog, SteinbergModules) {
    auto q2 = run_scenario("ex2.3-q2");
    EXPECT_TRUE(q2.all_ok());
    EXPECT_EQ(q2.facts["group_order"], 6);
    EXPECT_EQ(q2.facts["free_over_sylow"], true);
    EXPECT_EQ(q2.facts["H_G"], json::array({0, 0, 0, 0}));

    auto st = build_steinberg_small(3);
    EXPECT_EQ(st.g->order(), 24u);
    EXPECT_EQ(st.m->rank(), 3u);
    EXPECT_EQ(st.sylow.order(), 3u);
    EXPECT_TRUE(run_scenario("ex2.3-q3").all_ok());
}

TEST(Catalog, Sp4Extension) {
    auto r = run_scenario("ex2.6");
    EXPECT_TRUE(r.all_ok()) << r.to_json().dump();
    EXPECT_EQ(r.facts["group_order"], 720);
    EXPECT_EQ(r.facts["b_rank"], 4);
    EXPECT_EQ(r.facts["extension_splits"], false);
    EXPECT_EQ(r.facts["H1_G"], 1);
}

TEST(Catalog, NegationOnZ9) {
    auto w = build_remark22_witness();
    EXPECT_EQ(w.m->modulus(), 9u);
    EXPECT_EQ(w.m->act(1, Vec{1}), (Vec{8}));
    auto r = run_scenario("rem2.2");
    EXPECT_TRUE(r.all_ok());
    EXPECT_EQ(r.facts["H0_trivial_order"], 9);
}

TEST(Catalog, PadicScenarios) {
    for (Residue p : {2u, 3u, 5u}) {
        auto r = scenario_ex54(p, 1);
        EXPECT_TRUE(r.all_ok()) << r.to_json().dump();
        EXPECT_EQ(r.facts["N"], 2 * int(p * p) + 8);
    }
    auto r = scenario_ex56(2, 1, 1);
    EXPECT_TRUE(r.all_ok());
    EXPECT_EQ(r.facts["label_count"], 3);
    EXPECT_TRUE(scenario_ex56(3, 1, 2).all_ok());
}

TEST(Catalog, UnknownIdAndIdList) {
    EXPECT_THROW(run_scenario("ex9.9"), SchemaError);
    auto ids = scenario_ids();
    EXPECT_EQ(ids.size(), 7u);
    for (const auto& id : {"ex2.4", "rem2.2", "ex5.4", "ex5.6"}) {
        EXPECT_NE(std::find(ids.begin(), ids.end(), id), ids.end());
        EXPECT_EQ(run_scenario(id).id, id);
    }
}
