#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "hsprop/cohomology.hpp"

using namespace hsprop;

namespace {

auto s3() { return share(closure(3, {Perm({1, 2, 0}), Perm({1, 0, 2})})); }
auto cyclic(Index n) {
    std::vector<Index> c(n);
    std::iota(c.begin(), c.end(), 0);
    return share(closure(n, {Perm::cycle(c, n)}));
}
auto d4() { return share(closure(4, {Perm::cycle({0, 1, 2, 3}, 4), Perm::cycle({1, 3}, 4)})); }

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) { return e == 0 ? 1 : b * ipow(b, e - 1); }

// |Z^1| by enumerating generator images and extending along BFS words, then
// |H^1| = |Z^1| |M^G| / |M|.  Independent of the differential machinery.
std::uint64_t brute_h1_order(const GModule& m) {
    const auto& G = m.group();
    const Residue q = m.modulus();
    const std::size_t r = m.rank(), gens = G.generators().size();
    std::uint64_t cocycles = 0;
    Vec choice(gens * r, 0);
    while (true) {
        std::vector<Vec> f(G.order(), Vec(r, 0));
        for (Index i = 1; i < G.order(); ++i) {
            // f(s x) = f(s) + s f(x)
            const std::size_t s = G.word_gen(i);
            Vec sx = m.act(G.generator_index(s), f[G.word_parent(i)]);
            for (std::size_t c = 0; c < r; ++c) f[i][c] = Residue((choice[s * r + c] + sx[c]) % q);
        }
        bool ok = true;
        for (Index a = 0; a < G.order() && ok; ++a)
            for (Index b = 0; b < G.order() && ok; ++b) {
                Vec ab = m.act(a, f[b]);
                for (std::size_t c = 0; c < r; ++c)
                    if (f[G.mul(a, b)][c] != (f[a][c] + ab[c]) % q) ok = false;
            }
        cocycles += ok;
        std::size_t i = 0;
        while (i < choice.size() && ++choice[i] == q) choice[i++] = 0;
        if (i == choice.size()) break;
    }
    std::uint64_t fixed = 0;
    Vec v(r, 0);
    while (true) {
        bool ok = true;
        for (Index a = 0; a < G.order(); ++a)
            if (m.act(a, v) != v) ok = false;
        fixed += ok;
        std::size_t i = 0;
        while (i < r && ++v[i] == q) v[i++] = 0;
        if (i == r) break;
    }
    return cocycles * fixed / ipow(q, r);
}

std::uint64_t order_of(const CohomologyReport& rep, unsigned n) {
    std::uint64_t o = 1;
    for (const auto& f : rep.factors[n]) o *= ipow(f.prime, unsigned(f.exponent));
    return o;
}

} // namespace

TEST(Cochain, DifferentialSquaresToZero) {
    std::mt19937_64 rng(5);
    auto g = s3();
    for (const auto& m : {permutation_module(g, 3), sign_module(g, 2, 2), regular_module(cyclic(4), 2)})
        for (unsigned n = 0; n <= 2; ++n) {
            Cochain f(m, n);
            for (auto& v : f.values()) v = Residue(rng() % m.modulus());
            EXPECT_TRUE(differential(differential(f)).is_zero());
        }
}

TEST(Cohomology, H0AndH1AgainstEnumeration) {
    auto g = s3();
    std::vector<GModule> mods{sign_module(g, 3), permutation_module(g, 3), permutation_module(g, 2),
                              trivial_module(g, 2), trivial_module(g, 3), sign_module(g, 3, 2),
                              trivial_module(cyclic(4), 2, 2), sign_module(d4(), 2, 2), trivial_module(d4(), 2)};
    for (const auto& m : mods) {
        auto rep = cohomology_dims(m, 1);
        EXPECT_EQ(order_of(rep, 1), brute_h1_order(m));
        if (m.is_field()) EXPECT_EQ(rep.dim(0), invariants(m).size());
    }
}

TEST(Cohomology, CyclicGroupsArePeriodic) {
    // H^n(C_m, F_p) = F_p in every degree when p | m
    for (auto [m, p] : std::vector<std::pair<Index, Residue>>{{2, 2}, {3, 3}, {4, 2}, {6, 3}}) {
        auto rep = cohomology_dims(trivial_module(cyclic(m), p), 3);
        EXPECT_EQ(rep.dims(), (std::vector<std::size_t>{1, 1, 1, 1}));
    }
    // and vanishes in positive degree when p does not divide m
    EXPECT_EQ(cohomology_dims(trivial_module(cyclic(3), 2), 3).dims(), (std::vector<std::size_t>{1, 0, 0, 0}));
}

TEST(Cohomology, IntegralCoefficientsOfCyclicGroup) {
    // C_2 on Z/4 trivially: H^0 = Z/4, H^1 = Hom(C_2, Z/4) = Z/2, H^2 = Z/4 / 2 Z/4 = Z/2
    auto rep = cohomology_dims(trivial_module(cyclic(2), 2, 2), 2);
    EXPECT_EQ(rep.factors[0], (std::vector<Factor>{{2, 2}}));
    EXPECT_EQ(rep.factors[1], (std::vector<Factor>{{2, 1}}));
    EXPECT_EQ(rep.factors[2], (std::vector<Factor>{{2, 1}}));
}

TEST(Cohomology, FreeModulesAreAcyclic) {
    for (auto g : {cyclic(2), cyclic(4), d4()}) {
        auto rep = cohomology_dims(regular_module(g, 2), 3);
        EXPECT_EQ(rep.dim(0), 1u);
        for (unsigned n = 1; n <= 3; ++n) EXPECT_EQ(rep.dim(n), 0u);
    }
}

TEST(Cohomology, TrivialGroup) {
    auto t = share(closure(3, {}));
    auto rep = cohomology_dims(trivial_module(t, 5, 1, 4), 3);
    EXPECT_EQ(rep.dims(), (std::vector<std::size_t>{4, 0, 0, 0}));
}

TEST(Cohomology, EnginesAndJobsAgree) {
    auto g = share(closure(4, {Perm::cycle({0, 1, 2, 3}, 4), Perm::cycle({0, 1}, 4)}));
    auto m = permutation_module(g, 2);
    CohomologyOptions dense, streamed, threaded;
    streamed.dense_threshold = 0;
    threaded.dense_threshold = 0;
    threaded.jobs = 3;
    for (unsigned n = 0; n <= 2; ++n) {
        const auto r = differential_rank(m, n, dense);
        EXPECT_EQ(differential_rank(m, n, streamed), r);
        EXPECT_EQ(differential_rank(m, n, threaded), r);
        EXPECT_EQ(rank(differential_matrix_fp(m, n)), r);
    }
    EXPECT_EQ(h1_dim_fast(m), cohomology_dims(m, 1).dim(1));
}

TEST(Cohomology, RowBudget) {
    auto g = s3();
    CohomologyOptions tiny;
    tiny.max_rows = 10;
    tiny.dense_threshold = 0;
    EXPECT_THROW(cohomology_dims(permutation_module(g, 3), 2, tiny), SizeError);
}

TEST(Classes, CoboundaryDetection) {
    auto g = s3();
    auto m = sign_module(g, 3);
    ClassBasis cb(m, 1);
    ASSERT_EQ(cb.dim(), 1u);
    Cochain z(m, 1, cb.representatives()[0]);
    EXPECT_FALSE(class_is_trivial(z).trivial);
    EXPECT_EQ(cb.project(z.values()), (Vec{1}));

    auto pm = permutation_module(g, 3);
    Cochain v(pm, 0, Vec{1, 2, 0});
    auto dv = differential(v);
    auto t = class_is_trivial(dv);
    ASSERT_TRUE(t.trivial);
    EXPECT_EQ(differential(*t.primitive), dv);
    Cochain bad(m, 1);
    bad.values()[1] = 1;
    EXPECT_THROW(class_is_trivial(bad), PreconditionError);
}

TEST(Verdicts, PGroupCriterionAndTransfer) {
    auto g = d4();
    auto r = prop23_check(*g, 2, {trivial_module(g, 3), sign_module(g, 5)});
    EXPECT_FALSE(r.a_holds);
    EXPECT_FALSE(r.b_holds);
    r = prop23_check(*g, 2, {sign_module(g, 3)});
    EXPECT_TRUE(r.a_holds);
    EXPECT_TRUE(r.b_holds);
    EXPECT_THROW(prop23_check(*s3(), 2, {sign_module(s3(), 3)}), PreconditionError);

    auto s = s3();
    auto h = closure(3, {Perm({1, 0, 2})});
    auto sign = sign_module(s, 3);
    auto v = hs_property_verdict(sign, h, 2);
    EXPECT_EQ(v.kind, HsVerdict::Kind::HTrivialGNontrivial);
    EXPECT_EQ(v.degree, 1u);
    ASSERT_TRUE(v.witness.has_value());
    Cochain w(sign, 1, *v.witness);
    EXPECT_TRUE(differential(w).is_zero());
    EXPECT_EQ(hs_property_verdict(trivial_module(s, 2), h, 1).kind, HsVerdict::Kind::HNontrivial);
}
