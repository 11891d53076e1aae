#include <gtest/gtest.h>

#include "hsprop/gmodules.hpp"

using namespace hsprop;

namespace {

auto s3() { return share(closure(3, {Perm({1, 2, 0}), Perm({1, 0, 2})})); }
auto c3() { return share(closure(3, {Perm({1, 2, 0})})); }

// Enumerate F_p^r and count vectors fixed by every generator.
std::size_t brute_fixed_count(const GModule& m) {
    const Residue p = m.prime();
    Vec v(m.rank(), 0);
    std::size_t count = 0;
    while (true) {
        bool fixed = true;
        for (const auto& a : m.generator_action())
            if (mat_apply(a, v) != v) fixed = false;
        count += fixed;
        std::size_t i = 0;
        while (i < v.size() && ++v[i] == p) v[i++] = 0;
        if (i == v.size()) break;
    }
    return count;
}

// Count r x r matrices over F_p commuting with every generator of m.
std::size_t brute_endomorphisms(const GModule& m) {
    const Residue p = m.prime();
    const std::size_t r = m.rank();
    Vec e(r * r, 0);
    std::size_t count = 0;
    while (true) {
        Matrix f(p, 1, r, r);
        for (std::size_t i = 0; i < r * r; ++i) f(i / r, i % r) = e[i];
        bool ok = true;
        for (const auto& a : m.generator_action())
            if (!(a * f == f * a)) ok = false;
        count += ok;
        std::size_t i = 0;
        while (i < e.size() && ++e[i] == p) e[i++] = 0;
        if (i == e.size()) break;
    }
    return count;
}

std::size_t ipow(std::size_t b, std::size_t e) { return e == 0 ? 1 : b * ipow(b, e - 1); }

} // namespace

TEST(GModule, ActionIsAHomomorphism) {
    auto g = s3();
    for (const auto& m : {permutation_module(g, 3), regular_module(g, 2), sign_module(g, 3, 2)})
        for (Index a = 0; a < g->order(); ++a)
            for (Index b = 0; b < g->order(); ++b) EXPECT_TRUE(m.action(g->mul(a, b)) == m.action(a) * m.action(b));
}

TEST(GModule, RejectsInconsistentMatrices) {
    auto g = s3();
    Matrix bad(3, 1, 1, 1);
    bad.set(0, 0, 2);
    // the 3-cycle cannot act by -1 on a line
    EXPECT_THROW(GModule(g, 3, 1, 1, {bad, bad}), ConstructionError);
    EXPECT_THROW(GModule(g, 3, 1, 1, {bad}), DimensionError);
}

TEST(GModule, InvariantsMatchEnumeration) {
    auto g = s3();
    for (const auto& m : {permutation_module(g, 2), permutation_module(g, 3), sign_module(g, 3), sign_module(g, 2),
                          regular_module(c3(), 3), direct_sum(permutation_module(g, 3), sign_module(g, 3))})
        EXPECT_EQ(ipow(m.prime(), invariants(m).size()), brute_fixed_count(m));
}

TEST(GModule, HomInvariantsAreEquivariantMaps) {
    auto g = s3();
    for (const auto& m : {permutation_module(g, 2), permutation_module(g, 3), sign_module(g, 3)}) {
        auto h = hom_module(m, m);
        EXPECT_EQ(ipow(m.prime(), invariants(h).size()), brute_endomorphisms(m));
    }
}

TEST(GModule, DualPreservesThePairing) {
    auto g = s3();
    auto m = permutation_module(g, 5);
    auto md = dual(m);
    Vec f{1, 2, 3}, v{4, 0, 1};
    auto pair = [](const Vec& a, const Vec& b) {
        Residue s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s = modular::add(s, modular::mul(a[i], b[i], 5), 5);
        return s;
    };
    for (Index x = 0; x < g->order(); ++x) EXPECT_EQ(pair(md.act(x, f), m.act(x, v)), pair(f, v));
}

TEST(GModule, RestrictionAgreesElementwise) {
    auto g = s3();
    auto m = permutation_module(g, 3);
    auto h = closure(3, {Perm({1, 0, 2})});
    auto mh = restrict_module(m, h);
    for (Index i = 0; i < h.order(); ++i) EXPECT_TRUE(mh.action(i) == m.action(*g->find(h.element(i))));
    EXPECT_THROW(restrict_module(m, closure(4, {Perm({1, 0, 2, 3})})), ContainmentError);
}

TEST(Extension, SplittingMatchesCoprimality) {
    auto g = s3();
    const Vec ones{1, 1, 1};
    // over F_2 the all-ones line has a complement; over F_3 it lies in the sum-zero plane and does not
    auto e2 = make_extension(permutation_module(g, 2), {ones});
    auto s = split_check(e2);
    ASSERT_TRUE(s.has_value());
    for (std::size_t gen = 0; gen < g->generators().size(); ++gen) {
        auto a = mod_p(e2.total.generator_action()[gen]);
        auto b = mod_p(e2.quotient.generator_action()[gen]);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                Residue l = 0, r = 0;
                for (std::size_t k = 0; k < 3; ++k) l ^= a.at(i, k) & s->at(k, j);
                for (std::size_t k = 0; k < 2; ++k) r ^= s->at(i, k) & b.at(k, j);
                EXPECT_EQ(l, r);
            }
    }
    EXPECT_FALSE(split_check(make_extension(permutation_module(g, 3), {ones})).has_value());
}

TEST(Freeness, CyclicSylow) {
    auto g = s3();
    auto c = closure(3, {Perm({1, 2, 0})});
    EXPECT_TRUE(free_over_cyclic(permutation_module(g, 3), c));
    EXPECT_FALSE(free_over_cyclic(trivial_module(g, 3, 1, 3), c));
    EXPECT_FALSE(free_over_cyclic(sign_module(g, 3), c));
    EXPECT_THROW(free_over_cyclic(permutation_module(g, 2), c), UnsupportedError);
    auto c2 = closure(3, {Perm({1, 0, 2})});
    EXPECT_TRUE(free_over_cyclic(regular_module(share(c2), 2), c2));
}
