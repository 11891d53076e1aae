#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "hsprop/groups.hpp"

using namespace hsprop;

namespace {

PermGroup sym(std::size_t n) {
    std::vector<Index> c(n);
    std::iota(c.begin(), c.end(), 0);
    return closure(n, {Perm::cycle({0, 1}, n), Perm::cycle(c, n)});
}

std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

} // namespace

TEST(Perm, CompositionActsOnTheLeft) {
    Perm s = Perm::cycle({0, 1}, 3), t = Perm::cycle({1, 2}, 3);
    Perm st = s * t;
    for (Index x = 0; x < 3; ++x) EXPECT_EQ(st(x), s(t(x)));
    EXPECT_EQ(st * st.inverse(), Perm::identity(3));
    EXPECT_THROW(Perm({0, 0, 1}), FormatError);
}

TEST(PermGroup, SymmetricOrders) {
    for (std::size_t n = 2; n <= 6; ++n) EXPECT_EQ(sym(n).order(), factorial(n));
}

TEST(PermGroup, TableIsAGroupLaw) {
    auto g = sym(4);
    const Index n = Index(g.order());
    EXPECT_EQ(g.element(0), Perm::identity(4));
    for (Index a = 0; a < n; ++a) {
        EXPECT_EQ(g.mul(a, g.inv(a)), 0u);
        for (Index b = 0; b < n; ++b) EXPECT_EQ(g.element(g.mul(a, b)), g.element(a) * g.element(b));
    }
    // BFS words reproduce every element
    for (Index i = 1; i < n; ++i)
        EXPECT_EQ(g.element(i), g.generators()[g.word_gen(i)] * g.element(g.word_parent(i)));
}

TEST(PermGroup, TrivialAndCap) {
    auto t = closure(5, {});
    EXPECT_EQ(t.order(), 1u);
    EXPECT_THROW(closure(6, sym(6).generators(), 100), SizeError);
}

TEST(Subgroups, NormalityAndQuotient) {
    auto s4 = sym(4);
    auto v4 = closure(4, {Perm({1, 0, 3, 2}), Perm({2, 3, 0, 1})});
    auto s3 = closure(4, {Perm::cycle({0, 1}, 4), Perm::cycle({0, 1, 2}, 4)});
    EXPECT_TRUE(is_subgroup(v4, s4));
    EXPECT_TRUE(is_normal(v4, s4));
    EXPECT_FALSE(is_normal(s3, s4));
    auto q = quotient(s4, v4);
    EXPECT_EQ(q.group.order(), 6u);
    for (Index a = 0; a < s4.order(); ++a)
        for (Index b = 0; b < s4.order(); ++b)
            EXPECT_EQ(q.projection[s4.mul(a, b)], q.group.mul(q.projection[a], q.projection[b]));
    EXPECT_THROW(quotient(s4, s3), NormalityError);
}

TEST(Subgroups, SubnormalChain) {
    auto s4 = sym(4);
    auto c2 = closure(4, {Perm({1, 0, 3, 2})});
    auto chain = subnormal_chain(c2, s4);
    ASSERT_TRUE(chain.has_value());
    EXPECT_EQ(chain->front().order(), 2u);
    EXPECT_EQ(chain->back().order(), 24u);
    for (std::size_t i = 0; i + 1 < chain->size(); ++i) EXPECT_TRUE(is_normal((*chain)[i], (*chain)[i + 1]));
    auto tr = closure(4, {Perm::cycle({0, 1}, 4)});
    EXPECT_FALSE(subnormal_chain(tr, s4).has_value());
}

TEST(Sylow, OrdersAndDeterminism) {
    auto s5 = sym(5);
    for (std::size_t p : {2u, 3u, 5u}) {
        std::size_t target = 1;
        for (std::size_t n = s5.order(); n % p == 0; n /= p) target *= p;
        for (std::uint64_t seed : {0u, 1u, 7u}) {
            auto P = sylow_p(s5, p, seed);
            EXPECT_EQ(P.order(), target);
            EXPECT_TRUE(is_subgroup(P, s5));
            EXPECT_EQ(sylow_p(s5, p, seed).elements(), P.elements());
        }
    }
}
