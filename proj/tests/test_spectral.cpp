#include <gtest/gtest.h>

#include "hsprop/spectral.hpp"

using namespace hsprop;

namespace {

struct Case {
    std::shared_ptr<const PermGroup> g;
    PermGroup h;
    GModule m;
};

std::vector<Case> cases() {
    auto s3 = share(closure(3, {Perm({1, 2, 0}), Perm({1, 0, 2})}));
    auto a3 = closure(3, {Perm({1, 2, 0})});
    auto s4 = share(closure(4, {Perm::cycle({0, 1, 2, 3}, 4), Perm::cycle({0, 1}, 4)}));
    auto v4 = closure(4, {Perm({1, 0, 3, 2}), Perm({2, 3, 0, 1})});
    auto d4 = share(closure(4, {Perm::cycle({0, 1, 2, 3}, 4), Perm::cycle({1, 3}, 4)}));
    auto c4 = closure(4, {Perm::cycle({0, 1, 2, 3}, 4)});
    return {{s3, a3, sign_module(s3, 3)},        {s3, a3, permutation_module(s3, 3)},
            {s3, a3, permutation_module(s3, 2)}, {s4, v4, permutation_module(s4, 2)},
            {s4, v4, sign_module(s4, 3)},        {d4, c4, permutation_module(d4, 2)},
            {d4, c4, trivial_module(d4, 2)}};
}

} // namespace

TEST(E2Page, SignModuleOverA3) {
    auto c = cases()[0];
    auto page = e2_page(c.m, c.h, 2, 2);
    EXPECT_EQ(page.at(0, 1), 1u);
    for (unsigned p = 0; p <= 2; ++p) EXPECT_EQ(page.at(p, 0), 0u);
}

TEST(E2Page, CoprimeQuotientCollapsesToTheFirstColumn) {
    // |G/H| invertible in F_p: E_2^{p,q} = 0 for p > 0 and H^n(G) = E_2^{0,n}
    for (const auto& c : cases()) {
        const std::size_t idx = c.g->order() / c.h.order();
        if (idx % c.m.prime() == 0) continue;
        auto page = e2_page(c.m, c.h, 2, 2);
        auto hg = cohomology_dims(c.m, 2).dims();
        for (unsigned q = 0; q <= 2; ++q) {
            EXPECT_EQ(page.at(0, q), hg[q]);
            for (unsigned p = 1; p <= 2; ++p) EXPECT_EQ(page.at(p, q), 0u);
        }
    }
}

TEST(E2Page, FiveTermBounds) {
    for (const auto& c : cases()) {
        auto page = e2_page(c.m, c.h, 2, 1);
        auto ir = inf_res_check(c.m, c.h);
        EXPECT_TRUE(ir.exact());
        EXPECT_EQ(ir.h1_quotient, page.at(1, 0));
        EXPECT_GE(ir.h1_g, page.at(1, 0));
        EXPECT_LE(ir.h1_g, page.at(1, 0) + page.at(0, 1));
        EXPECT_EQ(page.at(0, 0), cohomology_dims(c.m, 0).dim(0));
    }
}

TEST(ConjugationModule, HActsTriviallyOnClasses) {
    for (const auto& c : cases()) {
        auto cm = conjugation_module(c.m, c.h, 1);
        EXPECT_EQ(cm.module.rank(), cm.classes->dim());
        EXPECT_EQ(cm.quotient_group->order() * c.h.order(), c.g->order());
    }
}

TEST(ConjugationModule, RejectsNonNormal) {
    auto s3 = share(closure(3, {Perm({1, 2, 0}), Perm({1, 0, 2})}));
    auto t = closure(3, {Perm({1, 0, 2})});
    EXPECT_THROW(conjugation_module(sign_module(s3, 3), t, 1), NormalityError);
}
