#include <gtest/gtest.h>

#include <random>

#include "hsprop/gamma.hpp"

using namespace hsprop;

namespace {

// (1+pi)^n by repeated multiplication, n >= 0.
LaurentElem naive_power(Residue p, int prec, int n) {
    auto base = LaurentElem::constant(p, prec, 1) + LaurentElem::monomial(p, prec, 1);
    LaurentElem acc = LaurentElem::constant(p, prec, 1);
    for (int i = 0; i < n; ++i) acc = acc * base;
    return acc;
}

} // namespace

TEST(GammaElem, SemidirectLaw) {
    std::mt19937_64 rng(12);
    for (Residue p : {2u, 3u}) {
        const unsigned L = 8;
        for (int t = 0; t < 50; ++t) {
            auto x = random_gamma(rng, p, 2, L), y = random_gamma(rng, p, 2, L), z = random_gamma(rng, p, 2, L);
            EXPECT_EQ((x * y) * z, x * (y * z));
            EXPECT_EQ(x * x.inverse(), GammaElem::identity(p, 2, L));
            EXPECT_EQ(x.pow(5), x * x * x * x * x);
        }
        EXPECT_TRUE(GammaElem::cyclotomic(p, 1, L, 1 + p * p).in_gamma0());
        EXPECT_FALSE(GammaElem::cyclotomic(p, 1, L, 1 + p).in_gamma0());
        EXPECT_THROW(GammaElem::cyclotomic(p, 1, L, p), PreconditionError);
    }
}

TEST(Action, OnGeneratorsMatchesBinomialPowers) {
    for (Residue p : {2u, 3u, 5u}) {
        const int prec = 30;
        const unsigned L = gamma_level(p, prec);
        for (int u : {1, 2, 4, 6}) {
            if (u % int(p) == 0) continue;
            auto g = GammaElem::cyclotomic(p, 1, L, u);
            auto pi = TateElem::constant(LaurentElem::monomial(p, prec, 1), 1, 2);
            auto expect = naive_power(p, prec, u) - LaurentElem::constant(p, prec, 1);
            EXPECT_EQ(act(g, pi), TateElem::constant(expect, 1, 2));
        }
        for (int a : {1, 3, 7}) {
            auto g = GammaElem::translation(p, 1, L, 0, a);
            auto t = TateElem::variable(p, 1, prec, 2, 0);
            EXPECT_EQ(act(g, t), t.scaled(naive_power(p, prec, a)));
        }
    }
}

TEST(Action, GroupLawAndLeibniz) {
    for (Residue p : {2u, 3u}) {
        auto r = law_check(p, 1, 16, 40, 3);
        EXPECT_TRUE(r.ok) << r.counterexample;
    }
    std::mt19937_64 rng(13);
    for (int t = 0; t < 100; ++t) {
        auto g = random_gamma(rng, 2, 1, gamma_level(2, 16));
        auto x = random_tate(rng, 2, 1, 16, 3, 4, 1), y = random_tate(rng, 2, 1, 16, 3, 4, 1);
        EXPECT_TRUE(leibniz_check(g, x, y));
    }
}

TEST(Gain, CyclotomicOnPi) {
    // (1+pi)^{1+p^2} - 1 - pi = (1+pi) pi^{p^2}
    for (Residue p : {2u, 3u, 5u}) {
        const int N = 2 * int(p * p) + 8;
        const unsigned L = gamma_level(p, N);
        auto g = GammaElem::cyclotomic(p, 0, L, 1 + (long long)p * p);
        auto pi = TateElem::constant(LaurentElem::monomial(p, N, 1), 0, 1);
        EXPECT_EQ(gamma_minus_one(g, pi).truncated(N).valuation(), int(p * p));
        auto cert = gain_certificate({g}, monomial_basis(p, 0, N, 1, 3, 0), L, N);
        EXPECT_EQ(cert.lattice_gain, int(p * p));
        EXPECT_EQ(cert.ratio_gain, int(p * p) - 1);
        EXPECT_GE(cert.ratio_gain, ratio_gain_bound(g));
    }
}

TEST(Gain, LabelSummands) {
    for (Residue p : {2u, 3u}) {
        const int N = 20;
        const unsigned L = gamma_level(p, N);
        auto cyc = GammaElem::cyclotomic(p, 1, L, 1 + (long long)p * p);
        auto tr = GammaElem::translation(p, 1, L, 0, p);
        EXPECT_EQ(label_delta_valuation(cyc, {1, 0}, N), int(p));
        EXPECT_EQ(label_delta_valuation(tr, {0, 1}, N), 1);
        EXPECT_GE(label_delta_valuation(tr, {1, 0}, N), kInfiniteGain);
        auto c1 = gain_certificate({cyc}, label_basis({1, 0}, p, 1, N, 2, 3, 1), L, N);
        EXPECT_EQ(c1.lattice_gain, int(p));
        auto c2 = gain_certificate({tr}, label_basis({0, 1}, p, 1, N, 2, 3, 1), L, N);
        EXPECT_EQ(c2.lattice_gain, 1);
    }
}

TEST(Solver, ResidualReachesTarget) {
    std::mt19937_64 rng(14);
    for (Residue p : {2u, 3u, 5u}) {
        const int N = 2 * int(p * p) + 8;
        const unsigned L = gamma_level(p, N);
        auto cyc = GammaElem::cyclotomic(p, 1, L, 1 + (long long)p * p);
        auto tr = GammaElem::translation(p, 1, L, 0, p);
        for (const auto& [g, e] : std::vector<std::pair<GammaElem, Label>>{{cyc, {1, 0}}, {tr, {0, 1}}, {tr, {1, 1}}})
            for (int t = 0; t < 5; ++t) {
                auto w = random_tate(rng, p, 1, N, 2, 4, 1);
                auto inv = invert_gamma_minus_one(g, e, w, N);
                auto r = (apply_on_label(g, e, inv.x) - w).truncated(N);
                EXPECT_TRUE(r.is_zero() || r.valuation() >= N);
            }
    }
}

TEST(Vanishing, Verdicts) {
    const int N = 16;
    const unsigned L = gamma_level(2, N);
    auto cyc = GammaElem::cyclotomic(2, 1, L, 5);
    EXPECT_EQ(procyclic_vanishing(cyc, {1, 0}, N).verdict, Vanishing::Vanishing);
    EXPECT_EQ(procyclic_vanishing(cyc, {0, 0}, N).verdict, Vanishing::H0Nonzero);
    auto tr = GammaElem::translation(2, 1, L, 0, 2);
    EXPECT_EQ(procyclic_vanishing(tr, {1, 1}, N).verdict, Vanishing::Vanishing);
}

TEST(Frobenius, PowerIdentityInCharacteristicP) {
    // (eta - 1)^{p^n} = eta^{p^n} - 1 on F_p-algebras
    std::mt19937_64 rng(15);
    for (Residue p : {2u, 3u}) {
        const int N = 24;
        auto eta = GammaElem::cyclotomic(p, 1, gamma_level(p, N), 1 + (long long)p * p);
        for (unsigned n = 1; n <= 2; ++n)
            for (int t = 0; t < 5; ++t) {
                auto [lhs, rhs] = frobenius_power_pair(eta, random_tate(rng, p, 1, N, 2, 4, 1), n);
                EXPECT_EQ(lhs, rhs);
            }
    }
}
