#include <gtest/gtest.h>

#include <random>

#include "hsprop/homotopy.hpp"

using namespace hsprop;

namespace {

bool agree(const TateElem& a, const TateElem& b) {
    const int prec = std::min(a.prec(), b.prec());
    return a.truncated(prec) == b.truncated(prec);
}

// f(g_1..g_n) = (g_1 ... g_n) v + (g_n) w, a module-valued polynomial cochain.
GridCochain polynomial_cochain(const LabelModule& mod, unsigned n, std::mt19937_64& rng) {
    TateElem v = random_tate(rng, mod.p(), mod.d(), mod.prec(), mod.degree_cap(), 4, 1);
    TateElem w = random_tate(rng, mod.p(), mod.d(), mod.prec(), mod.degree_cap(), 4, 1);
    return GridCochain(n, [&mod, v, w, n](std::span<const GridPoint> g) {
        const auto& G = mod.grid();
        GridPoint prod = G.identity();
        for (unsigned k = 0; k < n; ++k) prod = G.mul(prod, g[k]);
        return mod.act(prod, v) + mod.act(g[n - 1], w);
    });
}

// Both coordinates are determined modulo p^{L+1}.
GammaElem reduce(const GammaElem& g, unsigned L) {
    GammaElem r{PadicInt(g.p(), L, g.u.value()), {}};
    for (const auto& a : g.a) r.a.push_back(PadicInt(g.p(), L, a.value()));
    return r;
}

struct Fixture {
    static constexpr int N = 16;
    std::mt19937_64 rng{16};
    Label e{1, 0};
    GridPoint eta{1, 0};
    unsigned m = bound_select(2, 2, 2, 1);
    int prec = N + 4 * 8;
    LabelModule mod{GridGroup(2, 1, grid_level_for(2, 1, e, prec + 16)), e, prec, 1};
    HomotopyContext ctx{mod, eta, m};
};

} // namespace

TEST(GridGroup, CoordinatesRealizeTheGroupLaw) {
    std::mt19937_64 rng(17);
    for (auto [p, d] : std::vector<std::pair<Residue, unsigned>>{{2, 1}, {3, 1}, {2, 2}}) {
        GridGroup G(p, d, 5);
        const unsigned Lg = G.level() + 2;
        for (int t = 0; t < 100; ++t) {
            auto a = G.random(rng), b = G.random(rng);
            EXPECT_TRUE(reduce(G.to_gamma(G.mul(a, b), Lg), Lg - 1) == reduce(G.to_gamma(a, Lg) * G.to_gamma(b, Lg), Lg - 1));
            EXPECT_EQ(G.mul(a, G.inv(a)), G.identity());
            EXPECT_EQ(G.from_gamma(G.to_gamma(a, Lg)), a);
            EXPECT_EQ(G.pow(a, 3), G.mul(a, G.mul(a, a)));
            EXPECT_TRUE(G.to_gamma(a, Lg).in_gamma0());
        }
        for (unsigned j = 0; j < G.level(); ++j) {
            auto a = G.random(rng, j), b = G.random(rng, j);
            EXPECT_GE(G.depth(a), j);
            EXPECT_GE(G.depth(G.mul(a, b)), j);
        }
    }
}

TEST(LabelModule, IsAnActionAndChecksItsLevel) {
    std::mt19937_64 rng(18);
    const Label e{1, 1};
    const int prec = 16;
    const unsigned L = grid_level_for(2, 1, e, prec);
    LabelModule mod(GridGroup(2, 1, L), e, prec, 1);
    for (int t = 0; t < 20; ++t) {
        auto a = mod.grid().random(rng), b = mod.grid().random(rng);
        auto r = random_tate(rng, 2, 1, prec, 1, 4, 1);
        EXPECT_TRUE(agree(mod.act(a, mod.act(b, r)), mod.act(mod.grid().mul(a, b), r)));
    }
    EXPECT_THROW(LabelModule(GridGroup(2, 1, L - 1), e, prec, 1), ConsistencyError);
}

TEST(GridCochain, DifferentialSquaresToZero) {
    Fixture fx;
    for (unsigned n = 1; n <= 2; ++n) {
        auto f = polynomial_cochain(fx.mod, n, fx.rng);
        auto dd = grid_differential(fx.mod, grid_differential(fx.mod, f));
        for (int t = 0; t < 10; ++t) {
            std::vector<GridPoint> tup;
            for (unsigned k = 0; k < n + 2; ++k) tup.push_back(fx.mod.grid().random(fx.rng));
            EXPECT_TRUE(dd(tup).is_zero());
        }
    }
}

TEST(Bound, SelectAgreesWithDirectSearch) {
    EXPECT_EQ(bound_select(2, 1, 1, 1), 2u);
    EXPECT_EQ(bound_select(3, 3, 3, 1), 1u);
    EXPECT_EQ(bound_select(2, 2, 2, 1), 2u);
    for (Residue p : {2u, 3u, 5u})
        for (int tau = 0; tau <= 6; ++tau)
            for (int gc = 1; gc <= 4; ++gc)
                for (int eps = 1; eps <= 3; ++eps) {
                    if ((long long)p * gc <= tau) {
                        EXPECT_THROW(bound_select(p, tau, gc, eps), NoContractionError);
                        continue;
                    }
                    unsigned want = 0;
                    for (long long pm = 1;; pm *= p, ++want)
                        if (pm * pm * gc - 2 * pm * tau >= eps && pm * p * gc - pm * tau >= eps) break;
                    EXPECT_EQ(bound_select(p, tau, gc, eps), want);
                }
}

TEST(Homotopy, InverseOfTMinusOne) {
    Fixture fx;
    EXPECT_EQ(fx.ctx.tau(), 2);
    EXPECT_EQ(fx.ctx.tau_m(), 8);
    for (int t = 0; t < 10; ++t) {
        auto w = random_tate(fx.rng, 2, 1, fx.prec, 1, 4, 1);
        EXPECT_TRUE(agree(fx.ctx.inverse(fx.mod.act(fx.ctx.T(), w) - w), w));
    }
}

TEST(Homotopy, DegreeOneIdentityByHand) {
    // (d h + h d - 1) f (g) = g A f(T) - A g f(T) - A (f(T g) - f(g T))
    Fixture fx;
    const auto& G = fx.mod.grid();
    const auto& T = fx.ctx.T();
    auto f = polynomial_cochain(fx.mod, 1, fx.rng);
    auto hf = h_m_apply(fx.ctx, f);
    auto dhf = grid_differential(fx.mod, hf);
    auto hdf = h_m_apply(fx.ctx, grid_differential(fx.mod, f));
    for (int t = 0; t < 20; ++t) {
        GridPoint g = G.random(fx.rng);
        TateElem lhs = dhf({g}) + hdf({g}) - f({g});
        TateElem fT = f({T});
        TateElem by_hand = fx.mod.act(g, fx.ctx.inverse(fT)) - fx.ctx.inverse(fx.mod.act(g, fT)) -
                           fx.ctx.inverse(f({G.mul(T, g)}) - f({G.mul(g, T)}));
        EXPECT_TRUE(agree(lhs, by_hand));
        EXPECT_TRUE(agree(lhs, homotopy_rhs(fx.ctx, f, std::vector<GridPoint>{g})));
    }
}

TEST(Homotopy, IdentityAndGainInDegreesOneAndTwo) {
    Fixture fx;
    const auto& G = fx.mod.grid();
    const int g_c = int(fx.mod.level_gain(0));
    for (unsigned n = 1; n <= 2; ++n) {
        auto f = polynomial_cochain(fx.mod, n, fx.rng);
        auto shifts = analytic_samples(G, n, 40, fx.rng);
        const int base = analytic_base(fx.mod, f, g_c, shifts);
        EXPECT_TRUE(c_analytic_check(fx.mod, f, g_c, base, shifts).ok);
        std::vector<std::vector<GridPoint>> tuples;
        for (int t = 0; t < 30; ++t) {
            std::vector<GridPoint> tup;
            for (unsigned k = 0; k < n; ++k) tup.push_back(G.random(fx.rng));
            tuples.push_back(tup);
        }
        auto rep = homotopy_identity_check(fx.ctx, f, tuples, base);
        EXPECT_EQ(rep.samples, 30);
        EXPECT_GE(rep.observed_gain, 1);
    }
}

TEST(Homotopy, AnalyticEstimateRejectsABump) {
    Fixture fx;
    const auto& G = fx.mod.grid();
    const GridPoint spot = G.random(fx.rng);
    TateElem one = TateElem::constant(LaurentElem::constant(2, fx.prec, 1), 1, 1);
    const auto& mod = fx.mod;
    GridCochain bump(1, [&mod, spot, one](std::span<const GridPoint> g) { return g[0] == spot ? one : mod.zero(); });
    GridPoint deep = G.identity();
    deep[0] = modular::ipow(2, G.level() - 1);
    std::vector<AnalyticSample> probe{{{spot}, {deep}}};
    EXPECT_FALSE(c_analytic_check(fx.mod, bump, 2, -2, probe).ok);
}

TEST(Homotopy, CommutatorAndFrobenius) {
    Fixture fx;
    for (unsigned j = 0; j <= 2; ++j)
        for (int t = 0; t < 10; ++t) {
            auto g = fx.mod.grid().random(fx.rng, j);
            auto v = random_tate(fx.rng, 2, 1, fx.prec, 1, 4, 1);
            auto cr = commutator_identity_check(fx.ctx, g, j, v);
            EXPECT_TRUE(cr.identity_ok) << cr.witness;
            EXPECT_TRUE(cr.displacement_ok) << cr.witness;
        }
    for (unsigned n = 1; n <= 2; ++n)
        EXPECT_TRUE(frobenius_power_check(fx.mod, fx.eta, n, random_tate(fx.rng, 2, 1, 24, 1, 4, 1)));
}

TEST(Homotopy, CorrectionProducesAPrimitive) {
    std::mt19937_64 rng(19);
    const Label e{1, 0};
    const int N = 16, work = N + 16 * 8;
    LabelModule mod(GridGroup(2, 1, grid_level_for(2, 1, e, work)), e, work, 1);
    HomotopyContext ctx(mod, {1, 0}, 2);
    TateElem v = random_tate(rng, 2, 1, N, 1, 4, 1).with_precision(work);
    GridCochain c(0, [v](std::span<const GridPoint>) { return v; });
    GridCochain z = grid_differential(mod, c);
    std::vector<std::vector<GridPoint>> stop, check;
    for (int t = 0; t < 8; ++t) stop.push_back({mod.grid().random(rng)});
    for (int t = 0; t < 30; ++t) check.push_back({mod.grid().random(rng)});
    auto rep = iterate_correction(ctx, z, N, 16, stop, check);
    EXPECT_TRUE(rep.reached);
    EXPECT_GE(rep.residual_val, N);
}
