#include <gtest/gtest.h>

#include <random>
#include <set>

#include "hsprop/linalg.hpp"

using namespace hsprop;

namespace {

FpMatrix random_fp(std::mt19937_64& rng, Residue p, std::size_t r, std::size_t c) {
    FpMatrix a(p, r, c);
    std::uniform_int_distribution<Residue> d(0, p - 1);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) a.set(i, j, d(rng));
    return a;
}

// log_p of the number of distinct vectors in the row space, by enumeration.
std::size_t brute_rank(const FpMatrix& a) {
    const Residue p = a.p();
    std::set<Vec> span;
    std::vector<Residue> coeff(a.rows(), 0);
    while (true) {
        Vec v(a.cols(), 0);
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                v[j] = modular::add(v[j], modular::mul(coeff[i], a.at(i, j), p), p);
        span.insert(v);
        std::size_t i = 0;
        while (i < coeff.size() && ++coeff[i] == p) coeff[i++] = 0;
        if (i == coeff.size()) break;
    }
    std::size_t r = 0;
    for (std::size_t n = span.size(); n > 1; n /= p) ++r;
    return r;
}

} // namespace

TEST(Modular, InverseAndPow) {
    for (Residue p : {2u, 3u, 5u, 7u, 101u})
        for (Residue a = 1; a < p; ++a) {
            EXPECT_EQ(modular::mul(a, modular::inverse(a, p), p), 1u);
            EXPECT_EQ(modular::pow(a, p - 1, p), 1u);
        }
    EXPECT_EQ(modular::reduce(-1, 9), 8u);
    EXPECT_EQ(modular::valuation(12, 2, 5), 2);
    EXPECT_EQ(modular::valuation(0, 3, 4), 4);
}

TEST(FpMatrix, RankMatchesEnumeration) {
    std::mt19937_64 rng(1);
    for (Residue p : {2u, 3u, 5u})
        for (int t = 0; t < 40; ++t) {
            const std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
            auto a = random_fp(rng, p, r, c);
            const auto expect = brute_rank(a);
            EXPECT_EQ(rank(a), expect);
            EXPECT_EQ(rank_dense(a), expect);
        }
}

TEST(FpMatrix, KernelAndSolve) {
    std::mt19937_64 rng(2);
    for (Residue p : {2u, 3u, 7u})
        for (int t = 0; t < 50; ++t) {
            const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 8;
            auto a = random_fp(rng, p, r, c);
            auto ker = kernel_basis(a);
            EXPECT_EQ(ker.size() + rank(a), c);
            for (const auto& v : ker)
                for (Residue x : a.apply(v)) EXPECT_EQ(x, 0u);
            Vec x0(c);
            for (auto& x : x0) x = Residue(rng() % p);
            Vec b = a.apply(x0);
            auto sol = solve(a, b);
            ASSERT_TRUE(sol.has_value());
            EXPECT_EQ(a.apply(*sol), b);
        }
}

TEST(FpMatrix, InconsistentSystem) {
    FpMatrix a(3, 2, 1);
    a.set(0, 0, 1);
    a.set(1, 0, 1);
    Vec b{0, 1};
    EXPECT_FALSE(solve(a, b).has_value());
}

TEST(EchelonAccumulator, StreamingAgreesWithDense) {
    std::mt19937_64 rng(3);
    for (Residue p : {2u, 3u, 5u})
        for (int t = 0; t < 60; ++t) {
            const std::size_t r = 1 + rng() % 30, c = 1 + rng() % 140;
            auto a = random_fp(rng, p, r, c);
            EchelonAccumulator acc(p, c);
            std::size_t independent = 0;
            for (std::size_t i = 0; i < r; ++i) independent += acc.absorb(a.row(i));
            EXPECT_EQ(acc.rank(), rank_dense(a));
            EXPECT_EQ(independent, acc.rank());
            for (std::size_t i = 0; i < acc.rank(); ++i) EXPECT_EQ(acc.basis_row(i)[acc.pivot_columns()[i]], 1u);
        }
}

TEST(EchelonAccumulator, RejectsWrongWidth) {
    EchelonAccumulator acc(3, 4);
    Vec row{1, 2};
    EXPECT_THROW(acc.absorb(row), DimensionError);
}

TEST(Smith, ImageSizeMatchesExponents) {
    // |image of A| = prod over slots p^{k - e_i}, counted by enumerating A x.
    std::mt19937_64 rng(4);
    for (auto [p, k] : std::vector<std::pair<Residue, int>>{{2, 2}, {2, 3}, {3, 2}})
        for (int t = 0; t < 30; ++t) {
            const std::size_t r = 1 + rng() % 3, c = 1 + rng() % 3;
            ZpkMatrix a(p, k, r, c);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < c; ++j) a.set(i, j, (long long)(rng() % a.modulus()));
            auto s = smith(a);
            std::uint64_t predicted = 1;
            for (int e : s.exponents) predicted *= modular::ipow(p, unsigned(k - e));
            std::set<Vec> image;
            Vec x(c, 0);
            while (true) {
                Vec y(r, 0);
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < c; ++j)
                        y[i] = Residue((y[i] + std::uint64_t(a(i, j)) * x[j]) % a.modulus());
                image.insert(y);
                std::size_t j = 0;
                while (j < c && ++x[j] == a.modulus()) x[j++] = 0;
                if (j == c) break;
            }
            EXPECT_EQ(image.size(), predicted);
        }
}

TEST(Smith, ColumnInverseRecoversDiagonalForm) {
    ZpkMatrix a(2, 3, 2, 2);
    a.set(0, 0, 2);
    a.set(0, 1, 4);
    a.set(1, 0, 6);
    a.set(1, 1, 1);
    auto s = smith(a, true);
    ASSERT_TRUE(s.col_inverse.has_value());
    EXPECT_EQ(s.exponents, (std::vector<int>{0, 1}));
}
