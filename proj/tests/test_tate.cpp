#include <gtest/gtest.h>

#include <random>

#include "hsprop/tate.hpp"

using namespace hsprop;

namespace {

LaurentElem random_laurent(std::mt19937_64& rng, Residue p, int prec, int lo, int hi) {
    LaurentElem x(p, prec);
    for (int e = lo; e < hi; ++e) x = x + LaurentElem::monomial(p, prec, e, Residue(rng() % p));
    return x;
}

// Schoolbook product of coefficient lists, truncated below `prec`.
std::map<int, Residue> naive_product(const LaurentElem& a, const LaurentElem& b, Residue p, int prec) {
    std::map<int, Residue> out;
    for (auto [i, x] : a.terms())
        for (auto [j, y] : b.terms())
            if (i + j < prec) out[i + j] = modular::add(out[i + j], modular::mul(x, y, p), p);
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

} // namespace

TEST(PadicInt, RingOperationsMatchIntegers) {
    std::mt19937_64 rng(6);
    for (Residue p : {2u, 3u, 5u}) {
        const unsigned L = 7;
        const long long m = (long long)modular::ipow(p, L);
        for (int t = 0; t < 200; ++t) {
            long long a = (long long)(rng() % 100000) - 50000, b = (long long)(rng() % 100000) - 50000;
            auto A = PadicInt::from_integer(p, L, a), B = PadicInt::from_integer(p, L, b);
            auto mod = [m](long long x) { return std::uint64_t(((x % m) + m) % m); };
            EXPECT_EQ((A + B).value(), mod(a + b));
            EXPECT_EQ((A - B).value(), mod(a - b));
            EXPECT_EQ((A * B).value(), mod(mod(a) * mod(b) % m));
            if (A.is_unit()) EXPECT_EQ((A * A.inverse()).value(), 1u);
        }
        EXPECT_EQ(PadicInt::from_integer(p, L, (long long)p * p * 7 % m).valuation(), 7 % p == 0 ? 3u : 2u);
    }
}

TEST(LaurentElem, ProductMatchesSchoolbook) {
    std::mt19937_64 rng(7);
    for (Residue p : {2u, 3u, 5u})
        for (int t = 0; t < 50; ++t) {
            const int prec = 12 + int(rng() % 10);
            auto a = random_laurent(rng, p, prec, -3, 8), b = random_laurent(rng, p, prec, 0, 10);
            auto c = a * b;
            auto expect = naive_product(a, b, p, c.prec());
            std::map<int, Residue> got;
            for (auto [e, v] : c.terms()) got[e] = v;
            EXPECT_EQ(got, expect);
        }
}

TEST(LaurentElem, InverseHasRelativePrecision) {
    std::mt19937_64 rng(8);
    for (Residue p : {2u, 3u, 7u})
        for (int t = 0; t < 40; ++t) {
            auto a = random_laurent(rng, p, 20, -2, 20);
            if (a.is_zero()) continue;
            auto prod = a * a.inverse();
            EXPECT_EQ(prod, LaurentElem::constant(p, prod.prec(), 1));
            EXPECT_EQ(a.inverse().valuation(), -a.valuation());
        }
    EXPECT_THROW(LaurentElem(3, 5).inverse(), PrecisionError);
}

TEST(LaurentElem, BinomialPowers) {
    for (Residue p : {2u, 3u, 5u}) {
        const int prec = 40;
        auto base = LaurentElem::constant(p, prec, 1) + LaurentElem::monomial(p, prec, 1);
        LaurentElem acc = LaurentElem::constant(p, prec, 1);
        for (int n = 0; n <= 30; ++n) {
            EXPECT_EQ(one_plus_pi_pow(p, n, prec), acc);
            acc = acc * base;
        }
        // (1+pi)^p = 1 + pi^p in characteristic p
        EXPECT_EQ(one_plus_pi_pow(p, p, prec), LaurentElem::constant(p, prec, 1) + LaurentElem::monomial(p, prec, int(p)));
        // exponent laws, negative exponents included
        for (long long a : {-7LL, -1LL, 3LL, 11LL})
            for (long long b : {-2LL, 5LL})
                EXPECT_EQ(one_plus_pi_pow(p, a + b, prec), one_plus_pi_pow(p, a, prec) * one_plus_pi_pow(p, b, prec));
    }
}

TEST(Substitution, IsARingHomomorphism) {
    std::mt19937_64 rng(9);
    for (Residue p : {2u, 3u}) {
        const int prec = 30;
        auto g = LaurentElem::monomial(p, prec, 1) + LaurentElem::monomial(p, prec, 2, 1);
        for (int t = 0; t < 20; ++t) {
            auto a = random_laurent(rng, p, prec, 0, 10), b = random_laurent(rng, p, prec, 0, 10);
            Substitution s(g);
            auto lhs = s.apply(a * b), rhs = s.apply(a) * s.apply(b);
            const int common = std::min(lhs.prec(), rhs.prec());
            EXPECT_EQ(lhs.truncated(common), rhs.truncated(common));
            EXPECT_EQ(s.apply(a + b), s.apply(a) + s.apply(b));
        }
        EXPECT_EQ(substitute(LaurentElem::monomial(p, prec, 1), g), g);
        EXPECT_THROW(Substitution(LaurentElem::constant(p, prec, 1)), SubstitutionError);
    }
}

TEST(TateElem, RingLawsAndFrobenius) {
    std::mt19937_64 rng(10);
    for (Residue p : {2u, 3u})
        for (int t = 0; t < 30; ++t) {
            auto x = random_tate(rng, p, 2, 16, 4, 5, 2), y = random_tate(rng, p, 2, 16, 4, 5, 2),
                 z = random_tate(rng, p, 2, 16, 4, 5, 2);
            EXPECT_EQ(x * (y + z), x * y + x * z);
            EXPECT_EQ((x * y) * z, x * (y * z));
            EXPECT_EQ(x * y, y * x);
            auto fx = x.frobenius(), fy = y.frobenius();
            EXPECT_EQ((x * y).frobenius(), fx * fy);
        }
}

TEST(TateElem, PrecisionIsTheMinimumOverCoefficients) {
    TateElem x(2, 1, 20, 2);
    x.set(Monomial{0}, LaurentElem::monomial(2, 20, 3));
    x.set(Monomial{1}, LaurentElem::monomial(2, 12, 5));
    EXPECT_EQ(x.prec(), 12);
    EXPECT_EQ(x.valuation(), 3);
}

TEST(Labels, CountAndOrder) {
    for (Residue p : {2u, 3u})
        for (unsigned d : {0u, 1u, 2u}) {
            auto ls = all_labels(p, d);
            EXPECT_EQ(ls.size(), modular::ipow(p, d + 1) - 1);
            EXPECT_TRUE(std::is_sorted(ls.begin(), ls.end()));
            for (const auto& l : ls) EXPECT_FALSE(is_zero_label(l));
        }
}

TEST(Decomposition, RoundTripAndValuation) {
    std::mt19937_64 rng(11);
    for (auto [p, d] : std::vector<std::pair<Residue, unsigned>>{{2, 0}, {2, 1}, {3, 1}, {2, 2}})
        for (int t = 0; t < 40; ++t) {
            const int N = 12;
            auto x = random_tate(rng, p, d, N * int(p), 2, 6, 2);
            auto dec = decompose(x, 2);
            EXPECT_EQ(recompose(dec, 2), x);
            const int vx = x.is_zero() ? N * int(p) : x.valuation();
            EXPECT_EQ(floor_div(vx, int(p)), std::min(dec.frac.valuation(), dec.r_part.valuation()));
        }
}
