#pragma once

// The action of Gamma = Z_p^x |x Z_p^d on F = F_p((pi)), R = F{t_1..t_d}
// and phi^{-1}(R)/R: (u, a) sends pi to (1+pi)^u - 1 and t_j to
// (1+pi)^{a_j} t_j.  Group law (u, a)(u', a') = (u u', a + u a').

#include <algorithm>
#include <climits>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hsprop/tate.hpp"

namespace hsprop {

inline constexpr int kInfiniteGain = INT_MAX / 4;

struct GammaElem {
    PadicInt u;
    std::vector<PadicInt> a;

    Residue p() const { return u.p(); }
    unsigned level() const { return u.level(); }
    unsigned d() const { return unsigned(a.size()); }

    static GammaElem identity(Residue p, unsigned d, unsigned L) {
        return {PadicInt(p, L, 1), std::vector<PadicInt>(d, PadicInt(p, L, 0))};
    }
    static GammaElem cyclotomic(Residue p, unsigned d, unsigned L, long long u) {
        GammaElem g = identity(p, d, L);
        g.u = PadicInt::from_integer(p, L, u);
        if (!g.u.is_unit()) throw PreconditionError("cyclotomic component must be a p-adic unit");
        return g;
    }
    static GammaElem translation(Residue p, unsigned d, unsigned L, unsigned j, long long a) {
        if (j >= d) throw DimensionError("translation index out of range");
        GammaElem g = identity(p, d, L);
        g.a[j] = PadicInt::from_integer(p, L, a);
        return g;
    }

    friend GammaElem operator*(const GammaElem& x, const GammaElem& y) {
        if (x.d() != y.d()) throw ParameterMismatch("GammaElem: different d");
        GammaElem z{x.u * y.u, x.a};
        for (unsigned j = 0; j < x.d(); ++j) z.a[j] = x.a[j] + x.u * y.a[j];
        return z;
    }
    GammaElem inverse() const {
        GammaElem z{u.inverse(), a};
        for (unsigned j = 0; j < d(); ++j) z.a[j] = PadicInt(p(), level(), 0) - z.u * a[j];
        return z;
    }
    GammaElem pow(std::uint64_t n) const {
        GammaElem r = identity(p(), d(), level()), b = *this;
        for (; n; n >>= 1, b = b * b)
            if (n & 1) r = r * b;
        return r;
    }
    friend bool operator==(const GammaElem&, const GammaElem&) = default;

    /// Membership in Gamma_0 = (1 + p^2 Z_p) |x p Z_p^d.
    bool in_gamma0() const {
        if ((u - PadicInt(p(), level(), 1)).valuation() < 2) return false;
        return std::all_of(a.begin(), a.end(), [](const PadicInt& x) { return x.valuation() >= 1; });
    }

    std::string to_string() const {
        std::string s = "(u=" + std::to_string(u.value()) + ", a=[";
        for (unsigned j = 0; j < d(); ++j) s += (j ? "," : "") + std::to_string(a[j].value());
        return s + "])";
    }
};

/// p-adic level for group elements acting on series of precision up to n,
/// with room for the precision lifts of gamma - 1 and the label twists.
inline unsigned gamma_level(Residue p, int n) { return PadicInt::level_for(p, 4LL * std::max(n, 1)) + 2; }

/// Largest series precision at which the action of g is determined.
inline int series_limit(const GammaElem& g) {
    std::uint64_t q = 1;
    for (unsigned i = 0; i < g.level() && q < (1u << 30); ++i) q *= g.p();
    return int(std::min<std::uint64_t>(q, 1u << 30));
}

/// Topological generators of Gamma_n: 1 + p^{2+n} and p^{n+1} e_j.
inline std::vector<GammaElem> level_generators(Residue p, unsigned d, unsigned L, unsigned n) {
    std::vector<GammaElem> g;
    g.push_back(GammaElem::cyclotomic(p, d, L, 1 + (long long)modular::ipow(p, 2 + n)));
    for (unsigned j = 0; j < d; ++j) g.push_back(GammaElem::translation(p, d, L, j, (long long)modular::ipow(p, n + 1)));
    return g;
}

/// Certified lower bound on val((gamma-1)x) - val(x) for x in R.
inline int ratio_gain_bound(const GammaElem& g) {
    auto pw = [&](unsigned v) -> long long {
        if (v >= g.level()) return kInfiniteGain;
        long long r = 1;
        for (unsigned i = 0; i < v && r < kInfiniteGain; ++i) r *= g.p();
        return std::min<long long>(r, kInfiniteGain);
    };
    long long best = kInfiniteGain;
    unsigned vu = (g.u - PadicInt(g.p(), g.level(), 1)).valuation();
    if (vu < g.level()) best = std::min(best, pw(vu) - 1);
    for (const auto& a : g.a)
        if (a.valuation() < g.level()) best = std::min(best, pw(a.valuation()));
    return int(best);
}

// ---------------------------------------------------------------------------
// Actions

inline LaurentElem act(const GammaElem& g, const LaurentElem& x) {
    if (x.p() != g.p()) throw ParameterMismatch("act: characteristic mismatch");
    if (x.is_zero()) return x;
    const int prec = std::max(x.prec(), 1);
    LaurentElem target = one_plus_pi_pow(g.u, prec) - LaurentElem::constant(g.p(), prec, 1);
    return Substitution(target).apply(x);
}

inline TateElem act(const GammaElem& g, const TateElem& x) {
    if (x.p() != g.p() || x.d() != g.d()) throw ParameterMismatch("act: parameter mismatch");
    const Residue p = g.p();
    const int prec = std::max(x.prec(), 1);
    Substitution sub(one_plus_pi_pow(g.u, prec) - LaurentElem::constant(p, prec, 1));
    TateElem out(p, x.d(), x.prec(), x.degree_cap());
    for (const auto& [m, c] : x.terms()) {
        LaurentElem v = sub.apply(c);
        PadicInt shift(p, g.level(), 0);
        for (unsigned j = 0; j < x.d(); ++j)
            shift = shift + g.a[j] * PadicInt::from_integer(p, g.level(), m[j]);
        if (shift.value() != 0) v = v * one_plus_pi_pow(shift, prec);
        out.set(m, out.coefficient(m) + v);
    }
    return out.truncated(std::min(out.prec(), x.prec()));
}

/// Twist exponent mu = p u' e_0 + sum_j a'_j e_j for gamma = (1 + p^2 u', p a')
/// in Gamma_0: gamma((1+pi)^{e0/p} t^{e/p}) = (1+pi)^mu (1+pi)^{e0/p} t^{e/p}.
/// The result is reduced to level L-2, where it is determined.
inline PadicInt label_twist(const GammaElem& g, const Label& e) {
    if (!g.in_gamma0()) throw UnsupportedError("label action is only defined for gamma in Gamma_0");
    if (e.size() != g.d() + 1) throw DimensionError("label length does not match d + 1");
    const Residue p = g.p();
    const unsigned L = g.level();
    if (L < 3) throw PrecisionError("label_twist: p-adic level too small");
    PadicInt up = (g.u - PadicInt(p, L, 1)).divide_by_p_power(2);
    PadicInt mu = PadicInt(p, L, p) * up * PadicInt::from_integer(p, L, e[0]);
    for (unsigned j = 0; j < g.d(); ++j)
        mu = mu + g.a[j].divide_by_p_power(1) * PadicInt::from_integer(p, L, e[j + 1]);
    return PadicInt(p, L - 2, mu.value());
}

inline FracElem act(const GammaElem& g, const FracElem& x) {
    FracElem out(x.p(), x.d(), x.prec(), x.degree_cap());
    for (const auto& [l, r] : x.components()) {
        LaurentElem lambda = one_plus_pi_pow(label_twist(g, l), std::max(r.prec(), 1));
        out.set(l, act(g, r).scaled(lambda).truncated(r.prec()));
    }
    return out;
}

/// (gamma-1)x.  The stored terms of x are regarded as exact and the result
/// carries precision prec(x) + ratio_gain_bound(gamma), which is where the
/// image of the unknown tail begins.
inline TateElem gamma_minus_one(const GammaElem& g, const TateElem& x) {
    const int prec = (int)std::max<long long>(x.prec(), std::min<long long>((long long)x.prec() + ratio_gain_bound(g), series_limit(g)));
    TateElem xe = x.with_precision(prec);
    return act(g, xe) - xe;
}

inline LaurentElem gamma_minus_one(const GammaElem& g, const LaurentElem& x) {
    const int prec = (int)std::max<long long>(x.prec(), std::min<long long>((long long)x.prec() + ratio_gain_bound(g), series_limit(g)));
    LaurentElem xe = x.with_precision(prec);
    return act(g, xe) - xe;
}

inline FracElem gamma_minus_one(const GammaElem& g, const FracElem& x) { return act(g, x) - x; }

// ---------------------------------------------------------------------------
// Group law and Leibniz rule

struct CheckResult {
    bool ok = true;
    std::string counterexample;
};

template <class Rng>
GammaElem random_gamma(Rng& rng, Residue p, unsigned d, unsigned L, bool gamma0 = false) {
    std::uniform_int_distribution<std::uint64_t> dist(0, modular::ipow(p, L) - 1);
    GammaElem g = GammaElem::identity(p, d, L);
    if (gamma0) {
        g.u = PadicInt(p, L, 1) + PadicInt(p, L, p * p) * PadicInt(p, L, dist(rng));
        for (auto& a : g.a) a = PadicInt(p, L, p) * PadicInt(p, L, dist(rng));
        return g;
    }
    do g.u = PadicInt(p, L, dist(rng));
    while (!g.u.is_unit());
    for (auto& a : g.a) a = PadicInt(p, L, dist(rng));
    return g;
}

/// act(g1) o act(g2) = act(g1 g2) on random series for `trials` random pairs.
inline CheckResult law_check(Residue p, unsigned d, int prec, int trials = 100, std::uint64_t seed = 0) {
    std::mt19937_64 rng(seed);
    const unsigned L = gamma_level(p, prec);
    const int D = 4;
    for (int t = 0; t < trials; ++t) {
        GammaElem g1 = random_gamma(rng, p, d, L), g2 = random_gamma(rng, p, d, L);
        TateElem x = random_tate(rng, p, d, prec, D, 6, D);
        TateElem lhs = act(g1, act(g2, x)), rhs = act(g1 * g2, x);
        if (!(lhs == rhs)) return {false, "g1=" + g1.to_string() + " g2=" + g2.to_string() + " x=" + x.to_string()};
    }
    return {};
}

/// (g-1)(xy) = (g-1)(x) y + g(x) (g-1)(y).
inline bool leibniz_check(const GammaElem& g, const TateElem& x, const TateElem& y) {
    TateElem lhs = act(g, x * y) - x * y;
    TateElem rhs = (act(g, x) - x) * y + act(g, x) * (act(g, y) - y);
    return lhs == rhs;
}

// ---------------------------------------------------------------------------
// Gain certificates

struct GainEntry {
    std::string basis;
    int val_x;
    int val_image;  // valuation of (gamma-1)x
    bool measured;  // false when the image vanishes at the working precision
};

/// Two readings of the valuation gain of gamma-1 on a basis:
///   ratio_gain   = min over basis x of val((gamma-1)x) - val(x),
///   lattice_gain = min over integral basis x of val((gamma-1)x),
/// the second being the gain on the unit ball.  Unmeasured entries are skipped;
/// if nothing is measured both gains are reported as the precision.
struct GainCertificate {
    unsigned level = 0;
    int precision = 0;
    int ratio_gain = 0;
    int lattice_gain = 0;
    std::string ratio_witness, lattice_witness;
    std::vector<GainEntry> entries;

    bool ratio_exact_on(const std::string& b) const {
        for (const auto& e : entries)
            if (e.basis == b) return e.measured && e.val_image - e.val_x == ratio_gain;
        return false;
    }
    bool lattice_exact_on(const std::string& b) const {
        for (const auto& e : entries)
            if (e.basis == b) return e.measured && e.val_image == lattice_gain;
        return false;
    }
};

struct BasisVector {
    std::string name;
    FracElem frac;        // used when label-valued
    TateElem plain;       // used otherwise
    bool is_frac = false;
};

inline GainCertificate gain_certificate(const std::vector<GammaElem>& gens, const std::vector<BasisVector>& basis,
                                        unsigned level, int precision) {
    GainCertificate cert;
    cert.level = level;
    cert.precision = precision;
    cert.ratio_gain = cert.lattice_gain = precision;
    for (const auto& g : gens)
        for (const auto& b : basis) {
            GainEntry e{b.name, 0, 0, false};
            if (b.is_frac) {
                e.val_x = b.frac.valuation();
                FracElem img = gamma_minus_one(g, b.frac);
                e.measured = !img.is_zero();
                e.val_image = img.valuation();
            } else {
                e.val_x = b.plain.valuation();
                TateElem img = gamma_minus_one(g, b.plain).truncated(precision);
                e.measured = !img.is_zero();
                e.val_image = img.valuation();
            }
            if (e.measured) {
                if (e.val_image - e.val_x < cert.ratio_gain) {
                    cert.ratio_gain = e.val_image - e.val_x;
                    cert.ratio_witness = b.name;
                }
                if (e.val_x >= 0 && e.val_image < cert.lattice_gain) {
                    cert.lattice_gain = e.val_image;
                    cert.lattice_witness = b.name;
                }
            }
            cert.entries.push_back(std::move(e));
        }
    return cert;
}

/// Monomials pi^i t^m (0 <= i <= max_pi, deg m <= max_deg) of R at precision.
inline std::vector<BasisVector> monomial_basis(Residue p, unsigned d, int prec, int degree_cap, int max_pi,
                                               int max_deg) {
    std::vector<BasisVector> out;
    std::vector<Monomial> monos;
    Monomial m(d, 0);
    std::function<void(unsigned, int)> rec = [&](unsigned j, int left) {
        if (j == d) {
            monos.push_back(m);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            m[j] = k;
            rec(j + 1, left - k);
        }
        m[j] = 0;
    };
    rec(0, max_deg);
    for (const auto& mono : monos)
        for (int i = 0; i <= max_pi; ++i) {
            TateElem x(p, d, prec, degree_cap);
            x.set(mono, LaurentElem::monomial(p, prec, i));
            std::string name = "pi^" + std::to_string(i);
            for (unsigned j = 0; j < d; ++j)
                if (mono[j]) name += "*t" + std::to_string(j + 1) + "^" + std::to_string(mono[j]);
            out.push_back({name, FracElem(p, d, prec, degree_cap), std::move(x), false});
        }
    return out;
}

/// The same monomials placed in the summand of label e.
inline std::vector<BasisVector> label_basis(const Label& e, Residue p, unsigned d, int prec, int degree_cap,
                                            int max_pi, int max_deg) {
    auto plain = monomial_basis(p, d, prec, degree_cap, max_pi, max_deg);
    std::string tag = "y[";
    for (std::size_t i = 0; i < e.size(); ++i) tag += (i ? "," : "") + std::to_string(e[i]);
    tag += "]*";
    for (auto& b : plain) {
        b.frac.set(e, b.plain);
        b.name = tag + b.name;
        b.is_frac = true;
    }
    return plain;
}

// ---------------------------------------------------------------------------
// Inverting gamma - 1 on the summand y R

struct InverseResult {
    TateElem x;
    int iterations = 0;
    int g_y = 0, g_R = 0;
};

/// Solves (gamma-1)(y x) = y w modulo pi^target, y = (1+pi)^{e0/p} t^{e/p}.
/// With lambda = (1+pi)^mu and delta = lambda - 1 this is
/// delta x + lambda (gamma-1) x = w, iterated as x <- delta^{-1}(w - lambda (gamma-1) x).
inline InverseResult invert_gamma_minus_one(const GammaElem& g, const Label& e, const TateElem& w, int target) {
    const Residue p = g.p();
    const unsigned d = g.d();
    InverseResult res{TateElem(p, d, target, w.degree_cap())};
    res.g_R = ratio_gain_bound(g);
    const int work = std::min(2 * target + 8, series_limit(g) / int(p * p));
    LaurentElem lambda = one_plus_pi_pow(label_twist(g, e), work);
    LaurentElem delta = lambda - LaurentElem::constant(p, work, 1);
    if (delta.is_zero()) throw PrecisionError("invert_gamma_minus_one: delta vanishes at working precision");
    res.g_y = delta.valuation();
    if (res.g_R <= res.g_y)
        throw NoContractionError("invert_gamma_minus_one: gain on R (" + std::to_string(res.g_R) +
                                 ") does not exceed val(delta) (" + std::to_string(res.g_y) + ")");
    LaurentElem delta_inv = delta.inverse();

    TateElem rhs = w.with_precision(target);
    TateElem x(p, d, target - res.g_y, w.degree_cap());
    const int step = res.g_R - res.g_y;
    const int bound = (target - rhs.valuation() + res.g_y + step - 1) / step + 1;
    for (int it = 0; it <= bound; ++it) {
        TateElem r = (rhs - x.scaled(delta) - gamma_minus_one(g, x).scaled(lambda)).truncated(target);
        if (r.is_zero()) {
            res.x = x;
            res.iterations = it;
            return res;
        }
        x = (x + r.scaled(delta_inv)).truncated(target - res.g_y);
    }
    throw PrecisionError("invert_gamma_minus_one: no convergence within the iteration bound");
}

/// val((1+pi)^mu - 1) for the twist of label e, kInfiniteGain when mu = 0.
inline int label_delta_valuation(const GammaElem& g, const Label& e, int prec) {
    PadicInt mu = label_twist(g, e);
    if (mu.value() == 0) return kInfiniteGain;
    LaurentElem delta = one_plus_pi_pow(mu, prec) - LaurentElem::constant(g.p(), prec, 1);
    return delta.is_zero() ? prec : delta.valuation();
}

/// (gamma-1)(y x) as the single label component.  The stored terms of x are
/// regarded as exact; the result is valid to prec(x) + val(delta), capped by
/// the ratio gain on R.
inline TateElem apply_on_label(const GammaElem& g, const Label& e, const TateElem& x) {
    const int limit = series_limit(g) / int(g.p() * g.p());
    const int lift = std::min(label_delta_valuation(g, e, limit), ratio_gain_bound(g));
    const int prec = (int)std::max<long long>(x.prec(), std::min<long long>((long long)x.prec() + lift, limit));
    FracElem f(x.p(), x.d(), prec, x.degree_cap());
    f.set(e, x.with_precision(prec));
    return gamma_minus_one(g, f).component(e).truncated(prec);
}

// ---------------------------------------------------------------------------
// Procyclic vanishing

enum class Vanishing { Vanishing, H0Nonzero, Inconclusive };

inline const char* to_string(Vanishing v) {
    switch (v) {
    case Vanishing::Vanishing: return "vanishing";
    case Vanishing::H0Nonzero: return "H0_nonzero";
    case Vanishing::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct VanishingReport {
    Vanishing verdict = Vanishing::Inconclusive;
    int precision = 0;
    bool injective = false;
    bool surjective = false;
    std::string detail;
};

/// Procyclic group generated by eta acting on the summand of label e (or on R
/// itself when e is the zero label).  Injectivity: (eta-1) raises valuation by
/// exactly val(delta) on every sampled monomial.  Surjectivity: the solver
/// reaches residual >= precision on every sampled monomial.
inline VanishingReport procyclic_vanishing(const GammaElem& eta, const Label& e, int precision, int max_deg = 1) {
    const Residue p = eta.p();
    const unsigned d = eta.d();
    VanishingReport rep;
    rep.precision = precision;
    const int D = std::max(max_deg, 1);
    auto basis = monomial_basis(p, d, precision, D, 2, max_deg);
    if (is_zero_label(e)) {
        for (const auto& b : basis) {
            TateElem img = gamma_minus_one(eta, b.plain).truncated(precision);
            if (img.is_zero()) {
                rep.verdict = Vanishing::H0Nonzero;
                rep.detail = "fixed element " + b.name;
                return rep;
            }
        }
        rep.detail = "untwisted summand: no bounded inverse available";
        return rep;
    }
    int g_y;
    try {
        g_y = label_delta_valuation(eta, e, precision);
    } catch (const Error& err) {
        rep.detail = err.what();
        return rep;
    }
    rep.injective = true;
    for (const auto& b : basis) {
        TateElem img = apply_on_label(eta, e, b.plain);
        if (img.is_zero()) {
            rep.injective = false;
            rep.verdict = Vanishing::H0Nonzero;
            rep.detail = "fixed element y*" + b.name;
            return rep;
        }
        if (img.valuation() != b.plain.valuation() + g_y) rep.injective = false;
    }
    rep.surjective = true;
    for (const auto& b : basis) {
        try {
            auto inv = invert_gamma_minus_one(eta, e, b.plain, precision);
            TateElem resid = (apply_on_label(eta, e, inv.x) - b.plain.with_precision(precision)).truncated(precision);
            if (!resid.is_zero()) rep.surjective = false;
        } catch (const Error& err) {
            rep.surjective = false;
            rep.detail = err.what();
        }
    }
    rep.verdict = (rep.injective && rep.surjective) ? Vanishing::Vanishing : Vanishing::Inconclusive;
    if (rep.verdict == Vanishing::Vanishing) rep.detail = "H0 = H1 = 0 at precision " + std::to_string(precision);
    return rep;
}

/// (eta^{p^n} - 1)x and (eta - 1)^{p^n} x, for the operator identity in characteristic p.
inline std::pair<TateElem, TateElem> frobenius_power_pair(const GammaElem& eta, const TateElem& x, unsigned n) {
    const std::uint64_t q = modular::ipow(eta.p(), n);
    TateElem lhs = act(eta.pow(q), x) - x;
    TateElem rhs = x;
    for (std::uint64_t i = 0; i < q; ++i) rhs = act(eta, rhs) - rhs;
    const int prec = std::min(lhs.prec(), rhs.prec());
    return {lhs.truncated(prec), rhs.truncated(prec)};
}

} // namespace hsprop
