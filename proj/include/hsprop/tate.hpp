#pragma once

// Truncated series over F_p: Laurent series in pi with absolute precision,
// Tate series in t_1..t_d with a total-degree cap, p-adic integers as digit
// strings, and the label decomposition of phi^{-1}(R)/R.
//
// Elements of phi^{-1}(R) are stored as Tate series in the p-th root
// variables s = pi^{1/p}, u_j = t_j^{1/p}; the same TateElem type carries
// both, only the interpretation of the variables differs.

#include <algorithm>
#include <climits>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hsprop/errors.hpp"
#include "hsprop/linalg.hpp"

namespace hsprop {

// ---------------------------------------------------------------------------
// p-adic integers mod p^L

class PadicInt {
public:
    PadicInt() = default;
    PadicInt(Residue p, unsigned L, std::uint64_t value) : p_(p), L_(L), mod_(modular::ipow(p, L)) {
        if (!modular::is_prime(p)) throw PreconditionError("PadicInt: modulus base is not prime");
        if (L == 0 || mod_ > (std::uint64_t(1) << 62)) throw PrecisionError("PadicInt: level out of range");
        v_ = value % mod_;
    }

    static PadicInt from_integer(Residue p, unsigned L, long long x) {
        PadicInt a(p, L, 0);
        long long m = (long long)(a.mod_);
        long long r = x % m;
        a.v_ = std::uint64_t(r < 0 ? r + m : r);
        return a;
    }

    /// Smallest level with p^L >= n, plus the two guard digits series actions need.
    static unsigned level_for(Residue p, long long n) {
        unsigned L = 0;
        for (std::uint64_t q = 1; (long long)q < n; q *= p) ++L;
        return L + 2;
    }

    Residue p() const { return p_; }
    unsigned level() const { return L_; }
    std::uint64_t value() const { return v_; }
    std::uint64_t modulus() const { return mod_; }

    std::vector<Residue> digits() const {
        std::vector<Residue> d(L_);
        std::uint64_t x = v_;
        for (unsigned i = 0; i < L_; ++i, x /= p_) d[i] = Residue(x % p_);
        return d;
    }
    Residue digit(unsigned i) const { return digits().at(i); }

    /// p-adic valuation, L for zero.
    unsigned valuation() const {
        if (v_ == 0) return L_;
        unsigned k = 0;
        for (std::uint64_t x = v_; x % p_ == 0; x /= p_) ++k;
        return k;
    }
    bool is_unit() const { return v_ % p_ != 0; }

    PadicInt inverse() const {
        if (!is_unit()) throw PreconditionError("PadicInt: inverse of a non-unit");
        __int128 a = v_, m = mod_, x0 = 1, x1 = 0;
        while (m) {
            __int128 q = a / m, t = a - q * m;
            a = m, m = t;
            t = x0 - q * x1, x0 = x1, x1 = t;
        }
        __int128 r = x0 % (__int128)mod_;
        if (r < 0) r += mod_;
        return PadicInt(p_, L_, std::uint64_t(r));
    }

    /// Exact quotient by p^k; the value must be divisible.
    PadicInt divide_by_p_power(unsigned k) const {
        std::uint64_t pk = modular::ipow(p_, k);
        if (v_ % pk != 0) throw PreconditionError("PadicInt: not divisible by p^k");
        return PadicInt(p_, L_, v_ / pk);
    }

    friend PadicInt operator+(const PadicInt& a, const PadicInt& b) {
        a.check(b);
        return PadicInt(a.p_, a.L_, (a.v_ + b.v_) % a.mod_);
    }
    friend PadicInt operator-(const PadicInt& a, const PadicInt& b) {
        a.check(b);
        return PadicInt(a.p_, a.L_, (a.v_ + a.mod_ - b.v_) % a.mod_);
    }
    friend PadicInt operator*(const PadicInt& a, const PadicInt& b) {
        a.check(b);
        return PadicInt(a.p_, a.L_, std::uint64_t((unsigned __int128)a.v_ * b.v_ % a.mod_));
    }
    friend bool operator==(const PadicInt& a, const PadicInt& b) {
        return a.p_ == b.p_ && a.L_ == b.L_ && a.v_ == b.v_;
    }

private:
    void check(const PadicInt& b) const {
        if (p_ != b.p_ || L_ != b.L_) throw ParameterMismatch("PadicInt: mismatched p or level");
    }

    Residue p_ = 2;
    unsigned L_ = 1;
    std::uint64_t mod_ = 2, v_ = 0;
};

// ---------------------------------------------------------------------------
// Laurent series in pi over F_p, known modulo pi^prec

class LaurentElem {
public:
    LaurentElem() = default;
    LaurentElem(Residue p, int prec) : p_(p), prec_(prec), lo_(prec) {
        if (!modular::is_prime(p)) throw PreconditionError("LaurentElem: p is not prime");
    }

    static LaurentElem monomial(Residue p, int prec, int e, Residue c = 1) {
        LaurentElem x(p, prec);
        x.set(e, c);
        return x;
    }
    static LaurentElem constant(Residue p, int prec, Residue c) { return monomial(p, prec, 0, c); }
    static LaurentElem from_coeffs(Residue p, int prec, int lo, std::span<const Residue> c) {
        LaurentElem x(p, prec);
        for (std::size_t i = 0; i < c.size(); ++i) x.set(lo + int(i), c[i]);
        return x;
    }

    Residue p() const { return p_; }
    int prec() const { return prec_; }
    bool is_zero() const { return c_.empty(); }
    /// Least exponent with nonzero coefficient, or prec when zero ("at least prec").
    int valuation() const { return c_.empty() ? prec_ : lo_; }
    /// Exponent just above the last stored nonzero coefficient.
    int degree_bound() const { return lo_ + int(c_.size()); }

    Residue coeff(int e) const {
        if (e < lo_ || e >= lo_ + int(c_.size())) return 0;
        return c_[e - lo_];
    }
    void set(int e, Residue c) {
        if (e >= prec_) return;
        c %= p_;
        if (c == 0) {
            if (e >= lo_ && e < lo_ + int(c_.size())) {
                c_[e - lo_] = 0;
                normalize();
            }
            return;
        }
        if (c_.empty()) {
            lo_ = e;
            c_.assign(1, c);
            return;
        }
        if (e < lo_) {
            c_.insert(c_.begin(), std::size_t(lo_ - e), 0);
            lo_ = e;
        }
        if (e >= lo_ + int(c_.size())) c_.resize(std::size_t(e - lo_ + 1), 0);
        c_[e - lo_] = c;
    }

    /// Nonzero terms (exponent, coefficient) in increasing exponent order.
    std::vector<std::pair<int, Residue>> terms() const {
        std::vector<std::pair<int, Residue>> t;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i]) t.emplace_back(lo_ + int(i), c_[i]);
        return t;
    }

    LaurentElem truncated(int prec) const {
        LaurentElem x(p_, std::min(prec, prec_));
        for (auto [e, c] : terms()) x.set(e, c);
        return x;
    }
    /// Multiplication by pi^k.
    LaurentElem shifted(int k) const {
        LaurentElem x = *this;
        x.prec_ += k;
        x.lo_ += k;
        if (x.c_.empty()) x.lo_ = x.prec_;
        return x;
    }
    /// Same stored coefficients, now regarded as exact below `prec`.
    LaurentElem with_precision(int prec) const {
        LaurentElem x(p_, prec);
        for (auto [e, c] : terms()) x.set(e, c);
        return x;
    }
    LaurentElem scaled(Residue a) const {
        LaurentElem x(p_, prec_);
        for (auto [e, c] : terms()) x.set(e, modular::mul(c, a % p_, p_));
        return x;
    }

    friend LaurentElem operator+(const LaurentElem& a, const LaurentElem& b) { return combine(a, b, false); }
    friend LaurentElem operator-(const LaurentElem& a, const LaurentElem& b) { return combine(a, b, true); }
    LaurentElem operator-() const { return LaurentElem(p_, prec_) - *this; }

    friend LaurentElem operator*(const LaurentElem& a, const LaurentElem& b) {
        a.check(b);
        const Residue p = a.p_;
        int prec = std::min(a.prec_ + b.valuation(), b.prec_ + a.valuation());
        prec = std::min(prec, std::max(a.prec_, b.prec_));
        LaurentElem out(p, prec);
        if (a.is_zero() || b.is_zero()) return out;
        const int lo = a.lo_ + b.lo_;
        if (lo >= prec) return out;
        const std::size_t n = std::size_t(prec - lo);
        Vec acc(n, 0);
        for (std::size_t i = 0; i < a.c_.size() && i < n; ++i) {
            if (!a.c_[i]) continue;
            const Residue ai = a.c_[i];
            const std::size_t lim = std::min(b.c_.size(), n - i);
            for (std::size_t j = 0; j < lim; ++j)
                if (b.c_[j]) acc[i + j] = Residue((acc[i + j] + std::uint64_t(ai) * b.c_[j]) % p);
        }
        out.lo_ = lo;
        out.c_ = std::move(acc);
        out.normalize();
        return out;
    }

    /// Multiplicative inverse; relative precision is preserved.
    LaurentElem inverse() const {
        if (is_zero()) throw PrecisionError("LaurentElem: inverse of an element that is zero at this precision");
        const int v = lo_, rel = prec_ - v;
        // unit part u = sum c_i pi^i, invert by recurrence
        Vec inv(std::size_t(rel), 0);
        const Residue c0inv = modular::inverse(c_[0], p_);
        inv[0] = c0inv;
        for (int n = 1; n < rel; ++n) {
            std::uint64_t s = 0;
            for (int i = 1; i <= n && i < int(c_.size()); ++i) s += std::uint64_t(c_[i]) * inv[n - i] % p_;
            inv[n] = modular::mul(modular::neg(Residue(s % p_), p_), c0inv, p_);
        }
        LaurentElem out(p_, rel - v);
        for (int i = 0; i < rel; ++i) out.set(i - v, inv[i]);
        return out;
    }

    /// Equality of all coefficients below the smaller of the two precisions.
    friend bool operator==(const LaurentElem& a, const LaurentElem& b) {
        if (a.p_ != b.p_) return false;
        return (a - b).is_zero();
    }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (auto [e, c] : terms()) {
            if (!first) os << " + ";
            first = false;
            os << c << "*pi^" << e;
        }
        if (first) os << "0";
        os << " + O(pi^" << prec_ << ")";
        return os.str();
    }

private:
    void check(const LaurentElem& b) const {
        if (p_ != b.p_) throw ParameterMismatch("LaurentElem: different characteristics");
    }
    void normalize() {
        std::size_t first = 0;
        while (first < c_.size() && c_[first] == 0) ++first;
        if (first == c_.size()) {
            c_.clear();
            lo_ = prec_;
            return;
        }
        c_.erase(c_.begin(), c_.begin() + long(first));
        lo_ += int(first);
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
        if (lo_ + int(c_.size()) > prec_) c_.resize(std::size_t(std::max(0, prec_ - lo_)));
        if (c_.empty()) lo_ = prec_;
    }
    static LaurentElem combine(const LaurentElem& a, const LaurentElem& b, bool subtract) {
        a.check(b);
        const Residue p = a.p_;
        LaurentElem out(p, std::min(a.prec_, b.prec_));
        if (a.is_zero() && b.is_zero()) return out;
        int lo = std::min(a.is_zero() ? INT_MAX : a.lo_, b.is_zero() ? INT_MAX : b.lo_);
        if (lo >= out.prec_) return out;
        Vec acc(std::size_t(out.prec_ - lo), 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            int e = a.lo_ + int(i);
            if (e < out.prec_) acc[e - lo] = a.c_[i];
        }
        for (std::size_t i = 0; i < b.c_.size(); ++i) {
            int e = b.lo_ + int(i);
            if (e < out.prec_)
                acc[e - lo] = subtract ? modular::sub(acc[e - lo], b.c_[i], p) : modular::add(acc[e - lo], b.c_[i], p);
        }
        out.lo_ = lo;
        out.c_ = std::move(acc);
        out.normalize();
        return out;
    }

    Residue p_ = 2;
    int prec_ = 0;
    int lo_ = 0;
    Vec c_;
};

/// (1+pi)^alpha as the product of (1+pi^{p^i})^{alpha_i} over base-p digits.
inline LaurentElem one_plus_pi_pow(const PadicInt& alpha, int prec) {
    const Residue p = alpha.p();
    if (modular::ipow(p, alpha.level()) < std::uint64_t(std::max(prec, 1)))
        throw PrecisionError("one_plus_pi_pow: p-adic level too small for the series precision");
    LaurentElem out = LaurentElem::constant(p, prec, 1);
    auto digits = alpha.digits();
    std::uint64_t step = 1;
    for (unsigned i = 0; i < digits.size() && step < std::uint64_t(prec); ++i, step *= p) {
        if (!digits[i]) continue;
        LaurentElem f(p, prec);
        // (1 + pi^step)^a = sum_j C(a, j) pi^{step*j}
        Residue binom = 1;
        for (Residue j = 0; j <= digits[i]; ++j) {
            f.set(int(step * j), binom);
            if (j == digits[i]) break;
            binom = modular::mul(binom, modular::mul(digits[i] - j, modular::inverse(j + 1, p), p), p);
        }
        out = out * f;
    }
    return out;
}

/// (1+pi)^n for an ordinary integer exponent.
inline LaurentElem one_plus_pi_pow(Residue p, long long n, int prec) {
    return one_plus_pi_pow(PadicInt::from_integer(p, PadicInt::level_for(p, prec), n), prec);
}

/// Powers of a fixed substitution target g, cached for repeated f(g).
class Substitution {
public:
    Substitution(LaurentElem g) : g_(std::move(g)) {
        if (g_.is_zero() || g_.valuation() < 1)
            throw SubstitutionError("substitute: target must have positive valuation");
        pos_.push_back(LaurentElem::constant(g_.p(), g_.prec(), 1));
    }

    const LaurentElem& target() const { return g_; }

    const LaurentElem& power(int k) {
        if (k >= 0) {
            while (int(pos_.size()) <= k) pos_.push_back(pos_.back() * g_);
            return pos_[k];
        }
        if (neg_.empty()) neg_.push_back(g_.inverse());
        while (int(neg_.size()) < -k) neg_.push_back(neg_.back() * neg_.front());
        return neg_[-k - 1];
    }

    LaurentElem apply(const LaurentElem& f) {
        const Residue p = f.p();
        if (p != g_.p()) throw ParameterMismatch("substitute: different characteristics");
        // truncation error of f is O(g^{prec(f)})
        int prec = f.prec() >= 0 ? f.prec() * g_.valuation() : f.prec();
        prec = std::min(prec, std::max(f.prec(), g_.prec()));
        LaurentElem acc(p, prec);
        for (auto [e, c] : f.terms()) acc = acc + power(e).scaled(c);
        return acc.truncated(prec);
    }

private:
    LaurentElem g_;
    std::vector<LaurentElem> pos_, neg_;
};

inline LaurentElem substitute(const LaurentElem& f, const LaurentElem& g) { return Substitution(g).apply(f); }

// ---------------------------------------------------------------------------
// Tate series in t_1..t_d with Laurent coefficients

using Monomial = std::vector<int>;

inline int total_degree(const Monomial& m) {
    int s = 0;
    for (int x : m) s += x;
    return s;
}

class TateElem {
public:
    TateElem() = default;
    TateElem(Residue p, unsigned d, int prec, int degree_cap) : p_(p), d_(d), prec_(prec), D_(degree_cap) {
        if (degree_cap < 0) throw PreconditionError("TateElem: negative degree cap");
    }

    static TateElem constant(const LaurentElem& c, unsigned d, int degree_cap) {
        TateElem x(c.p(), d, c.prec(), degree_cap);
        x.set(Monomial(d, 0), c);
        return x;
    }
    static TateElem one(Residue p, unsigned d, int prec, int degree_cap) {
        return constant(LaurentElem::constant(p, prec, 1), d, degree_cap);
    }
    static TateElem variable(Residue p, unsigned d, int prec, int degree_cap, unsigned j) {
        if (j >= d) throw DimensionError("TateElem: variable index out of range");
        TateElem x(p, d, prec, degree_cap);
        Monomial m(d, 0);
        m[j] = 1;
        x.set(m, LaurentElem::constant(p, prec, 1));
        return x;
    }

    Residue p() const { return p_; }
    unsigned d() const { return d_; }
    int prec() const { return prec_; }
    int degree_cap() const { return D_; }
    const std::map<Monomial, LaurentElem>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    LaurentElem coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? LaurentElem(p_, prec_) : it->second;
    }
    void set(const Monomial& m, const LaurentElem& c) {
        if (m.size() != d_) throw DimensionError("TateElem: monomial has wrong arity");
        if (total_degree(m) > D_) throw PrecisionError("TateElem: monomial exceeds the degree cap");
        if (c.p() != p_) throw ParameterMismatch("TateElem: coefficient characteristic");
        if (c.prec() < prec_) {
            prec_ = c.prec();
            for (auto it = terms_.begin(); it != terms_.end();) {
                it->second = it->second.truncated(prec_);
                it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
            }
        }
        LaurentElem t = c.truncated(prec_);
        if (t.is_zero())
            terms_.erase(m);
        else
            terms_[m] = std::move(t);
    }

    /// Gauss valuation: minimum coefficient valuation, prec when zero.
    int valuation() const {
        int v = prec_;
        for (const auto& [m, c] : terms_) v = std::min(v, c.valuation());
        return v;
    }

    TateElem truncated(int prec) const {
        TateElem x(p_, d_, std::min(prec, prec_), D_);
        for (const auto& [m, c] : terms_) x.set(m, c);
        return x;
    }

    /// Same stored coefficients, now regarded as exact below `prec`.
    TateElem with_precision(int prec) const {
        TateElem x(p_, d_, prec, D_);
        for (const auto& [m, c] : terms_) x.set(m, c.with_precision(prec));
        return x;
    }

    friend TateElem operator+(const TateElem& a, const TateElem& b) { return combine(a, b, false); }
    friend TateElem operator-(const TateElem& a, const TateElem& b) { return combine(a, b, true); }
    TateElem operator-() const { return TateElem(p_, d_, prec_, D_) - *this; }

    friend TateElem operator*(const TateElem& a, const TateElem& b) {
        a.check(b);
        int prec = std::min(a.prec_ + b.valuation(), b.prec_ + a.valuation());
        prec = std::min(prec, std::max(a.prec_, b.prec_));
        std::map<Monomial, LaurentElem> acc;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m(a.d_);
                for (unsigned j = 0; j < a.d_; ++j) m[j] = ma[j] + mb[j];
                if (total_degree(m) > a.D_) continue;
                LaurentElem prod = ca * cb;
                auto it = acc.find(m);
                if (it == acc.end())
                    acc.emplace(std::move(m), std::move(prod));
                else
                    it->second = it->second + prod;
            }
        TateElem out(a.p_, a.d_, prec, a.D_);
        for (auto& [m, c] : acc) out.set(m, c);
        return out;
    }

    /// Multiplication by a scalar of F.
    TateElem scaled(const LaurentElem& f) const {
        if (f.p() != p_) throw ParameterMismatch("TateElem: scalar characteristic");
        int prec = std::min(prec_ + f.valuation(), f.prec() + valuation());
        prec = std::min(prec, std::max(prec_, f.prec()));
        TateElem out(p_, d_, prec, D_);
        for (const auto& [m, c] : terms_) out.set(m, c * f);
        return out;
    }

    /// p-power Frobenius: every exponent (of pi and of each t_j) times p.
    TateElem frobenius() const {
        TateElem out(p_, d_, prec_ * int(p_), D_);
        for (const auto& [m, c] : terms_) {
            Monomial mp(m);
            for (int& x : mp) x *= int(p_);
            if (total_degree(mp) > D_) continue;
            LaurentElem cp(p_, out.prec_);
            for (auto [e, v] : c.terms()) cp.set(e * int(p_), v);
            out.set(mp, cp);
        }
        return out;
    }

    friend bool operator==(const TateElem& a, const TateElem& b) {
        if (a.p_ != b.p_ || a.d_ != b.d_) return false;
        return (a - b).is_zero();
    }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.to_string() << ")";
            for (unsigned j = 0; j < d_; ++j)
                if (m[j]) os << "*t" << j + 1 << "^" << m[j];
        }
        if (first) os << "0";
        return os.str();
    }

private:
    void check(const TateElem& b) const {
        if (p_ != b.p_ || d_ != b.d_ || D_ != b.D_) throw ParameterMismatch("TateElem: mismatched (p, d, D)");
    }
    static TateElem combine(const TateElem& a, const TateElem& b, bool subtract) {
        a.check(b);
        TateElem out(a.p_, a.d_, std::min(a.prec_, b.prec_), a.D_);
        for (const auto& [m, c] : a.terms_) out.set(m, c);
        for (const auto& [m, c] : b.terms_) out.set(m, subtract ? out.coefficient(m) - c : out.coefficient(m) + c);
        return out;
    }

    Residue p_ = 2;
    unsigned d_ = 0;
    int prec_ = 0;
    int D_ = 0;
    std::map<Monomial, LaurentElem> terms_;
};

// ---------------------------------------------------------------------------
// phi^{-1}(R)/R

using Label = std::vector<int>;  // (e_0, e_1, ..., e_d), entries in [0, p)

/// Every nonzero label in {0..p-1}^{d+1}, lexicographic.
inline std::vector<Label> all_labels(Residue p, unsigned d) {
    std::vector<Label> out;
    Label l(d + 1, 0);
    while (true) {
        std::size_t i = d + 1;
        while (i-- > 0) {
            if (++l[i] < int(p)) break;
            l[i] = 0;
        }
        if (i == std::size_t(-1)) break;
        out.push_back(l);
    }
    return out;
}

inline bool is_zero_label(const Label& l) {
    return std::all_of(l.begin(), l.end(), [](int x) { return x == 0; });
}

/// Element of phi^{-1}(R)/R: one R-component per nonzero label, the
/// coefficient of (1+pi)^{e_0/p} t_1^{e_1/p} ... t_d^{e_d/p}.
class FracElem {
public:
    FracElem(Residue p, unsigned d, int prec, int degree_cap) : p_(p), d_(d), prec_(prec), D_(degree_cap) {}

    Residue p() const { return p_; }
    unsigned d() const { return d_; }
    int prec() const { return prec_; }
    int degree_cap() const { return D_; }
    const std::map<Label, TateElem>& components() const { return comp_; }

    TateElem component(const Label& l) const {
        auto it = comp_.find(l);
        return it == comp_.end() ? TateElem(p_, d_, prec_, D_) : it->second;
    }
    void set(const Label& l, const TateElem& x) {
        if (l.size() != d_ + 1) throw DimensionError("FracElem: label has wrong length");
        if (is_zero_label(l)) throw PreconditionError("FracElem: label 0 is the R-part and is not stored");
        for (int e : l)
            if (e < 0 || e >= int(p_)) throw DimensionError("FracElem: label entry out of range");
        if (x.is_zero())
            comp_.erase(l);
        else
            comp_[l] = x;
    }

    bool is_zero() const { return comp_.empty(); }
    int valuation() const {
        int v = prec_;
        for (const auto& [l, x] : comp_) v = std::min(v, x.valuation());
        return v;
    }

    friend FracElem operator+(const FracElem& a, const FracElem& b) {
        FracElem out = a;
        for (const auto& [l, x] : b.comp_) out.set(l, out.component(l) + x);
        return out;
    }
    friend FracElem operator-(const FracElem& a, const FracElem& b) {
        FracElem out = a;
        for (const auto& [l, x] : b.comp_) out.set(l, out.component(l) - x);
        return out;
    }
    friend bool operator==(const FracElem& a, const FracElem& b) { return (a - b).is_zero(); }

private:
    Residue p_;
    unsigned d_;
    int prec_;
    int D_;
    std::map<Label, TateElem> comp_;
};

/// Random element with `terms` monomials of degree <= max_degree and
/// coefficient exponents in [min_val, prec).
template <class Rng>
TateElem random_tate(Rng& rng, Residue p, unsigned d, int prec, int degree_cap, int terms, int max_degree,
                     int min_val = 0) {
    TateElem x(p, d, prec, degree_cap);
    std::uniform_int_distribution<int> ev(min_val, prec - 1), cv(1, int(p) - 1), mv(0, std::max(0, max_degree));
    for (int k = 0; k < terms; ++k) {
        Monomial m(d, 0);
        int budget = std::min(max_degree, degree_cap);
        for (unsigned j = 0; j < d; ++j) {
            m[j] = std::min(budget, mv(rng));
            budget -= m[j];
        }
        x.set(m, x.coefficient(m) + LaurentElem::monomial(p, prec, ev(rng), Residue(cv(rng))));
    }
    return x;
}

struct Decomposition {
    TateElem r_part;
    FracElem frac;
};

inline int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

/// Splits X in phi^{-1}(R), given in the root variables s = pi^{1/p} and
/// u_j = t_j^{1/p}, into label components over R using s = (1+pi)^{1/p} - 1.
inline Decomposition decompose(const TateElem& root, int degree_cap) {
    const Residue p = root.p();
    const unsigned d = root.d();
    const int ip = int(p);
    const int prec = floor_div(root.prec(), ip);
    std::map<Label, TateElem> parts;
    auto part = [&](const Label& l) -> TateElem& {
        auto it = parts.find(l);
        if (it == parts.end()) it = parts.emplace(l, TateElem(p, d, prec, degree_cap)).first;
        return it->second;
    };
    // C(i, e0) (-1)^{i-e0} for 0 <= e0 <= i < p
    std::vector<std::vector<Residue>> coef(p, std::vector<Residue>(p, 0));
    for (int i = 0; i < ip; ++i) {
        Residue b = 1;
        for (int e0 = 0; e0 <= i; ++e0) {
            coef[i][e0] = ((i - e0) % 2) ? modular::neg(b, p) : b;
            if (e0 == i) break;
            b = modular::mul(b, modular::mul(Residue(i - e0), modular::inverse(Residue(e0 + 1), p), p), p);
        }
    }
    for (const auto& [mono, c] : root.terms()) {
        Label l(d + 1, 0);
        Monomial beta(d, 0);
        for (unsigned j = 0; j < d; ++j) {
            if (mono[j] < 0) throw FormatError("decompose: negative t-exponent");
            beta[j] = mono[j] / ip;
            l[j + 1] = mono[j] % ip;
        }
        if (total_degree(beta) > degree_cap)
            throw PrecisionError("decompose: component exceeds the degree cap of R");
        for (auto [a, v] : c.terms()) {
            const int alpha = floor_div(a, ip), i = a - alpha * ip;
            for (int e0 = 0; e0 <= i; ++e0) {
                Residue w = modular::mul(coef[i][e0], v, p);
                if (!w) continue;
                l[0] = e0;
                TateElem& t = part(l);
                t.set(beta, t.coefficient(beta) + LaurentElem::monomial(p, prec, alpha, w));
            }
        }
    }
    Decomposition out{TateElem(p, d, prec, degree_cap), FracElem(p, d, prec, degree_cap)};
    for (auto& [l, x] : parts) {
        if (is_zero_label(l))
            out.r_part = x;
        else
            out.frac.set(l, x);
    }
    return out;
}

/// Inverse of decompose: sum over labels of (1+s)^{e_0} u^e r_e(s^p, u^p),
/// as a Tate series in the root variables with the given degree cap.
inline TateElem recompose(const Decomposition& dec, int root_degree_cap) {
    const Residue p = dec.frac.p();
    const unsigned d = dec.frac.d();
    const int ip = int(p);
    const int prec = std::min(dec.frac.prec(), dec.r_part.prec()) * ip;
    TateElem out(p, d, prec, root_degree_cap);
    auto add = [&](const Label& l, const TateElem& r) {
        LaurentElem w = one_plus_pi_pow(p, l[0], prec);  // (1+s)^{e0}
        for (const auto& [m, c] : r.terms()) {
            Monomial mu(d);
            for (unsigned j = 0; j < d; ++j) mu[j] = m[j] * ip + l[j + 1];
            LaurentElem cs(p, c.prec() * ip);
            for (auto [e, v] : c.terms()) cs.set(e * ip, v);
            out.set(mu, out.coefficient(mu) + cs * w);
        }
    };
    add(Label(d + 1, 0), dec.r_part);
    for (const auto& [l, r] : dec.frac.components()) add(l, r);
    return out;
}

/// phi(X) for X in phi^{-1}(R): the root variables are reread as pi and t.
inline TateElem frobenius_of_root(const TateElem& root, int degree_cap) {
    TateElem out(root.p(), root.d(), root.prec(), std::max(degree_cap, root.degree_cap()));
    for (const auto& [m, c] : root.terms()) out.set(m, c);
    return out;
}

} // namespace hsprop
