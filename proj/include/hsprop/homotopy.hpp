#pragma once

// Grid-level model of the contraction argument: Gamma_0 = (1 + p^2 Z_p) |x p Z_p^d
// in coordinates (x, y) with u = 1 + p^2 x, a = p y, truncated mod p^L; a
// label summand y R of phi^{-1}(R)/R as coefficient module; lazily evaluated
// cochains; the operator h_m and the identities it satisfies.

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hsprop/gamma.hpp"

namespace hsprop {

using GridPoint = std::vector<std::uint64_t>;  // (x, y_1, ..., y_d) mod p^L

class GridGroup {
public:
    GridGroup(Residue p, unsigned d, unsigned L) : p_(p), d_(d), L_(L), q_(modular::ipow(p, L)) {
        if (!modular::is_prime(p)) throw PreconditionError("GridGroup: p is not prime");
        if (L == 0 || q_ > (std::uint64_t(1) << 40)) throw PrecisionError("GridGroup: level out of range");
    }

    Residue p() const { return p_; }
    unsigned d() const { return d_; }
    unsigned h() const { return d_ + 1; }
    unsigned level() const { return L_; }
    std::uint64_t modulus() const { return q_; }

    GridPoint identity() const { return GridPoint(h(), 0); }

    /// x'' = x + x' + p^2 x x',  y'' = y + y' + p^2 x y'.
    GridPoint mul(const GridPoint& a, const GridPoint& b) const {
        check(a), check(b);
        const std::uint64_t p2 = std::uint64_t(p_) * p_;
        GridPoint c(h());
        c[0] = (a[0] + b[0] + mulmod(p2 % q_, mulmod(a[0], b[0]))) % q_;
        for (unsigned j = 1; j < h(); ++j) c[j] = (a[j] + b[j] + mulmod(p2 % q_, mulmod(a[0], b[j]))) % q_;
        return c;
    }

    GridPoint inv(const GridPoint& a) const {
        check(a);
        const std::uint64_t p2 = std::uint64_t(p_) * p_;
        const std::uint64_t unit = (1 + mulmod(p2 % q_, a[0])) % q_;
        const std::uint64_t ui = PadicInt(p_, L_, unit).inverse().value();
        GridPoint c(h());
        for (unsigned j = 0; j < h(); ++j) c[j] = (q_ - mulmod(a[j], ui)) % q_;
        return c;
    }

    GridPoint pow(const GridPoint& a, std::uint64_t n) const {
        GridPoint r = identity(), b = a;
        for (; n; n >>= 1, b = mul(b, b))
            if (n & 1) r = mul(r, b);
        return r;
    }

    /// Largest j <= L with every coordinate divisible by p^j (membership in Gamma_j).
    unsigned depth(const GridPoint& a) const {
        unsigned j = L_;
        for (auto c : a) j = std::min(j, PadicInt(p_, L_, c).valuation());
        return j;
    }

    template <class Rng>
    GridPoint random(Rng& rng, unsigned j = 0) const {
        std::uniform_int_distribution<std::uint64_t> dist(0, q_ - 1);
        const std::uint64_t pj = modular::ipow(p_, std::min(j, L_));
        GridPoint a(h());
        for (auto& c : a) c = mulmod(dist(rng), pj);
        return a;
    }

    /// The group element (1 + p^2 x, p y) at p-adic level Lg >= L + 2.
    GammaElem to_gamma(const GridPoint& a, unsigned Lg) const {
        check(a);
        if (Lg < L_ + 2) throw PrecisionError("to_gamma: p-adic level below grid level + 2");
        GammaElem g = GammaElem::identity(p_, d_, Lg);
        g.u = PadicInt(p_, Lg, 1) + PadicInt(p_, Lg, std::uint64_t(p_) * p_) * PadicInt(p_, Lg, a[0]);
        for (unsigned j = 0; j < d_; ++j) g.a[j] = PadicInt(p_, Lg, p_) * PadicInt(p_, Lg, a[j + 1]);
        return g;
    }

    GridPoint from_gamma(const GammaElem& g) const {
        if (!g.in_gamma0()) throw PreconditionError("from_gamma: element is not in Gamma_0");
        GridPoint a(h());
        a[0] = (g.u - PadicInt(g.p(), g.level(), 1)).divide_by_p_power(2).value() % q_;
        for (unsigned j = 0; j < d_; ++j) a[j + 1] = g.a[j].divide_by_p_power(1).value() % q_;
        return a;
    }

    std::string to_string(const GridPoint& a) const {
        std::string s = "(";
        for (unsigned j = 0; j < a.size(); ++j) s += (j ? "," : "") + std::to_string(a[j]);
        return s + ")";
    }

private:
    std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) const {
        return std::uint64_t((unsigned __int128)a * b % q_);
    }
    void check(const GridPoint& a) const {
        if (a.size() != h()) throw DimensionError("grid point has wrong number of coordinates");
    }

    Residue p_;
    unsigned d_, L_;
    std::uint64_t q_;
};

/// The summand y R for a label e (the zero label gives R itself), as a
/// Gamma_0-module truncated at precision `prec`.
class LabelModule {
public:
    LabelModule(GridGroup grid, Label e, int prec, int degree_cap)
        : grid_(std::move(grid)), e_(std::move(e)), prec_(prec), D_(degree_cap) {
        if (e_.size() != grid_.d() + 1) throw DimensionError("label length does not match d + 1");
        gl_ = std::max(hsprop::gamma_level(grid_.p(), prec_), grid_.level() + 3);
        // Gamma_L must act trivially at this precision for grid cochains to be well defined.
        const long long gain_L = level_gain(grid_.level());
        if (gain_L < prec_)
            throw ConsistencyError("grid level " + std::to_string(grid_.level()) + " gives Gamma_L gain " +
                                   std::to_string(gain_L) + " below precision " + std::to_string(prec_));
    }

    const GridGroup& grid() const { return grid_; }
    const Label& label() const { return e_; }
    int prec() const { return prec_; }
    int degree_cap() const { return D_; }
    Residue p() const { return grid_.p(); }
    unsigned d() const { return grid_.d(); }
    unsigned gamma_level() const { return gl_; }
    GammaElem gamma(const GridPoint& a) const { return grid_.to_gamma(a, gl_); }

    TateElem zero() const { return TateElem(p(), d(), prec_, D_); }

    /// gamma(y r) = y (1+pi)^mu gamma(r); returns the new R-coefficient.
    TateElem act(const GridPoint& a, const TateElem& r) const {
        if (r.is_zero()) return r;
        GammaElem g = gamma(a);
        const int P = std::max(r.prec(), 1);
        PadicInt mu = label_twist(g, e_);
        TateElem out = act_r(g, r);
        if (mu.value() != 0) out = out.scaled(one_plus_pi_pow(mu, P));
        return out.truncated(r.prec());
    }

    /// Lower bound on the valuation gain of gamma - 1 for gamma in Gamma_j.
    long long level_gain(unsigned j) const {
        long long pj = 1;
        for (unsigned i = 0; i < j && pj < (1LL << 40); ++i) pj *= grid_.p();
        long long g = pj * grid_.p() * grid_.p() - 1;  // cyclotomic direction on R
        if (grid_.d() > 0) g = std::min(g, pj * grid_.p());
        bool twisted = std::any_of(e_.begin(), e_.end(), [](int x) { return x != 0; });
        if (twisted) {
            bool translation_twist = std::any_of(e_.begin() + 1, e_.end(), [](int x) { return x != 0; });
            g = std::min(g, translation_twist ? pj : pj * grid_.p());
        }
        return g;
    }

private:
    static TateElem act_r(const GammaElem& g, const TateElem& r) { return hsprop::act(g, r); }

    GridGroup grid_;
    Label e_;
    int prec_, D_;
    unsigned gl_ = 0;
};

// ---------------------------------------------------------------------------
// Lazy cochains

class GridCochain {
public:
    using Fn = std::function<TateElem(std::span<const GridPoint>)>;

    GridCochain(unsigned degree, Fn f, bool memo = true)
        : n_(degree), f_(std::make_shared<Fn>(std::move(f))) {
        if (memo) cache_ = std::make_shared<std::map<std::vector<std::uint64_t>, TateElem>>();
    }

    unsigned degree() const { return n_; }

    TateElem operator()(std::span<const GridPoint> args) const {
        if (args.size() != n_) throw DimensionError("grid cochain evaluated on a tuple of the wrong length");
        if (!cache_) return (*f_)(args);
        std::vector<std::uint64_t> key;
        for (const auto& a : args) key.insert(key.end(), a.begin(), a.end());
        auto it = cache_->find(key);
        if (it != cache_->end()) return it->second;
        TateElem v = (*f_)(args);
        cache_->emplace(std::move(key), v);
        return v;
    }
    TateElem operator()(std::initializer_list<GridPoint> args) const {
        std::vector<GridPoint> v(args);
        return (*this)(std::span<const GridPoint>(v));
    }

private:
    unsigned n_;
    std::shared_ptr<Fn> f_;
    std::shared_ptr<std::map<std::vector<std::uint64_t>, TateElem>> cache_;
};

/// (df)(g_0..g_n) = g_0 f(g_1..g_n) + sum_i (-1)^i f(.., g_{i-1} g_i, ..) + (-1)^{n+1} f(g_0..g_{n-1}).
inline GridCochain grid_differential(const LabelModule& mod, const GridCochain& f) {
    const unsigned n = f.degree();
    return GridCochain(n + 1, [&mod, f, n](std::span<const GridPoint> g) {
        const auto& G = mod.grid();
        std::vector<GridPoint> args(g.begin() + 1, g.end());
        TateElem acc = mod.act(g[0], f(args));
        for (unsigned i = 1; i <= n; ++i) {
            std::vector<GridPoint> face;
            for (unsigned j = 0; j <= n; ++j) {
                if (j == i) continue;
                face.push_back(j == i - 1 ? G.mul(g[i - 1], g[i]) : g[j]);
            }
            acc = (i % 2) ? acc - f(face) : acc + f(face);
        }
        std::vector<GridPoint> head(g.begin(), g.end() - 1);
        acc = ((n + 1) % 2) ? acc - f(head) : acc + f(head);
        return acc;
    });
}

// ---------------------------------------------------------------------------
// Constants and bound selection

struct HomotopyConstants {
    int tau = 0;    // valuation loss of (eta - 1)^{-1}
    int g_c = 1;    // gain parameter of the c-analytic estimate
    int eps = 1;    // required strict gain
    unsigned m = 0;
};

inline long long ipow_ll(long long b, unsigned e) {
    long long r = 1;
    for (unsigned i = 0; i < e; ++i) r *= b;
    return r;
}

/// p^{2m} g_c - 2 p^m tau >= eps and p^{m+1} g_c - p^m tau >= eps.
inline bool bound_holds(Residue p, int tau, int g_c, int eps, unsigned m) {
    const long long pm = ipow_ll(p, m);
    return pm * pm * g_c - 2 * pm * tau >= eps && pm * p * g_c - pm * tau >= eps;
}

/// Least m >= 0 satisfying bound_holds.  The second expression is
/// p^m (p g_c - tau), so a solution exists iff p g_c > tau.
inline unsigned bound_select(Residue p, int tau, int g_c, int eps) {
    if (g_c < 1 || tau < 0 || eps < 1) throw PreconditionError("bound_select: need g_c >= 1, tau >= 0, eps >= 1");
    if ((long long)p * g_c <= tau)
        throw NoContractionError("bound_select: p g_c <= tau, no m gives a positive gain");
    for (unsigned m = 0;; ++m)
        if (bound_holds(p, tau, g_c, eps, m)) return m;
}

// ---------------------------------------------------------------------------
// The operator h_m

class HomotopyContext {
public:
    HomotopyContext(const LabelModule& mod, GridPoint eta, unsigned m)
        : mod_(&mod), eta_(std::move(eta)), m_(m) {
        const auto& G = mod.grid();
        T_ = G.pow(eta_, modular::ipow(G.p(), m));
        tau_ = label_delta_valuation(mod.gamma(eta_), mod.label(), mod.prec());
        tau_m_ = label_delta_valuation(mod.gamma(T_), mod.label(), mod.prec());
        if (tau_ >= kInfiniteGain) throw NoContractionError("eta fixes the label twist; no bounded inverse");
    }

    const LabelModule& module() const { return *mod_; }
    const GridPoint& eta() const { return eta_; }
    const GridPoint& T() const { return T_; }
    unsigned m() const { return m_; }
    int tau() const { return tau_; }
    int tau_m() const { return tau_m_; }

    /// (eta^{p^m} - 1)^{-1} w on the summand.
    TateElem inverse(const TateElem& w) const {
        if (w.is_zero()) return w.truncated(w.prec() - tau_m_);
        return invert_gamma_minus_one(mod_->gamma(T_), mod_->label(), w, w.prec()).x;
    }

private:
    const LabelModule* mod_;
    GridPoint eta_, T_;
    unsigned m_;
    int tau_ = 0, tau_m_ = 0;
};

/// h_m(f)(g_1..g_{n-1}) = (eta^{p^m}-1)^{-1} sum_i (-1)^{i-1} f(g_1..g_{i-1}, eta^{p^m}, g_i..g_{n-1}).
inline GridCochain h_m_apply(const HomotopyContext& ctx, const GridCochain& f) {
    const unsigned n = f.degree();
    if (n == 0) throw PreconditionError("h_m_apply: degree must be at least 1");
    return GridCochain(n - 1, [&ctx, f, n](std::span<const GridPoint> g) {
        TateElem acc = ctx.module().zero();
        for (unsigned i = 1; i <= n; ++i) {
            std::vector<GridPoint> args(g.begin(), g.begin() + (i - 1));
            args.push_back(ctx.T());
            args.insert(args.end(), g.begin() + (i - 1), g.end());
            acc = (i % 2) ? acc + f(args) : acc - f(args);
        }
        return ctx.inverse(acc);
    });
}

/// The right side of the homotopy identity:
///   (g_1 A - A g_1) sum_i (-1)^{i-1} f(g_2..g_i, T, g_{i+1}..g_n)
///   - sum_i A (f(.., T g_i, ..) - f(.., g_i T, ..)),   A = (T - 1)^{-1}.
inline TateElem homotopy_rhs(const HomotopyContext& ctx, const GridCochain& f, std::span<const GridPoint> g) {
    const auto& mod = ctx.module();
    const auto& G = mod.grid();
    const unsigned n = f.degree();
    const GridPoint& T = ctx.T();
    TateElem s = mod.zero();
    for (unsigned i = 1; i <= n; ++i) {
        std::vector<GridPoint> args(g.begin() + 1, g.begin() + i);
        args.push_back(T);
        args.insert(args.end(), g.begin() + i, g.end());
        s = (i % 2) ? s + f(args) : s - f(args);
    }
    TateElem out = mod.act(g[0], ctx.inverse(s)) - ctx.inverse(mod.act(g[0], s));
    for (unsigned i = 1; i <= n; ++i) {
        std::vector<GridPoint> left(g.begin(), g.end()), right(g.begin(), g.end());
        left[i - 1] = G.mul(T, g[i - 1]);
        right[i - 1] = G.mul(g[i - 1], T);
        out = out - ctx.inverse(f(left) - f(right));
    }
    return out;
}

struct IdentityReport {
    int samples = 0;
    int precision = 0;      // precision at which both sides were compared
    int min_lhs_val = 0;    // min valuation of (d h + h d - 1)(f) over samples
    int base = 0;           // c-analytic base of f
    int observed_gain = 0;  // min_lhs_val - base
};

/// Checks (d h_m + h_m d - 1)(f) = RHS exactly on each tuple; throws
/// IdentityViolation with the tuple on mismatch.
inline IdentityReport homotopy_identity_check(const HomotopyContext& ctx, const GridCochain& f,
                                              const std::vector<std::vector<GridPoint>>& tuples, int base) {
    const auto& mod = ctx.module();
    GridCochain hf = h_m_apply(ctx, f);
    GridCochain dhf = grid_differential(mod, hf);
    GridCochain hdf = h_m_apply(ctx, grid_differential(mod, f));
    IdentityReport rep;
    rep.base = base;
    rep.precision = mod.prec();
    rep.min_lhs_val = mod.prec();
    for (const auto& t : tuples) {
        TateElem lhs = (f.degree() >= 1 ? dhf(t) : mod.zero()) + hdf(t) - f(t);
        TateElem rhs = homotopy_rhs(ctx, f, t);
        const int prec = std::min(lhs.prec(), rhs.prec());
        rep.precision = std::min(rep.precision, prec);
        if (!(lhs.truncated(prec) == rhs.truncated(prec))) {
            std::string s;
            for (const auto& g : t) s += mod.grid().to_string(g);
            throw IdentityViolation("homotopy identity fails at " + s);
        }
        rep.min_lhs_val = std::min(rep.min_lhs_val, lhs.truncated(prec).valuation());
        ++rep.samples;
    }
    rep.observed_gain = rep.min_lhs_val - base;
    return rep;
}

// ---------------------------------------------------------------------------
// c-analytic estimates
//
// Valuation form with a base b: for eta_j in Gamma_{i_j},
//   val(f(g) - f(g eta)) >= b + g_c p^{min_j i_j}   and   val f >= b.
// The minimum runs over perturbed positions (eta_j != 1).

struct AnalyticSample {
    std::vector<GridPoint> point, shift;
};

template <class Rng>
std::vector<AnalyticSample> analytic_samples(const GridGroup& G, unsigned n, int count, Rng& rng) {
    std::vector<AnalyticSample> out;
    std::uniform_int_distribution<unsigned> lv(0, G.level() - 1);
    std::bernoulli_distribution perturb(0.7);
    for (int k = 0; k < count; ++k) {
        AnalyticSample s;
        for (unsigned j = 0; j < n; ++j) {
            s.point.push_back(G.random(rng));
            s.shift.push_back(perturb(rng) ? G.random(rng, lv(rng)) : G.identity());
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline int shift_exponent_level(const GridGroup& G, const std::vector<GridPoint>& shift) {
    unsigned lvl = G.level();
    for (const auto& e : shift) lvl = std::min(lvl, G.depth(e));
    return int(lvl);
}

/// Largest base b for which the estimate holds on the samples (the valuation
/// form of the minimal constant d).
inline int analytic_base(const LabelModule& mod, const GridCochain& f, int g_c,
                         const std::vector<AnalyticSample>& samples) {
    const auto& G = mod.grid();
    int b = mod.prec();
    for (const auto& s : samples) {
        TateElem v = f(s.point);
        b = std::min(b, v.valuation());
        std::vector<GridPoint> moved(s.point.size());
        for (std::size_t j = 0; j < moved.size(); ++j) moved[j] = G.mul(s.point[j], s.shift[j]);
        TateElem diff = v - f(moved);
        if (diff.is_zero()) continue;
        const int lvl = shift_exponent_level(G, s.shift);
        const long long need = (long long)g_c * ipow_ll(G.p(), unsigned(lvl));
        b = int(std::min<long long>(b, diff.valuation() - need));
    }
    return b;
}

struct AnalyticReport {
    bool ok = true;
    std::string witness;
};

inline AnalyticReport c_analytic_check(const LabelModule& mod, const GridCochain& f, int g_c, int base,
                                       const std::vector<AnalyticSample>& samples) {
    const auto& G = mod.grid();
    for (const auto& s : samples) {
        TateElem v = f(s.point);
        std::vector<GridPoint> moved(s.point.size());
        for (std::size_t j = 0; j < moved.size(); ++j) moved[j] = G.mul(s.point[j], s.shift[j]);
        TateElem diff = (v - f(moved)).truncated(mod.prec());
        const int lvl = shift_exponent_level(G, s.shift);
        const long long need = base + (long long)g_c * ipow_ll(G.p(), unsigned(lvl));
        const bool sup_ok = v.valuation() >= base;
        const bool diff_ok = diff.is_zero() || diff.valuation() >= std::min<long long>(need, mod.prec());
        if (!sup_ok || !diff_ok) {
            std::string w;
            for (std::size_t j = 0; j < s.point.size(); ++j) w += G.to_string(s.point[j]) + "*" + G.to_string(s.shift[j]);
            return {false, w + (sup_ok ? " difference too large" : " value below base")};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Commutator rewriting and the Frobenius power identity

struct CommutatorReport {
    bool identity_ok = true;
    bool displacement_ok = true;
    std::string witness;
};

/// g A - A g = A (T g)(1 - g^{-1} T^{-1} g T) A on v, and for g in Gamma_j both
/// g^{-1} T^{-1} g T and (T g)^{-1}(g T) lie in Gamma_{m+j+1}.
inline CommutatorReport commutator_identity_check(const HomotopyContext& ctx, const GridPoint& g, unsigned j,
                                                  const TateElem& v) {
    const auto& mod = ctx.module();
    const auto& G = mod.grid();
    const GridPoint& T = ctx.T();
    CommutatorReport rep;
    GridPoint kappa = G.mul(G.mul(G.inv(g), G.inv(T)), G.mul(g, T));
    GridPoint diff = G.mul(G.inv(G.mul(T, g)), G.mul(g, T));
    const unsigned want = std::min(G.level(), ctx.m() + j + 1);
    if (G.depth(g) < j) throw PreconditionError("commutator_identity_check: g is not in Gamma_j");
    if (G.depth(kappa) < want || G.depth(diff) < want) {
        rep.displacement_ok = false;
        rep.witness = "g=" + G.to_string(g) + " commutator=" + G.to_string(kappa);
    }
    TateElem lhs = mod.act(g, ctx.inverse(v)) - ctx.inverse(mod.act(g, v));
    TateElem w = ctx.inverse(v);
    TateElem rhs = ctx.inverse(mod.act(G.mul(T, g), w - mod.act(kappa, w)));
    const int prec = std::min(lhs.prec(), rhs.prec());
    if (!(lhs.truncated(prec) == rhs.truncated(prec))) {
        rep.identity_ok = false;
        rep.witness += " operator identity fails for g=" + G.to_string(g);
    }
    return rep;
}

/// (eta^{p^n} - 1) x = (eta - 1)^{p^n} x on the summand.
inline bool frobenius_power_check(const LabelModule& mod, const GridPoint& eta, unsigned n, const TateElem& x) {
    const auto& G = mod.grid();
    const std::uint64_t q = modular::ipow(G.p(), n);
    TateElem lhs = mod.act(G.pow(eta, q), x) - x;
    TateElem rhs = x;
    for (std::uint64_t i = 0; i < q; ++i) rhs = mod.act(eta, rhs) - rhs;
    const int prec = std::min(lhs.prec(), rhs.prec());
    return lhs.truncated(prec) == rhs.truncated(prec);
}

// ---------------------------------------------------------------------------
// Iterated correction: z_{k+1} = z_k - d h_m z_k, primitive = sum h_m z_k.

struct CorrectionReport {
    int rounds = 0;
    int residual_val = 0;  // min over samples of val(z - d(primitive))
    int target = 0;
    bool reached = false;
};

/// For a cocycle z, runs at most `max_rounds` corrections, stopping early once
/// z_k is below the target on `stop` tuples, then measures val(z - d P) on the
/// separate `check` tuples, where P is the accumulated primitive.
inline CorrectionReport iterate_correction(const HomotopyContext& ctx, const GridCochain& z, int target,
                                           int max_rounds, const std::vector<std::vector<GridPoint>>& stop,
                                           const std::vector<std::vector<GridPoint>>& check) {
    const auto& mod = ctx.module();
    CorrectionReport rep;
    rep.target = target;
    GridCochain zk = z;
    std::vector<GridCochain> prims;
    for (int k = 0; k < max_rounds; ++k) {
        bool small = true;
        for (const auto& t : stop)
            if (zk(t).truncated(target).valuation() < target) small = false;
        // a degree-1 cocycle is determined by its value at T: z(g) = A (g - 1) z(T)
        if (small && z.degree() == 1) small = zk({ctx.T()}).valuation() >= target + ctx.tau_m();
        if (small) break;
        GridCochain hz = h_m_apply(ctx, zk);
        prims.push_back(hz);
        GridCochain dhz = grid_differential(mod, hz);
        GridCochain prev = zk;
        zk = GridCochain(z.degree(), [prev, dhz](std::span<const GridPoint> g) { return prev(g) - dhz(g); });
        rep.rounds = k + 1;
    }
    GridCochain prim(z.degree() - 1, [&mod, prims](std::span<const GridPoint> g) {
        TateElem acc = mod.zero();
        for (const auto& h : prims) acc = acc + h(g);
        return acc;
    });
    GridCochain dp = grid_differential(mod, prim);
    rep.residual_val = target;
    for (const auto& t : check) {
        TateElem r = z(t) - dp(t);
        rep.residual_val = std::min(rep.residual_val, r.truncated(target).valuation());
    }
    rep.reached = rep.residual_val >= target;
    return rep;
}

/// Smallest grid level whose deepest subgroup acts trivially at the module precision.
inline unsigned grid_level_for(Residue p, unsigned d, const Label& e, int prec) {
    for (unsigned L = 1;; ++L) {
        GridGroup G(p, d, L);
        try {
            LabelModule probe(G, e, prec, 1);
            return L;
        } catch (const ConsistencyError&) {
        }
    }
}

} // namespace hsprop
