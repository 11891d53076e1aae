#pragma once

// Inhomogeneous cochains of a finite group and their cohomology.
//
// C^n(G, M) = Map(G^n, M) is stored as a flat residue vector: tuple
// (g_1, ..., g_n) of element indices is encoded row-major (g_1 most
// significant) and the module coordinate is the fastest index.  The
// differential matrix d_n : C^n -> C^{n+1} uses the same layout for its rows
// and columns, so its rows can be generated one at a time in a fixed order.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "hsprop/gmodules.hpp"
#include "hsprop/linalg.hpp"

namespace hsprop {

struct CohomologyOptions {
    std::uint64_t max_rows = 100'000'000;      // streamed row budget per differential
    std::uint64_t dense_threshold = 100'000;   // materialize below this many rows
    std::uint64_t fast_h1_order = 100;         // H^1 via generator constraints above this |G|
    unsigned jobs = 1;
};

namespace detail {

inline std::uint64_t checked_pow(std::uint64_t base, unsigned e, std::uint64_t limit) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (base != 0 && r > limit / base) return limit + 1;
        r *= base;
    }
    return r;
}

inline std::vector<Index> decode_tuple(std::uint64_t t, unsigned n, std::uint64_t order) {
    std::vector<Index> g(n);
    for (unsigned i = n; i-- > 0;) {
        g[i] = Index(t % order);
        t /= order;
    }
    return g;
}

inline std::uint64_t encode_tuple(std::span<const Index> g, std::uint64_t order) {
    std::uint64_t t = 0;
    for (Index x : g) t = t * order + x;
    return t;
}

} // namespace detail

class Cochain {
public:
    Cochain(const GModule& m, unsigned degree)
        : module_(&m), degree_(degree),
          values_(detail::checked_pow(m.group().order(), degree, ~std::uint64_t(0) >> 8) * m.rank(), 0) {}
    Cochain(const GModule& m, unsigned degree, Vec values) : module_(&m), degree_(degree), values_(std::move(values)) {
        if (values_.size() != detail::checked_pow(m.group().order(), degree, ~std::uint64_t(0) >> 8) * m.rank())
            throw DimensionError("cochain table is not total on G^n");
    }

    const GModule& module() const { return *module_; }
    unsigned degree() const { return degree_; }
    const Vec& values() const { return values_; }
    Vec& values() { return values_; }
    std::uint64_t tuples() const { return values_.size() / module_->rank(); }

    std::span<const Residue> at(std::span<const Index> tuple) const {
        std::size_t r = module_->rank();
        return {values_.data() + detail::encode_tuple(tuple, module_->group().order()) * r, r};
    }
    void set(std::span<const Index> tuple, std::span<const Residue> v) {
        std::size_t r = module_->rank();
        std::copy(v.begin(), v.end(), values_.begin() + detail::encode_tuple(tuple, module_->group().order()) * r);
    }

    bool is_zero() const {
        return std::all_of(values_.begin(), values_.end(), [](Residue x) { return x == 0; });
    }

    friend bool operator==(const Cochain& a, const Cochain& b) {
        return a.degree_ == b.degree_ && a.values_ == b.values_;
    }

private:
    const GModule* module_;
    unsigned degree_;
    Vec values_;
};

/// (df)(g_0..g_n) = g_0 f(g_1..g_n) + sum_{i=1}^n (-1)^i f(.., g_{i-1} g_i, ..) + (-1)^{n+1} f(g_0..g_{n-1}).
inline Cochain differential(const Cochain& f) {
    const GModule& m = f.module();
    const auto& G = m.group();
    const unsigned n = f.degree();
    const Residue q = m.modulus();
    const std::size_t r = m.rank();
    Cochain out(m, n + 1);
    std::vector<Index> t(n + 1), face(n);
    for (std::uint64_t code = 0; code < out.tuples(); ++code) {
        t = detail::decode_tuple(code, n + 1, G.order());
        Vec acc = m.act(t[0], f.at(std::span<const Index>(t).subspan(1)));
        for (unsigned i = 1; i <= n; ++i) {
            for (unsigned j = 0, w = 0; j <= n; ++j) {
                if (j == i) continue;
                face[w++] = (j == i - 1) ? G.mul(t[i - 1], t[i]) : t[j];
            }
            auto v = f.at(face);
            for (std::size_t c = 0; c < r; ++c)
                acc[c] = (i % 2) ? modular::sub(acc[c], v[c], q) : modular::add(acc[c], v[c], q);
        }
        auto last = f.at(std::span<const Index>(t).first(n));
        for (std::size_t c = 0; c < r; ++c)
            acc[c] = ((n + 1) % 2) ? modular::sub(acc[c], last[c], q) : modular::add(acc[c], last[c], q);
        out.set(t, acc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Differential matrices

/// Generates row `row` of d_n as sparse entries (duplicates allowed; they add).
class DifferentialRows {
public:
    DifferentialRows(const GModule& m, unsigned n) : m_(m), n_(n), order_(m.group().order()) {
        const std::uint64_t lim = ~std::uint64_t(0) >> 8;
        rows_ = detail::checked_pow(order_, n + 1, lim) * m.rank();
        cols_ = detail::checked_pow(order_, n, lim) * m.rank();
    }

    std::uint64_t rows() const { return rows_; }
    std::uint64_t cols() const { return cols_; }

    void row(std::uint64_t index, std::vector<SparseEntry>& out) const {
        out.clear();
        const auto& G = m_.group();
        const std::size_t r = m_.rank();
        const Residue q = m_.modulus();
        const std::size_t c = index % r;
        std::uint64_t code = index / r;
        Index t[16];
        for (unsigned i = n_ + 1; i-- > 0;) {
            t[i] = Index(code % order_);
            code /= order_;
        }
        auto enc = [&](auto&& at, unsigned len) {
            std::uint64_t e = 0;
            for (unsigned i = 0; i < len; ++i) e = e * order_ + at(i);
            return e;
        };
        const Matrix& A = m_.action(t[0]);
        std::uint64_t tail = enc([&](unsigned i) { return t[i + 1]; }, n_);
        for (std::size_t j = 0; j < r; ++j)
            if (A(c, j)) out.push_back({std::size_t(tail * r + j), A(c, j)});
        for (unsigned i = 1; i <= n_; ++i) {
            std::uint64_t e = enc(
                [&](unsigned j) { return j < i - 1 ? t[j] : (j == i - 1 ? G.mul(t[i - 1], t[i]) : t[j + 1]); }, n_);
            out.push_back({std::size_t(e * r + c), (i % 2) ? q - 1 : Residue(1)});
        }
        std::uint64_t head = enc([&](unsigned i) { return t[i]; }, n_);
        out.push_back({std::size_t(head * r + c), ((n_ + 1) % 2) ? q - 1 : Residue(1)});
    }

    Matrix materialize() const {
        Matrix a(m_.prime(), m_.k(), rows_, cols_);
        std::vector<SparseEntry> buf;
        const Residue q = m_.modulus();
        for (std::uint64_t i = 0; i < rows_; ++i) {
            row(i, buf);
            for (const auto& e : buf) a(i, e.col) = modular::add(a(i, e.col), e.value, q);
        }
        return a;
    }

private:
    const GModule& m_;
    unsigned n_;
    std::uint64_t order_, rows_ = 0, cols_ = 0;
};

inline FpMatrix differential_matrix_fp(const GModule& m, unsigned n) {
    if (!m.is_field()) throw UnsupportedError("F_p differential requested for Z/p^k module");
    return mod_p(DifferentialRows(m, n).materialize());
}

/// rank of d_n over F_p.  Above the dense threshold rows are streamed into an
/// accumulator in fixed order; with jobs > 1 row generation is split across
/// workers in chunks but absorption stays serial.
inline std::size_t differential_rank(const GModule& m, unsigned n, const CohomologyOptions& opt = {}) {
    if (!m.is_field()) throw UnsupportedError("F_p rank requested for Z/p^k module");
    DifferentialRows gen(m, n);
    if (gen.rows() > opt.max_rows)
        throw SizeError("degree " + std::to_string(n + 1) + " differential needs " + std::to_string(gen.rows()) +
                        " rows, budget is " + std::to_string(opt.max_rows));
    if (gen.rows() <= opt.dense_threshold) return rank_dense(mod_p(gen.materialize()));

    EchelonAccumulator acc(m.prime(), gen.cols());
    const unsigned jobs = std::max(1u, opt.jobs);
    if (jobs == 1) {
        std::vector<SparseEntry> buf;
        for (std::uint64_t i = 0; i < gen.rows(); ++i) {
            gen.row(i, buf);
            acc.absorb_sparse(buf);
            if (acc.rank() == gen.cols()) break;
        }
        return acc.rank();
    }
    constexpr std::uint64_t chunk = 8192;
    std::vector<std::vector<std::vector<SparseEntry>>> batches(jobs);
    for (std::uint64_t base = 0; base < gen.rows() && acc.rank() < gen.cols(); base += chunk * jobs) {
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < jobs; ++w)
            workers.emplace_back([&, w] {
                auto& out = batches[w];
                out.clear();
                std::uint64_t lo = base + w * chunk, hi = std::min(gen.rows(), lo + chunk);
                for (std::uint64_t i = lo; i < hi; ++i) {
                    out.emplace_back();
                    gen.row(i, out.back());
                }
            });
        for (auto& t : workers) t.join();
        for (const auto& batch : batches)
            for (const auto& row : batch) acc.absorb_sparse(row);
    }
    return acc.rank();
}

// ---------------------------------------------------------------------------
// Reports

struct Factor {
    Residue prime;
    int exponent;
    friend bool operator==(const Factor&, const Factor&) = default;
};

struct CohomologyReport {
    unsigned max_degree = 0;
    /// Invariant factors Z/prime^exponent of H^n, one list per degree.
    std::vector<std::vector<Factor>> factors;

    /// Number of cyclic factors; equals dim H^n for F_p coefficients.
    std::size_t dim(unsigned n) const { return factors.at(n).size(); }
    std::vector<std::size_t> dims() const {
        std::vector<std::size_t> d;
        for (const auto& f : factors) d.push_back(f.size());
        return d;
    }
    bool vanishes() const {
        return std::all_of(factors.begin(), factors.end(), [](const auto& f) { return f.empty(); });
    }
    /// log_prime |H^n| summed over factors of the given prime.
    int log_order(unsigned n, Residue prime) const {
        int s = 0;
        for (const auto& f : factors.at(n))
            if (f.prime == prime) s += f.exponent;
        return s;
    }
};

/// dim H^1 from crossed homomorphisms determined by their generator values.
inline std::size_t h1_dim_fast(const GModule& m) {
    if (!m.is_field()) throw UnsupportedError("fast H^1 path requires F_p coefficients");
    const auto& G = m.group();
    const Residue p = m.prime();
    const std::size_t r = m.rank(), ng = G.generators().size(), unknowns = ng * r;
    // L[i] : (r x unknowns) expresses f(element i) linearly in the generator values.
    std::vector<std::vector<Vec>> L(G.order(), std::vector<Vec>(r, Vec(unknowns, 0)));
    auto compose = [&](std::size_t s, const std::vector<Vec>& prev) {
        // f(s x) = f(s) + s f(x)
        const Matrix& A = G.order() ? m.generator_action()[s] : Matrix();
        std::vector<Vec> out(r, Vec(unknowns, 0));
        for (std::size_t a = 0; a < r; ++a) {
            out[a][s * r + a] = 1;
            for (std::size_t b = 0; b < r; ++b) {
                Residue coef = A(a, b);
                if (!coef) continue;
                for (std::size_t u = 0; u < unknowns; ++u)
                    if (prev[b][u]) out[a][u] = modular::add(out[a][u], modular::mul(coef, prev[b][u], p), p);
            }
        }
        return out;
    };
    for (Index i = 1; i < G.order(); ++i) L[i] = compose(G.word_gen(i), L[G.word_parent(i)]);

    EchelonAccumulator constraints(p, unknowns);
    for (Index i = 0; i < G.order(); ++i)
        for (std::size_t s = 0; s < ng; ++s) {
            auto expected = compose(s, L[i]);
            const auto& actual = L[G.mul(G.generator_index(s), i)];
            for (std::size_t a = 0; a < r; ++a) {
                Vec row(unknowns);
                for (std::size_t u = 0; u < unknowns; ++u) row[u] = modular::sub(actual[a][u], expected[a][u], p);
                constraints.absorb(row);
            }
        }
    const std::size_t z1 = unknowns - constraints.rank();
    const std::size_t b1 = r - invariants(m).size();
    return z1 - b1;
}

namespace detail {

// Invariant factors of H^n for a Z/l^k module via the Smith form of d_n and
// a presentation of ker d_n / im d_{n-1} in the diagonalizing coordinates.
inline std::vector<int> zpk_cohomology_exponents(const GModule& m, unsigned n, const CohomologyOptions& opt) {
    DifferentialRows dn(m, n);
    if (dn.rows() * dn.cols() > 64'000'000 || dn.rows() > opt.max_rows)
        throw SizeError("degree " + std::to_string(n) + " Z/p^k cohomology exceeds the dense budget");
    const Residue p = m.prime(), q = m.modulus();
    const int k = m.k();
    auto sm = smith(dn.materialize(), true);
    const std::size_t cols = dn.cols();
    std::vector<int> e(cols, k);
    for (std::size_t i = 0; i < sm.exponents.size(); ++i) e[i] = sm.exponents[i];

    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < cols; ++i)
        if (e[i] > 0) live.push_back(i);
    if (live.empty()) return {};

    std::vector<Vec> relation_cols;
    for (std::size_t a = 0; a < live.size(); ++a) {
        Vec col(live.size(), 0);
        col[a] = Residue(modular::ipow(p, unsigned(e[live[a]])) % q);
        relation_cols.push_back(col);
    }
    if (n > 0) {
        Matrix Y = *sm.col_inverse * DifferentialRows(m, n - 1).materialize();
        for (std::size_t c = 0; c < Y.cols(); ++c) {
            Vec col(live.size(), 0);
            bool nonzero = false;
            for (std::size_t a = 0; a < live.size(); ++a) {
                const std::size_t i = live[a];
                const Residue scale = Residue(modular::ipow(p, unsigned(k - e[i])));
                const Residue y = Y(i, c);
                if (y % scale != 0) throw ConsistencyError("image of d_{n-1} escapes ker d_n");
                col[a] = y / scale;
                nonzero |= col[a] != 0;
            }
            if (nonzero) relation_cols.push_back(std::move(col));
        }
        // Coordinates outside `live` must vanish for cocycles; they are zero by exactness.
    }
    Matrix P(p, k, live.size(), relation_cols.size());
    for (std::size_t c = 0; c < relation_cols.size(); ++c)
        for (std::size_t a = 0; a < live.size(); ++a) P(a, c) = relation_cols[c][a];
    std::vector<int> out;
    for (int f : smith(P).exponents)
        if (f > 0) out.push_back(f);
    return out;
}

} // namespace detail

inline CohomologyReport cohomology_dims(const GModule& m, unsigned max_degree, const CohomologyOptions& opt = {}) {
    CohomologyReport rep;
    rep.max_degree = max_degree;
    const std::uint64_t order = m.group().order();
    if (!m.is_field()) {
        for (unsigned n = 0; n <= max_degree; ++n) {
            std::vector<Factor> f;
            for (int e : detail::zpk_cohomology_exponents(m, n, opt)) f.push_back({m.prime(), e});
            rep.factors.push_back(std::move(f));
        }
        return rep;
    }
    std::vector<std::size_t> ranks;
    for (unsigned n = 0; n <= max_degree; ++n) {
        std::size_t dim;
        const std::uint64_t cn = detail::checked_pow(order, n, ~std::uint64_t(0) >> 8) * m.rank();
        if (n == 1 && order > opt.fast_h1_order && max_degree == 1) {
            dim = h1_dim_fast(m);
        } else {
            if (ranks.size() <= n) ranks.push_back(differential_rank(m, n, opt));
            dim = (cn - ranks[n]) - (n ? ranks[n - 1] : 0);
        }
        rep.factors.emplace_back(dim, Factor{m.prime(), 1});
        if (n == 0 && ranks.empty()) ranks.push_back(differential_rank(m, 0, opt));
    }
    return rep;
}

/// Cohomology of a direct sum of blocks (possibly over different primes).
inline CohomologyReport cohomology_dims(const std::vector<GModule>& blocks, unsigned max_degree,
                                        const CohomologyOptions& opt = {}) {
    CohomologyReport rep;
    rep.max_degree = max_degree;
    rep.factors.assign(max_degree + 1, {});
    for (const auto& b : blocks) {
        auto r = cohomology_dims(b, max_degree, opt);
        for (unsigned n = 0; n <= max_degree; ++n)
            rep.factors[n].insert(rep.factors[n].end(), r.factors[n].begin(), r.factors[n].end());
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Classes and representatives (F_p, materialized; small groups)

/// Cocycle representatives for a basis of H^n(G, M), with projection of an
/// arbitrary cocycle onto that basis.  Representatives are the kernel basis
/// vectors of d_n, in kernel_basis order, that are independent modulo im d_{n-1}.
class ClassBasis {
public:
    ClassBasis(const GModule& m, unsigned n) : m_(&m), n_(n) {
        if (!m.is_field()) throw UnsupportedError("class bases require F_p coefficients");
        const Residue p = m.prime();
        FpMatrix dn = differential_matrix_fp(m, n);
        cols_ = dn.cols();
        EchelonAccumulator acc(p, cols_);
        if (n > 0) {
            FpMatrix prev = differential_matrix_fp(m, n - 1).transpose();
            for (std::size_t i = 0; i < prev.rows(); ++i) {
                Vec col = prev.row(i);
                if (acc.absorb(col)) boundary_.push_back(std::move(col));
            }
        }
        for (auto& z : kernel_basis(dn))
            if (acc.absorb(z)) reps_.push_back(std::move(z));
    }

    const GModule& module() const { return *m_; }
    unsigned degree() const { return n_; }
    std::size_t dim() const { return reps_.size(); }
    const std::vector<Vec>& representatives() const { return reps_; }
    const std::vector<Vec>& boundary_basis() const { return boundary_; }

    /// Coefficients of the class of z on the representative basis.
    Vec project(std::span<const Residue> z) const {
        const Residue p = m_->prime();
        FpMatrix a(p, cols_, boundary_.size() + reps_.size());
        for (std::size_t j = 0; j < boundary_.size(); ++j)
            for (std::size_t i = 0; i < cols_; ++i) a.set(i, j, boundary_[j][i]);
        for (std::size_t j = 0; j < reps_.size(); ++j)
            for (std::size_t i = 0; i < cols_; ++i) a.set(i, boundary_.size() + j, reps_[j][i]);
        auto x = solve(a, z);
        if (!x) throw PreconditionError("vector is not a cocycle");
        return Vec(x->begin() + boundary_.size(), x->end());
    }

private:
    const GModule* m_;
    unsigned n_;
    std::size_t cols_ = 0;
    std::vector<Vec> boundary_, reps_;
};

struct TrivialityResult {
    bool trivial;
    std::optional<Cochain> primitive;
};

/// Decides whether a cocycle is a coboundary; returns a primitive when it is.
inline TrivialityResult class_is_trivial(const Cochain& f) {
    const GModule& m = f.module();
    if (!differential(f).is_zero()) throw PreconditionError("class_is_trivial: cochain is not a cocycle");
    if (!m.is_field()) throw UnsupportedError("class_is_trivial requires F_p coefficients");
    if (f.degree() == 0) {
        if (f.is_zero()) return {true, Cochain(m, 0)};
        return {false, std::nullopt};
    }
    auto x = solve(differential_matrix_fp(m, f.degree() - 1), f.values());
    if (!x) return {false, std::nullopt};
    return {true, Cochain(m, f.degree() - 1, std::move(*x))};
}

inline bool totally_trivial(const GModule& m, unsigned max_degree, const CohomologyOptions& opt = {}) {
    return cohomology_dims(m, max_degree, opt).vanishes();
}

struct Prop23Result {
    bool a_holds;  // H^0..H^2 vanish
    bool b_holds;  // H^0 = 0 and no p-torsion
};

/// Both sides of the p-group criterion for totally trivial cohomology, on a
/// finite module given as blocks.  Their agreement is the tested statement.
inline Prop23Result prop23_check(const PermGroup& g, Residue p, const std::vector<GModule>& blocks,
                                 const CohomologyOptions& opt = {}) {
    if (!is_p_power(g.order(), p)) throw PreconditionError("prop23_check: group is not a p-group");
    auto rep = cohomology_dims(blocks, 2, opt);
    bool h0_zero = rep.factors[0].empty();
    bool no_p = std::none_of(blocks.begin(), blocks.end(), [&](const GModule& b) { return b.prime() == p; });
    return {rep.vanishes(), h0_zero && no_p};
}

struct HsVerdict {
    enum class Kind { HNontrivial, HTrivialGTrivial, HTrivialGNontrivial };
    Kind kind;
    unsigned degree = 0;                  // first nonvanishing degree when applicable
    std::vector<std::size_t> h_dims, g_dims;
    std::optional<Vec> witness;           // G-cocycle representing a nonzero class
};

inline const char* to_string(HsVerdict::Kind k) {
    switch (k) {
    case HsVerdict::Kind::HNontrivial: return "HNontrivial";
    case HsVerdict::Kind::HTrivialGTrivial: return "HTrivialGTrivial";
    case HsVerdict::Kind::HTrivialGNontrivial: return "HTrivialGNontrivial";
    }
    return "?";
}

/// Classifies the instance (G, H, M) through degree N.  HTrivialGNontrivial
/// witnesses failure of the vanishing transfer for this module.
inline HsVerdict hs_property_verdict(const GModule& m, const PermGroup& h, unsigned max_degree,
                                     const CohomologyOptions& opt = {}) {
    if (!is_subgroup(h, m.group())) throw ContainmentError("hs_property_verdict: h is not a subgroup of g");
    HsVerdict v;
    GModule mh = restrict_module(m, h);
    v.h_dims = cohomology_dims(mh, max_degree, opt).dims();
    for (unsigned n = 0; n <= max_degree; ++n)
        if (v.h_dims[n]) {
            v.kind = HsVerdict::Kind::HNontrivial;
            v.degree = n;
            return v;
        }
    v.g_dims = cohomology_dims(m, max_degree, opt).dims();
    for (unsigned n = 0; n <= max_degree; ++n)
        if (v.g_dims[n]) {
            v.kind = HsVerdict::Kind::HTrivialGNontrivial;
            v.degree = n;
            if (m.is_field()) v.witness = ClassBasis(m, n).representatives().at(0);
            return v;
        }
    v.kind = HsVerdict::Kind::HTrivialGTrivial;
    return v;
}

} // namespace hsprop
