#pragma once

// Finite G-modules: free Z/l^k-modules of finite rank (F_l-vector spaces
// when k = 1) with a linear action given by one matrix per group generator.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hsprop/groups.hpp"
#include "hsprop/linalg.hpp"

namespace hsprop {

using Matrix = ZpkMatrix;

inline Vec mat_apply(const Matrix& a, std::span<const Residue> x) {
    Vec y(a.rows(), 0);
    const Residue q = a.modulus();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += std::uint64_t(a(i, j)) * x[j];
        y[i] = Residue(acc % q);
    }
    return y;
}

inline Matrix mat_transpose(const Matrix& a) {
    Matrix t(a.p(), a.k(), a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

inline FpMatrix mod_p(const Matrix& a) {
    FpMatrix m(a.p(), a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m.set(i, j, a(i, j) % a.p());
    return m;
}

inline Matrix from_fp(const FpMatrix& m) {
    Matrix a(m.p(), 1, m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = m.at(i, j);
    return a;
}

class GModule {
public:
    /// Builds the module and extends the generator action to every element
    /// along the group's BFS words.  Throws ConstructionError if the matrices
    /// are not invertible or do not satisfy the group's relations.
    GModule(std::shared_ptr<const PermGroup> group, Residue prime, int k, std::size_t rank,
            std::vector<Matrix> generator_action)
        : group_(std::move(group)), prime_(prime), k_(k), rank_(rank), gens_(std::move(generator_action)) {
        if (!modular::is_prime(prime) || k < 1) throw PreconditionError("module coefficients must be Z/p^k");
        if (gens_.size() != group_->generators().size())
            throw DimensionError("need one action matrix per group generator");
        for (const auto& a : gens_) {
            if (a.rows() != rank_ || a.cols() != rank_ || a.p() != prime_ || a.k() != k_)
                throw DimensionError("action matrix shape or modulus mismatch");
            if (hsprop::rank(mod_p(a)) != rank_) throw ConstructionError("action matrix is not invertible");
        }
        const auto& G = *group_;
        elem_.reserve(G.order());
        elem_.push_back(Matrix::identity(prime_, k_, rank_));
        for (Index i = 1; i < G.order(); ++i) elem_.push_back(gens_[G.word_gen(i)] * elem_[G.word_parent(i)]);
        for (Index i = 0; i < G.order(); ++i)
            for (std::size_t s = 0; s < gens_.size(); ++s) {
                Index si = G.mul(G.generator_index(s), i);
                if (!(elem_[si] == gens_[s] * elem_[i]))
                    throw ConstructionError("action matrices do not respect the group relations");
            }
    }

    const PermGroup& group() const { return *group_; }
    const std::shared_ptr<const PermGroup>& group_ptr() const { return group_; }
    Residue prime() const { return prime_; }
    int k() const { return k_; }
    Residue modulus() const { return Residue(modular::ipow(prime_, unsigned(k_))); }
    std::size_t rank() const { return rank_; }
    bool is_field() const { return k_ == 1; }

    const std::vector<Matrix>& generator_action() const { return gens_; }
    const Matrix& action(Index element) const { return elem_[element]; }
    Vec act(Index element, std::span<const Residue> v) const { return mat_apply(elem_[element], v); }

private:
    std::shared_ptr<const PermGroup> group_;
    Residue prime_;
    int k_;
    std::size_t rank_;
    std::vector<Matrix> gens_;
    std::vector<Matrix> elem_;
};

inline std::shared_ptr<const PermGroup> share(PermGroup g) { return std::make_shared<const PermGroup>(std::move(g)); }

// ---------------------------------------------------------------------------
// Constructors

inline GModule trivial_module(std::shared_ptr<const PermGroup> g, Residue p, int k = 1, std::size_t rank = 1) {
    std::vector<Matrix> gens(g->generators().size(), Matrix::identity(p, k, rank));
    return GModule(std::move(g), p, k, rank, std::move(gens));
}

inline int perm_sign(const Perm& s) {
    std::vector<bool> seen(s.degree(), false);
    int sign = 1;
    for (Index i = 0; i < s.degree(); ++i) {
        if (seen[i]) continue;
        std::size_t len = 0;
        for (Index j = i; !seen[j]; j = s(j)) seen[j] = true, ++len;
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

/// Rank-one module where g acts by the sign of the permutation.
inline GModule sign_module(std::shared_ptr<const PermGroup> g, Residue p, int k = 1) {
    std::vector<Matrix> gens;
    for (const auto& s : g->generators()) {
        Matrix a(p, k, 1, 1);
        a.set(0, 0, perm_sign(s));
        gens.push_back(a);
    }
    return GModule(std::move(g), p, k, 1, std::move(gens));
}

/// Permutation module on the points the group acts on: s e_x = e_{s(x)}.
inline GModule permutation_module(std::shared_ptr<const PermGroup> g, Residue p, int k = 1) {
    const std::size_t n = g->degree();
    std::vector<Matrix> gens;
    for (const auto& s : g->generators()) {
        Matrix a(p, k, n, n);
        for (Index x = 0; x < n; ++x) a(s(x), x) = 1;
        gens.push_back(a);
    }
    return GModule(std::move(g), p, k, n, std::move(gens));
}

/// Regular representation over F_p (or Z/p^k): basis indexed by group elements.
inline GModule regular_module(std::shared_ptr<const PermGroup> g, Residue p, int k = 1) {
    const std::size_t n = g->order();
    std::vector<Matrix> gens;
    for (std::size_t s = 0; s < g->generators().size(); ++s) {
        Matrix a(p, k, n, n);
        Index gi = g->generator_index(s);
        for (Index x = 0; x < n; ++x) a(g->mul(gi, x), x) = 1;
        gens.push_back(a);
    }
    return GModule(std::move(g), p, k, n, std::move(gens));
}

// ---------------------------------------------------------------------------
// Operations

/// Basis of the fixed space M^G (F_p coefficients only).
inline std::vector<Vec> invariants(const GModule& m) {
    if (!m.is_field()) throw UnsupportedError("invariants basis requires field coefficients; use cohomology for Z/p^k");
    const Residue p = m.prime();
    const std::size_t r = m.rank();
    const auto& gens = m.generator_action();
    FpMatrix stacked(p, gens.size() * r, r);
    for (std::size_t s = 0; s < gens.size(); ++s)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                stacked.set(s * r + i, j, modular::sub(gens[s](i, j), i == j ? 1 : 0, p));
    return kernel_basis(stacked);
}

inline GModule restrict_module(const GModule& m, const PermGroup& h) {
    if (!is_subgroup(h, m.group())) throw ContainmentError("restriction target is not a subgroup");
    std::vector<Matrix> gens;
    for (const auto& s : h.generators()) gens.push_back(m.action(*m.group().find(s)));
    return GModule(share(h), m.prime(), m.k(), m.rank(), std::move(gens));
}

inline GModule restrict_module(const GModule& m, std::shared_ptr<const PermGroup> h) {
    if (!is_subgroup(*h, m.group())) throw ContainmentError("restriction target is not a subgroup");
    std::vector<Matrix> gens;
    for (const auto& s : h->generators()) gens.push_back(m.action(*m.group().find(s)));
    return GModule(std::move(h), m.prime(), m.k(), m.rank(), std::move(gens));
}

namespace detail {
inline void require_same(const GModule& a, const GModule& b) {
    if (a.group_ptr() != b.group_ptr() && !(a.group().generators() == b.group().generators()))
        throw PreconditionError("modules are over different groups");
    if (a.prime() != b.prime() || a.k() != b.k()) throw ParameterMismatch("modules have different coefficients");
}
} // namespace detail

/// Contragredient: g acts by the transpose of action(g^{-1}).
inline GModule dual(const GModule& m) {
    const auto& G = m.group();
    std::vector<Matrix> gens;
    for (std::size_t s = 0; s < G.generators().size(); ++s)
        gens.push_back(mat_transpose(m.action(G.inv(G.generator_index(s)))));
    return GModule(m.group_ptr(), m.prime(), m.k(), m.rank(), std::move(gens));
}

inline GModule direct_sum(const GModule& a, const GModule& b) {
    detail::require_same(a, b);
    const std::size_t ra = a.rank(), rb = b.rank();
    std::vector<Matrix> gens;
    for (std::size_t s = 0; s < a.generator_action().size(); ++s) {
        Matrix x(a.prime(), a.k(), ra + rb, ra + rb);
        const auto &A = a.generator_action()[s], &B = b.generator_action()[s];
        for (std::size_t i = 0; i < ra; ++i)
            for (std::size_t j = 0; j < ra; ++j) x(i, j) = A(i, j);
        for (std::size_t i = 0; i < rb; ++i)
            for (std::size_t j = 0; j < rb; ++j) x(ra + i, ra + j) = B(i, j);
        gens.push_back(x);
    }
    return GModule(a.group_ptr(), a.prime(), a.k(), ra + rb, std::move(gens));
}

/// Hom(M, N) with basis E_{ij} (e_j of M to e_i of N) at coordinate i*rank(M)+j;
/// (g.f) = N(g) f M(g)^{-1}.
inline GModule hom_module(const GModule& m, const GModule& n) {
    detail::require_same(m, n);
    const auto& G = m.group();
    const std::size_t rm = m.rank(), rn = n.rank(), dim = rm * rn;
    std::vector<Matrix> gens;
    for (std::size_t s = 0; s < G.generators().size(); ++s) {
        Index gi = G.generator_index(s);
        const Matrix& Ng = n.action(gi);
        const Matrix& Mginv = m.action(G.inv(gi));
        Matrix x(m.prime(), m.k(), dim, dim);
        for (std::size_t i = 0; i < rn; ++i)
            for (std::size_t j = 0; j < rm; ++j) {
                Matrix e(m.prime(), m.k(), rn, rm);
                e(i, j) = 1;
                Matrix img = Ng * e * Mginv;
                for (std::size_t a = 0; a < rn; ++a)
                    for (std::size_t b = 0; b < rm; ++b) x(a * rm + b, i * rm + j) = img(a, b);
            }
        gens.push_back(x);
    }
    return GModule(m.group_ptr(), m.prime(), m.k(), dim, std::move(gens));
}

namespace detail {
// Coordinates of v in the span of the given basis (columns), or nullopt.
inline std::optional<Vec> coordinates(const std::vector<Vec>& basis, std::span<const Residue> v, Residue p) {
    FpMatrix b(p, v.size(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < v.size(); ++i) b.set(i, j, basis[j][i]);
    return solve(b, v);
}
} // namespace detail

/// Submodule spanned by an invariant, linearly independent set of vectors (F_p).
inline GModule submodule(const GModule& m, const std::vector<Vec>& basis) {
    if (!m.is_field()) throw UnsupportedError("submodule requires field coefficients");
    const Residue p = m.prime();
    std::vector<Matrix> gens;
    for (const auto& a : m.generator_action()) {
        Matrix x(p, 1, basis.size(), basis.size());
        for (std::size_t j = 0; j < basis.size(); ++j) {
            auto c = detail::coordinates(basis, mat_apply(a, basis[j]), p);
            if (!c) throw ConstructionError("subspace is not invariant under the action");
            for (std::size_t i = 0; i < basis.size(); ++i) x(i, j) = (*c)[i];
        }
        gens.push_back(x);
    }
    return GModule(m.group_ptr(), p, 1, basis.size(), std::move(gens));
}

struct Extension {
    GModule total;              // M'
    std::vector<Vec> sub;       // basis of K inside M'
    GModule quotient;           // M = M'/K
    FpMatrix inclusion;         // rank(M') x dim K
    FpMatrix projection;        // dim M x rank(M')
    std::vector<Vec> lift;      // M' vectors projecting onto the basis of M
};

/// Builds 0 -> K -> M' -> M'/K -> 0 for an invariant subspace K.  The
/// quotient basis is the image of the standard vectors not in K's pivot span.
inline Extension make_extension(const GModule& total, const std::vector<Vec>& sub) {
    if (!total.is_field()) throw UnsupportedError("extensions require field coefficients");
    const Residue p = total.prime();
    const std::size_t r = total.rank(), ks = sub.size();
    submodule(total, sub);  // invariance check

    // Complement: standard basis vectors extending the sub basis.
    EchelonAccumulator acc(p, r);
    for (const auto& v : sub)
        if (!acc.absorb(v)) throw ConstructionError("sub basis is not independent");
    std::vector<Vec> lift;
    for (std::size_t i = 0; i < r && lift.size() < r - ks; ++i) {
        Vec e(r, 0);
        e[i] = 1;
        if (acc.absorb(e)) lift.push_back(e);
    }
    std::vector<Vec> full = sub;
    full.insert(full.end(), lift.begin(), lift.end());

    // Projection: coordinates in the full basis, keep the complement part.
    FpMatrix proj(p, r - ks, r);
    for (std::size_t j = 0; j < r; ++j) {
        Vec e(r, 0);
        e[j] = 1;
        auto c = *detail::coordinates(full, e, p);
        for (std::size_t i = 0; i < r - ks; ++i) proj.set(i, j, c[ks + i]);
    }
    std::vector<Matrix> qgens;
    for (const auto& a : total.generator_action()) {
        Matrix x(p, 1, r - ks, r - ks);
        for (std::size_t j = 0; j < r - ks; ++j) {
            Vec img = proj.apply(mat_apply(a, lift[j]));
            for (std::size_t i = 0; i < r - ks; ++i) x(i, j) = img[i];
        }
        qgens.push_back(x);
    }
    FpMatrix incl(p, r, ks);
    for (std::size_t j = 0; j < ks; ++j)
        for (std::size_t i = 0; i < r; ++i) incl.set(i, j, sub[j][i]);
    GModule quot(total.group_ptr(), p, 1, r - ks, std::move(qgens));
    return Extension{total, sub, std::move(quot), std::move(incl), std::move(proj), std::move(lift)};
}

/// An equivariant section M -> M' (as a rank(M') x dim(M) matrix) or nullopt.
/// Unknowns are the entries of S; constraints are P S = I and g' S = S g.
inline std::optional<FpMatrix> split_check(const Extension& e) {
    const Residue p = e.total.prime();
    const std::size_t R = e.total.rank(), r = e.quotient.rank(), unknowns = R * r;
    const auto var = [&](std::size_t i, std::size_t j) { return i * r + j; };
    std::vector<Vec> rows;
    Vec rhs;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            Vec row(unknowns, 0);
            for (std::size_t i = 0; i < R; ++i) row[var(i, b)] = e.projection.at(a, i);
            rows.push_back(std::move(row));
            rhs.push_back(a == b ? 1 : 0);
        }
    for (std::size_t s = 0; s < e.total.generator_action().size(); ++s) {
        const Matrix& A = e.total.generator_action()[s];
        const Matrix& B = e.quotient.generator_action()[s];
        for (std::size_t i = 0; i < R; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                // (A S - S B)_{ij} = sum_k A_ik S_kj - sum_k S_ik B_kj
                Vec row(unknowns, 0);
                for (std::size_t k = 0; k < R; ++k) row[var(k, j)] = modular::add(row[var(k, j)], A(i, k), p);
                for (std::size_t k = 0; k < r; ++k) row[var(i, k)] = modular::sub(row[var(i, k)], B(k, j), p);
                rows.push_back(std::move(row));
                rhs.push_back(0);
            }
    }
    auto x = solve(FpMatrix::from_rows(p, rows, unknowns), rhs);
    if (!x) return std::nullopt;
    FpMatrix S(p, R, r);
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < r; ++j) S.set(i, j, (*x)[var(i, j)]);
    return S;
}

/// Freeness of M over F_p[C] for a cyclic p-group C: a generator s must have
/// rank((s-1)^{|C|-1}) = dim M / |C|, i.e. every Jordan block at 1 has full size.
inline bool free_over_cyclic(const GModule& m, const PermGroup& c) {
    const std::size_t n = c.order();
    if (!m.is_field()) throw UnsupportedError("freeness test requires F_p coefficients");
    if (!is_p_power(n, m.prime())) throw UnsupportedError("subgroup order is not a power of the module prime");
    std::optional<Index> gen;
    for (Index i = 0; i < n; ++i)
        if (c.element_order(i) == n) {
            gen = i;
            break;
        }
    if (!gen) throw UnsupportedError("subgroup is not cyclic");
    auto in_g = m.group().find(c.element(*gen));
    if (!in_g) throw ContainmentError("cyclic subgroup not contained in module group");
    if (m.rank() % n != 0) return false;

    const Residue p = m.prime();
    Matrix N = m.action(*in_g);
    for (std::size_t i = 0; i < m.rank(); ++i) N(i, i) = modular::sub(N(i, i), 1, p);
    Matrix power = Matrix::identity(p, 1, m.rank());
    for (std::size_t i = 0; i + 1 < n; ++i) power = power * N;
    return rank(mod_p(power)) == m.rank() / n;
}

} // namespace hsprop
