#pragma once

// Finite groups as permutation groups with a full element table.
//
// Permutations act on the left and compose as (s*t)(x) = s(t(x)).  A closed
// group stores every element, indexed in BFS order from the identity (index
// 0), together with an O(1) multiplication table.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "hsprop/errors.hpp"

namespace hsprop {

using Index = std::uint32_t;

class Perm {
public:
    Perm() = default;
    explicit Perm(std::vector<Index> images) : images_(std::move(images)) {
        std::vector<bool> seen(images_.size(), false);
        for (Index x : images_) {
            if (x >= images_.size() || seen[x]) throw FormatError("permutation images are not a bijection");
            seen[x] = true;
        }
    }

    static Perm identity(std::size_t n) {
        std::vector<Index> im(n);
        std::iota(im.begin(), im.end(), 0);
        return Perm(std::move(im));
    }

    /// Cycle notation helper: cycle({0,1,2}, n) sends 0->1->2->0.
    static Perm cycle(const std::vector<Index>& c, std::size_t n) {
        auto im = identity(n).images_;
        for (std::size_t i = 0; i < c.size(); ++i) im.at(c[i]) = c[(i + 1) % c.size()];
        return Perm(std::move(im));
    }

    std::size_t degree() const { return images_.size(); }
    Index operator()(Index x) const { return images_[x]; }
    const std::vector<Index>& images() const { return images_; }

    Perm inverse() const {
        std::vector<Index> inv(images_.size());
        for (Index i = 0; i < images_.size(); ++i) inv[images_[i]] = i;
        return Perm(std::move(inv));
    }

    friend Perm operator*(const Perm& s, const Perm& t) {
        if (s.degree() != t.degree()) throw DimensionError("composing permutations of different degree");
        std::vector<Index> im(s.degree());
        for (Index x = 0; x < im.size(); ++x) im[x] = s(t(x));
        Perm r;
        r.images_ = std::move(im);
        return r;
    }

    friend bool operator==(const Perm&, const Perm&) = default;
    friend auto operator<=>(const Perm&, const Perm&) = default;

private:
    std::vector<Index> images_;
};

struct PermHash {
    std::size_t operator()(const Perm& p) const {
        std::size_t h = 1469598103934665603ull;
        for (Index x : p.images()) h = (h ^ x) * 1099511628211ull;
        return h;
    }
};

inline constexpr std::size_t kDefaultClosureCap = 10000;

class PermGroup {
public:
    PermGroup() = default;

    std::size_t degree() const { return degree_; }
    std::size_t order() const { return elements_.size(); }
    const std::vector<Perm>& generators() const { return generators_; }
    const std::vector<Perm>& elements() const { return elements_; }
    const Perm& element(Index i) const { return elements_[i]; }

    Index mul(Index a, Index b) const { return table_[std::size_t(a) * order() + b]; }
    Index inv(Index a) const { return inverse_[a]; }
    Index conj(Index s, Index x) const { return mul(mul(s, x), inv(s)); }

    /// BFS tree: element i = generators[word_gen(i)] * element(word_parent(i)) for i > 0.
    Index word_parent(Index i) const { return parent_[i]; }
    std::size_t word_gen(Index i) const { return via_gen_[i]; }
    /// Index of generator g in the element list.
    Index generator_index(std::size_t g) const { return gen_index_[g]; }

    std::optional<Index> find(const Perm& p) const {
        auto it = index_.find(p);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    bool contains(const Perm& p) const { return index_.count(p) != 0; }

    Index element_order(Index i) const {
        Index k = 1;
        for (Index x = i; x != 0; x = mul(x, i)) ++k;
        return k;
    }

    friend PermGroup closure(std::size_t degree, std::vector<Perm> generators, std::size_t cap);

private:
    std::size_t degree_ = 0;
    std::vector<Perm> generators_;
    std::vector<Perm> elements_;
    std::unordered_map<Perm, Index, PermHash> index_;
    std::vector<Index> table_, inverse_, parent_, gen_index_;
    std::vector<std::size_t> via_gen_;
};

/// Generated subgroup of Sym(degree).  Elements are listed breadth-first by
/// word length, ties broken by generator order.
inline PermGroup closure(std::size_t degree, std::vector<Perm> generators, std::size_t cap = kDefaultClosureCap) {
    for (const auto& g : generators)
        if (g.degree() != degree) throw DimensionError("generator degree does not match group degree");

    PermGroup G;
    G.degree_ = degree;
    G.generators_ = std::move(generators);
    G.elements_.push_back(Perm::identity(degree));
    G.index_.emplace(G.elements_[0], 0);
    G.parent_.push_back(0);
    G.via_gen_.push_back(0);
    for (std::size_t head = 0; head < G.elements_.size(); ++head) {
        for (std::size_t s = 0; s < G.generators_.size(); ++s) {
            Perm next = G.generators_[s] * G.elements_[head];
            if (G.index_.count(next)) continue;
            if (G.elements_.size() >= cap)
                throw SizeError("group closure exceeds cap of " + std::to_string(cap) + " elements");
            G.index_.emplace(next, Index(G.elements_.size()));
            G.elements_.push_back(std::move(next));
            G.parent_.push_back(Index(head));
            G.via_gen_.push_back(s);
        }
    }

    const std::size_t n = G.elements_.size();
    G.table_.assign(n * n, 0);
    // Fill row by row using left multiplication by generators along the BFS tree:
    // row(i) = gen * row(parent) composed pointwise.
    std::vector<std::vector<Index>> left_gen(G.generators_.size(), std::vector<Index>(n));
    for (std::size_t s = 0; s < G.generators_.size(); ++s)
        for (Index j = 0; j < n; ++j) left_gen[s][j] = G.index_.at(G.generators_[s] * G.elements_[j]);
    for (Index j = 0; j < n; ++j) G.table_[j] = j;
    for (Index i = 1; i < n; ++i) {
        const auto& lg = left_gen[G.via_gen_[i]];
        const Index* prow = &G.table_[std::size_t(G.parent_[i]) * n];
        Index* row = &G.table_[std::size_t(i) * n];
        for (Index j = 0; j < n; ++j) row[j] = lg[prow[j]];
    }
    G.inverse_.assign(n, 0);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (G.table_[std::size_t(i) * n + j] == 0) {
                G.inverse_[i] = j;
                break;
            }
    G.gen_index_.resize(G.generators_.size());
    for (std::size_t s = 0; s < G.generators_.size(); ++s) G.gen_index_[s] = G.index_.at(G.generators_[s]);
    return G;
}

/// Indices in g of the elements of h; throws if h is not contained in g.
inline std::vector<Index> embedding(const PermGroup& h, const PermGroup& g) {
    if (h.degree() != g.degree()) throw ContainmentError("subgroup degree differs from group degree");
    std::vector<Index> idx(h.order());
    for (Index i = 0; i < h.order(); ++i) {
        auto j = g.find(h.element(i));
        if (!j) throw ContainmentError("subgroup element not contained in the ambient group");
        idx[i] = *j;
    }
    return idx;
}

inline bool is_subgroup(const PermGroup& h, const PermGroup& g) {
    if (h.degree() != g.degree()) return false;
    return std::all_of(h.elements().begin(), h.elements().end(), [&](const Perm& x) { return g.contains(x); });
}

/// Subgroup of g generated by the listed element indices.
inline PermGroup subgroup(const PermGroup& g, const std::vector<Index>& gens) {
    std::vector<Perm> perms;
    for (Index i : gens) perms.push_back(g.element(i));
    return closure(g.degree(), std::move(perms), g.order());
}

inline bool is_normal(const PermGroup& h, const PermGroup& g) {
    if (!is_subgroup(h, g)) throw ContainmentError("is_normal: h is not a subgroup of g");
    for (const auto& s : g.generators()) {
        Perm sinv = s.inverse();
        for (const auto& t : h.generators())
            if (!h.contains(s * t * sinv)) return false;
    }
    return true;
}

/// Smallest normal subgroup of k containing h.
inline PermGroup normal_closure(const PermGroup& h, const PermGroup& k) {
    if (!is_subgroup(h, k)) throw ContainmentError("normal_closure: h is not a subgroup of k");
    std::vector<Perm> gens = h.generators();
    PermGroup n = closure(k.degree(), gens, k.order());
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& s : k.generators()) {
            Perm sinv = s.inverse();
            for (std::size_t t = 0; t < gens.size() && !changed; ++t) {
                Perm c = s * gens[t] * sinv;
                if (!n.contains(c)) {
                    gens.push_back(c);
                    n = closure(k.degree(), gens, k.order());
                    changed = true;
                }
            }
            if (changed) break;
        }
    }
    return n;
}

/// Chain h = K_r < ... < K_0 = g of successive normal inclusions, listed from h
/// upward, obtained by iterated normal closure.  Empty optional if h is not
/// subnormal in g.
inline std::optional<std::vector<PermGroup>> subnormal_chain(const PermGroup& h, const PermGroup& g) {
    std::vector<PermGroup> down{g};
    while (true) {
        PermGroup next = normal_closure(h, down.back());
        if (next.order() == down.back().order()) break;
        down.push_back(std::move(next));
    }
    if (down.back().order() != h.order()) return std::nullopt;
    std::reverse(down.begin(), down.end());
    return down;
}

inline bool is_p_power(std::size_t n, std::size_t p) {
    if (n == 0) return false;
    while (n % p == 0) n /= p;
    return n == 1;
}

/// A Sylow p-subgroup, grown greedily: any x normalizing the current
/// p-subgroup P with x^p in P extends it.  Candidate order is a fixed-seed shuffle.
inline PermGroup sylow_p(const PermGroup& g, std::size_t p, std::uint64_t seed = 0) {
    std::size_t target = 1;
    for (std::size_t n = g.order(); n % p == 0; n /= p) target *= p;

    std::vector<Index> order(g.order());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<Index> gens;
    PermGroup P = closure(g.degree(), {}, 1);
    while (P.order() < target) {
        auto in_P = [&](Index x) { return P.contains(g.element(x)); };
        bool grown = false;
        for (Index x : order) {
            if (in_P(x)) continue;
            Index xp = 0;
            for (std::size_t i = 0; i < p; ++i) xp = g.mul(xp, x);
            if (!in_P(xp)) continue;
            bool normalizes = std::all_of(P.generators().begin(), P.generators().end(), [&](const Perm& t) {
                return P.contains(g.element(x) * t * g.element(x).inverse());
            });
            if (!normalizes) continue;
            auto trial = gens;
            trial.push_back(x);
            PermGroup Q = subgroup(g, trial);
            if (!is_p_power(Q.order(), p)) continue;
            gens = std::move(trial);
            P = std::move(Q);
            grown = true;
            break;
        }
        if (!grown) throw ConstructionError("Sylow search stalled");
    }
    return P;
}

struct Quotient {
    PermGroup group;                  // G/N acting on left cosets
    std::vector<Index> coset_reps;    // parent index per coset
    std::vector<Index> coset_of;      // parent index -> coset id
    std::vector<Index> projection;    // parent index -> quotient element index
};

inline Quotient quotient(const PermGroup& g, const PermGroup& n) {
    if (!is_normal(n, g)) throw NormalityError("quotient: subgroup is not normal");
    const auto n_idx = embedding(n, g);
    Quotient q;
    constexpr Index kUnset = ~Index(0);
    q.coset_of.assign(g.order(), kUnset);
    for (Index e = 0; e < g.order(); ++e) {
        if (q.coset_of[e] != kUnset) continue;
        Index id = Index(q.coset_reps.size());
        q.coset_reps.push_back(e);
        for (Index x : n_idx) q.coset_of[g.mul(e, x)] = id;
    }
    const std::size_t m = q.coset_reps.size();
    auto induced = [&](Index e) {
        std::vector<Index> im(m);
        for (Index c = 0; c < m; ++c) im[c] = q.coset_of[g.mul(e, q.coset_reps[c])];
        return Perm(std::move(im));
    };
    std::vector<Perm> gens;
    for (std::size_t s = 0; s < g.generators().size(); ++s) gens.push_back(induced(g.generator_index(s)));
    q.group = closure(m, gens, g.order());
    q.projection.resize(g.order());
    for (Index e = 0; e < g.order(); ++e) q.projection[e] = *q.group.find(induced(e));
    if (q.group.order() * n.order() != g.order()) throw ConstructionError("quotient order mismatch");
    return q;
}

} // namespace hsprop
