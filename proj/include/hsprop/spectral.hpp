#pragma once

// Finite-level Hochschild-Serre data for H normal in G: the G/H-module
// structure on H^q(H, M), the E_2 page, and the five-term start
// 0 -> H^1(G/H, M^H) -> H^1(G, M) -> H^1(H, M).

#include <memory>
#include <vector>

#include "hsprop/cohomology.hpp"

namespace hsprop {

struct ConjugationModule {
    Quotient quotient;
    std::shared_ptr<const PermGroup> quotient_group;
    std::shared_ptr<const PermGroup> subgroup;
    std::shared_ptr<const GModule> restricted;  // M as an H-module
    std::shared_ptr<const ClassBasis> classes;  // basis of H^q(H, M)
    GModule module;                             // H^q(H, M) over G/H
};

namespace detail {

// (s.f)(h_1..h_q) = s f(s^-1 h_1 s, ..., s^-1 h_q s) on a cochain table of mh.
inline Vec conjugate_cochain(const GModule& m, const GModule& mh, const std::vector<Index>& h_in_g,
                             const std::vector<Index>& g_to_h, Index s, unsigned q, std::span<const Residue> f) {
    const auto& G = m.group();
    const auto& H = mh.group();
    const std::size_t r = m.rank();
    Cochain src(mh, q, Vec(f.begin(), f.end()));
    Cochain out(mh, q);
    const Index sinv = G.inv(s);
    for (std::uint64_t code = 0; code < out.tuples(); ++code) {
        auto t = decode_tuple(code, q, H.order());
        std::vector<Index> moved(q);
        for (unsigned i = 0; i < q; ++i) moved[i] = g_to_h[G.conj(sinv, h_in_g[t[i]])];
        Vec v = m.act(s, src.at(moved));
        std::copy(v.begin(), v.end(), out.values().begin() + code * r);
    }
    return std::move(out.values());
}

} // namespace detail

/// H^q(H, M) as a module over G/H on the class basis of ClassBasis.  Checks
/// that elements of H act trivially on classes.
inline ConjugationModule conjugation_module(const GModule& m, const PermGroup& h, unsigned q) {
    const auto& G = m.group();
    if (!is_subgroup(h, G)) throw ContainmentError("conjugation_module: h is not a subgroup");
    if (!is_normal(h, G)) throw NormalityError("conjugation_module: h is not normal");
    if (!m.is_field()) throw UnsupportedError("conjugation_module requires F_p coefficients");
    auto hp = share(h);
    auto mh = std::make_shared<const GModule>(restrict_module(m, hp));
    auto cb = std::make_shared<const ClassBasis>(*mh, q);
    Quotient quot = quotient(G, h);
    auto qg = share(quot.group);

    const auto h_in_g = embedding(h, G);
    std::vector<Index> g_to_h(G.order(), 0);
    for (Index i = 0; i < h_in_g.size(); ++i) g_to_h[h_in_g[i]] = i;

    const Residue p = m.prime();
    const std::size_t dim = cb->dim();
    auto class_action = [&](Index s) {
        Matrix a(p, 1, dim, dim);
        for (std::size_t j = 0; j < dim; ++j) {
            Vec moved = detail::conjugate_cochain(m, *mh, h_in_g, g_to_h, s, q, cb->representatives()[j]);
            Vec coeff = cb->project(moved);
            for (std::size_t i = 0; i < dim; ++i) a(i, j) = coeff[i];
        }
        return a;
    };
    for (Index x : h_in_g)
        if (!(class_action(x) == Matrix::identity(p, 1, dim)))
            throw ConsistencyError("conjugation_module: h does not act trivially on its cohomology");

    std::vector<Matrix> gens;
    for (std::size_t s = 0; s < G.generators().size(); ++s) gens.push_back(class_action(G.generator_index(s)));
    GModule mod(qg, p, 1, dim, std::move(gens));
    return {std::move(quot), qg, hp, mh, cb, std::move(mod)};
}

struct E2Page {
    unsigned p_max = 0, q_max = 0;
    std::vector<std::vector<std::size_t>> dims;  // dims[p][q]
    std::size_t at(unsigned p, unsigned q) const { return dims.at(p).at(q); }
};

inline E2Page e2_page(const GModule& m, const PermGroup& h, unsigned p_max, unsigned q_max,
                      const CohomologyOptions& opt = {}) {
    E2Page page;
    page.p_max = p_max;
    page.q_max = q_max;
    page.dims.assign(p_max + 1, std::vector<std::size_t>(q_max + 1, 0));
    for (unsigned q = 0; q <= q_max; ++q) {
        auto cm = conjugation_module(m, h, q);
        if (cm.module.rank() == 0) continue;
        auto d = cohomology_dims(cm.module, p_max, opt).dims();
        for (unsigned p = 0; p <= p_max; ++p) page.dims[p][q] = d[p];
    }
    return page;
}

struct InfResReport {
    std::size_t h1_quotient = 0, h1_g = 0, h1_h = 0;
    std::size_t inflation_rank = 0, restriction_rank = 0;
    bool inflation_injective = false;
    bool image_in_kernel = false;
    bool kernel_equals_image = false;
    bool exact() const { return inflation_injective && image_in_kernel && kernel_equals_image; }
};

/// Exactness of 0 -> H^1(G/H, M^H) -> H^1(G, M) -> H^1(H, M) with inflation
/// and restriction realized on explicit cocycle tables.
inline InfResReport inf_res_check(const GModule& m, const PermGroup& h) {
    const auto& G = m.group();
    const Residue p = m.prime();
    auto cm0 = conjugation_module(m, h, 0);
    const auto& fixed = cm0.classes->representatives();  // basis of M^H inside M
    const std::size_t r = m.rank();

    InfResReport rep;
    ClassBasis cg(m, 1);
    ClassBasis ch(*cm0.restricted, 1);
    rep.h1_g = cg.dim();
    rep.h1_h = ch.dim();

    // Inflation: pull back along G -> G/H, then embed M^H into M.
    std::vector<Vec> inf_coeffs;
    if (cm0.module.rank() > 0) {
        ClassBasis cq(cm0.module, 1);
        rep.h1_quotient = cq.dim();
        for (const auto& z : cq.representatives()) {
            Vec f(G.order() * r, 0);
            const std::size_t fr = fixed.size();
            for (Index x = 0; x < G.order(); ++x) {
                Index c = cm0.quotient.projection[x];
                for (std::size_t b = 0; b < fr; ++b) {
                    Residue coef = z[c * fr + b];
                    if (!coef) continue;
                    for (std::size_t i = 0; i < r; ++i)
                        f[x * r + i] = modular::add(f[x * r + i], modular::mul(coef, fixed[b][i], p), p);
                }
            }
            if (!differential(Cochain(m, 1, f)).is_zero()) throw ConsistencyError("inflation produced a non-cocycle");
            inf_coeffs.push_back(cg.project(f));
        }
    }
    FpMatrix inf(p, rep.h1_g, inf_coeffs.size());
    for (std::size_t j = 0; j < inf_coeffs.size(); ++j)
        for (std::size_t i = 0; i < rep.h1_g; ++i) inf.set(i, j, inf_coeffs[j][i]);
    rep.inflation_rank = rank(inf);
    rep.inflation_injective = rep.inflation_rank == rep.h1_quotient;

    // Restriction of each class of G to H.
    const auto h_in_g = embedding(h, G);
    FpMatrix res(p, rep.h1_h, rep.h1_g);
    for (std::size_t j = 0; j < rep.h1_g; ++j) {
        const auto& w = cg.representatives()[j];
        Vec f(h_in_g.size() * r);
        for (Index x = 0; x < h_in_g.size(); ++x)
            for (std::size_t i = 0; i < r; ++i) f[x * r + i] = w[h_in_g[x] * r + i];
        Vec c = ch.project(f);
        for (std::size_t i = 0; i < rep.h1_h; ++i) res.set(i, j, c[i]);
    }
    rep.restriction_rank = rank(res);
    FpMatrix comp = res * inf;
    rep.image_in_kernel = rank(comp) == 0;
    rep.kernel_equals_image = rep.h1_g - rep.restriction_rank == rep.inflation_rank;
    return rep;
}

} // namespace hsprop
