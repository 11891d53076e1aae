#pragma once

// Acceptance checks, one function per criterion.  Shared by the `suite`
// subcommand and the acceptance binary.

#include <chrono>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hsprop/catalog.hpp"
#include "hsprop/homotopy.hpp"

namespace hsprop::suite {

struct SuiteOptions {
    std::uint64_t seed = 0;
    CohomologyOptions cohomology;
    // Runs the CLI on an argument list and returns its standard output.
    std::function<std::string(const std::vector<std::string>&)> cli;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0;
    double budget = 0;  // seconds, 0 for none
    std::string detail;
};

namespace detail {

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::string failed_expectations(const catalog::NamedScenario& sc) {
    std::string s;
    for (const auto& e : sc.expectations)
        if (!e.ok) s += (s.empty() ? "" : "; ") + e.what + " [" + e.provenance + "]";
    return s;
}

inline CriterionResult finish(CriterionResult r, const Timer& t) {
    r.seconds = t.seconds();
    if (r.budget > 0 && r.seconds > r.budget) {
        r.pass = false;
        r.detail += (r.detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    return r;
}

// A +-1 character given by generator signs, or nullopt if it does not respect the relations.
inline std::optional<GModule> character_module(std::shared_ptr<const PermGroup> g, Residue p, int k,
                                               const std::vector<bool>& negate) {
    std::vector<Matrix> gens;
    const Residue q = Residue(modular::ipow(p, unsigned(k)));
    for (std::size_t s = 0; s < g->generators().size(); ++s) {
        Matrix a(p, k, 1, 1);
        a(0, 0) = negate[s] ? q - 1 : 1;
        gens.push_back(a);
    }
    try {
        return GModule(std::move(g), p, k, 1, std::move(gens));
    } catch (const ConstructionError&) {
        return std::nullopt;
    }
}

} // namespace detail

/// Every group of order 1, 2, 4 or 8 up to isomorphism, as permutation groups.
inline std::vector<std::pair<std::string, std::shared_ptr<const PermGroup>>> small_two_groups() {
    using P = Perm;
    std::vector<std::pair<std::string, std::shared_ptr<const PermGroup>>> out;
    out.push_back({"1", share(closure(1, std::vector<Perm>{}))});
    out.push_back({"C2", share(closure(2, {P({1, 0})}))});
    out.push_back({"C4", share(closure(4, {P::cycle({0, 1, 2, 3}, 4)}))});
    out.push_back({"C2xC2", share(closure(4, {P::cycle({0, 1}, 4), P::cycle({2, 3}, 4)}))});
    out.push_back({"C8", share(closure(8, {P::cycle({0, 1, 2, 3, 4, 5, 6, 7}, 8)}))});
    out.push_back({"C4xC2", share(closure(6, {P::cycle({0, 1, 2, 3}, 6), P::cycle({4, 5}, 6)}))});
    out.push_back({"C2^3", share(closure(6, {P::cycle({0, 1}, 6), P::cycle({2, 3}, 6), P::cycle({4, 5}, 6)}))});
    out.push_back({"D4", share(closure(4, {P::cycle({0, 1, 2, 3}, 4), P::cycle({1, 3}, 4)}))});
    // Q8 by left multiplication on (1, -1, i, -i, j, -j, k, -k).
    out.push_back({"Q8", share(closure(8, {P({2, 3, 1, 0, 6, 7, 5, 4}), P({4, 5, 7, 6, 1, 0, 2, 3})}))});
    return out;
}

// ---------------------------------------------------------------------------

inline CriterionResult criterion1(const SuiteOptions& opt) {
    detail::Timer t;
    CriterionResult r{1, "S3 sign module: H^1 = F_3, transposition subgroup acyclic, explicit cocycle"};
    r.budget = 1;
    auto sc = catalog::scenario_ex24(opt.cohomology);
    r.pass = sc.all_ok();
    r.detail = r.pass ? "all expectations hold" : detail::failed_expectations(sc);
    return detail::finish(r, t);
}

/// Random (G, H normal in G, M) with F_p coefficients, p in {2, 3}.
template <class Rng>
std::tuple<GModule, PermGroup, std::string> random_normal_instance(Rng& rng) {
    using P = Perm;
    static const std::vector<std::pair<std::string, std::vector<Perm>>> groups = {
        {"S3", {P({1, 2, 0}), P({1, 0, 2})}},
        {"C4", {P::cycle({0, 1, 2, 3}, 4)}},
        {"C2xC2", {P::cycle({0, 1}, 4), P::cycle({2, 3}, 4)}},
        {"D4", {P::cycle({0, 1, 2, 3}, 4), P::cycle({1, 3}, 4)}},
        {"A4", {P::cycle({0, 1, 2}, 4), P({1, 0, 3, 2})}},
        {"C6", {P::cycle({0, 1, 2, 3, 4, 5}, 6)}},
        {"S4", {P::cycle({0, 1, 2, 3}, 4), P::cycle({0, 1}, 4)}},
    };
    const auto& [gname, gens] = groups[std::uniform_int_distribution<std::size_t>(0, groups.size() - 1)(rng)];
    auto g = share(closure(gens.front().degree(), gens));
    Index x = std::uniform_int_distribution<Index>(0, Index(g->order() - 1))(rng);
    PermGroup cyc = closure(g->degree(), {g->element(x)});
    PermGroup h = normal_closure(cyc, *g);
    const Residue p = std::bernoulli_distribution(0.5)(rng) ? 2 : 3;
    GModule m = [&]() {
        switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
        case 0: return trivial_module(g, p);
        case 1: return sign_module(g, p);
        case 2: return permutation_module(g, p);
        default: return direct_sum(sign_module(g, p), permutation_module(g, p));
        }
    }();
    std::string name = gname + " |H|=" + std::to_string(h.order()) + " p=" + std::to_string(p) +
                       " rank=" + std::to_string(m.rank());
    return {std::move(m), std::move(h), std::move(name)};
}

inline CriterionResult criterion2(const SuiteOptions& opt) {
    detail::Timer t;
    CriterionResult r{2, "E_2 page and inflation-restriction exactness"};
    r.budget = 10;
    auto s3 = catalog::build_s3_sign();
    PermGroup a3 = closure(3, {Perm({1, 2, 0})});
    auto page = e2_page(*s3.m, a3, 2, 1, opt.cohomology);
    bool ok = page.at(0, 0) == 0 && page.at(1, 0) == 0 && page.at(2, 0) == 0 && page.at(0, 1) == 1;
    if (!ok) r.detail = "E_2 page differs from the expected values";
    if (!inf_res_check(*s3.m, a3).exact()) {
        ok = false;
        r.detail += " S3/A3 sequence not exact;";
    }
    std::mt19937_64 rng(opt.seed);
    int exact = 0;
    for (int i = 0; i < 20; ++i) {
        auto [m, h, name] = random_normal_instance(rng);
        if (inf_res_check(m, h).exact())
            ++exact;
        else
            r.detail += " not exact: " + name + ";";
    }
    r.pass = ok && exact == 20;
    if (r.pass) r.detail = "E_2 row and column match; 20/20 random instances exact";
    return detail::finish(r, t);
}

inline CriterionResult criterion3(const SuiteOptions& opt) {
    detail::Timer t;
    CriterionResult r{3, "Steinberg modules at q = 2, 3: free over the Sylow, acyclic"};
    r.budget = 120;
    auto a = catalog::scenario_steinberg(2, opt.cohomology);
    auto b = catalog::scenario_steinberg(3, opt.cohomology);
    r.pass = a.all_ok() && b.all_ok();
    r.detail = r.pass ? "q=2 free, H^0..H^3 = 0; q=3 free, H^0..H^2 = 0"
                      : detail::failed_expectations(a) + " " + detail::failed_expectations(b);
    return detail::finish(r, t);
}

inline CriterionResult criterion4(const SuiteOptions& opt) {
    detail::Timer t;
    CriterionResult r{4, "S6 on the 4-dimensional quotient: nonsplit extension, order-36 subgroup acyclic"};
    r.budget = 600;
    auto sc = catalog::scenario_ex26(opt.cohomology);
    r.pass = sc.all_ok();
    r.detail = r.pass ? "order 720, rank(b) = 4, nonsplit, H^1(G,M) = " + sc.facts["H1_G"].dump() + ", H-dims (0,0,0)"
                      : detail::failed_expectations(sc);
    return detail::finish(r, t);
}

/// One block set for the p-group criterion; returns a description.
template <class Rng>
std::pair<std::vector<GModule>, std::string> random_blocks(std::shared_ptr<const PermGroup> g, Rng& rng) {
    std::vector<GModule> blocks;
    std::string desc;
    auto signs = [&]() {
        std::vector<bool> s(g->generators().size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::bernoulli_distribution(0.5)(rng);
        return s;
    };
    auto character = [&](Residue p, int k) {
        for (int attempt = 0; attempt < 8; ++attempt)
            if (auto m = detail::character_module(g, p, k, signs())) return *m;
        return trivial_module(g, p, k);
    };
    if (std::bernoulli_distribution(0.5)(rng)) {
        const int k = std::uniform_int_distribution<int>(1, 2)(rng);
        switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0: blocks.push_back(trivial_module(g, 2, k)); desc += "triv(2^" + std::to_string(k) + ")"; break;
        case 1: blocks.push_back(character(2, k)); desc += "char(2^" + std::to_string(k) + ")"; break;
        default: blocks.push_back(permutation_module(g, 2)); desc += "perm(2)"; break;
        }
    }
    const int odd = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int i = 0; i < odd; ++i) {
        const Residue p = std::bernoulli_distribution(0.5)(rng) ? 3 : 5;
        const int k = std::uniform_int_distribution<int>(1, 2)(rng);
        const int kind = std::uniform_int_distribution<int>(0, 2)(rng);
        if (kind == 0) {
            blocks.push_back(trivial_module(g, p, k));
            desc += " triv(" + std::to_string(p) + "^" + std::to_string(k) + ")";
        } else if (kind == 1 || g->degree() > 6) {
            blocks.push_back(character(p, k));
            desc += " char(" + std::to_string(p) + "^" + std::to_string(k) + ")";
        } else {
            blocks.push_back(permutation_module(g, p));
            desc += " perm(" + std::to_string(p) + ")";
        }
    }
    return {std::move(blocks), desc};
}

inline CriterionResult criterion5(const SuiteOptions& opt) {
    detail::Timer t;
    CriterionResult r{5, "p-group criterion: (H^0 = 0 and no p-torsion) iff H^0..H^2 = 0"};
    auto groups = small_two_groups();
    std::mt19937_64 rng(opt.seed + 5);
    int samples = 0, exceptions = 0, both = 0;
    for (int i = 0; i < 63; ++i) {
        const auto& [name, g] = groups[i < int(groups.size()) ? i : std::uniform_int_distribution<std::size_t>(0, groups.size() - 1)(rng)];
        auto [blocks, desc] = random_blocks(g, rng);
        auto res = prop23_check(*g, 2, blocks, opt.cohomology);
        ++samples;
        if (res.a_holds != res.b_holds) {
            ++exceptions;
            r.detail += " exception: " + name + " " + desc + ";";
        }
        if (res.a_holds) ++both;
    }
    r.pass = exceptions == 0 && samples >= 50;
    if (r.pass)
        r.detail = std::to_string(samples) + " samples over " + std::to_string(groups.size()) + " groups, " +
                   std::to_string(both) + " acyclic, 0 exceptions";
    return detail::finish(r, t);
}

inline CriterionResult criterion6(const SuiteOptions& opt) {
    detail::Timer t;
    CriterionResult r{6, "Z/2 on Z/9 by negation: acyclic for G, H^0 of order 9 for the trivial subgroup"};
    auto sc = catalog::scenario_rem22(opt.cohomology);
    r.pass = sc.all_ok();
    r.detail = r.pass ? "G orders (1,1,1,1), trivial-subgroup H^0 of order 9" : detail::failed_expectations(sc);
    return detail::finish(r, t);
}

inline CriterionResult criterion7(const SuiteOptions& opt) {
    detail::Timer t;
    CriterionResult r{7, "cyclotomic action on F: gains, solver, vanishing at p = 2, 3, 5"};
    r.budget = 30;
    r.pass = true;
    for (Residue p : {2u, 3u, 5u}) {
        auto sc = catalog::scenario_ex54(p, opt.seed);
        if (!sc.all_ok()) {
            r.pass = false;
            r.detail += " p=" + std::to_string(p) + ": " + detail::failed_expectations(sc);
        } else {
            r.detail += " p=" + std::to_string(p) + ": lattice gain " + sc.facts["R_cyclotomic"]["lattice_gain"].dump() +
                        " (ratio " + sc.facts["R_cyclotomic"]["ratio_gain"].dump() + ");";
        }
    }
    return detail::finish(r, t);
}

inline CriterionResult criterion8(const SuiteOptions& opt) {
    detail::Timer t;
    CriterionResult r{8, "relative Tate algebra: decomposition, gains per summand, vanishing"};
    r.budget = 120;
    r.pass = true;
    for (auto [p, d] : std::vector<std::pair<Residue, unsigned>>{{2, 1}, {2, 2}, {3, 1}}) {
        auto sc = catalog::scenario_ex56(p, d, opt.seed);
        const std::string tag = " (p,d)=(" + std::to_string(p) + "," + std::to_string(d) + ")";
        if (!sc.all_ok()) {
            r.pass = false;
            r.detail += tag + ": " + detail::failed_expectations(sc);
        } else {
            r.detail += tag + ": " + sc.facts["label_count"].dump() + " labels ok;";
        }
    }
    return detail::finish(r, t);
}

// ---------------------------------------------------------------------------
// Criterion 9: the contraction machinery on grid cochains

struct HomotopySetup {
    Residue p = 2;
    unsigned d = 1;
    Label e{1, 0};
    GridPoint eta{1, 0};
    int N = 16;
    int eps = 1;
};

struct HomotopyEvidence {
    int tau = 0, g_c = 0, eps = 1, tau_m = 0;
    unsigned m = 0, level = 0;
    int precision = 0;
    int identity_samples = 0, observed_gain = 0;
    bool identity_ok = true, commutator_ok = true, displacement_ok = true, frobenius_ok = true;
    bool analytic_ok = true, subcomplex_ok = true, adversarial_rejected = true;
    bool correction_ok = true;
    int correction_rounds = 0, correction_residual = 0;
    std::string failure;
};

namespace detail {

// f(g_1..g_n) = sum_k (g_{i_k} ... g_n) v_k + (g_n) w: values of module-valued
// polynomial type, hence c-analytic with the level-0 gain.
template <class Rng>
GridCochain sample_analytic_cochain(const LabelModule& mod, unsigned n, Rng& rng, int val_cap = 0) {
    const int cap = val_cap > 0 ? std::min(val_cap, mod.prec()) : mod.prec();
    std::vector<TateElem> vs;
    for (unsigned k = 0; k <= n; ++k)
        vs.push_back(random_tate(rng, mod.p(), mod.d(), cap, mod.degree_cap(), 4, 1).with_precision(mod.prec()));
    return GridCochain(n, [&mod, vs, n](std::span<const GridPoint> g) {
        const auto& G = mod.grid();
        TateElem acc = vs[n];
        GridPoint prod = G.identity();
        for (unsigned k = n; k-- > 0;) {
            prod = G.mul(g[k], prod);
            acc = acc + mod.act(prod, vs[k]);
        }
        return acc;
    });
}

template <class Rng>
std::vector<std::vector<GridPoint>> sample_tuples(const GridGroup& G, unsigned n, int count, Rng& rng) {
    std::vector<std::vector<GridPoint>> out(count);
    for (auto& t : out)
        for (unsigned j = 0; j < n; ++j) t.push_back(G.random(rng));
    return out;
}

} // namespace detail

inline HomotopyEvidence homotopy_evidence(const HomotopySetup& s, std::uint64_t seed, int samples = 100) {
    HomotopyEvidence ev;
    std::mt19937_64 rng(seed);
    ev.eps = s.eps;

    // tau and g_c at a modest precision, then m from the bound.
    {
        const unsigned L0 = grid_level_for(s.p, s.d, s.e, s.N);
        LabelModule probe(GridGroup(s.p, s.d, L0), s.e, s.N, 1);
        HomotopyContext c0(probe, s.eta, 0);
        ev.tau = c0.tau();
        ev.g_c = int(probe.level_gain(0));
    }
    ev.m = bound_select(s.p, ev.tau, ev.g_c, s.eps);
    ev.tau_m = ev.tau * int(modular::ipow(s.p, ev.m));
    const int rounds = (s.N + s.eps - 1) / s.eps;
    ev.precision = s.N + 2 * ev.tau_m + 2 * ev.tau_m;
    ev.level = grid_level_for(s.p, s.d, s.e, ev.precision + 2 * ev.tau_m);
    LabelModule mod(GridGroup(s.p, s.d, ev.level), s.e, ev.precision, 1);
    HomotopyContext ctx(mod, s.eta, ev.m);
    const auto& G = mod.grid();

    // Identity and contraction in degrees 1 and 2.
    ev.observed_gain = kInfiniteGain;
    for (unsigned n = 1; n <= 2; ++n) {
        GridCochain f = detail::sample_analytic_cochain(mod, n, rng);
        auto shifts = analytic_samples(G, n, samples, rng);
        const int base = analytic_base(mod, f, ev.g_c, shifts);
        if (!c_analytic_check(mod, f, ev.g_c, base, shifts).ok) ev.analytic_ok = false;
        if (!c_analytic_check(mod, grid_differential(mod, f), ev.g_c, base, analytic_samples(G, n + 1, samples / 4, rng)).ok)
            ev.subcomplex_ok = false;
        try {
            auto rep = homotopy_identity_check(ctx, f, detail::sample_tuples(G, n, samples, rng), base);
            ev.identity_samples += rep.samples;
            ev.observed_gain = std::min(ev.observed_gain, rep.observed_gain);
        } catch (const IdentityViolation& err) {
            ev.identity_ok = false;
            ev.failure += std::string(err.what()) + "; ";
        }
    }

    // A cochain supported on one coset of Gamma_L cannot satisfy the estimate.
    {
        const GridPoint spot = G.random(rng);
        TateElem one = TateElem::constant(LaurentElem::constant(s.p, mod.prec(), 1), s.d, 1);
        GridCochain bump(1, [&mod, spot, one](std::span<const GridPoint> g) { return g[0] == spot ? one : mod.zero(); });
        GridPoint deep = G.identity();
        deep[0] = modular::ipow(s.p, G.level() - 1);
        std::vector<AnalyticSample> probe{{{spot}, {deep}}};
        ev.adversarial_rejected = !c_analytic_check(mod, bump, ev.g_c, -ev.g_c, probe).ok;
    }

    // Commutator rewriting with displacement, for g in Gamma_j, j = 0, 1, 2.
    for (int i = 0; i < samples; ++i) {
        const unsigned j = unsigned(i % 3);
        GridPoint g = G.random(rng, j);
        TateElem v = random_tate(rng, s.p, s.d, mod.prec(), 1, 4, 1);
        auto cr = commutator_identity_check(ctx, g, j, v);
        if (!cr.identity_ok) ev.commutator_ok = false;
        if (!cr.displacement_ok) ev.displacement_ok = false;
        if (!cr.identity_ok || !cr.displacement_ok) ev.failure += cr.witness + "; ";
    }

    // Iterated correction on coboundaries of sampled cochains (degrees 1, 2).
    {
        const int work = s.N + rounds * ev.tau_m;
        const unsigned Lc = grid_level_for(s.p, s.d, s.e, work);
        LabelModule cmod(GridGroup(s.p, s.d, Lc), s.e, work, 1);
        HomotopyContext cctx(cmod, s.eta, ev.m);
        ev.correction_residual = s.N;
        for (unsigned n = 1; n <= 2; ++n) {
            GridCochain g = n == 1 ? GridCochain(0, [v = random_tate(rng, s.p, s.d, s.N, 1, 4, 1).with_precision(work)](
                                                         std::span<const GridPoint>) { return v; })
                                   : detail::sample_analytic_cochain(cmod, 1, rng, s.N);
            GridCochain z = grid_differential(cmod, g);
            auto stop = detail::sample_tuples(cmod.grid(), n, 8, rng);
            auto check = detail::sample_tuples(cmod.grid(), n, n == 1 ? samples : 20, rng);
            auto rep = iterate_correction(cctx, z, s.N, rounds, stop, check);
            ev.correction_rounds = std::max(ev.correction_rounds, rep.rounds);
            ev.correction_residual = std::min(ev.correction_residual, rep.residual_val);
            if (!rep.reached) ev.correction_ok = false;
        }
    }
    return ev;
}

inline bool frobenius_power_evidence(Residue p, unsigned d, const Label& e, const GridPoint& eta, unsigned n_max,
                                     int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int prec = 2 * int(p * p) + 8;
    LabelModule mod(GridGroup(p, d, grid_level_for(p, d, e, prec)), e, prec, 1);
    for (int i = 0; i < samples; ++i) {
        TateElem x = random_tate(rng, p, d, prec, 1, 4, 1);
        for (unsigned n = 0; n <= n_max; ++n)
            if (!frobenius_power_check(mod, eta, n, x)) return false;
    }
    return true;
}

/// Direct scan of the two inequalities, written independently of bound_select.
inline unsigned bound_scan(long long p, long long tau, long long g_c, long long eps) {
    long long pm = 1;
    for (unsigned m = 0; m < 64 && pm < (1LL << 24); ++m, pm *= p) {
        const long long first = pm * pm * g_c - 2 * pm * tau;
        const long long second = pm * p * g_c - pm * tau;
        if (first >= eps && second >= eps) return m;
    }
    return 64;
}

inline CriterionResult criterion9(const SuiteOptions& opt) {
    detail::Timer t;
    CriterionResult r{9, "contraction machinery: Frobenius power, commutator, bound, homotopy identity, correction"};
    r.budget = 300;
    std::vector<std::string> bad;
    const bool frob = frobenius_power_evidence(2, 0, {1}, {1}, 2, 100, opt.seed) &&
                      frobenius_power_evidence(3, 1, {1, 0}, {1, 0}, 1, 100, opt.seed + 1);
    if (!frob) bad.push_back("Frobenius power identity");
    const unsigned b1 = bound_select(2, 1, 1, 1), b2 = bound_select(3, 3, 3, 1);
    if (b1 != 2 || b2 != 1 || b1 != bound_scan(2, 1, 1, 1) || b2 != bound_scan(3, 3, 3, 1))
        bad.push_back("bound_select values");
    for (unsigned tau = 0; tau <= 6; ++tau)
        for (int gc = 1; gc <= 4; ++gc)
            for (int eps = 1; eps <= 3; ++eps)
                for (Residue p : {2u, 3u, 5u}) {
                    unsigned got = 64;
                    try {
                        got = bound_select(p, int(tau), gc, eps);
                    } catch (const NoContractionError&) {
                    }
                    if (got != bound_scan(p, tau, gc, eps)) bad.push_back("bound scan");
                }
    HomotopySetup setup;
    auto ev = homotopy_evidence(setup, opt.seed);
    if (!ev.identity_ok) bad.push_back("homotopy identity");
    if (ev.identity_samples < 200) bad.push_back("identity sample count");
    if (ev.observed_gain < ev.eps) bad.push_back("contraction gain " + std::to_string(ev.observed_gain));
    if (!ev.commutator_ok) bad.push_back("commutator identity");
    if (!ev.displacement_ok) bad.push_back("commutator displacement");
    if (!ev.analytic_ok || !ev.subcomplex_ok || !ev.adversarial_rejected) bad.push_back("c-analytic estimates");
    if (!ev.correction_ok) bad.push_back("iterated correction residual " + std::to_string(ev.correction_residual));
    r.pass = bad.empty() && b1 == 2 && b2 == 1;
    std::ostringstream os;
    os << "m=" << ev.m << " tau=" << ev.tau << " g_c=" << ev.g_c << " eps=" << ev.eps
       << " observed gain=" << ev.observed_gain << " tuples=" << ev.identity_samples
       << " correction rounds=" << ev.correction_rounds << " residual>=" << ev.correction_residual;
    for (const auto& b : bad) os << "; failed: " << b;
    if (!ev.failure.empty()) os << "; " << ev.failure;
    r.detail = os.str();
    return detail::finish(r, t);
}

inline CriterionResult criterion10(const SuiteOptions& opt) {
    detail::Timer t;
    CriterionResult r{10, "Leibniz rule for gamma - 1 on random products"};
    std::mt19937_64 rng(opt.seed + 10);
    int total = 0, good = 0;
    for (Residue p : {2u, 3u})
        for (int i = 0; i < 1000; ++i) {
            const unsigned d = unsigned(i % 3);
            const int prec = 24, D = 2;
            const unsigned L = gamma_level(p, prec);
            GammaElem g = random_gamma(rng, p, d, L);
            TateElem x = random_tate(rng, p, d, prec, D, 5, 1, -2);
            TateElem y = random_tate(rng, p, d, prec, D, 5, 1, -2);
            ++total;
            if (leibniz_check(g, x, y)) ++good;
        }
    r.pass = good == total;
    r.detail = std::to_string(good) + "/" + std::to_string(total) + " triples exact";
    return detail::finish(r, t);
}

inline CriterionResult criterion11(const SuiteOptions& opt) {
    detail::Timer t;
    CriterionResult r{11, "d o d = 0, streaming rank = dense rank, output independent of --jobs"};
    std::vector<std::string> bad;
    std::mt19937_64 rng(opt.seed + 11);

    // d o d = 0 on random cochains over several modules, degrees 0..2.
    int dd_checks = 0;
    {
        auto s3 = share(closure(3, {Perm({1, 2, 0}), Perm({1, 0, 2})}));
        auto d4 = share(closure(4, {Perm::cycle({0, 1, 2, 3}, 4), Perm::cycle({1, 3}, 4)}));
        std::vector<GModule> mods{sign_module(s3, 3), permutation_module(s3, 2), permutation_module(d4, 2, 2),
                                  regular_module(s3, 3), sign_module(d4, 3, 2)};
        for (const auto& m : mods)
            for (unsigned n = 0; n <= 2; ++n) {
                Cochain f(m, n);
                std::uniform_int_distribution<Residue> dist(0, m.modulus() - 1);
                for (auto& v : f.values()) v = dist(rng);
                ++dd_checks;
                if (!differential(differential(f)).is_zero()) bad.push_back("d o d on a finite module");
            }
    }
    {
        const Label e{1, 0};
        LabelModule mod(GridGroup(2, 1, grid_level_for(2, 1, e, 16)), e, 16, 1);
        for (unsigned n = 1; n <= 2; ++n) {
            GridCochain f = detail::sample_analytic_cochain(mod, n, rng);
            GridCochain dd = grid_differential(mod, grid_differential(mod, f));
            for (const auto& tup : detail::sample_tuples(mod.grid(), n + 2, 20, rng)) {
                ++dd_checks;
                if (!dd(tup).is_zero()) bad.push_back("d o d on grid cochains");
            }
        }
    }

    // Streaming (bit-packed or sparse) rank against plain elimination.
    int agree = 0;
    for (int i = 0; i < 1000; ++i) {
        const Residue p = std::array<Residue, 3>{2, 3, 5}[i % 3];
        const std::size_t rows = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
        const std::size_t cols = std::uniform_int_distribution<std::size_t>(1, 90)(rng);
        const double density = std::uniform_real_distribution<double>(0.02, 0.5)(rng);
        FpMatrix a(p, rows, cols);
        EchelonAccumulator acc(p, cols);
        std::vector<SparseEntry> row;
        for (std::size_t x = 0; x < rows; ++x) {
            row.clear();
            for (std::size_t y = 0; y < cols; ++y)
                if (std::bernoulli_distribution(density)(rng)) {
                    Residue v = std::uniform_int_distribution<Residue>(1, p - 1)(rng);
                    a.set(x, y, v);
                    row.push_back({y, v});
                }
            if (x % 7 == 3 && x > 0) {  // force dependencies
                Residue c = std::uniform_int_distribution<Residue>(1, p - 1)(rng);
                row.clear();
                for (std::size_t y = 0; y < cols; ++y) {
                    Residue v = modular::mul(c, a.at(x - 1, y), p);
                    a.set(x, y, v);
                    if (v) row.push_back({y, v});
                }
            }
            acc.absorb_sparse(row);
        }
        if (acc.rank() == rank_dense(a) && rank(a) == rank_dense(a)) ++agree;
    }
    if (agree != 1000) bad.push_back("streaming rank mismatch in " + std::to_string(1000 - agree) + " trials");

    // Parallel streamed rank and CLI output across --jobs.
    {
        auto s4 = share(closure(4, {Perm::cycle({0, 1, 2, 3}, 4), Perm::cycle({0, 1}, 4)}));
        GModule m = permutation_module(s4, 2);
        CohomologyOptions o1, o4;
        o1.dense_threshold = o4.dense_threshold = 0;
        o4.jobs = 4;
        if (differential_rank(m, 2, o1) != differential_rank(m, 2, o4)) bad.push_back("threaded rank differs");
    }
    if (opt.cli) {
        for (const auto& args : std::vector<std::vector<std::string>>{{"scenario", "ex2.4"},
                                                                    {"scenario", "ex2.3-q2"},
                                                                    {"homotopy", "bound", "--p", "2", "--gc", "1", "--tau", "1", "--eps", "1"}}) {
            auto a1 = args, a4 = args;
            a1.insert(a1.end(), {"--jobs", "1"});
            a4.insert(a4.end(), {"--jobs", "4"});
            if (opt.cli(a1) != opt.cli(a4)) bad.push_back("CLI output differs across --jobs for " + args[0] + " " + args[1]);
        }
    } else {
        bad.push_back("no CLI runner supplied");
    }
    r.pass = bad.empty();
    r.detail = std::to_string(dd_checks) + " d o d checks, " + std::to_string(agree) + "/1000 rank trials agree";
    for (const auto& b : bad) r.detail += "; " + b;
    return detail::finish(r, t);
}

inline std::vector<std::function<CriterionResult(const SuiteOptions&)>> criteria() {
    return {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6,
            criterion7, criterion8, criterion9, criterion10, criterion11};
}

inline std::string format_line(const CriterionResult& r) {
    std::ostringstream os;
    os << "CRITERION " << r.id << ' ' << (r.pass ? "PASS" : "FAIL") << " [" << r.name << "] " << r.detail;
    return os.str();
}

} // namespace hsprop::suite
