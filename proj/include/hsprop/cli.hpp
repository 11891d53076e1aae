#pragma once

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "catalog.hpp"
#include "cohomology.hpp"
#include "gamma.hpp"
#include "homotopy.hpp"
#include "spectral.hpp"
#include "suite.hpp"

namespace hsprop::cli {

using json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kError = 1, kMismatch = 2 };

// ---------------------------------------------------------------------------
// Scenario files
//
// {"group": {"degree": n, "generators": [[images], ...]},
//  "module": {"p": 3 | [3, 2], "rank": r, "matrices": [[[row], ...], ...]},
//  "subgroup": [[images], ...], "maxDegree": 2}

struct FiniteInstance {
    std::shared_ptr<const PermGroup> group;
    std::optional<GModule> module;
    std::optional<PermGroup> subgroup;
    unsigned max_degree = 2;
};

namespace detail {

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
    return j.at(key);
}

inline std::vector<Perm> read_perms(const json& j, std::size_t degree) {
    if (!j.is_array()) throw SchemaError("generators must be an array of image arrays");
    std::vector<Perm> out;
    for (const auto& g : j) {
        if (!g.is_array() || g.size() != degree) throw SchemaError("generator length differs from the degree");
        std::vector<Index> im;
        for (const auto& x : g) {
            if (!x.is_number_unsigned()) throw SchemaError("permutation images must be nonnegative integers");
            im.push_back(x.get<Index>());
        }
        out.emplace_back(std::move(im));
    }
    return out;
}

} // namespace detail

inline FiniteInstance parse_instance(const json& j, std::size_t closure_cap = kDefaultClosureCap) {
    FiniteInstance inst;
    const json& gj = detail::field(j, "group");
    const json& dj = detail::field(gj, "degree");
    if (!dj.is_number_unsigned() || dj.get<std::size_t>() == 0) throw SchemaError("degree must be a positive integer");
    const std::size_t degree = dj.get<std::size_t>();
    inst.group = share(closure(degree, detail::read_perms(detail::field(gj, "generators"), degree), closure_cap));

    if (j.contains("maxDegree")) {
        if (!j["maxDegree"].is_number_unsigned()) throw SchemaError("maxDegree must be a nonnegative integer");
        inst.max_degree = j["maxDegree"].get<unsigned>();
    }
    if (j.contains("subgroup"))
        inst.subgroup = closure(degree, detail::read_perms(j["subgroup"], degree), closure_cap);

    if (j.contains("module")) {
        const json& mj = j["module"];
        const json& pj = detail::field(mj, "p");
        Residue p = 0;
        int k = 1;
        if (pj.is_array()) {
            if (pj.size() != 2 || !pj[0].is_number_unsigned() || !pj[1].is_number_unsigned())
                throw SchemaError("module p must be a prime or [p, k]");
            p = pj[0].get<Residue>();
            k = pj[1].get<int>();
        } else if (pj.is_number_unsigned()) {
            p = pj.get<Residue>();
        } else {
            throw SchemaError("module p must be a prime or [p, k]");
        }
        const json& mats = detail::field(mj, "matrices");
        if (!mats.is_array()) throw SchemaError("matrices must be an array");
        if (mats.size() != inst.group->generators().size())
            throw SchemaError("need one matrix per group generator");
        std::size_t rank = 0;
        if (mj.contains("rank")) {
            if (!mj["rank"].is_number_unsigned()) throw SchemaError("rank must be a nonnegative integer");
            rank = mj["rank"].get<std::size_t>();
        } else if (!mats.empty()) {
            rank = mats[0].size();
        } else {
            throw SchemaError("rank is required when there are no generators");
        }
        std::vector<Matrix> action;
        for (const auto& a : mats) {
            if (!a.is_array() || a.size() != rank) throw SchemaError("matrix row count differs from the rank");
            Matrix m(p, k, rank, rank);
            for (std::size_t r = 0; r < rank; ++r) {
                if (!a[r].is_array() || a[r].size() != rank) throw SchemaError("matrix is not square of size rank");
                for (std::size_t c = 0; c < rank; ++c) {
                    if (!a[r][c].is_number_integer()) throw SchemaError("matrix entries must be integers");
                    m.set(r, c, a[r][c].get<long long>());
                }
            }
            action.push_back(std::move(m));
        }
        inst.module.emplace(inst.group, p, k, rank, std::move(action));
    }
    return inst;
}

inline json read_json_file(const std::string& path) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(path);
        if (!in) throw FormatError("cannot open '" + path + "'");
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

inline Label parse_label(const std::string& s) {
    Label e;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            e.push_back(v);
        } catch (const std::logic_error&) {
            throw FormatError("label entries must be integers: '" + s + "'");
        }
    }
    if (e.empty()) throw FormatError("empty label");
    return e;
}

// ---------------------------------------------------------------------------
// Output

inline json error_json(const std::string& code, const std::string& message) {
    return {{"error", {{"code", code}, {"message", message}}}};
}

inline void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

inline json factors_json(const CohomologyReport& rep) {
    json f = json::array();
    for (const auto& deg : rep.factors) {
        json d = json::array();
        for (const auto& x : deg) d.push_back({{"prime", x.prime}, {"exponent", x.exponent}});
        f.push_back(d);
    }
    return f;
}

inline json gain_json(const GainCertificate& c) {
    return {{"ratio_gain", c.ratio_gain},
            {"lattice_gain", c.lattice_gain},
            {"ratio_witness", c.ratio_witness},
            {"lattice_witness", c.lattice_witness}};
}

inline json valuation_json(int v) { return v >= kInfiniteGain ? json(nullptr) : json(v); }

// ---------------------------------------------------------------------------
// Subcommand bodies

struct Globals {
    std::uint64_t seed = 0;
    std::uint64_t max_rows = 100'000'000;
    unsigned jobs = 1;

    CohomologyOptions cohomology() const {
        CohomologyOptions o;
        o.max_rows = max_rows;
        o.jobs = jobs;
        return o;
    }
};

inline int cmd_finite(const Globals& g, const std::string& file, std::ostream& out) {
    auto inst = parse_instance(read_json_file(file));
    if (!inst.module) throw SchemaError("finite needs a module");
    auto rep = cohomology_dims(*inst.module, inst.max_degree, g.cohomology());
    emit(out, {{"order", inst.group->order()},
               {"rank", inst.module->rank()},
               {"modulus", inst.module->modulus()},
               {"maxDegree", inst.max_degree},
               {"dims", rep.dims()},
               {"factors", factors_json(rep)}});
    return kOk;
}

inline int cmd_hs_check(const Globals& g, const std::string& file, const std::string& expect, std::ostream& out) {
    auto inst = parse_instance(read_json_file(file));
    if (!inst.module) throw SchemaError("hs-check needs a module");
    if (!inst.subgroup) throw SchemaError("hs-check needs a subgroup");
    auto v = hs_property_verdict(*inst.module, *inst.subgroup, inst.max_degree, g.cohomology());
    json j = {{"order", inst.group->order()},
              {"subgroup_order", inst.subgroup->order()},
              {"verdict", to_string(v.kind)},
              {"degree", v.degree},
              {"H_H", v.h_dims},
              {"H_G", v.g_dims}};
    if (v.witness) j["witness"] = *v.witness;
    const bool ok = expect.empty() || expect == to_string(v.kind);
    if (!expect.empty()) j["expected"] = expect;
    j["ok"] = ok;
    emit(out, j);
    return ok ? kOk : kMismatch;
}

inline int cmd_e2(const Globals& g, const std::string& file, unsigned p_max, unsigned q_max, std::ostream& out) {
    auto inst = parse_instance(read_json_file(file));
    if (!inst.module) throw SchemaError("e2 needs a module");
    if (!inst.subgroup) throw SchemaError("e2 needs a subgroup");
    if (!is_normal(*inst.subgroup, *inst.group)) throw NormalityError("e2: subgroup is not normal");
    auto page = e2_page(*inst.module, *inst.subgroup, p_max, q_max, g.cohomology());
    auto ir = inf_res_check(*inst.module, *inst.subgroup);
    emit(out, {{"p_max", p_max},
               {"q_max", q_max},
               {"E2", page.dims},
               {"inflation_restriction",
                {{"h1_quotient", ir.h1_quotient},
                 {"h1_g", ir.h1_g},
                 {"h1_h", ir.h1_h},
                 {"inflation_injective", ir.inflation_injective},
                 {"image_in_kernel", ir.image_in_kernel},
                 {"kernel_equals_image", ir.kernel_equals_image},
                 {"exact", ir.exact()}}}});
    return ir.exact() ? kOk : kMismatch;
}

inline int cmd_scenario(const Globals& g, const std::string& id, Residue p, unsigned d, std::ostream& out) {
    const auto ids = catalog::scenario_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
        emit(out, error_json("unknown_scenario", "unknown scenario id '" + id + "'"));
        return kError;
    }
    auto sc = catalog::run_scenario(id, g.cohomology(), g.seed, p, d);
    json j = {{"id", sc.id}};
    for (const auto& [k, v] : sc.facts.items()) j[k] = v;
    json ex = sc.to_json();
    j["expectations"] = ex["expectations"];
    j["ok"] = sc.all_ok();
    emit(out, j);
    return sc.all_ok() ? kOk : kMismatch;
}

struct PadicArgs {
    Residue p = 2;
    unsigned d = 0;
    int N = 0, D = 0;
    std::string label;
    std::string expect;
};

inline int cmd_padic(const Globals& g, const std::string& what, PadicArgs a, std::ostream& out) {
    if (!modular::is_prime(a.p)) throw PreconditionError("p must be prime");
    if (a.N <= 0) a.N = 2 * int(a.p * a.p) + 8;
    if (a.D <= 0) a.D = a.d == 0 ? 1 : 2;
    Label e = a.label.empty() ? Label{} : parse_label(a.label);
    if (e.empty()) {
        e.assign(a.d + 1, 0);
        e[0] = 1;
    }
    if (e.size() != a.d + 1) throw FormatError("label needs d + 1 entries");
    for (int x : e)
        if (x < 0 || x >= int(a.p)) throw FormatError("label entries must lie in [0, p)");
    const bool zero = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });

    auto s = catalog::build_padic(a.p, a.d, a.N, a.D);
    const GammaElem& gen = zero ? s.cyclotomic : catalog::label_generator(s, e);
    const bool translation = &gen != &s.cyclotomic;
    const int max_deg = std::min(a.D, 1);
    json j = {{"p", a.p},   {"d", a.d},
              {"N", a.N},   {"D", a.D},
              {"label", catalog::label_string(e)},
              {"generator", translation ? "translation" : "cyclotomic"},
              {"level", s.level}};
    j["tau"] = valuation_json(label_delta_valuation(gen, e, a.N));

    if (what == "gain") {
        auto basis = zero ? monomial_basis(a.p, a.d, a.N, a.D, 3, max_deg) : label_basis(e, a.p, a.d, a.N, a.D, 3, max_deg);
        j["gains"] = gain_json(gain_certificate({gen}, basis, s.level, a.N));
        emit(out, j);
        return kOk;
    }
    if (what == "invert") {
        if (zero) throw PreconditionError("gamma - 1 is not invertible on the untwisted summand");
        std::mt19937_64 rng(g.seed);
        TateElem w = random_tate(rng, a.p, a.d, a.N, a.D, 4, max_deg);
        auto inv = invert_gamma_minus_one(gen, e, w, a.N);
        TateElem r = (apply_on_label(gen, e, inv.x) - w).truncated(a.N);
        const int residual = r.is_zero() ? a.N : r.valuation();
        j["target"] = a.N;
        j["iterations"] = inv.iterations;
        j["loss"] = inv.g_y;
        j["residual"] = residual;
        j["ok"] = residual >= a.N;
        emit(out, j);
        return residual >= a.N ? kOk : kMismatch;
    }
    auto van = procyclic_vanishing(gen, e, a.N, max_deg);
    j["verdict"] = to_string(van.verdict);
    j["injective"] = van.injective;
    j["surjective"] = van.surjective;
    const bool ok = a.expect.empty() || a.expect == to_string(van.verdict);
    if (!a.expect.empty()) j["expected"] = a.expect;
    j["ok"] = ok;
    emit(out, j);
    return ok ? kOk : kMismatch;
}

struct HomotopyArgs {
    Residue p = 2;
    int gc = 1, tau = 0, eps = 1, N = 16, samples = 100;
    std::string label;
};

inline int cmd_homotopy_bound(const HomotopyArgs& a, std::ostream& out) {
    const unsigned m = bound_select(a.p, a.tau, a.gc, a.eps);
    emit(out, {{"m", m}});
    return kOk;
}

inline int cmd_homotopy_check(const Globals& g, const HomotopyArgs& a, std::ostream& out) {
    suite::HomotopySetup s;
    s.p = a.p;
    if (!modular::is_prime(s.p)) throw PreconditionError("p must be prime");
    s.e = a.label.empty() ? Label{1, 0} : parse_label(a.label);
    for (int x : s.e)
        if (x < 0 || x >= int(s.p)) throw FormatError("label entries must lie in [0, p)");
    s.d = unsigned(s.e.size() - 1);
    s.eta.assign(s.d + 1, 0);
    s.eta[0] = 1;
    s.N = a.N;
    s.eps = a.eps;
    if (s.N < 1 || s.eps < 1 || a.samples < 1) throw PreconditionError("N, eps and samples must be positive");
    auto ev = suite::homotopy_evidence(s, g.seed, a.samples);
    const bool ok = ev.identity_ok && ev.commutator_ok && ev.displacement_ok && ev.analytic_ok && ev.subcomplex_ok &&
                    ev.adversarial_rejected && ev.correction_ok && ev.observed_gain >= ev.eps;
    json j = {{"m", ev.m},
              {"tau", ev.tau},
              {"g_c", ev.g_c},
              {"eps", ev.eps},
              {"observedGain", valuation_json(ev.observed_gain)},
              {"samples", ev.identity_samples},
              {"tau_m", ev.tau_m},
              {"level", ev.level},
              {"precision", ev.precision},
              {"checks",
               {{"identity", ev.identity_ok},
                {"commutator", ev.commutator_ok},
                {"displacement", ev.displacement_ok},
                {"c_analytic", ev.analytic_ok},
                {"subcomplex", ev.subcomplex_ok},
                {"adversarial_rejected", ev.adversarial_rejected},
                {"correction", ev.correction_ok}}},
              {"correction", {{"rounds", ev.correction_rounds}, {"residual", ev.correction_residual}}},
              {"ok", ok}};
    if (!ev.failure.empty()) j["failure"] = ev.failure;
    emit(out, j);
    return ok ? kOk : kMismatch;
}

int run(const std::vector<std::string>& args, std::ostream& out);

inline std::string run_capture(const std::vector<std::string>& args) {
    std::ostringstream os;
    run(args, os);
    return os.str();
}

inline int cmd_suite(const Globals& g, const std::vector<int>& only, std::ostream& out) {
    suite::SuiteOptions opt;
    opt.seed = g.seed;
    opt.cohomology = g.cohomology();
    opt.cli = run_capture;
    auto all = suite::criteria();
    json results = json::array();
    bool pass = true;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (!only.empty() && std::find(only.begin(), only.end(), int(i + 1)) == only.end()) continue;
        auto r = all[i](opt);
        pass = pass && r.pass;
        results.push_back({{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    emit(out, {{"seed", g.seed}, {"criteria", results}, {"ok", pass}});
    return pass ? kOk : kMismatch;
}

// ---------------------------------------------------------------------------
// Entry point

/// Parses args (without the program name), writes one JSON document to out and
/// returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out) {
    CLI::App app{"Group cohomology and contraction checks", "hsprop"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "seed for randomized checks")->default_val(0);
    app.add_option("--max-rows", g.max_rows, "row budget for the streaming rank engine")->default_val(100'000'000);
    app.add_option("--jobs", g.jobs, "worker threads")->default_val(1)->check(CLI::PositiveNumber);

    std::string file, expect, id;
    unsigned p_max = 2, q_max = 2;
    Residue sp = 2;
    unsigned sd = 1;
    PadicArgs pa;
    HomotopyArgs ha;
    std::vector<int> only;

    auto* finite = app.add_subcommand("finite", "cohomology dimensions of a finite module")->fallthrough();
    finite->add_option("file", file, "scenario JSON, '-' for stdin")->required();

    auto* hs = app.add_subcommand("hs-check", "compare H- and G-cohomology")->fallthrough();
    hs->add_option("file", file, "scenario JSON, '-' for stdin")->required();
    hs->add_option("--expect", expect, "expected verdict");

    auto* e2 = app.add_subcommand("e2", "E_2 page and inflation-restriction")->fallthrough();
    e2->add_option("file", file, "scenario JSON, '-' for stdin")->required();
    e2->add_option("--p-max", p_max)->default_val(2);
    e2->add_option("--q-max", q_max)->default_val(2);

    auto* scen = app.add_subcommand("scenario", "run a catalog scenario")->fallthrough();
    scen->add_option("id", id, "scenario id")->required();
    scen->add_option("--p", sp, "prime for p-adic scenarios")->default_val(2);
    scen->add_option("--d", sd, "relative dimension for ex5.6")->default_val(1);

    auto* padic = app.add_subcommand("padic", "gains, inversion and vanishing on a label summand")->fallthrough();
    padic->require_subcommand(1);
    std::string padic_what;
    for (const char* w : {"gain", "invert", "vanish"}) {
        auto* sub = padic->add_subcommand(w)->fallthrough();
        sub->add_option("--p", pa.p)->default_val(2);
        sub->add_option("--d", pa.d)->default_val(0);
        sub->add_option("--N", pa.N, "precision, default 2p^2 + 8");
        sub->add_option("--D", pa.D, "degree cap");
        sub->add_option("--label", pa.label, "comma separated e_0,...,e_d");
        if (std::string(w) == "vanish") sub->add_option("--expect", pa.expect, "expected verdict");
        sub->callback([&padic_what, w] { padic_what = w; });
    }

    auto* hom = app.add_subcommand("homotopy", "contraction bound and identity checks")->fallthrough();
    hom->require_subcommand(1);
    auto* hbound = hom->add_subcommand("bound")->fallthrough();
    hbound->add_option("--p", ha.p)->required();
    hbound->add_option("--gc", ha.gc)->required();
    hbound->add_option("--tau", ha.tau)->required();
    hbound->add_option("--eps", ha.eps)->default_val(1);
    auto* hcheck = hom->add_subcommand("check")->fallthrough();
    hcheck->add_option("--p", ha.p)->default_val(2);
    hcheck->add_option("--N", ha.N)->default_val(16);
    hcheck->add_option("--eps", ha.eps)->default_val(1);
    hcheck->add_option("--samples", ha.samples)->default_val(100);
    hcheck->add_option("--label", ha.label, "comma separated e_0,...,e_d");

    auto* su = app.add_subcommand("suite", "acceptance criteria")->fallthrough();
    su->add_option("--only", only, "criterion numbers to run");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        emit(out, error_json("usage", e.what()));
        return kError;
    }

    try {
        if (finite->parsed()) return cmd_finite(g, file, out);
        if (hs->parsed()) return cmd_hs_check(g, file, expect, out);
        if (e2->parsed()) return cmd_e2(g, file, p_max, q_max, out);
        if (scen->parsed()) return cmd_scenario(g, id, sp, sd, out);
        if (padic->parsed()) return cmd_padic(g, padic_what, pa, out);
        if (hbound->parsed()) return cmd_homotopy_bound(ha, out);
        if (hcheck->parsed()) return cmd_homotopy_check(g, ha, out);
        if (su->parsed()) return cmd_suite(g, only, out);
    } catch (const Error& e) {
        emit(out, error_json(e.code(), e.what()));
        return kError;
    } catch (const std::exception& e) {
        emit(out, error_json("internal", e.what()));
        return kError;
    }
    emit(out, error_json("usage", "no subcommand"));
    return kError;
}

} // namespace hsprop::cli
