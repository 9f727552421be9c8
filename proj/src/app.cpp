#include "godo/app.hpp"

#include <json.hpp>

#include "godo/errors.hpp"
#include "godo/fiber.hpp"
#include "godo/model_set.hpp"

namespace godo {

namespace {

using Json = nlohmann::ordered_json;

Json rat(const Rational& r) {
    Json j;
    j["num"] = numerator(r).str();
    j["den"] = denominator(r).str();
    return j;
}

Json check_json(const CheckReport& r) {
    Json j;
    j["name"] = r.name;
    j["status"] = r.pass ? "PASS" : "FAIL";
    j["detail"] = r.detail;
    j["witnesses"] = r.witnesses;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

std::vector<Element> patch_of(const CylinderTree& tree, const RunConfig& cfg) {
    if (!cfg.patch_elements.empty()) return cfg.patch_elements;
    const int m = cfg.effective_patch_level();
    if (m > tree.cap()) throw ConfigError("patch.level exceeds the window cap");
    return patch_box(tree.domains(), m);
}

}  // namespace

BuildOutcome run_build(const RunConfig& cfg) {
    cfg.validate();
    BuildLog log;
    WindowSpec spec = build_perf(cfg.build_params(), &log);
    if (cfg.kind != WindowKind::Perf) spec = build_k(spec, cfg.k, cfg.L);
    if (cfg.kind == WindowKind::KTilde) spec = build_ktilde(spec, cfg.e_rule);
    CylinderTree tree(domains_for(spec), spec);
    const auto& ds = tree.domains();

    Json j;
    j["group"] = Group(spec.group).name();
    j["kind"] = to_string(spec.kind);
    j["cap"] = spec.cap();
    j["epsilon"] = rat(spec.epsilon);
    if (spec.kind != WindowKind::Perf) {
        j["k"] = spec.k;
        j["L"] = spec.L;
        Json h = Json::array();
        for (int c = 1; c <= spec.k; ++c) h.push_back(tree.h_members(c).size());
        j["boundary_cylinders_per_class"] = h;
    }
    if (spec.kind == WindowKind::KTilde) j["e_rule"] = to_string(spec.e_rule);
    Json levels = Json::array();
    for (int n = 1; n <= spec.cap(); ++n) {
        Json l;
        l["level"] = n;
        l["raw_level"] = spec.levels[n - 1].raw_level;
        l["modulus"] = spec.levels[n - 1].modulus;
        l["T"] = ds.alphabet_size(n);
        l["A"] = tree.digits_with(n, Role::A).size();
        l["B"] = tree.digits_with(n, Role::B).size();
        l["C"] = tree.digits_with(n, Role::C).size();
        l["a"] = spec.levels[n - 1].a;
        l["n_class"] = spec.n_class(n);
        l["nu_Z"] = rat(tree.pending_measure(n));
        l["nu_Z_approx"] = tree.pending_measure(n).convert_to<double>();
        const auto& step = log.steps[n - 1];
        l["skipped_raw_levels"] = step.skipped;
        if (!step.skipped.empty()) l["telescoping_note"] = step.note;
        levels.push_back(l);
    }
    j["levels"] = levels;
    j["nu_Z_cap"] = rat(tree.pending_measure(spec.cap()));
    j["lower_bound"] = rat(1 - spec.epsilon);
    j["bound_holds"] = tree.pending_measure(spec.cap()) >= 1 - spec.epsilon;
    return {spec, j.dump(2) + "\n"};
}

VerifyOutcome run_verify(const WindowSpec& spec, std::uint64_t census_limit) {
    CylinderTree tree(domains_for(spec), spec);
    const auto& ds = tree.domains();
    const int cap = tree.cap();
    std::vector<CheckReport> checks;
    checks.push_back(check_structure(tree));
    checks.push_back(check_genericity(tree));
    checks.push_back(check_irredundancy(tree));
    checks.push_back(check_self_similarity(tree, carry_ranges(ds, cap)));

    CheckReport bm{"boundary_measure", true, "", {}, {}};
    CheckReport reg{"regularity", true, "", {}, {}};
    Rational prev_d = 0;
    int exhaustive = 0;
    for (int n = 0; n <= cap; ++n) {
        try {
            auto b = boundary_measure(tree, n, census_limit);
            exhaustive += b.exhaustive;
            bm.witnesses.push_back("level " + std::to_string(n) + ": " + to_string(b.product) +
                                   (b.exhaustive ? " (exhaustive census)" : " (PENDING enumeration)"));
        } catch (const InternalError& e) {
            bm.pass = false;
            bm.witnesses.push_back(e.what());
        }
        if (n >= 1 && ds.size(n) <= census_limit) {
            try {
                auto r = regularity(tree, n);
                if (r.d < prev_d) {
                    reg.pass = false;
                    reg.witnesses.push_back("d decreases at level " + std::to_string(n));
                }
                prev_d = r.d;
                reg.witnesses.push_back("level " + std::to_string(n) + ": d = " + to_string(r.d));
            } catch (const InternalError& e) {
                reg.pass = false;
                reg.witnesses.push_back(e.what());
            }
        }
    }
    bm.detail = "product formula equals the PENDING count at levels 0.." + std::to_string(cap) + " (" +
                std::to_string(exhaustive) + " by full census)";
    reg.detail = "d_n + nu(Z_n) = 1 where #D_n <= " + std::to_string(census_limit);
    checks.push_back(bm);
    checks.push_back(reg);

    CheckReport walk{"tree_consistency", true, "per-parent child counts match the rule at every level", {}, {}};
    try {
        tree_walk_census(tree);
    } catch (const InternalError& e) {
        walk.pass = false;
        walk.witnesses.push_back(e.what());
    }
    checks.push_back(walk);

    Json j;
    j["kind"] = to_string(spec.kind);
    j["group"] = Group(spec.group).name();
    j["cap"] = cap;
    Json arr = Json::array();
    bool pass = true;
    for (const auto& c : checks) {
        arr.push_back(check_json(c));
        pass = pass && c.pass;
    }
    j["checks"] = arr;
    j["pass"] = pass;
    return {pass, j.dump(2) + "\n"};
}

OdometerPoint choose_xi(const CylinderTree& tree, const RunConfig& cfg) {
    switch (cfg.xi) {
        case XiRule::Identity: return identity_point(tree.cap());
        case XiRule::Haar:
            if (!cfg.seed) throw ConfigError("Haar sampling needs a seed");
            return sample_point(tree.domains(), *cfg.seed, tree.cap());
        case XiRule::Critical:
            if (!cfg.seed) throw ConfigError("critical sampling needs a seed");
            return critical_point(tree, *cfg.seed);
    }
    return identity_point(tree.cap());
}

std::string run_emit(const WindowSpec& spec, const RunConfig& cfg) {
    CylinderTree tree(domains_for(spec), spec);
    auto patch = emit_patch(tree, choose_xi(tree, cfg), patch_of(tree, cfg));
    return patch_jsonl(tree.domains().group(), patch);
}

std::string run_render(const WindowSpec& spec, const RunConfig& cfg) {
    CylinderTree tree(domains_for(spec), spec);
    if (!cfg.patch_elements.empty()) throw ConfigError("render draws the box D_m; drop patch.elements");
    const int m = cfg.effective_patch_level();
    if (m > tree.cap()) throw ConfigError("patch.level exceeds the window cap");
    if (spec.group != GroupKind::Z2) throw ConfigError("render needs the group Z2");
    auto patch = emit_patch(tree, choose_xi(tree, cfg), patch_box(tree.domains(), m));
    return render_pgm(tree.domains(), patch, m);
}

std::string run_fiber(const WindowSpec& spec, const RunConfig& cfg) {
    CylinderTree tree(domains_for(spec), spec);
    const Group& G = tree.domains().group();
    const auto xi = choose_xi(tree, cfg);
    SimilarityReport rep = cfg.patch_elements.empty() ? similarity_classes(tree, xi, cfg.effective_patch_level())
                                                      : similarity_classes(tree, xi, cfg.patch_elements);
    auto fs = enumerate_fiber(rep);
    Json j;
    j["kind"] = to_string(spec.kind);
    j["cap"] = tree.cap();
    j["xi"] = xi.digits;
    j["critical"] = rep.critical();
    j["all_classes_hit"] = rep.all_hit();
    Json cls = Json::array();
    for (int c = 1; c <= rep.k; ++c) {
        Json x;
        x["class"] = c;
        x["size"] = rep.classes[c].size();
        Json el = Json::array();
        for (const auto& g : rep.classes[c]) el.push_back(G.format(g));
        x["elements"] = el;
        cls.push_back(x);
    }
    j["classes"] = cls;
    Json cands = Json::array();
    for (const auto& c : fs.candidates) {
        Json x;
        x["label"] = c.label;
        x["ones_per_class"] = std::vector<std::uint64_t>(c.ones.begin() + 1, c.ones.end());
        cands.push_back(x);
    }
    j["candidates"] = cands;
    j["distinct"] = fs.distinct;
    j["monotone"] = fs.monotone;
    if (!fs.monotone) j["monotone_witness"] = fs.monotone_witness;
    return j.dump(2) + "\n";
}

std::string run_stats(const WindowSpec& spec, const RunConfig& cfg) {
    CylinderTree tree(domains_for(spec), spec);
    const auto xi = choose_xi(tree, cfg);
    auto rep = birkhoff_stats(tree, xi, 1);
    Json j;
    j["kind"] = to_string(spec.kind);
    j["xi"] = xi.digits;
    Json levels = Json::array();
    for (const auto& l : rep.levels) {
        Json x;
        x["level"] = l.level;
        x["total"] = l.total;
        x["in"] = l.in;
        x["out"] = l.out;
        x["pending_per_class"] = std::vector<std::uint64_t>(l.pending.begin() + 1, l.pending.end());
        x["nu_interior"] = rat(l.nu_in);
        Json f = Json::array(), e = Json::array();
        for (const auto& r : l.freq) f.push_back(rat(r));
        for (const auto& r : l.exact) e.push_back(rat(r));
        x["candidate_frequency"] = f;
        x["candidate_density"] = e;
        x["match"] = l.match;
        levels.push_back(x);
    }
    j["levels"] = levels;
    j["all_match"] = rep.all_match();
    return j.dump(2) + "\n";
}

}  // namespace godo
