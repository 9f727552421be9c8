#include <map>
#include <set>

#include "doctest.h"
#include "godo/errors.hpp"
#include "godo/window.hpp"
#include "support.hpp"

using namespace godo;
using namespace testsupport;

namespace {

WindowSpec perf_z(int cap) {
    BuildParams p;
    p.group = GroupKind::Z;
    p.raw_moduli = powers(2, 30);
    p.epsilon = Rational(1, 2);
    p.cap = cap;
    return build_perf(p);
}

CylinderTree tree_of(const WindowSpec& s) { return CylinderTree(domains_for(s), s); }

// π_j(g) ∈ C_j for j ≤ n, straight from the digit roles
bool in_Z(const CylinderTree& t, const Element& g, int n) {
    auto d = t.domains().expand_to(g, n);
    for (int j = 1; j <= n; ++j)
        if (t.role(j, d[j - 1]) != Role::C) return false;
    return true;
}

}  // namespace

TEST_CASE("perf window on Z") {
    BuildLog log;
    BuildParams p;
    p.group = GroupKind::Z;
    p.raw_moduli = powers(2, 30);
    p.cap = 3;
    auto spec = build_perf(p, &log);
    CHECK(spec.cap() == 3);
    CHECK(log.steps.size() == 3);
    auto t = tree_of(spec);
    const auto& ds = t.domains();
    auto K = carry_ranges(ds, 3);
    for (int n = 1; n <= 3; ++n) {
        CHECK(t.digits_with(n, Role::B).size() == 1);
        CHECK(t.digits_with(n, Role::A).size() >= 2);
        CHECK(t.role(n, 0) != Role::C);
        // #((T \ ∂_{K^-1} D_n) \ C) = a_n
        std::vector<Element> Kinv;
        for (const auto& k : K.K[n]) Kinv.push_back(ds.group().inv(k));
        auto bd = vanhove_boundary(ds, Kinv, n);
        std::set<Element> bset(bd.begin(), bd.end());
        int outside = 0;
        for (Digit d = 0; d < ds.alphabet_size(n); ++d) {
            const bool boundary = bset.count(ds.digit(n, d)) > 0;
            if (t.role(n, d) == Role::C) CHECK_FALSE(boundary);
            else if (!boundary) ++outside;
        }
        CHECK(outside == spec.levels[n - 1].a);
        const auto ratio_c = ratio(t.digits_with(n, Role::C).size(), ds.alphabet_size(n));
        CHECK(power_at_least(t.digits_with(n, Role::C).size(), ds.alphabet_size(n), n, Rational(1, 2)));
        CHECK(ratio_c > 0);
    }
    CHECK(check_structure(t).pass);
    CHECK(check_genericity(t).pass);
    CHECK(check_irredundancy(t).pass);
    CHECK(check_self_similarity(t, K).pass);

    Rational prev = 1;
    CHECK(boundary_measure(t, 0).product == 1);
    for (int n = 1; n <= 3; ++n) {
        auto b = boundary_measure(t, n);
        CHECK(b.exhaustive);
        CHECK(b.product == b.counted);
        CHECK(b.product <= prev);
        prev = b.product;
        auto c = cylinder_census(t, n);
        CHECK(c.pending == t.pending_count(n));
        CHECK(c.in + c.out + c.pending == ds.size(n));
    }
    CHECK(prev >= Rational(1, 2));
    auto walk = tree_walk_census(t);
    for (int n = 1; n <= 3; ++n) {
        auto c = cylinder_census(t, n);
        CHECK(walk[n].in == c.in);
        CHECK(walk[n].out == c.out);
        CHECK(walk[n].pending == c.pending);
    }
}

TEST_CASE("builder errors") {
    BuildParams p;
    p.group = GroupKind::Z;
    p.raw_moduli = {4};
    p.a = {4};
    p.cap = 1;
    CHECK_THROWS_AS(build_perf(p), ConstraintError);  // C_1 would be empty
    p.a = {2};
    CHECK_THROWS_AS(build_perf(p), ConfigError);
    p.a = {3};
    p.raw_moduli = powers(2, 3);
    p.cap = 4;
    CHECK_THROWS_AS(build_perf(p), ConstraintError);  // chain exhausted
    p.epsilon = 1;
    CHECK_THROWS_AS(build_perf(p), ConfigError);
}

TEST_CASE("genericity: D_{cap-1} resolves, D_cap contains exactly the all-C elements") {
    auto t = tree_of(perf_z(3));
    const auto& ds = t.domains();
    std::uint64_t hits = 0;
    ds.for_each(2, [&](std::span<const Digit>, const Element& g) { CHECK_FALSE(in_Z(t, g, 3)); });
    ds.for_each(3, [&](std::span<const Digit>, const Element& g) { hits += in_Z(t, g, 3); });
    CHECK(hits == t.pending_count(3));
}

TEST_CASE("adversarial windows") {
    auto spec = perf_z(3);
    auto K = carry_ranges(*domains_for(spec), 3);

    SUBCASE("identity in C") {
        auto bad = spec;
        for (auto& lv : bad.levels) {
            Digit c = 0;
            while (lv.roles[c] != Role::C) ++c;
            std::swap(lv.roles[0], lv.roles[c]);
        }
        auto r = check_genericity(tree_of(bad));
        CHECK_FALSE(r.pass);
        CHECK_FALSE(r.witnesses.empty());
        CHECK_FALSE(check_structure(tree_of(bad)).pass);
    }
    SUBCASE("two OUT children everywhere") {
        auto bad = spec;
        for (auto& lv : bad.levels) {
            for (auto& r : lv.roles) {
                if (r == Role::A) {
                    r = Role::B;
                    break;
                }
            }
        }
        auto r = check_irredundancy(tree_of(bad));
        CHECK_FALSE(r.pass);
        CHECK(r.witnesses.front().find("level 0") != std::string::npos);
    }
    SUBCASE("C touching the van Hove boundary") {
        auto bad = spec;
        auto& roles = bad.levels[1].roles;
        // the last digit of T_1 is the top of the interval: adding a carry leaves D_2
        roles.back() = Role::C;
        auto r = check_self_similarity(tree_of(bad), K);
        CHECK_FALSE(r.pass);
        REQUIRE_FALSE(r.witnesses.empty());
        CHECK(r.witnesses.front().find("level 2") != std::string::npos);
    }
}

TEST_CASE("k windows") {
    auto perf = perf_z(4);
    auto tp = tree_of(perf);

    auto k1 = build_k(perf, 1, 2);
    auto t1 = tree_of(k1);
    for (int n = 1; n <= 3; ++n) {
        for (std::uint64_t i = 0; i < t1.domains().size(n); ++i) {
            auto dd = t1.domains().cylinder_digits(n, i);
            CHECK(t1.classify(dd).cell == tp.classify(dd).cell);
        }
    }

    for (int k : {2, 3}) {
        auto kw = build_k(perf, k, 2);
        auto tk = tree_of(kw);
        CHECK(pending_diff(tp, tk) == 0);
        CHECK(check_irredundancy(tk).pass);
        CHECK(check_genericity(tk).pass);
        // every class holds a boundary cylinder, H_k at least two
        for (int j = 1; j <= k; ++j) CHECK(tk.h_members(j).size() >= (j == k ? 2u : 1u));
        // H_k agrees with the perf window
        tk.for_each_pending_in(3, k, [&](std::span<const Digit> parent) {
            for (Digit d = 0; d < tk.domains().alphabet_size(4); ++d) CHECK(tk.child(parent, d) == tp.child(parent, d));
            return true;
        });
        auto walk = tree_walk_census(tk);
        auto walkp = tree_walk_census(tp);
        for (int n = 0; n <= 4; ++n) CHECK(walk[n].pending == walkp[n].pending);
    }
    CHECK_THROWS_AS(build_k(perf, 3, 0), ConfigError);
    auto tiny = perf;
    tiny.levels.resize(1);
    CHECK_THROWS_AS(build_k(tiny, 20, 1), ConstraintError);  // 13 boundary cylinders at level 1
}

TEST_CASE("ktilde windows") {
    auto perf = perf_z(4);
    auto tp = tree_of(perf);
    for (int k : {2, 3}) {
        auto kw = build_k(perf, k, 2);
        for (auto rule : {ERule::PerParent, ERule::Literal}) {
            auto kt = build_ktilde(kw, rule);
            auto t = tree_of(kt);
            CHECK(pending_diff(tp, t) == 0);
            CHECK(check_irredundancy(t).pass);
            CHECK(check_genericity(t).pass);
            CHECK_NOTHROW(tree_walk_census(t));
            // every PENDING parent keeps an IN child
            for (int n = 0; n < 4; ++n) {
                t.for_each_pending(n, [&](std::span<const Digit> parent) {
                    int in = 0;
                    for (Digit d = 0; d < t.domains().alphabet_size(n + 1); ++d) in += t.child(parent, d) == Cell::In;
                    if (t.spec().n_class(n + 1) <= t.h_class(parent)) CHECK(in >= 1);
                    return true;
                });
            }
            // exhaustive #M_n count agrees with the check
            for (int n = 0; n < 4; ++n) {
                std::uint64_t single = 0;
                auto count = [&](std::span<const Digit> parent) {
                    int out = 0;
                    for (Digit d = 0; d < t.domains().alphabet_size(n + 1); ++d) out += t.child(parent, d) == Cell::Out;
                    single += out == 1;
                    return true;
                };
                if (n + 1 > kt.L) t.for_each_pending_in(n, k, count);
                else t.for_each_pending(n, count);
                CHECK(single >= 1);
                if (rule == ERule::PerParent && kt.n_class(n + 1) == k) CHECK(single == 1);
            }
        }
        // removing nothing gives back the k window
        auto none = build_ktilde(kw, ERule::Literal);
        none.literal_e.clear();
        auto tn = tree_of(none);
        auto tk = tree_of(kw);
        for (std::uint64_t i = 0; i < tn.domains().size(3); ++i) {
            auto d = tn.domains().cylinder_digits(3, i);
            CHECK(tn.classify(d).cell == tk.classify(d).cell);
        }
    }
    // k = 1 puts levels 1..L in N_k; the anchor path must keep its single OUT child there
    for (auto rule : {ERule::PerParent, ERule::Literal}) {
        auto t1 = tree_of(build_ktilde(build_k(perf, 1, 2), rule));
        CHECK(check_irredundancy(t1).pass);
        CHECK(pending_diff(tp, t1) == 0);
        if (rule == ERule::Literal)
            for (const auto& [n, e] : t1.spec().literal_e)
                CHECK_FALSE(t1.is_anchor(std::span<const Digit>(e.data(), e.size() - 1)));
    }
    auto kw = build_k(perf, 2, 2);
    auto bad = build_ktilde(kw, ERule::Literal);
    bad.literal_e[4] = {0, 0, 0, 0};
    CHECK_THROWS_AS(tree_of(bad), ConstraintError);
}

TEST_CASE("level sets") {
    auto t = tree_of(perf_z(2));
    auto s = level_sets(t, 2);
    CHECK(s.Z.size() == t.pending_count(2));
    CHECK(s.X.size() + s.Y.size() + s.Z.size() == t.pending_count(1) * t.domains().alphabet_size(2));
    CHECK(s.Y.size() == t.pending_count(1));
}

TEST_CASE("serialization round trip") {
    auto perf = perf_z(3);
    auto kt = build_ktilde(build_k(perf, 2, 2), ERule::Literal);
    for (const auto& spec : {perf, build_k(perf, 3, 2), kt}) {
        const auto text = serialize(spec);
        auto back = parse_window(text);
        CHECK(serialize(back) == text);
        CHECK(back.h_assign == spec.h_assign);
        CHECK(back.literal_e == spec.literal_e);
        CHECK(back.epsilon == spec.epsilon);
    }
    auto text = serialize(perf);
    CHECK_THROWS_AS(parse_window(text.substr(0, text.size() - 4)), ParseError);
    auto swapped = text;
    auto pos = swapped.find("  T 0 1 2");
    REQUIRE(pos != std::string::npos);
    swapped.replace(pos, 9, "  T 1 0 2");
    CHECK_THROWS_AS(parse_window(swapped), ParseError);
    CHECK_THROWS_AS(parse_window("godo-window 1\ngroup Q\nend\n"), ParseError);
}

TEST_CASE("small heisenberg and Z2 windows") {
    BuildParams p;
    p.group = GroupKind::Heisenberg;
    p.raw_moduli = powers(2, 10);
    p.epsilon = Rational(999, 1000);
    p.cap = 2;
    auto spec = build_perf(p);
    auto t = tree_of(spec);
    auto K = carry_ranges(t.domains(), 2);
    CHECK(check_structure(t).pass);
    CHECK(check_genericity(t).pass);
    CHECK(check_irredundancy(t).pass);
    CHECK(check_self_similarity(t, K).pass);
    CHECK(boundary_measure(t, 2).exhaustive);

    p.group = GroupKind::Z2;
    p.epsilon = Rational(1, 2);
    auto s2 = build_perf(p);
    auto t2 = tree_of(s2);
    CHECK(check_self_similarity(t2, carry_ranges(t2.domains(), 2)).pass);
    CHECK(t2.pending_measure(2) >= Rational(1, 2));
}
