#include "godo/window.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "godo/errors.hpp"

namespace godo {

std::string to_string(WindowKind k) {
    switch (k) {
        case WindowKind::Perf: return "perf";
        case WindowKind::K: return "k";
        case WindowKind::KTilde: return "ktilde";
    }
    return "?";
}

std::string to_string(ERule r) { return r == ERule::PerParent ? "per_parent" : "literal"; }

WindowKind parse_window_kind(const std::string& s) {
    if (s == "perf") return WindowKind::Perf;
    if (s == "k") return WindowKind::K;
    if (s == "ktilde") return WindowKind::KTilde;
    throw ConfigError("unknown window kind '" + s + "' (expected perf, k or ktilde)");
}

ERule parse_e_rule(const std::string& s) {
    if (s == "per_parent") return ERule::PerParent;
    if (s == "literal") return ERule::Literal;
    throw ConfigError("unknown e_rule '" + s + "' (expected per_parent or literal)");
}

std::vector<i64> WindowSpec::moduli() const {
    std::vector<i64> m;
    for (const auto& l : levels) m.push_back(l.modulus);
    return m;
}

int WindowSpec::n_class(int n) const {
    if (kind == WindowKind::Perf || n <= L) return 1;
    return 1 + (n - L - 1) % k;
}

int a_at(const std::vector<int>& a, int n) {
    if (a.empty()) return 3;
    return n <= static_cast<int>(a.size()) ? a[n - 1] : a.back();
}

std::shared_ptr<const DomainSequence> domains_for(const WindowSpec& spec) {
    return std::make_shared<const DomainSequence>(SubgroupChain(Group(spec.group), spec.moduli()));
}

// ---------------------------------------------------------------------------
// CylinderTree

namespace {

struct HIndex {
    std::unordered_map<std::uint64_t, int> map;
};

}  // namespace

CylinderTree::CylinderTree(std::shared_ptr<const DomainSequence> ds, WindowSpec spec)
    : ds_(std::move(ds)), spec_(std::move(spec)) {
    const int cap = spec_.cap();
    if (ds_->levels() < cap) throw ConstraintError("domain sequence shorter than window cap");
    roles_.resize(cap + 1);
    by_role_.resize(cap + 1, std::vector<std::vector<Digit>>(3));
    for (int n = 1; n <= cap; ++n) {
        const auto& lv = spec_.levels[n - 1];
        if (lv.roles.size() != ds_->alphabet_size(n)) {
            throw ConstraintError("level " + std::to_string(n) + " assigns " + std::to_string(lv.roles.size()) +
                                  " roles for " + std::to_string(ds_->alphabet_size(n)) + " digits");
        }
        roles_[n].resize(lv.roles.size());
        for (Digit d = 0; d < lv.roles.size(); ++d) {
            roles_[n][d] = static_cast<std::uint8_t>(lv.roles[d]);
            by_role_[n][static_cast<int>(lv.roles[d])].push_back(d);
        }
    }
    if (spec_.kind != WindowKind::Perf) {
        if (spec_.k < 1) throw ConstraintError("k must be >= 1");
        if (spec_.L < 1 || spec_.L > cap) throw ConstraintError("partition level L must lie in [1, cap]");
        h_members_.assign(spec_.k + 1, {});
        for (const auto& [idx, j] : spec_.h_assign) {
            if (j < 1 || j > spec_.k) throw ConstraintError("H class " + std::to_string(j) + " out of range");
            auto digits = ds_->cylinder_digits(spec_.L, idx);
            for (int n = 1; n <= spec_.L; ++n) {
                if (role(n, digits[n - 1]) != Role::C) {
                    throw ConstraintError("H assignment lists level-" + std::to_string(spec_.L) + " cylinder " +
                                          std::to_string(idx) + " which is not a boundary cylinder");
                }
            }
            h_members_[j].push_back(std::move(digits));
        }
        if (h_members_[spec_.k].empty()) throw ConstraintError("H_k contains no boundary cylinder");
        anchor_ = h_members_[spec_.k].front();
    } else {
        h_members_.assign(2, {});
    }
    if (spec_.kind == WindowKind::KTilde && spec_.e_rule == ERule::Literal) {
        for (const auto& [n, e] : spec_.literal_e) {
            bool ok = n >= 1 && n <= cap && static_cast<int>(e.size()) == n && spec_.n_class(n) == spec_.k;
            for (int j = 1; ok && j <= n; ++j) ok = e[j - 1] < ds_->alphabet_size(j);
            for (int j = 1; ok && j < n; ++j) ok = role(j, e[j - 1]) == Role::C;
            ok = ok && role(n, e[n - 1]) == Role::A;
            if (!ok) throw ConstraintError("E_" + std::to_string(n) + " is not a level-" + std::to_string(n) +
                                           " cylinder inside X_n with n in N_k");
        }
    }
}

const std::vector<Digit>& CylinderTree::digits_with(int n, Role r) const { return by_role_[n][static_cast<int>(r)]; }

const std::vector<std::vector<Digit>>& CylinderTree::h_members(int j) const { return h_members_[j]; }

int CylinderTree::h_class(std::span<const Digit> digits) const {
    if (spec_.kind == WindowKind::Perf || spec_.k == 1) return 1;
    if (static_cast<int>(digits.size()) < spec_.L) return 1;
    const auto idx = ds_->cylinder_index(digits.subspan(0, spec_.L));
    auto it = spec_.h_assign.find(idx);
    return it == spec_.h_assign.end() ? 1 : it->second;
}

bool CylinderTree::is_anchor(std::span<const Digit> parent) const {
    const int L = spec_.L;
    for (std::size_t j = 0; j < parent.size(); ++j) {
        const Digit want = static_cast<int>(j) < L ? anchor_[j] : by_role_[j + 1][static_cast<int>(Role::C)].front();
        if (parent[j] != want) return false;
    }
    return true;
}

const std::vector<Digit>* CylinderTree::literal_e(int n) const {
    auto it = spec_.literal_e.find(n);
    return it == spec_.literal_e.end() ? nullptr : &it->second;
}

Cell CylinderTree::child(std::span<const Digit> parent, Digit d) const {
    const int n = static_cast<int>(parent.size()) + 1;
    const Role r = role(n, d);
    if (r == Role::C) return Cell::Pending;
    if (r == Role::B) return Cell::Out;
    if (spec_.kind == WindowKind::Perf) return Cell::In;
    const int nc = spec_.n_class(n);
    const int h = n <= spec_.L && spec_.k > 1 ? 1 : h_class(parent);
    if (nc > h) return Cell::Out;
    if (spec_.kind == WindowKind::KTilde && nc == spec_.k && h == spec_.k) {
        if (spec_.e_rule == ERule::PerParent) {
            if (d == by_role_[n][static_cast<int>(Role::A)].front() && !is_anchor(parent)) return Cell::Out;
        } else if (const auto* e = literal_e(n)) {
            if (d == e->back() && std::equal(parent.begin(), parent.end(), e->begin())) return Cell::Out;
        }
    }
    return Cell::In;
}

CylinderTree::Result CylinderTree::classify(std::span<const Digit> digits) const {
    const int m = std::min(static_cast<int>(digits.size()), cap());
    for (int n = 1; n <= m; ++n) {
        if (roles_[n][digits[n - 1]] == static_cast<std::uint8_t>(Role::C)) continue;
        return {child(digits.subspan(0, n - 1), digits[n - 1]), n};
    }
    return {Cell::Pending, m};
}

namespace {

// Mixed-radix walk over per-level choice lists, first list fastest.
bool walk(const std::vector<const std::vector<Digit>*>& lists, std::vector<Digit>& buf, std::size_t offset,
          const std::function<bool(std::span<const Digit>)>& fn) {
    const std::size_t n = lists.size();
    for (const auto* l : lists)
        if (l->empty()) return true;
    std::vector<std::size_t> pos(n, 0);
    for (std::size_t j = 0; j < n; ++j) buf[offset + j] = (*lists[j])[0];
    while (true) {
        if (!fn(buf)) return false;
        std::size_t j = 0;
        while (j < n && ++pos[j] == lists[j]->size()) {
            pos[j] = 0;
            buf[offset + j] = (*lists[j])[0];
            ++j;
        }
        if (j == n) return true;
        buf[offset + j] = (*lists[j])[pos[j]];
    }
}

}  // namespace

void CylinderTree::for_each_pending(int n, const std::function<bool(std::span<const Digit>)>& fn) const {
    std::vector<const std::vector<Digit>*> lists;
    for (int j = 1; j <= n; ++j) lists.push_back(&digits_with(j, Role::C));
    std::vector<Digit> buf(n);
    if (n == 0) {
        fn(buf);
        return;
    }
    walk(lists, buf, 0, fn);
}

void CylinderTree::for_each_pending_in(int n, int j, const std::function<bool(std::span<const Digit>)>& fn) const {
    if (spec_.kind == WindowKind::Perf) {
        for_each_pending(n, fn);
        return;
    }
    if (n < spec_.L) throw std::invalid_argument("H classes are defined from level L on");
    const auto& members = h_members_[j];
    if (members.empty()) return;
    std::vector<const std::vector<Digit>*> lists;
    for (int lv = spec_.L + 1; lv <= n; ++lv) lists.push_back(&digits_with(lv, Role::C));
    std::vector<Digit> buf(n);
    for (const auto* l : lists)
        if (l->empty()) return;
    // deeper digits most significant, prefix fastest
    std::vector<std::size_t> pos(lists.size(), 0);
    for (std::size_t t = 0; t < lists.size(); ++t) buf[spec_.L + t] = (*lists[t])[0];
    while (true) {
        for (const auto& m : members) {
            std::copy(m.begin(), m.end(), buf.begin());
            if (!fn(buf)) return;
        }
        std::size_t t = 0;
        while (t < lists.size() && ++pos[t] == lists[t]->size()) {
            pos[t] = 0;
            buf[spec_.L + t] = (*lists[t])[0];
            ++t;
        }
        if (t == lists.size()) return;
        buf[spec_.L + t] = (*lists[t])[pos[t]];
    }
}

Rational CylinderTree::pending_measure(int n) const {
    Rational r = 1;
    for (int j = 1; j <= n; ++j) r *= ratio(digits_with(j, Role::C).size(), ds_->alphabet_size(j));
    return r;
}

std::uint64_t CylinderTree::pending_count(int n) const {
    std::uint64_t c = 1;
    for (int j = 1; j <= n; ++j) c = umul(c, digits_with(j, Role::C).size());
    return c;
}

// ---------------------------------------------------------------------------
// Builders

namespace {

struct LevelAttempt {
    bool ok = false;
    std::vector<Role> roles;
    std::string why;
};

LevelAttempt try_level(const DomainSequence& ds, const std::vector<Element>& K, int n, int a, const Rational& eps) {
    const Group& G = ds.group();
    const auto& T = ds.alphabet(n);
    std::vector<bool> boundary(T.size(), false);
    for (std::size_t d = 0; d < T.size(); ++d) {
        for (const auto& k : K) {
            if (!ds.contains(G.mul(k, T[d]), n)) {
                boundary[d] = true;
                break;
            }
        }
    }
    std::vector<bool> inC(T.size(), false);
    int reserved = 0;
    std::size_t eligible = 0;
    for (std::size_t d = 0; d < T.size(); ++d) {
        if (boundary[d]) continue;
        ++eligible;
        if (reserved < a) {
            ++reserved;  // digit 0 (identity) comes first when eligible
        } else {
            inC[d] = true;
        }
    }
    const std::size_t nC = std::count(inC.begin(), inC.end(), true);
    LevelAttempt out;
    if (nC == 0) {
        out.why = "#T=" + std::to_string(T.size()) + ", boundary=" + std::to_string(T.size() - eligible) +
                  ", a=" + std::to_string(a) + " leaves C empty";
        return out;
    }
    if (!power_at_least(nC, T.size(), n, 1 - eps)) {
        out.why = "(#C/#T)^(2^" + std::to_string(n) + ") = (" + std::to_string(nC) + "/" + std::to_string(T.size()) +
                  ")^" + std::to_string(1ull << n) + " < 1 - epsilon = " + to_string(Rational(1 - eps));
        return out;
    }
    out.ok = true;
    out.roles.assign(T.size(), Role::A);
    bool haveB = false;
    for (std::size_t d = 0; d < T.size(); ++d) {
        if (inC[d]) {
            out.roles[d] = Role::C;
        } else if (!haveB && d != 0) {
            out.roles[d] = Role::B;
            haveB = true;
        }
    }
    return out;
}

}  // namespace

WindowSpec build_perf(const BuildParams& p, BuildLog* log) {
    if (p.cap < 1) throw ConfigError("cap must be >= 1");
    if (p.epsilon <= 0 || p.epsilon >= 1) throw ConfigError("epsilon must lie in (0,1)");
    for (int n = 1; n <= p.cap; ++n) {
        if (a_at(p.a, n) < 3) throw ConfigError("a_" + std::to_string(n) + " = " + std::to_string(a_at(p.a, n)) + " < 3");
    }
    const Group G(p.group);
    WindowSpec spec;
    spec.kind = WindowKind::Perf;
    spec.group = p.group;
    spec.epsilon = p.epsilon;
    std::vector<i64> chosen;
    int raw = 0;
    for (int n = 1; n <= p.cap; ++n) {
        const int a = a_at(p.a, n);
        std::vector<Element> K{G.identity()};
        if (n > 1) {
            DomainSequence prev(SubgroupChain(G, chosen));
            K = carry_ranges(prev, n).K[n];
        }
        TelescopeStep step;
        step.level = n;
        bool done = false;
        std::string last_why = "raw chain exhausted";
        for (int r = raw + 1; r <= static_cast<int>(p.raw_moduli.size()); ++r) {
            auto trial = chosen;
            trial.push_back(p.raw_moduli[r - 1]);
            SubgroupChain chain(G, trial);
            if (chain.index(n) > p.max_domain) {
                last_why = "index " + std::to_string(chain.index(n)) + " exceeds max_domain";
                break;
            }
            DomainSequence ds(chain);
            auto att = try_level(ds, K, n, a, p.epsilon);
            if (!att.ok) {
                step.skipped.push_back(r);
                step.note = att.why;
                last_why = att.why;
                continue;
            }
            LevelSpec lv;
            lv.modulus = p.raw_moduli[r - 1];
            lv.raw_level = r;
            lv.a = a;
            lv.roles = std::move(att.roles);
            spec.levels.push_back(std::move(lv));
            chosen = std::move(trial);
            step.raw_level = r;
            raw = r;
            done = true;
            break;
        }
        if (!done) {
            throw ConstraintError("level " + std::to_string(n) + ": no raw chain level satisfies the constraints; last: " +
                                  last_why);
        }
        if (log) log->steps.push_back(step);
    }
    return spec;
}

WindowSpec build_k(const WindowSpec& perf, int k, int L) {
    if (perf.kind != WindowKind::Perf) throw ConfigError("build_k expects a perf window");
    if (k < 1) throw ConfigError("k must be >= 1");
    if (L < 1 || L > perf.cap()) throw ConfigError("L must lie in [1, cap]");
    WindowSpec spec = perf;
    spec.kind = WindowKind::K;
    spec.k = k;
    spec.L = L;
    spec.h_assign.clear();
    CylinderTree base(domains_for(perf), perf);
    std::vector<std::uint64_t> pending;
    base.for_each_pending(L, [&](std::span<const Digit> d) {
        pending.push_back(base.domains().cylinder_index(d));
        return true;
    });
    std::sort(pending.begin(), pending.end());
    const std::size_t P = pending.size();
    if (P < static_cast<std::size_t>(k) + 1) {
        throw ConstraintError("only " + std::to_string(P) + " boundary cylinders at level L=" + std::to_string(L) +
                              "; need k+1 = " + std::to_string(k + 1) + " (increase L)");
    }
    for (std::size_t i = 0; i + 2 < P; ++i) spec.h_assign[pending[i]] = 1 + static_cast<int>(i % k);
    spec.h_assign[pending[P - 2]] = k;
    spec.h_assign[pending[P - 1]] = k;
    return spec;
}

WindowSpec build_ktilde(const WindowSpec& kwin, ERule rule) {
    if (kwin.kind != WindowKind::K) throw ConfigError("build_ktilde expects a k window");
    WindowSpec spec = kwin;
    spec.kind = WindowKind::KTilde;
    spec.e_rule = rule;
    spec.literal_e.clear();
    if (rule == ERule::Literal) {
        CylinderTree tree(domains_for(spec), spec);
        int ordinal = 0;
        for (int n = 1; n <= spec.cap(); ++n) {
            if (spec.n_class(n) != spec.k) continue;
            std::uint64_t count = 0;
            // the anchor keeps its A-children, as in the per-parent rule
            auto counter = [&](std::span<const Digit> d) {
                count += !tree.is_anchor(d);
                return true;
            };
            if (n - 1 >= spec.L) tree.for_each_pending_in(n - 1, spec.k, counter);
            else tree.for_each_pending(n - 1, counter);
            if (count == 0) continue;
            const std::uint64_t target = static_cast<std::uint64_t>(ordinal++) % count;
            std::uint64_t i = 0;
            std::vector<Digit> parent;
            auto pick = [&](std::span<const Digit> d) {
                if (tree.is_anchor(d)) return true;
                if (i++ == target) {
                    parent.assign(d.begin(), d.end());
                    return false;
                }
                return true;
            };
            if (n - 1 >= spec.L) tree.for_each_pending_in(n - 1, spec.k, pick);
            else tree.for_each_pending(n - 1, pick);
            parent.push_back(tree.digits_with(n, Role::A).front());
            spec.literal_e[n] = parent;
        }
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Checks

namespace {

std::string digits_text(std::span<const Digit> d) {
    std::string s = "[";
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
    return s + "]";
}

}  // namespace

CheckReport check_structure(const CylinderTree& tree) {
    CheckReport r{"structure", true, "", {}, {}};
    for (int n = 1; n <= tree.cap(); ++n) {
        const auto nA = tree.digits_with(n, Role::A).size();
        const auto nB = tree.digits_with(n, Role::B).size();
        const auto nC = tree.digits_with(n, Role::C).size();
        std::string bad;
        if (nB != 1) bad += " #B=" + std::to_string(nB);
        if (nA < 2) bad += " #A=" + std::to_string(nA);
        if (nC < 1) bad += " #C=0";
        if (tree.role(n, 0) == Role::C) bad += " identity in C";
        if (!bad.empty()) {
            r.pass = false;
            r.witnesses.push_back("level " + std::to_string(n) + ":" + bad);
        }
    }
    r.detail = r.pass ? "partitions valid at all levels" : "partition invariants violated";
    return r;
}

CheckReport check_genericity(const CylinderTree& tree) {
    CheckReport r{"genericity", true, "", {}, {}};
    const int cap = tree.cap();
    for (int n = 1; n <= cap; ++n) {
        if (tree.role(n, 0) == Role::C) {
            r.pass = false;
            r.witnesses.push_back("level " + std::to_string(n) + ": identity digit in C");
        }
    }
    const auto& ds = tree.domains();
    std::uint64_t checked = 0;
    bool reported = false;
    ds.for_each(cap - 1, [&](std::span<const Digit>, const Element& g) {
        ++checked;
        const auto digits = ds.expand_to(g, cap);
        if (tree.classify(digits).cell == Cell::Pending) {
            r.pass = false;
            if (!reported) {
                r.witnesses.push_back("tau(" + ds.group().format(g) + ") in Z_" + std::to_string(cap) + ", digits " +
                                      digits_text(digits));
                reported = true;
            }
        }
    });
    r.detail = "identity digit outside C at levels 1.." + std::to_string(cap) + "; " + std::to_string(checked) +
               " elements of D_" + std::to_string(cap - 1) + " resolve before level " + std::to_string(cap + 1);
    return r;
}

CheckReport check_irredundancy(const CylinderTree& tree) {
    CheckReport r{"irredundancy", true, "", {}, {}};
    const auto& spec = tree.spec();
    const auto& ds = tree.domains();
    for (int n = 0; n < tree.cap(); ++n) {
        const bool restrict = spec.kind != WindowKind::Perf && n + 1 > spec.L;
        bool found = false;
        std::vector<Digit> witness;
        auto probe = [&](std::span<const Digit> parent) {
            int outs = 0;
            for (Digit d = 0; d < ds.alphabet_size(n + 1); ++d) {
                if (tree.child(parent, d) == Cell::Out && ++outs > 1) break;
            }
            if (outs == 1) {
                found = true;
                witness.assign(parent.begin(), parent.end());
                return false;
            }
            return true;
        };
        if (restrict) tree.for_each_pending_in(n, spec.k, probe);
        else tree.for_each_pending(n, probe);
        if (found) {
            r.witnesses.push_back("level " + std::to_string(n) + ": cylinder " + digits_text(witness) +
                                  (restrict ? " in H_" + std::to_string(spec.k) : "") + " has one OUT child");
        } else {
            r.pass = false;
            r.witnesses.push_back("level " + std::to_string(n) + ": no PENDING cylinder" +
                                  (restrict ? " in H_" + std::to_string(spec.k) : "") + " with exactly one OUT child");
        }
    }
    r.detail = r.pass ? "#M_n = 1 witnessed at levels 0.." + std::to_string(tree.cap() - 1) : "criterion fails";
    return r;
}

CheckReport check_self_similarity(const CylinderTree& tree, const CarryRanges& K) {
    CheckReport r{"self_similarity", true, "", {}, {}};
    const auto& ds = tree.domains();
    const Group& G = ds.group();
    if (K.levels() < tree.cap()) throw std::invalid_argument("carry ranges shorter than cap");
    std::uint64_t pairs = 0;
    for (int n = 1; n <= tree.cap(); ++n) {
        bool level_ok = true;
        for (const auto& k : K.K[n]) {
            for (Digit c : tree.digits_with(n, Role::C)) {
                ++pairs;
                const Element prod = G.mul(k, ds.digit(n, c));
                if (!ds.contains(prod, n)) {
                    r.pass = false;
                    if (level_ok) {
                        r.witnesses.push_back("level " + std::to_string(n) + ": k=" + G.format(k) + ", c=" +
                                              G.format(ds.digit(n, c)) + ", k*c=" + G.format(prod) + " not in D_" +
                                              std::to_string(n));
                    }
                    level_ok = false;
                }
            }
        }
    }
    r.detail = std::to_string(pairs) + " products K_n*C_n tested";
    return r;
}

// ---------------------------------------------------------------------------
// Census

LevelCensus cylinder_census(const CylinderTree& tree, int n) {
    LevelCensus c;
    const auto& ds = tree.domains();
    std::vector<Digit> digits(n, 0);
    const std::uint64_t total = ds.size(n);
    for (std::uint64_t i = 0; i < total; ++i) {
        switch (tree.classify(digits).cell) {
            case Cell::In: ++c.in; break;
            case Cell::Out: ++c.out; break;
            case Cell::Pending: ++c.pending; break;
        }
        for (int j = 1; j <= n; ++j) {
            if (++digits[j - 1] < ds.alphabet_size(j)) break;
            digits[j - 1] = 0;
        }
    }
    return c;
}

std::vector<LevelCensus> tree_walk_census(const CylinderTree& tree) {
    const auto& spec = tree.spec();
    const auto& ds = tree.domains();
    std::vector<LevelCensus> out(tree.cap() + 1);
    out[0].pending = 1;
    for (int n = 1; n <= tree.cap(); ++n) {
        const std::uint64_t T = ds.alphabet_size(n);
        LevelCensus& c = out[n];
        c.in = umul(out[n - 1].in, T);
        c.out = umul(out[n - 1].out, T);
        const auto nA = tree.digits_with(n, Role::A).size();
        const auto nC = tree.digits_with(n, Role::C).size();
        const Digit firstA = tree.digits_with(n, Role::A).front();
        tree.for_each_pending(n - 1, [&](std::span<const Digit> parent) {
            std::uint64_t in = 0, outc = 0, pend = 0;
            for (Digit d = 0; d < T; ++d) {
                switch (tree.child(parent, d)) {
                    case Cell::In: ++in; break;
                    case Cell::Out: ++outc; break;
                    case Cell::Pending: ++pend; break;
                }
            }
            // independent restatement of the child rule
            std::uint64_t want_in = nA;
            if (spec.kind != WindowKind::Perf) {
                const int nc = spec.n_class(n);
                const int h = n <= spec.L && spec.k > 1 ? 1 : tree.h_class(parent);
                if (nc > h) want_in = 0;
                else if (spec.kind == WindowKind::KTilde && nc == spec.k && h == spec.k) {
                    bool removed = false;
                    if (spec.e_rule == ERule::PerParent) removed = !tree.is_anchor(parent);
                    else if (const auto* e = tree.literal_e(n))
                        removed = std::equal(parent.begin(), parent.end(), e->begin());
                    if (removed) want_in -= 1;
                }
            }
            if (pend != nC || in != want_in || outc != T - nC - want_in) {
                throw InternalError("tree inconsistency below cylinder " + digits_text(parent) + " at level " +
                                    std::to_string(n));
            }
            (void)firstA;
            c.in += in;
            c.out += outc;
            c.pending += pend;
            return true;
        });
    }
    return out;
}

BoundaryMeasure boundary_measure(const CylinderTree& tree, int n, std::uint64_t census_limit) {
    BoundaryMeasure b;
    b.product = tree.pending_measure(n);
    const auto& ds = tree.domains();
    if (ds.size(n) <= census_limit) {
        b.counted = ratio(cylinder_census(tree, n).pending, ds.size(n));
        b.exhaustive = true;
    } else {
        std::uint64_t count = 0;
        tree.for_each_pending(n, [&](std::span<const Digit>) {
            ++count;
            return true;
        });
        b.counted = ratio(count, ds.size(n));
    }
    if (b.product != b.counted) {
        throw InternalError("boundary measure mismatch at level " + std::to_string(n) + ": product " +
                            to_string(b.product) + " vs count " + to_string(b.counted));
    }
    return b;
}

LevelSets level_sets(const CylinderTree& tree, int n) {
    LevelSets s;
    const auto& ds = tree.domains();
    std::vector<Digit> child;
    tree.for_each_pending(n - 1, [&](std::span<const Digit> parent) {
        child.assign(parent.begin(), parent.end());
        child.push_back(0);
        for (Digit d = 0; d < ds.alphabet_size(n); ++d) {
            child.back() = d;
            const auto idx = ds.cylinder_index(child);
            switch (tree.child(parent, d)) {
                case Cell::In: s.X.push_back(idx); break;
                case Cell::Out: s.Y.push_back(idx); break;
                case Cell::Pending: s.Z.push_back(idx); break;
            }
        }
        return true;
    });
    std::sort(s.X.begin(), s.X.end());
    std::sort(s.Y.begin(), s.Y.end());
    std::sort(s.Z.begin(), s.Z.end());
    return s;
}

int pending_diff(const CylinderTree& a, const CylinderTree& b, std::uint64_t census_limit) {
    const int cap = std::min(a.cap(), b.cap());
    const auto& ds = a.domains();
    for (int n = 1; n <= cap; ++n) {
        if (ds.size(n) <= census_limit) {
            std::vector<Digit> digits(n, 0);
            for (std::uint64_t i = 0; i < ds.size(n); ++i) {
                const bool pa = a.classify(digits).cell == Cell::Pending;
                const bool pb = b.classify(digits).cell == Cell::Pending;
                if (pa != pb) return n;
                for (int j = 1; j <= n; ++j) {
                    if (++digits[j - 1] < ds.alphabet_size(j)) break;
                    digits[j - 1] = 0;
                }
            }
        } else {
            std::vector<std::uint64_t> la, lb;
            a.for_each_pending(n, [&](std::span<const Digit> d) {
                la.push_back(ds.cylinder_index(d));
                return true;
            });
            b.for_each_pending(n, [&](std::span<const Digit> d) {
                lb.push_back(ds.cylinder_index(d));
                return true;
            });
            if (la != lb) return n;
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize(const WindowSpec& spec) {
    const Group G(spec.group);
    auto ds = domains_for(spec);
    std::ostringstream o;
    o << "godo-window 1\n";
    o << "group " << G.name() << "\n";
    o << "kind " << to_string(spec.kind) << "\n";
    o << "cap " << spec.cap() << "\n";
    o << "epsilon " << to_string(spec.epsilon) << "\n";
    if (spec.kind != WindowKind::Perf) {
        o << "k " << spec.k << "\n";
        o << "L " << spec.L << "\n";
    }
    if (spec.kind == WindowKind::KTilde) o << "e_rule " << to_string(spec.e_rule) << "\n";
    for (int n = 1; n <= spec.cap(); ++n) {
        const auto& lv = spec.levels[n - 1];
        o << "level " << n << "\n";
        o << "  modulus " << lv.modulus << "\n";
        o << "  raw_level " << lv.raw_level << "\n";
        o << "  a " << lv.a << "\n";
        o << "  n_class " << spec.n_class(n) << "\n";
        o << "  T";
        for (const auto& t : ds->alphabet(n)) o << " " << G.format(t);
        o << "\n  roles ";
        for (Role r : lv.roles) o << (r == Role::A ? 'A' : r == Role::B ? 'B' : 'C');
        o << "\n";
    }
    for (const auto& [idx, j] : spec.h_assign) o << "h " << idx << " " << j << "\n";
    for (const auto& [n, e] : spec.literal_e) {
        o << "e " << n;
        for (Digit d : e) o << " " << d;
        o << "\n";
    }
    o << "end\n";
    return o.str();
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream s(line);
    std::vector<std::string> out;
    std::string tok;
    while (s >> tok) out.push_back(tok);
    return out;
}

long long to_ll(const std::string& s, int line) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": expected integer, got '" + s + "'");
    }
}

}  // namespace

WindowSpec parse_window(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    WindowSpec spec;
    int cap = -1;
    bool header = false, ended = false;
    std::vector<std::vector<std::string>> T_tokens;
    auto fail = [&](const std::string& msg) -> ParseError {
        return ParseError("line " + std::to_string(ln) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++ln;
        auto tok = split_ws(line);
        if (tok.empty()) continue;
        if (ended) throw fail("content after 'end'");
        const std::string& key = tok[0];
        if (!header) {
            if (tok.size() != 2 || key != "godo-window" || tok[1] != "1") throw fail("missing 'godo-window 1' header");
            header = true;
            continue;
        }
        try {
            if (key == "group" && tok.size() == 2) {
                spec.group = Group::from_name(tok[1]).kind();
            } else if (key == "kind" && tok.size() == 2) {
                spec.kind = parse_window_kind(tok[1]);
            } else if (key == "cap" && tok.size() == 2) {
                cap = static_cast<int>(to_ll(tok[1], ln));
            } else if (key == "epsilon" && tok.size() == 2) {
                spec.epsilon = parse_rational(tok[1]);
            } else if (key == "k" && tok.size() == 2) {
                spec.k = static_cast<int>(to_ll(tok[1], ln));
            } else if (key == "L" && tok.size() == 2) {
                spec.L = static_cast<int>(to_ll(tok[1], ln));
            } else if (key == "e_rule" && tok.size() == 2) {
                spec.e_rule = parse_e_rule(tok[1]);
            } else if (key == "level" && tok.size() == 2) {
                if (to_ll(tok[1], ln) != static_cast<long long>(spec.levels.size()) + 1) throw fail("levels out of order");
                spec.levels.emplace_back();
                T_tokens.emplace_back();
            } else if (key == "modulus" && tok.size() == 2 && !spec.levels.empty()) {
                spec.levels.back().modulus = to_ll(tok[1], ln);
            } else if (key == "raw_level" && tok.size() == 2 && !spec.levels.empty()) {
                spec.levels.back().raw_level = static_cast<int>(to_ll(tok[1], ln));
            } else if (key == "a" && tok.size() == 2 && !spec.levels.empty()) {
                spec.levels.back().a = static_cast<int>(to_ll(tok[1], ln));
            } else if (key == "n_class" && tok.size() == 2 && !spec.levels.empty()) {
                T_tokens.back().insert(T_tokens.back().begin(), "#" + tok[1]);
            } else if (key == "T" && !spec.levels.empty()) {
                T_tokens.back().insert(T_tokens.back().end(), tok.begin() + 1, tok.end());
            } else if (key == "roles" && tok.size() == 2 && !spec.levels.empty()) {
                auto& roles = spec.levels.back().roles;
                for (char c : tok[1]) {
                    if (c == 'A') roles.push_back(Role::A);
                    else if (c == 'B') roles.push_back(Role::B);
                    else if (c == 'C') roles.push_back(Role::C);
                    else throw fail(std::string("bad role character '") + c + "'");
                }
            } else if (key == "h" && tok.size() == 3) {
                spec.h_assign[static_cast<std::uint64_t>(to_ll(tok[1], ln))] = static_cast<int>(to_ll(tok[2], ln));
            } else if (key == "e" && tok.size() >= 2) {
                const int n = static_cast<int>(to_ll(tok[1], ln));
                std::vector<Digit> d;
                for (std::size_t i = 2; i < tok.size(); ++i) d.push_back(static_cast<Digit>(to_ll(tok[i], ln)));
                spec.literal_e[n] = d;
            } else if (key == "end" && tok.size() == 1) {
                ended = true;
            } else {
                throw fail("unexpected '" + line + "'");
            }
        } catch (const ConfigError& e) {
            throw fail(e.what());
        }
    }
    if (!header) throw ParseError("empty window text");
    if (!ended) throw ParseError("missing 'end'");
    if (cap != static_cast<int>(spec.levels.size())) throw ParseError("cap does not match number of levels");
    if (cap < 1) throw ParseError("window has no levels");
    std::shared_ptr<const DomainSequence> ds;
    try {
        ds = domains_for(spec);
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid moduli: ") + e.what());
    }
    const Group G(spec.group);
    for (int n = 1; n <= cap; ++n) {
        auto toks = T_tokens[n - 1];
        if (toks.empty() || toks[0][0] != '#') throw ParseError("level " + std::to_string(n) + ": missing n_class");
        if (std::stoi(toks[0].substr(1)) != spec.n_class(n)) {
            throw ParseError("level " + std::to_string(n) + ": n_class disagrees with the N_j rule");
        }
        toks.erase(toks.begin());
        const auto& T = ds->alphabet(n);
        if (toks.size() != T.size()) throw ParseError("level " + std::to_string(n) + ": T has wrong size");
        for (std::size_t i = 0; i < T.size(); ++i) {
            if (toks[i] != G.format(T[i])) throw ParseError("level " + std::to_string(n) + ": T not in canonical order");
        }
        if (spec.levels[n - 1].roles.size() != T.size()) throw ParseError("level " + std::to_string(n) + ": roles size mismatch");
    }
    return spec;
}

}  // namespace godo
