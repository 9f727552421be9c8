#include "godo/fiber.hpp"

#include <random>
#include <unordered_set>

#include "godo/errors.hpp"

namespace godo {

namespace {

int classes_of(const CylinderTree& tree) { return tree.spec().kind == WindowKind::Perf ? 1 : tree.spec().k; }

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t zobrist(const Element& g) {
    std::uint64_t h = 0x51ed27;
    for (i64 v : g.v) h = splitmix(h ^ static_cast<std::uint64_t>(v));
    return h;
}

// ψ_j(ξ) for j = 0..n
std::vector<Element> prefix_products(const DomainSequence& ds, std::span<const Digit> xi, int n) {
    std::vector<Element> s(n + 1, ds.group().identity());
    for (int j = 1; j <= n; ++j) s[j] = ds.group().mul(s[j - 1], ds.digit(j, xi[j - 1]));
    return s;
}

}  // namespace

OdometerPoint critical_point(const CylinderTree& tree, std::optional<std::uint64_t> seed) {
    OdometerPoint p;
    std::mt19937_64 rng(seed.value_or(0));
    for (int n = 1; n <= tree.cap(); ++n) {
        const auto& C = tree.digits_with(n, Role::C);
        if (!seed) {
            p.digits.push_back(C.front());
        } else {
            std::uniform_int_distribution<std::size_t> u(0, C.size() - 1);
            p.digits.push_back(C[u(rng)]);
        }
    }
    return p;
}

ShiftCensus shift_census(const CylinderTree& tree, const OdometerPoint& xi, int m, int precision, bool collect) {
    const auto& ds = tree.domains();
    const Group& G = ds.group();
    if (precision > tree.cap() || m > precision || m < 0) throw std::invalid_argument("need 0 <= m <= precision <= cap");
    if (xi.precision() < precision) throw PrecisionError("shift point too short for the census");
    ShiftCensus out;
    out.m = m;
    out.precision = precision;
    out.pending.assign(classes_of(tree) + 1, 0);
    const auto s = prefix_products(ds, xi.digits, precision);
    std::vector<std::uint64_t> sub(precision + 2, 1);  // #D_m / #D_j
    for (int j = m - 1; j >= 0; --j) sub[j] = sub[j + 1] * ds.alphabet_size(j + 1);
    std::vector<Digit> gdig(m), rdig(precision);
    const bool abelian = G.abelian();

    std::function<void(int, const Element&)> rec = [&](int j, const Element& d) {
        if (j > precision) {
            const int h = tree.h_class(rdig);
            ++out.pending[h];
            if (collect) out.hits.push_back({ds.compose(gdig), h});
            return;
        }
        const Element& q = ds.digit(j, xi.digits[j - 1]);
        const std::uint32_t count = j <= m ? ds.alphabet_size(j) : 1;
        for (Digit p = 0; p < count; ++p) {
            const Element& pe = ds.digit(j, p);
            const Element c = abelian ? G.mul(G.mul(d, pe), q) : G.mul(G.mul(d, G.conj(pe, s[j - 1])), q);
            auto [r, carry] = ds.split(c, j);
            rdig[j - 1] = r;
            if (j <= m) gdig[j - 1] = p;
            if (tree.role(j, r) == Role::C) {
                rec(j + 1, carry);
                continue;
            }
            const Cell cell = tree.child(std::span<const Digit>(rdig.data(), j - 1), r);
            (cell == Cell::In ? out.in : out.out) += j <= m ? sub[j] : 1;
        }
    };
    rec(1, G.identity());
    return out;
}

bool SimilarityReport::critical() const {
    for (std::size_t j = 1; j < classes.size(); ++j)
        if (!classes[j].empty()) return true;
    return false;
}

bool SimilarityReport::all_hit() const {
    for (std::size_t j = 1; j < classes.size(); ++j)
        if (classes[j].empty()) return false;
    return classes.size() > 1;
}

namespace {

SimilarityReport empty_report(const CylinderTree& tree, const OdometerPoint& xi) {
    SimilarityReport r;
    r.group = tree.domains().group().kind();
    r.xi.assign(xi.digits.begin(), xi.digits.begin() + tree.cap());
    r.cap = tree.cap();
    r.k = classes_of(tree);
    r.ktilde = tree.spec().kind == WindowKind::KTilde;
    r.classes.assign(r.k + 1, {});
    return r;
}

}  // namespace

SimilarityReport similarity_classes(const CylinderTree& tree, const OdometerPoint& xi, int m) {
    auto r = empty_report(tree, xi);
    auto census = shift_census(tree, xi, m, tree.cap(), true);
    for (auto& h : census.hits) r.classes[h.h_class].push_back(h.g);
    return r;
}

SimilarityReport similarity_classes(const CylinderTree& tree, const OdometerPoint& xi,
                                    const std::vector<Element>& patch) {
    auto r = empty_report(tree, xi);
    const auto& ds = tree.domains();
    const int cap = tree.cap();
    if (xi.precision() < cap) throw PrecisionError("shift point too short");
    std::vector<Digit> prod(cap);
    for (const auto& g : patch) {
        const auto gd = ds.expand_to(g, cap);
        mul_digits(ds, gd, xi.digits, prod);
        if (tree.classify(prod).cell == Cell::Pending) r.classes[tree.h_class(prod)].push_back(g);
    }
    return r;
}

FiberSet enumerate_fiber(const SimilarityReport& report) {
    const int k = report.k;
    FiberSet fs;
    std::vector<std::uint64_t> class_hash(k + 2, 0);
    for (int j = 1; j <= k; ++j)
        for (const auto& g : report.classes[j]) class_hash[j] ^= zobrist(g);

    // x_j: value 1 on the classes i >= j
    for (int j = 1; j <= k + 1; ++j) {
        FiberCandidate c;
        c.label = "x_" + std::to_string(j);
        c.ones.assign(k + 1, 0);
        for (int i = j; i <= k; ++i) {
            for (const auto& g : report.classes[i]) {
                c.hash ^= zobrist(g);
                ++c.ones[i];
            }
        }
        fs.candidates.push_back(std::move(c));
    }
    if (report.ktilde) {
        const Group G(report.group);
        const auto& base = fs.candidates[k - 1];
        const std::uint64_t h = base.hash;
        const auto ones = base.ones;
        for (const auto& l : report.classes[k]) {
            FiberCandidate c;
            c.label = "x~_" + std::to_string(k) + "," + G.format(l);
            c.hash = h ^ zobrist(l);
            c.ones = ones;
            --c.ones[k];
            fs.candidates.push_back(std::move(c));
        }
    }
    std::unordered_set<std::uint64_t> seen;
    for (const auto& c : fs.candidates) seen.insert(c.hash);
    fs.distinct = seen.size();

    // x(g1) = 1 forces x(g2) = 1 whenever the class of g1 precedes that of g2
    for (const auto& c : fs.candidates) {
        for (int i = 1; i <= k && fs.monotone; ++i) {
            if (c.ones[i] == 0) continue;
            for (int j = i + 1; j <= k; ++j) {
                if (c.ones[j] != report.classes[j].size()) {
                    fs.monotone = false;
                    fs.monotone_witness = c.label + ": S_" + std::to_string(i) + " has a 1 but S_" + std::to_string(j) +
                                          " has a 0";
                    break;
                }
            }
        }
    }
    return fs;
}

RegionResult t_region(const CylinderTree& tree, const std::vector<Element>& N, const std::vector<Element>& M,
                      const OdometerPoint& xi, int eps_level, std::size_t keep) {
    const auto& ds = tree.domains();
    const Group& G = ds.group();
    const int cap = tree.cap();
    if (eps_level < 0 || eps_level > cap) throw std::invalid_argument("eps_level out of range");
    if (xi.precision() < eps_level) throw PrecisionError("shift point too short for the ball");
    const std::size_t E = N.size() + M.size();
    std::vector<std::vector<Digit>> x(E), r(E, std::vector<Digit>(cap));
    for (std::size_t e = 0; e < E; ++e) x[e] = ds.expand_to(e < N.size() ? N[e] : M[e - N.size()], cap);
    std::vector<std::uint64_t> sub(cap + 1, 1);
    for (int j = cap - 1; j >= 0; --j) sub[j] = sub[j + 1] * ds.alphabet_size(j + 1);

    RegionResult out;
    std::vector<Digit> eta(cap);
    // 0 pending, 1 satisfied
    std::function<void(int, const Element&, const std::vector<Element>&, const std::vector<std::uint8_t>&)> rec =
        [&](int j, const Element& s, const std::vector<Element>& carry, const std::vector<std::uint8_t>& done) {
            if (j > cap) {
                ++out.pending;
                return;
            }
            const std::uint32_t lo = j <= eps_level ? xi.digits[j - 1] : 0;
            const std::uint32_t hi = j <= eps_level ? lo + 1 : ds.alphabet_size(j);
            std::vector<Element> nc(E);
            std::vector<std::uint8_t> nd(E);
            for (Digit q = lo; q < hi; ++q) {
                eta[j - 1] = q;
                const Element& qe = ds.digit(j, q);
                bool violated = false, all = true;
                for (std::size_t e = 0; e < E && !violated; ++e) {
                    nd[e] = done[e];
                    if (done[e]) continue;
                    const Element& pe = ds.digit(j, x[e][j - 1]);
                    const Element c = G.mul(G.mul(carry[e], G.conj(pe, s)), qe);
                    auto [digit, next] = ds.split(c, j);
                    r[e][j - 1] = digit;
                    nc[e] = next;
                    if (tree.role(j, digit) == Role::C) {
                        all = false;
                        continue;
                    }
                    const Cell cell = tree.child(std::span<const Digit>(r[e].data(), j - 1), digit);
                    const bool want_in = e < N.size();
                    if ((cell == Cell::In) != want_in) violated = true;
                    nd[e] = 1;
                }
                if (violated) continue;
                if (all) {
                    out.cylinders += sub[j];
                    if (out.certified.size() < keep)
                        out.certified.push_back({j, ds.cylinder_index(std::span<const Digit>(eta.data(), j))});
                    continue;
                }
                rec(j + 1, G.mul(s, qe), nc, nd);
            }
        };
    if (E == 0) {
        out.cylinders = sub[eps_level];
        out.certified.push_back({eps_level, ds.cylinder_index(std::span<const Digit>(xi.digits.data(), eps_level))});
        return out;
    }
    rec(1, G.identity(), std::vector<Element>(E, G.identity()), std::vector<std::uint8_t>(E, 0));
    return out;
}

Rational nu_pending_class(const CylinderTree& tree, int n, int j) {
    const auto& spec = tree.spec();
    if (spec.kind == WindowKind::Perf || spec.k == 1) return tree.pending_measure(n);
    if (n < spec.L) throw std::invalid_argument("H classes start at level L");
    Rational r = ratio(tree.h_members(j).size(), tree.domains().size(spec.L));
    for (int t = spec.L + 1; t <= n; ++t)
        r *= ratio(tree.digits_with(t, Role::C).size(), tree.domains().alphabet_size(t));
    return r;
}

Rational nu_interior(const CylinderTree& tree, int n) {
    const auto& spec = tree.spec();
    const auto& ds = tree.domains();
    const int k = classes_of(tree);
    Rational total = 0;
    for (int j = 1; j <= n; ++j) {
        const Rational a = ratio(tree.digits_with(j, Role::A).size(), ds.alphabet_size(j));
        if (k == 1 || j <= spec.L) {
            total += tree.pending_measure(j - 1) * a;
        } else {
            for (int i = spec.n_class(j); i <= k; ++i) total += nu_pending_class(tree, j - 1, i) * a;
        }
        if (spec.kind == WindowKind::KTilde && spec.n_class(j) == spec.k && (spec.k == 1 || j > spec.L)) {
            if (spec.e_rule == ERule::PerParent) {
                std::uint64_t parents = spec.k == 1 ? tree.pending_count(j - 1) : tree.h_members(spec.k).size();
                if (spec.k > 1)
                    for (int t = spec.L + 1; t <= j - 1; ++t) parents *= tree.digits_with(t, Role::C).size();
                total -= ratio(parents - 1, ds.size(j));
            } else if (tree.literal_e(j)) {
                total -= ratio(1, ds.size(j));
            }
        }
    }
    return total;
}

bool BirkhoffReport::all_match() const {
    for (const auto& l : levels)
        if (!l.match) return false;
    return !levels.empty();
}

BirkhoffReport birkhoff_stats(const CylinderTree& tree, const OdometerPoint& xi, int from_level) {
    const int k = classes_of(tree);
    const int start = std::max(from_level, k == 1 ? 1 : tree.spec().L);
    BirkhoffReport rep;
    for (int n = start; n <= tree.cap(); ++n) {
        auto c = shift_census(tree, xi, n, n, false);
        BirkhoffLevel b;
        b.level = n;
        b.total = tree.domains().size(n);
        b.in = c.in;
        b.out = c.out;
        b.pending = c.pending;
        b.nu_in = nu_interior(tree, n);
        b.nu_h.assign(k + 1, 0);
        for (int j = 1; j <= k; ++j) b.nu_h[j] = nu_pending_class(tree, n, j);
        b.match = ratio(b.in, b.total) == b.nu_in;
        for (int j = 1; j <= k; ++j) b.match = b.match && ratio(b.pending[j], b.total) == b.nu_h[j];
        for (int j = 1; j <= k + 1; ++j) {
            std::uint64_t ones = b.in;
            Rational ex = b.nu_in;
            for (int i = j; i <= k; ++i) {
                ones += b.pending[i];
                ex += b.nu_h[i];
            }
            b.freq.push_back(ratio(ones, b.total));
            b.exact.push_back(ex);
            b.match = b.match && b.freq.back() == ex;
        }
        rep.levels.push_back(std::move(b));
    }
    return rep;
}

}  // namespace godo
