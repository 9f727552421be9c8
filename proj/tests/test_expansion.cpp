#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <unordered_set>

#include "doctest.h"
#include "godo/errors.hpp"
#include "godo/expansion.hpp"
#include "support.hpp"

using namespace godo;
using namespace testsupport;

namespace {

Element zel(i64 x) { return Element{{x, 0, 0}}; }

std::vector<i64> ints(const std::vector<Element>& v) {
    std::vector<i64> out;
    for (const auto& e : v) out.push_back(e.v[0]);
    return out;
}

}  // namespace

TEST_CASE("decimal domains") {
    auto ds = chain_of(GroupKind::Z, powers(10, 4));
    std::vector<i64> d2;
    ds.for_each(2, [&](std::span<const Digit>, const Element& g) { d2.push_back(g.v[0]); });
    std::sort(d2.begin(), d2.end());
    std::vector<i64> expect(100);
    for (int i = 0; i < 100; ++i) expect[i] = i;
    CHECK(d2 == expect);
    CHECK(ds.contains(zel(0), 1));
    CHECK(ints(ds.alphabet(2)) == std::vector<i64>{0, 10, 20, 30, 40, 50, 60, 70, 80, 90});
}

TEST_CASE("Heisenberg domains hit every coset once") {
    auto ds = chain_of(GroupKind::Heisenberg, powers(4, 2));
    CHECK(ds.size(2) == 4096);
    std::unordered_set<std::uint64_t> labels;
    std::uint64_t count = 0;
    ds.for_each(2, [&](std::span<const Digit>, const Element& g) {
        labels.insert(ds.chain().project(g, 2).label);
        ++count;
    });
    CHECK(count == 4096);
    CHECK(labels.size() == 4096);
}

TEST_CASE("decompose") {
    auto ds = chain_of(GroupKind::Z, powers(10, 4));
    for (int n = 0; n <= 4; ++n) {
        auto [p, f] = ds.decompose(zel(0), n);
        CHECK(p == zel(0));
        CHECK(f == zel(0));
    }
    auto [p1, f1] = ds.decompose(zel(23), 1);
    CHECK(p1 == zel(3));
    CHECK(f1 == zel(20));
    auto [p2, f2] = ds.decompose(zel(-1), 1);
    CHECK(p2 == zel(9));
    CHECK(f2 == zel(-10));
    auto [p0, f0] = ds.decompose(zel(57), 0);
    CHECK(p0 == zel(0));
    CHECK(f0 == zel(57));
}

TEST_CASE("expand") {
    auto ds = chain_of(GroupKind::Z, powers(10, 6));
    Digits one = ds.expand(zel(0));
    CHECK(one.N == 0);
    CHECK(ints(one.coeffs) == std::vector<i64>{0});
    Digits d = ds.expand(zel(235));
    CHECK(d.N == 2);
    CHECK(ints(d.coeffs) == std::vector<i64>{5, 30, 200});
    CHECK(ints(ds.expand(zel(30)).coeffs) == std::vector<i64>{0, 30});
    CHECK_THROWS_AS(ds.expand(zel(-1)), ConstraintError);
    CHECK(ds.expand_to(zel(-1), 3) == std::vector<Digit>{9, 9, 9});
}

TEST_CASE("mixed radix chain 2, 8, 32, ...") {
    std::vector<i64> m{2, 8, 32, 128, 512};
    auto ds = chain_of(GroupKind::Z, m);
    for (i64 g = 0; g < 512; ++g) {
        Digits d = ds.expand(zel(g));
        // oracle: place values 1, 2, 8, 32, 128 with radices 2, 4, 4, 4, 4
        std::vector<i64> oracle;
        i64 place = 1, rest = g;
        for (std::size_t j = 0; j < m.size(); ++j) {
            const i64 radix = m[j] / place;
            oracle.push_back((rest % radix) * place);
            rest /= radix;
            place = m[j];
        }
        while (oracle.size() > 1 && oracle.back() == 0) oracle.pop_back();
        CHECK(ints(d.coeffs) == oracle);
        CHECK(d.N == static_cast<int>(oracle.size()) - 1);
    }
}

TEST_CASE("carry_mul small cases") {
    auto ds = chain_of(GroupKind::Z, powers(2, 6));
    auto r = carry_mul(ds, ds.expand(zel(3)), ds.expand(zel(1)), 3);
    CHECK(ints(r.prefix) == std::vector<i64>{0, 0, 4});
    CHECK(ints(r.carries) == std::vector<i64>{0, 2, 4, 0});

    std::mt19937_64 rng(8);
    for (auto kind : {GroupKind::Z, GroupKind::Z2, GroupKind::Heisenberg}) {
        auto hs = chain_of(kind, powers(3, 5));
        for (int i = 0; i < 50; ++i) {
            const auto digits = hs.cylinder_digits(4, rng() % hs.size(4));
            const Element g = hs.compose(digits);
            auto res = carry_mul(hs, hs.expand(g), hs.expand(hs.group().identity()), 4);
            const auto want = padded_digits(hs, hs.expand(g), 4);
            CHECK(res.prefix == want);
            for (const auto& d : res.carries) CHECK(d == hs.group().identity());
        }
    }
}

TEST_CASE("carry ranges") {
    auto ds = chain_of(GroupKind::Z, powers(2, 6));
    auto K = carry_ranges(ds, 4);
    CHECK(ints(K.K[1]) == std::vector<i64>{0});
    CHECK(ints(K.K[2]) == std::vector<i64>{0, 2});
    CHECK(ints(K.K[3]) == std::vector<i64>{0, 4});

    // abelian closure formula, computed directly
    auto z2 = chain_of(GroupKind::Z2, powers(3, 4));
    auto K2 = carry_ranges(z2, 4);
    const Group& G = z2.group();
    for (int j = 1; j < 4; ++j) {
        std::set<Element> direct;
        for (const auto& d : K2.K[j])
            for (const auto& p : z2.alphabet(j))
                for (const auto& q : z2.alphabet(j)) direct.insert(z2.split(G.mul(G.mul(d, p), q), j).second);
        CHECK(std::vector<Element>(direct.begin(), direct.end()) == K2.K[j + 1]);
    }
}

TEST_CASE("carry range witnesses realize their carries") {
    for (auto kind : {GroupKind::Z, GroupKind::Z2, GroupKind::Heisenberg}) {
        auto ds = chain_of(kind, powers(2, 5));
        auto K = carry_ranges(ds, 5);
        for (int j = 1; j <= 5; ++j) {
            REQUIRE(K.K[j].size() == K.witness[j].size());
            for (std::size_t i = 0; i < K.K[j].size(); ++i) {
                const auto& w = K.witness[j][i];
                auto r = carry_mul(ds, ds.expand(w.g), ds.expand(w.h), j - 1 > 0 ? j - 1 : 1);
                const Element realized = j == 1 ? ds.group().identity() : r.carries[j - 1];
                CHECK(realized == K.K[j][i]);
            }
        }
    }
}

TEST_CASE("van Hove boundary of a dyadic interval") {
    auto ds = chain_of(GroupKind::Z, powers(2, 6));
    const Group& G = ds.group();
    CHECK(vanhove_boundary(ds, {zel(0)}, 3).empty());
    for (int n = 1; n <= 6; ++n) {
        const i64 half = i64(1) << (n - 1);
        // ∂_{K^{-1}} with K = {0, 2^{n-1}}
        auto b = vanhove_boundary(ds, {zel(0), G.inv(zel(half))}, n);
        int inside = 0, outside = 0;
        for (const auto& e : b) (ds.contains(e, n) ? inside : outside)++;
        CHECK(inside == half);
        CHECK(outside == half);
        for (const auto& e : b) {
            const bool oracle = (e.v[0] >= half && e.v[0] < 2 * half) || (e.v[0] >= -half && e.v[0] < 0);
            CHECK(oracle);
        }
    }
}
