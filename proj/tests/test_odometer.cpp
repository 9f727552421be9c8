#include <cmath>
#include <random>

#include "doctest.h"
#include "godo/errors.hpp"
#include "godo/odometer.hpp"
#include "support.hpp"

using namespace godo;
using namespace testsupport;

namespace {

Element zel(i64 x) { return Element{{x, 0, 0}}; }

}  // namespace

TEST_CASE("metric") {
    auto ds = chain_of(GroupKind::Z, powers(2, 8));
    OdometerPoint x;
    x.digits = {1, 0, 1, 1, 0};
    OdometerPoint y = x;
    auto same = metric(ds, x, y);
    CHECK(same.kind == Separation::Unresolved);
    CHECK(same.value == 0);
    y.digits[2] = 0;
    auto d3 = metric(ds, x, y);
    CHECK(d3.kind == Separation::Distinct);
    CHECK(d3.value == Rational(1, 8));

    auto e = metric(ds, tau(ds, zel(5), 3), tau(ds, zel(5), 3));
    CHECK(e.kind == Separation::Equal);
    CHECK(e.value == 0);

    // γ ∈ Γ_k \ Γ_{k+1}: τ(g) and τ(gγ) first differ at level k+1
    for (int k = 1; k <= 6; ++k) {
        const Element g = zel(3);
        const Element gg = zel(3 + (i64(1) << k));
        auto r = metric(ds, tau(ds, g, 2), tau(ds, gg, 2));
        CHECK(r.kind == Separation::Distinct);
        CHECK(r.value == dyadic(k + 1));
    }
}

TEST_CASE("tau is isometric") {
    std::mt19937_64 rng(2);
    for (auto kind : {GroupKind::Z, GroupKind::Z2, GroupKind::Heisenberg}) {
        auto ds = chain_of(kind, powers(3, 6));
        const Group& G = ds.group();
        for (int i = 0; i < 200; ++i) {
            const Element g = random_element(G, rng, 100);
            const Element h = random_element(G, rng, 100);
            if (g == h) continue;
            int first = 0;
            for (int k = 1; k <= 6 && !first; ++k)
                if (!(ds.chain().project(g, k) == ds.chain().project(h, k))) first = k;
            auto r = metric(ds, tau(ds, g, 6), tau(ds, h, 6));
            if (first) {
                CHECK(r.kind == Separation::Distinct);
                CHECK(r.value == dyadic(first));
            } else {
                CHECK(r.kind == Separation::Unresolved);
            }
        }
    }
}

TEST_CASE("haar") {
    auto ds = chain_of(GroupKind::Z, powers(10, 3));
    CHECK(haar(ds, {0, 0}) == 1);
    CHECK(haar(ds, {2, 17}) == Rational(1, 100));
    Rational total = 0;
    for (std::uint64_t i = 0; i < ds.size(2); ++i) total += haar(ds, {2, i});
    CHECK(total == 1);
}

TEST_CASE("odometer product") {
    std::mt19937_64 rng(4);
    for (auto kind : {GroupKind::Z, GroupKind::Z2, GroupKind::Heisenberg}) {
        auto ds = chain_of(kind, powers(2, 7));
        const Group& G = ds.group();
        for (int i = 0; i < 300; ++i) {
            const Element g = random_element(G, rng, 60);
            const Element h = random_element(G, rng, 60);
            auto prod = odo_mul(ds, tau(ds, g, 7), tau(ds, h, 7), 7);
            CHECK(prod.digits == ds.expand_to(G.mul(g, h), 7));
            auto x = sample_point(ds, rng(), 7);
            CHECK(odo_mul(ds, x, identity_point(7), 5).digits == truncate(x, 5).digits);
            CHECK(odo_mul(ds, odo_inv(ds, x, 7), x, 7).digits == identity_point(7).digits);
            auto y = sample_point(ds, rng(), 7);
            auto z = sample_point(ds, rng(), 7);
            CHECK(odo_mul(ds, odo_mul(ds, x, y, 7), z, 7).digits == odo_mul(ds, x, odo_mul(ds, y, z, 7), 7).digits);
        }
    }
}

TEST_CASE("two's complement") {
    auto ds = chain_of(GroupKind::Z, powers(2, 10));
    OdometerPoint minus_one;
    minus_one.digits.assign(10, 1);
    auto r = odo_mul(ds, minus_one, tau(ds, zel(1), 10), 10);
    CHECK(r.digits == std::vector<Digit>(10, 0));
    CHECK(odo_inv(ds, tau(ds, zel(3), 10), 10).digits == ds.expand_to(zel(-3), 10));
    CHECK(odo_inv(ds, identity_point(4), 4).digits == identity_point(4).digits);
    CHECK_THROWS_AS(odo_mul(ds, minus_one, identity_point(4), 6), PrecisionError);
}

TEST_CASE("metric is bi-invariant") {
    std::mt19937_64 rng(9);
    auto ds = chain_of(GroupKind::Heisenberg, powers(2, 6));
    for (int i = 0; i < 300; ++i) {
        auto x = sample_point(ds, rng(), 6);
        auto y = x;
        y.digits[rng() % 6] = static_cast<Digit>(rng() % ds.alphabet_size(1));
        for (int j = 0; j < 6; ++j) y.digits[j] %= ds.alphabet_size(j + 1);
        auto a = sample_point(ds, rng(), 6);
        auto base = metric(ds, x, y);
        auto left = metric(ds, odo_mul(ds, a, x, 6), odo_mul(ds, a, y, 6));
        auto right = metric(ds, odo_mul(ds, x, a, 6), odo_mul(ds, y, a, 6));
        CHECK(left.value == base.value);
        CHECK(right.value == base.value);
        CHECK(left.kind == base.kind);
        CHECK(right.kind == base.kind);
    }
}

TEST_CASE("sample_point") {
    auto ds = chain_of(GroupKind::Z, powers(5, 4));
    CHECK(sample_point(ds, 77, 4) == sample_point(ds, 77, 4));
    CHECK(sample_point(ds, 77, 0).digits.empty());
    const int trials = 10000;
    std::vector<int> counts(5, 0);
    for (int s = 0; s < trials; ++s) counts[sample_point(ds, 1000 + s, 3).digits[0]]++;
    const double p = 0.2;
    const double sigma = std::sqrt(trials * p * (1 - p));
    for (int c : counts) CHECK(std::abs(c - trials * p) <= 5 * sigma);
}
