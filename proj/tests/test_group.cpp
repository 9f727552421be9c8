#include <random>
#include <stdexcept>

#include "doctest.h"
#include "godo/errors.hpp"
#include "godo/group.hpp"
#include "support.hpp"

using namespace godo;
using namespace testsupport;

TEST_CASE("integer addition is the Z law") {
    Group Z(GroupKind::Z);
    CHECK(Z.mul(Z.make({3}), Z.make({5})) == Z.make({8}));
}

TEST_CASE("Heisenberg law matches unitriangular matrices") {
    Group H(GroupKind::Heisenberg);
    const Element a = H.make({1, 0, 0});
    const Element b = H.make({0, 1, 0});
    CHECK(H.mul(a, b) == H.make({1, 1, 1}));
    CHECK(from_mat(matmul(to_mat(a), to_mat(b))) == H.make({1, 1, 1}));

    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        const Element x = random_element(H, rng, 50);
        const Element y = random_element(H, rng, 50);
        CHECK(H.mul(x, y) == from_mat(matmul(to_mat(x), to_mat(y))));
        CHECK(H.inv(x) == from_mat(matinv(to_mat(x))));
    }
}

TEST_CASE("group axioms on samples") {
    std::mt19937_64 rng(5);
    for (auto kind : {GroupKind::Z, GroupKind::Z2, GroupKind::Heisenberg}) {
        Group G(kind);
        for (int i = 0; i < 300; ++i) {
            const Element a = random_element(G, rng, 1000);
            const Element b = random_element(G, rng, 1000);
            const Element c = random_element(G, rng, 1000);
            CHECK(G.mul(a, G.identity()) == a);
            CHECK(G.mul(G.identity(), a) == a);
            CHECK(G.mul(a, G.inv(a)) == G.identity());
            CHECK(G.mul(G.inv(a), a) == G.identity());
            CHECK(G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c)));
        }
    }
}

TEST_CASE("conjugation") {
    Group Z2(GroupKind::Z2);
    CHECK(Z2.conj(Z2.make({4, -1}), Z2.make({7, 9})) == Z2.make({4, -1}));

    Group H(GroupKind::Heisenberg);
    const Element h = H.make({1, 0, 0});
    const Element g = H.make({0, 1, 0});
    CHECK(H.conj(h, H.identity()) == h);
    // g^{-1} h g by matrices
    const Element oracle = from_mat(matmul(matinv(to_mat(g)), matmul(to_mat(h), to_mat(g))));
    CHECK(H.conj(h, g) == oracle);
    CHECK(oracle == H.make({1, 0, 1}));
    // the opposite convention g h g^{-1} gives (1,0,-1)
    CHECK(from_mat(matmul(to_mat(g), matmul(to_mat(h), matinv(to_mat(g))))) == H.make({1, 0, -1}));

    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const Element x = random_element(H, rng, 40);
        const Element s = random_element(H, rng, 40);
        const Element q = random_element(H, rng, 40);
        CHECK(H.conj(x, s) == H.conj(x, H.conj_key(s)));
        CHECK(H.conj_key(H.mul(s, q)) == H.conj_key(H.mul(H.conj_key(s), q)));
    }
}

TEST_CASE("projection labels") {
    SubgroupChain dec(Group(GroupKind::Z), powers(10, 4));
    CHECK(dec.project(Element{{23, 0, 0}}, 1).label == 3);
    CHECK(dec.project(Element{{-1, 0, 0}}, 2).label == 99);
    for (int n = 1; n <= 4; ++n) CHECK(dec.project(Element{}, n).label == 0);

    Group H(GroupKind::Heisenberg);
    SubgroupChain hc(H, powers(3, 3));
    const Element g = H.make({7, -2, 40});
    // residues (7 mod 9, -2 mod 9, 40 mod 9) = (7, 7, 4), low coordinate first
    CHECK(hc.project(g, 2).label == 7 + 7 * 9 + 4 * 81);
}

TEST_CASE("projections are homomorphisms, kernels normal, chain separates") {
    std::mt19937_64 rng(21);
    for (auto kind : {GroupKind::Z, GroupKind::Z2, GroupKind::Heisenberg}) {
        Group G(kind);
        SubgroupChain chain(G, powers(2, 6));
        for (int n = 1; n <= 6; ++n) {
            const i64 m = chain.modulus(n);
            for (int i = 0; i < 200; ++i) {
                const Element g = random_element(G, rng, 300);
                const Element h = random_element(G, rng, 300);
                Element gam;
                for (int c = 0; c < G.dim(); ++c) gam.v[c] = m * random_element(G, rng, 20).v[c];
                REQUIRE(chain.in_subgroup(gam, n));
                // g' = gγ, h' = hγ share labels with g, h
                const Element g2 = G.mul(g, gam);
                const Element h2 = G.mul(h, gam);
                CHECK(chain.project(g2, n) == chain.project(g, n));
                CHECK(chain.project(G.mul(g, h), n) == chain.project(G.mul(g2, h2), n));
                CHECK(chain.in_subgroup(G.mul(G.mul(g, gam), G.inv(g)), n));
            }
        }
        for (int i = 0; i < 200; ++i) {
            const Element g = random_element(G, rng, 30);
            const Element h = random_element(G, rng, 30);
            if (g == h) continue;
            bool separated = false;
            for (int n = 1; n <= 6; ++n) separated |= !(chain.project(g, n) == chain.project(h, n));
            CHECK(separated);
        }
    }
}

TEST_CASE("overflow is a hard error") {
    Group H(GroupKind::Heisenberg);
    const Element big = H.make({i64(1) << 40, 0, 0});
    const Element big2 = H.make({0, i64(1) << 40, 0});
    CHECK_THROWS_AS(H.mul(big, big2), std::overflow_error);
    Group Z(GroupKind::Z);
    CHECK_THROWS_AS(Z.inv(Z.make({INT64_MIN})), std::overflow_error);
}

TEST_CASE("chain validation") {
    CHECK_THROWS_AS(SubgroupChain(Group(GroupKind::Z), {4, 6}), ConfigError);
    CHECK_THROWS_AS(SubgroupChain(Group(GroupKind::Z), {4, 4}), ConfigError);
    CHECK_THROWS_AS(Group::from_name("Q8"), ConfigError);
    CHECK(Group::from_name("heisenberg").kind() == GroupKind::Heisenberg);
}

TEST_CASE("element text round trip") {
    Group H(GroupKind::Heisenberg);
    const Element e = H.make({-3, 4, 12});
    CHECK(H.format(e) == "(-3,4,12)");
    CHECK(H.parse_element(H.format(e)) == e);
    Group Z(GroupKind::Z);
    CHECK(Z.parse_element("-17") == Z.make({-17}));
    CHECK_THROWS_AS(Z.parse_element("(1,2)"), ConfigError);
}
