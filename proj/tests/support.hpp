#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "godo/expansion.hpp"
#include "godo/group.hpp"

namespace testsupport {

using godo::Element;
using godo::i64;

// Upper unitriangular 3x3 integer matrices: the independent Heisenberg oracle.
using Mat = std::array<std::array<i64, 3>, 3>;

inline Mat to_mat(const Element& e) { return Mat{{{1, e.v[0], e.v[2]}, {0, 1, e.v[1]}, {0, 0, 1}}}; }

inline Element from_mat(const Mat& m) { return Element{{m[0][1], m[1][2], m[0][2]}}; }

inline Mat matmul(const Mat& a, const Mat& b) {
    Mat r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

// Inverse of a unitriangular matrix via the adjugate.
inline Mat matinv(const Mat& m) {
    const i64 a = m[0][1], b = m[1][2], c = m[0][2];
    return Mat{{{1, -a, a * b - c}, {0, 1, -b}, {0, 0, 1}}};
}

inline godo::DomainSequence chain_of(godo::GroupKind kind, std::vector<i64> moduli) {
    return godo::DomainSequence(godo::SubgroupChain(godo::Group(kind), std::move(moduli)));
}

inline std::vector<i64> powers(i64 base, int count) {
    std::vector<i64> out;
    i64 m = 1;
    for (int i = 0; i < count; ++i) out.push_back(m *= base);
    return out;
}

inline Element random_element(const godo::Group& G, std::mt19937_64& rng, i64 span) {
    std::uniform_int_distribution<i64> u(-span, span);
    Element e;
    for (int i = 0; i < G.dim(); ++i) e.v[i] = u(rng);
    return e;
}

}  // namespace testsupport
