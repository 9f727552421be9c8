#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "godo/odometer.hpp"
#include "godo/window.hpp"

namespace godo {

// ξ with every digit in C_n, so τ(1_G)·ξ stays PENDING to the cap.
// Without a seed the smallest C digit is taken at each level.
OdometerPoint critical_point(const CylinderTree& tree, std::optional<std::uint64_t> seed);

struct BoundaryHit {
    Element g;
    int h_class = 1;
};

// Census of τ(g)·ξ over g ∈ D_m, classified to `precision` (m ≤ precision ≤ cap).
// Resolved subtrees are counted in bulk, so the cost tracks the PENDING part.
struct ShiftCensus {
    int m = 0, precision = 0;
    std::uint64_t in = 0, out = 0;
    std::vector<std::uint64_t> pending;  // [j] = hits in H_j (index 1 only below L)
    std::vector<BoundaryHit> hits;       // when collected, canonical order of g
};
ShiftCensus shift_census(const CylinderTree& tree, const OdometerPoint& xi, int m, int precision, bool collect);

struct SimilarityReport {
    GroupKind group = GroupKind::Z;
    std::vector<Digit> xi;
    int cap = 0;
    int k = 1;
    bool ktilde = false;  // class k splits into singleton atoms
    std::vector<std::vector<Element>> classes;  // [1..k]

    bool critical() const;
    bool all_hit() const;
};

// Classes S_j of the boundary hits among g ∈ D_m.
SimilarityReport similarity_classes(const CylinderTree& tree, const OdometerPoint& xi, int m);
// Same over an explicit patch, one point product at a time.
SimilarityReport similarity_classes(const CylinderTree& tree, const OdometerPoint& xi,
                                    const std::vector<Element>& patch);

struct FiberCandidate {
    std::string label;
    std::uint64_t hash = 0;   // Zobrist hash of the value-1 boundary positions
    std::vector<std::uint64_t> ones;  // per class: number of value-1 positions
};

struct FiberSet {
    std::vector<FiberCandidate> candidates;
    std::size_t distinct = 0;
    bool monotone = true;
    std::string monotone_witness;
};

// Candidates x_1..x_{k+1} (and x~_{k,l} for KTilde) restricted to the boundary hits;
// off the boundary all candidates agree with int(W)ξ^{-1}.
FiberSet enumerate_fiber(const SimilarityReport& report);

struct RegionResult {
    std::uint64_t cylinders = 0;  // level-cap cylinders certified inside the region
    std::uint64_t pending = 0;    // level-cap cylinders left undecided
    std::vector<Cylinder> certified;  // maximal certified cylinders (truncated)
};

// Level-cap sub-cylinders η of [ξ]_e with τ(l)η ∈ int W for l ∈ N and τ(j)η ∉ W for j ∈ M.
RegionResult t_region(const CylinderTree& tree, const std::vector<Element>& N, const std::vector<Element>& M,
                      const OdometerPoint& xi, int eps_level, std::size_t keep = 16);

struct BirkhoffLevel {
    int level = 0;
    std::uint64_t total = 0, in = 0, out = 0;
    std::vector<std::uint64_t> pending;  // by H class
    std::vector<Rational> freq;          // empirical value-1 density of each candidate
    Rational nu_in;                      // exact ν(IN_n)
    std::vector<Rational> nu_h;          // exact ν(Z_n ∩ H_j)
    std::vector<Rational> exact;         // d_j at level n
    bool match = true;
};

struct BirkhoffReport {
    std::vector<BirkhoffLevel> levels;
    bool all_match() const;
};

BirkhoffReport birkhoff_stats(const CylinderTree& tree, const OdometerPoint& xi, int from_level);

// Exact measures by formula.
Rational nu_interior(const CylinderTree& tree, int n);
Rational nu_pending_class(const CylinderTree& tree, int n, int j);

}  // namespace godo
