#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "godo/odometer.hpp"
#include "godo/window.hpp"

namespace godo {

// Membership of a point: first escape level from the C-digits.
CylinderTree::Result classify(const CylinderTree& tree, const OdometerPoint& x);

// Value of x_W shifted by ξ.
enum class PatchValue : std::int8_t { Zero = 0, One = 1, Undecided = -1 };

struct PatchEntry {
    Element g;
    std::vector<Digit> digits;  // τ(g) up to the level used
    PatchValue value = PatchValue::Undecided;
};

struct SymbolicPatch {
    std::string window;           // window kind
    std::vector<Digit> xi;        // shift digits
    int level = 0;                // classification depth
    std::vector<PatchEntry> entries;

    std::size_t undecided() const;
};

// The box D_m in cylinder order.
std::vector<Element> patch_box(const DomainSequence& ds, int m);

// value(g) = classify(τ(g)·ξ); PENDING at the cap is kept as Undecided.
SymbolicPatch emit_patch(const CylinderTree& tree, const OdometerPoint& xi, const std::vector<Element>& patch);

std::string patch_jsonl(const Group& G, const SymbolicPatch& patch);

// Binary PGM (P5) of a Z^2 patch over the box D_m: x is the column, y the row.
std::string render_pgm(const DomainSequence& ds, const SymbolicPatch& patch, int m);

struct PerSets {
    int level = 0;
    std::uint64_t per1 = 0, per0 = 0, nonper = 0;
    std::vector<Element> nonper_elements;  // filled on request
};

// Partition of D_n by the periodicity of each position under Γ_n.
PerSets per_sets(const CylinderTree& tree, int n, bool collect = false);

struct Regularity {
    int level = 0;
    Rational d;             // #(D_n ∩ Per)/#D_n from the Per sets
    Rational one_minus_nu;  // 1 - ∏ #C_k/#T_{k-1}
};

// Throws InternalError when the two computations disagree.
Regularity regularity(const CylinderTree& tree, int n);

}  // namespace godo
