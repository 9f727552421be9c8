#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "godo/expansion.hpp"
#include "godo/rational.hpp"

namespace godo {

enum class WindowKind { Perf, K, KTilde };
enum class Role : std::uint8_t { A, B, C };
enum class Cell : std::uint8_t { In, Out, Pending };

// How KTilde picks the removed cylinders E_n for n ∈ N_k.
//  PerParent: in every PENDING parent inside H_k except the canonical-first one,
//             the first A-child.
//  Literal:   one explicit level-n cylinder per level (sweeping over parents).
enum class ERule { PerParent, Literal };

std::string to_string(WindowKind k);
std::string to_string(ERule r);
WindowKind parse_window_kind(const std::string& s);
ERule parse_e_rule(const std::string& s);

struct LevelSpec {
    i64 modulus = 1;
    int raw_level = 0;
    int a = 3;
    std::vector<Role> roles;  // indexed by digit of T_{n-1}
};

struct WindowSpec {
    WindowKind kind = WindowKind::Perf;
    GroupKind group = GroupKind::Z;
    Rational epsilon{1, 2};
    std::vector<LevelSpec> levels;  // levels[n-1] describes level n

    int k = 1;
    int L = 0;
    // level-L PENDING cylinders (cylinder index) -> H class 1..k; all other level-L cylinders are in H_1
    std::map<std::uint64_t, int> h_assign;
    ERule e_rule = ERule::PerParent;
    std::map<int, std::vector<Digit>> literal_e;  // level n -> digits of E_n

    int cap() const { return static_cast<int>(levels.size()); }
    std::vector<i64> moduli() const;
    // N_j index of level n
    int n_class(int n) const;
};

struct TelescopeStep {
    int level = 0;
    int raw_level = 0;
    std::vector<int> skipped;  // raw levels rejected before this one
    std::string note;          // why the skipped ones failed
};

struct BuildParams {
    GroupKind group = GroupKind::Z;
    std::vector<i64> raw_moduli;
    Rational epsilon{1, 2};
    std::vector<int> a;  // a_n for n = 1..; last entry repeats
    int cap = 3;
    std::uint64_t max_domain = 1ull << 34;
};

struct BuildLog {
    std::vector<TelescopeStep> steps;
};

int a_at(const std::vector<int>& a, int n);

// Cylinder-tree view of a window: classification is computed on demand from
// digit strings, never materialized.
class CylinderTree {
public:
    CylinderTree(std::shared_ptr<const DomainSequence> ds, WindowSpec spec);

    const WindowSpec& spec() const { return spec_; }
    const DomainSequence& domains() const { return *ds_; }
    std::shared_ptr<const DomainSequence> domains_ptr() const { return ds_; }
    int cap() const { return spec_.cap(); }

    Role role(int n, Digit d) const { return static_cast<Role>(roles_[n][d]); }
    const std::vector<Digit>& digits_with(int n, Role r) const;

    // H class of the level-L prefix (1 when the kind has no partition).
    int h_class(std::span<const Digit> digits) const;

    // Child of a PENDING level-(n-1) parent with level-n digit d.
    Cell child(std::span<const Digit> parent, Digit d) const;

    struct Result {
        Cell cell = Cell::Pending;
        int level = 0;  // resolving level, or the precision examined
    };
    // Classify a digit string up to min(precision, cap).
    Result classify(std::span<const Digit> digits) const;

    // PENDING level-n cylinders in canonical order; stop early by returning false.
    void for_each_pending(int n, const std::function<bool(std::span<const Digit>)>& fn) const;
    // restricted to H_j (n >= L)
    void for_each_pending_in(int n, int j, const std::function<bool(std::span<const Digit>)>& fn) const;

    bool is_anchor(std::span<const Digit> parent) const;
    // For literal mode: the E_n digits, if level n has one.
    const std::vector<Digit>* literal_e(int n) const;

    // ∏_{j≤n} #C_j / #T_{j-1}
    Rational pending_measure(int n) const;
    std::uint64_t pending_count(int n) const;
    // level-L PENDING cylinders of class j, canonical order
    const std::vector<std::vector<Digit>>& h_members(int j) const;

private:
    std::shared_ptr<const DomainSequence> ds_;
    WindowSpec spec_;
    std::vector<std::vector<std::uint8_t>> roles_;  // [n][digit]
    std::vector<std::vector<std::vector<Digit>>> by_role_;  // [n][role] digits ascending
    std::vector<std::vector<std::vector<Digit>>> h_members_;  // [j]
    std::vector<Digit> anchor_;  // anchor level-L prefix
};

std::shared_ptr<const DomainSequence> domains_for(const WindowSpec& spec);

WindowSpec build_perf(const BuildParams& params, BuildLog* log = nullptr);
WindowSpec build_k(const WindowSpec& perf, int k, int L);
WindowSpec build_ktilde(const WindowSpec& kwin, ERule rule);

// Structural invariants of the per-level partitions.
struct CheckReport {
    std::string name;
    bool pass = true;
    std::string detail;
    std::vector<std::string> witnesses;
    std::vector<std::string> notes;
};

CheckReport check_structure(const CylinderTree& tree);
CheckReport check_genericity(const CylinderTree& tree);
CheckReport check_irredundancy(const CylinderTree& tree);
CheckReport check_self_similarity(const CylinderTree& tree, const CarryRanges& K);

struct LevelCensus {
    std::uint64_t in = 0, out = 0, pending = 0;
};
// Exhaustive classification of every level-n cylinder.
LevelCensus cylinder_census(const CylinderTree& tree, int n);
// Per-parent child counts over the PENDING tree; throws InternalError if
// a parent's children deviate from (#A adjusted, 1 + removed, #C).
std::vector<LevelCensus> tree_walk_census(const CylinderTree& tree);

struct BoundaryMeasure {
    Rational product;
    Rational counted;
    bool exhaustive = false;
};
BoundaryMeasure boundary_measure(const CylinderTree& tree, int n, std::uint64_t census_limit = 1ull << 23);

// Level-n X (new IN), Y (new OUT), Z (PENDING) cylinder indices.
struct LevelSets {
    std::vector<std::uint64_t> X, Y, Z;
};
LevelSets level_sets(const CylinderTree& tree, int n);

// PENDING sets equal at every level ≤ cap (returns the first differing level, or 0).
int pending_diff(const CylinderTree& a, const CylinderTree& b, std::uint64_t census_limit = 1ull << 23);

std::string serialize(const WindowSpec& spec);
WindowSpec parse_window(const std::string& text);

}  // namespace godo
