#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "godo/checked.hpp"

namespace godo {

enum class GroupKind { Z, Z2, Heisenberg };

// Fixed three-slot representation; unused slots stay zero so equality and
// hashing are structural for every shipped group.
struct Element {
    std::array<i64, 3> v{0, 0, 0};

    friend bool operator==(const Element&, const Element&) = default;
    friend auto operator<=>(const Element&, const Element&) = default;
};

struct ElementHash {
    std::size_t operator()(const Element& e) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (i64 x : e.v) {
            h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

struct CosetLabel {
    int level = 0;
    std::uint64_t label = 0;
    friend bool operator==(const CosetLabel&, const CosetLabel&) = default;
};

class Group {
public:
    explicit Group(GroupKind kind = GroupKind::Z) : kind_(kind) {}

    // "Z", "Z2", "Heisenberg" (case-insensitive; "H3" accepted)
    static Group from_name(std::string_view name);

    GroupKind kind() const { return kind_; }
    std::string name() const;
    int dim() const;
    bool abelian() const { return kind_ != GroupKind::Heisenberg; }

    Element identity() const { return {}; }
    Element mul(const Element& a, const Element& b) const;
    Element inv(const Element& a) const;
    // g^{-1} h g
    Element conj(const Element& h, const Element& g) const;

    // Componentwise residues in [0, m). For all three groups this is the
    // canonical representative of the left coset g*ker(mod m).
    Element reduce(const Element& g, i64 m) const;

    // Smallest part of s that determines conj(., s), closed under right
    // multiplication: key(s*q) == key(key(s)*q).
    Element conj_key(const Element& s) const;

    std::string format(const Element& g) const;
    Element parse_element(std::string_view text) const;
    Element make(std::initializer_list<i64> coords) const;

private:
    GroupKind kind_;
};

// Γ_n = ker(reduction mod m_n), m_0 = 1 and m_{n-1} | m_n.
class SubgroupChain {
public:
    SubgroupChain() = default;
    SubgroupChain(Group group, std::vector<i64> moduli);

    const Group& group() const { return group_; }
    int levels() const { return static_cast<int>(moduli_.size()) - 1; }
    i64 modulus(int n) const;
    const std::vector<i64>& moduli() const { return moduli_; }
    std::uint64_t index(int n) const;

    CosetLabel project(const Element& g, int n) const;
    bool in_subgroup(const Element& g, int n) const;

    // Keep only the given raw levels (strictly increasing, all >= 1).
    SubgroupChain telescoped(const std::vector<int>& raw_levels) const;

private:
    Group group_;
    std::vector<i64> moduli_{1};
};

}  // namespace godo
