#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "godo/group.hpp"

namespace godo {

using Digit = std::uint32_t;

// Finite expansion g = π_1 π_2 ... π_{N+1}.
struct Digits {
    std::vector<Element> coeffs;
    int N = 0;
};

// One step of the carry recursion at level j.
struct CarryStep {
    int level = 0;
    Element d;      // d_j
    Element alpha;  // conj(π_j(g), ψ_{j-1}(h))
    Element p;      // π_j(g)
    Element q;      // π_j(h)
    Element c;      // c_j
};

struct CarryResult {
    std::vector<Element> prefix;  // π_1(gh) .. π_n(gh)
    std::vector<Element> carries; // d_1 .. d_{n+1}
    std::vector<CarryStep> steps;
    const Element& carry() const { return carries.back(); }
};

// Fundamental domains D_n = D_{n-1} T_{n-1} over canonical residue transversals.
// Digits at level j are indices into the alphabet T_{j-1} = D_j ∩ Γ_{j-1}.
class DomainSequence {
public:
    DomainSequence() = default;
    explicit DomainSequence(SubgroupChain chain);

    const Group& group() const { return chain_.group(); }
    const SubgroupChain& chain() const { return chain_; }
    int levels() const { return chain_.levels(); }
    i64 modulus(int n) const { return chain_.modulus(n); }

    std::uint64_t size(int n) const;  // #D_n
    std::uint32_t alphabet_size(int j) const;
    const std::vector<Element>& alphabet(int j) const;
    const Element& digit(int j, Digit d) const { return alphabet(j)[d]; }
    Digit digit_index(int j, const Element& t) const;

    std::pair<Element, Element> decompose(const Element& g, int n) const;
    Element psi(const Element& g, int n) const { return decompose(g, n).first; }
    Element phi(const Element& g, int n) const { return decompose(g, n).second; }
    bool contains(const Element& g, int n) const;

    // First n digits of g, whether or not g has a finite expansion.
    std::vector<Digit> expand_to(const Element& g, int n) const;
    // Full expansion; throws ConstraintError when g has none within the chain.
    Digits expand(const Element& g) const;

    Element compose(std::span<const Digit> digits) const;

    // For c ∈ Γ_{j-1}: the level-j digit ψ_j(c) and the carry φ_j(c).
    std::pair<Digit, Element> split(const Element& c, int j) const;

    // Σ_j d_j #D_{j-1}: a bijection between digit tuples and [0, #D_n).
    std::uint64_t cylinder_index(std::span<const Digit> digits) const;
    std::vector<Digit> cylinder_digits(int n, std::uint64_t index) const;

    // Visits every element of D_n with its digits, in cylinder-index order.
    void for_each(int n, const std::function<void(std::span<const Digit>, const Element&)>& fn) const;

private:
    SubgroupChain chain_;
    std::vector<std::vector<Element>> alphabets_;  // [j] = T_{j-1}, j >= 1
    std::vector<i64> ratio_;                        // m_j / m_{j-1}
    std::vector<std::uint64_t> sizes_;
};

// Element digits (π_1 .. π_n) padded with identity; used by carry_mul.
std::vector<Element> padded_digits(const DomainSequence& ds, const Digits& d, int n);

CarryResult carry_mul(const DomainSequence& ds, const Digits& g, const Digits& h, int n);

struct CarryWitness {
    Element g;
    Element h;
};

struct CarryRanges {
    // K[j] for j = 1..levels (K[0] unused), sorted.
    std::vector<std::vector<Element>> K;
    std::vector<std::vector<CarryWitness>> witness;
    int levels() const { return static_cast<int>(K.size()) - 1; }
    bool contains(int j, const Element& d) const;
};

// Exact carry ranges K_1..K_up_to by closure over reachable (carry, conjugation key) states.
CarryRanges carry_ranges(const DomainSequence& ds, int up_to);

// ∂_K(D_n) = {g : K^{-1} g meets D_n and its complement}, sorted.
std::vector<Element> vanhove_boundary(const DomainSequence& ds, const std::vector<Element>& K, int n);

}  // namespace godo
