#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "godo/expansion.hpp"
#include "godo/rational.hpp"

namespace godo {

// ξ to finite precision; digits[j-1] indexes the level-j alphabet.
struct OdometerPoint {
    std::vector<Digit> digits;
    std::optional<Element> element;  // set when the point is τ(g)

    int precision() const { return static_cast<int>(digits.size()); }
    friend bool operator==(const OdometerPoint&, const OdometerPoint&) = default;
};

struct Cylinder {
    int level = 0;
    std::uint64_t index = 0;  // DomainSequence::cylinder_index of the base digits
};

enum class Separation { Equal, Distinct, Unresolved };

struct MetricResult {
    Separation kind = Separation::Unresolved;
    Rational value;  // 0 unless Distinct
    int level = 0;   // first differing level, or the precision examined
};

OdometerPoint tau(const DomainSequence& ds, const Element& g, int n);
OdometerPoint truncate(const OdometerPoint& x, int n);
OdometerPoint identity_point(int n);

// Cylinder [x]_n containing x.
Cylinder cylinder_of(const DomainSequence& ds, const OdometerPoint& x, int n);

MetricResult metric(const DomainSequence& ds, const OdometerPoint& x, const OdometerPoint& y);
Rational haar(const DomainSequence& ds, const Cylinder& c);

// Allocation-free carry product of digit strings: out[0..n) = digits of x*y.
void mul_digits(const DomainSequence& ds, std::span<const Digit> x, std::span<const Digit> y, std::span<Digit> out);

OdometerPoint odo_mul(const DomainSequence& ds, const OdometerPoint& x, const OdometerPoint& y, int n);
OdometerPoint odo_inv(const DomainSequence& ds, const OdometerPoint& x, int n);
OdometerPoint sample_point(const DomainSequence& ds, std::uint64_t seed, int n);

}  // namespace godo
