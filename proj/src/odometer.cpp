#include "godo/odometer.hpp"

#include <random>
#include <string>

#include "godo/errors.hpp"

namespace godo {

namespace {

void need(const OdometerPoint& x, int n, const char* op) {
    if (x.precision() < n) {
        throw PrecisionError(std::string(op) + " needs precision " + std::to_string(n) + ", operand has " +
                             std::to_string(x.precision()));
    }
}

}  // namespace

OdometerPoint tau(const DomainSequence& ds, const Element& g, int n) {
    OdometerPoint p;
    p.digits = ds.expand_to(g, n);
    p.element = g;
    return p;
}

OdometerPoint truncate(const OdometerPoint& x, int n) {
    need(x, n, "truncate");
    OdometerPoint p;
    p.digits.assign(x.digits.begin(), x.digits.begin() + n);
    p.element = x.element;
    return p;
}

OdometerPoint identity_point(int n) {
    OdometerPoint p;
    p.digits.assign(n, 0);
    p.element = Element{};
    return p;
}

Cylinder cylinder_of(const DomainSequence& ds, const OdometerPoint& x, int n) {
    need(x, n, "cylinder_of");
    return {n, ds.cylinder_index(std::span<const Digit>(x.digits.data(), n))};
}

MetricResult metric(const DomainSequence& ds, const OdometerPoint& x, const OdometerPoint& y) {
    const int m = std::min(x.precision(), y.precision());
    for (int j = 1; j <= m; ++j) {
        if (x.digits[j - 1] != y.digits[j - 1]) return {Separation::Distinct, dyadic(j), j};
    }
    if (x.element && y.element) {
        if (*x.element == *y.element) return {Separation::Equal, Rational(0), m};
        // rational points carry all their digits; look deeper
        for (int j = m + 1; j <= ds.levels(); ++j) {
            if (!(ds.chain().project(*x.element, j) == ds.chain().project(*y.element, j))) {
                return {Separation::Distinct, dyadic(j), j};
            }
        }
        return {Separation::Unresolved, Rational(0), ds.levels()};
    }
    return {Separation::Unresolved, Rational(0), m};
}

Rational haar(const DomainSequence& ds, const Cylinder& c) { return ratio(1, ds.size(c.level)); }

void mul_digits(const DomainSequence& ds, std::span<const Digit> x, std::span<const Digit> y, std::span<Digit> out) {
    const Group& G = ds.group();
    const bool abelian = G.abelian();
    Element d = G.identity();
    Element s = G.identity();
    const std::size_t n = out.size();
    for (std::size_t j = 1; j <= n; ++j) {
        const int lv = static_cast<int>(j);
        const Element& p = ds.digit(lv, x[j - 1]);
        const Element& q = ds.digit(lv, y[j - 1]);
        const Element c = abelian ? G.mul(G.mul(d, p), q) : G.mul(G.mul(d, G.conj(p, s)), q);
        auto [digit, carry] = ds.split(c, lv);
        out[j - 1] = digit;
        d = carry;
        if (!abelian) s = G.mul(s, q);
    }
}

OdometerPoint odo_mul(const DomainSequence& ds, const OdometerPoint& x, const OdometerPoint& y, int n) {
    need(x, n, "odo_mul");
    need(y, n, "odo_mul");
    OdometerPoint r;
    r.digits.resize(n);
    mul_digits(ds, x.digits, y.digits, r.digits);
    if (x.element && y.element) r.element = ds.group().mul(*x.element, *y.element);
    return r;
}

OdometerPoint odo_inv(const DomainSequence& ds, const OdometerPoint& x, int n) {
    need(x, n, "odo_inv");
    const Group& G = ds.group();
    const Element p = ds.compose(std::span<const Digit>(x.digits.data(), n));
    OdometerPoint r;
    r.digits = ds.expand_to(G.inv(p), n);
    if (x.element) r.element = G.inv(*x.element);
    return r;
}

OdometerPoint sample_point(const DomainSequence& ds, std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    OdometerPoint p;
    p.digits.resize(n);
    for (int j = 1; j <= n; ++j) {
        std::uniform_int_distribution<std::uint32_t> u(0, ds.alphabet_size(j) - 1);
        p.digits[j - 1] = u(rng);
    }
    return p;
}

}  // namespace godo
