#include "godo/expansion.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "godo/errors.hpp"

namespace godo {

namespace {

constexpr std::uint64_t kMaxAlphabet = 1ull << 26;

}  // namespace

DomainSequence::DomainSequence(SubgroupChain chain) : chain_(std::move(chain)) {
    const int dim = group().dim();
    alphabets_.resize(levels() + 1);
    ratio_.assign(levels() + 1, 1);
    sizes_.assign(levels() + 1, 1);
    for (int j = 1; j <= levels(); ++j) {
        const i64 lo = modulus(j - 1);
        const i64 r = modulus(j) / lo;
        ratio_[j] = r;
        std::uint64_t count = 1;
        for (int i = 0; i < dim; ++i) count = umul(count, static_cast<std::uint64_t>(r));
        if (count > kMaxAlphabet) {
            throw ConstraintError("level " + std::to_string(j) + " alphabet has " + std::to_string(count) +
                                  " digits; too large to tabulate");
        }
        auto& T = alphabets_[j];
        T.resize(count);
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::uint64_t rest = idx;
            Element e;
            for (int i = 0; i < dim; ++i) {
                e.v[i] = godo::mul(static_cast<i64>(rest % static_cast<std::uint64_t>(r)), lo);
                rest /= static_cast<std::uint64_t>(r);
            }
            T[idx] = e;
        }
        sizes_[j] = chain_.index(j);
    }
}

std::uint64_t DomainSequence::size(int n) const {
    if (n < 0 || n > levels()) throw ConstraintError("domain level " + std::to_string(n) + " not built");
    return sizes_[n];
}

std::uint32_t DomainSequence::alphabet_size(int j) const { return static_cast<std::uint32_t>(alphabet(j).size()); }

const std::vector<Element>& DomainSequence::alphabet(int j) const {
    if (j < 1 || j > levels()) throw ConstraintError("digit level " + std::to_string(j) + " not built");
    return alphabets_[j];
}

Digit DomainSequence::digit_index(int j, const Element& t) const {
    const i64 lo = modulus(j - 1);
    const i64 hi = modulus(j);
    const i64 r = ratio_[j];
    std::uint64_t idx = 0;
    for (int i = group().dim() - 1; i >= 0; --i) {
        const i64 x = t.v[i];
        if (x < 0 || x >= hi || x % lo != 0) {
            throw std::invalid_argument(group().format(t) + " is not a level-" + std::to_string(j) + " digit");
        }
        idx = idx * static_cast<std::uint64_t>(r) + static_cast<std::uint64_t>(x / lo);
    }
    return static_cast<Digit>(idx);
}

std::pair<Element, Element> DomainSequence::decompose(const Element& g, int n) const {
    const Group& G = group();
    Element psi = G.identity();
    Element rem = g;
    for (int j = 1; j <= n; ++j) {
        const Element v = G.reduce(rem, modulus(j));
        rem = G.mul(G.inv(v), rem);
        psi = G.mul(psi, v);
    }
    return {psi, rem};
}

bool DomainSequence::contains(const Element& g, int n) const { return decompose(g, n).second == group().identity(); }

std::vector<Digit> DomainSequence::expand_to(const Element& g, int n) const {
    const Group& G = group();
    std::vector<Digit> out(n);
    Element rem = g;
    for (int j = 1; j <= n; ++j) {
        const Element v = G.reduce(rem, modulus(j));
        out[j - 1] = digit_index(j, v);
        rem = G.mul(G.inv(v), rem);
    }
    return out;
}

Digits DomainSequence::expand(const Element& g) const {
    const Group& G = group();
    Digits d;
    if (g == G.identity()) {
        d.coeffs.push_back(g);
        return d;
    }
    Element rem = g;
    for (int j = 1; j <= levels(); ++j) {
        const Element v = G.reduce(rem, modulus(j));
        d.coeffs.push_back(v);
        rem = G.mul(G.inv(v), rem);
        if (rem == G.identity()) {
            while (d.coeffs.size() > 1 && d.coeffs.back() == G.identity()) d.coeffs.pop_back();
            d.N = static_cast<int>(d.coeffs.size()) - 1;
            return d;
        }
    }
    throw ConstraintError(G.format(g) + " has no finite expansion within " + std::to_string(levels()) +
                          " levels (not in any built D_n)");
}

Element DomainSequence::compose(std::span<const Digit> digits) const {
    const Group& G = group();
    Element p = G.identity();
    for (std::size_t j = 0; j < digits.size(); ++j) p = G.mul(p, digit(static_cast<int>(j) + 1, digits[j]));
    return p;
}

std::pair<Digit, Element> DomainSequence::split(const Element& c, int j) const {
    const Group& G = group();
    const Element v = G.reduce(c, modulus(j));
    return {digit_index(j, v), G.mul(G.inv(v), c)};
}

std::uint64_t DomainSequence::cylinder_index(std::span<const Digit> digits) const {
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < digits.size(); ++j) idx += static_cast<std::uint64_t>(digits[j]) * sizes_[j];
    return idx;
}

std::vector<Digit> DomainSequence::cylinder_digits(int n, std::uint64_t index) const {
    std::vector<Digit> out(n);
    for (int j = 1; j <= n; ++j) {
        const std::uint64_t a = alphabet_size(j);
        out[j - 1] = static_cast<Digit>(index % a);
        index /= a;
    }
    return out;
}

void DomainSequence::for_each(int n, const std::function<void(std::span<const Digit>, const Element&)>& fn) const {
    const Group& G = group();
    std::vector<Digit> digits(n, 0);
    std::vector<Element> prefix(n + 1, G.identity());
    int dirty = 1;
    while (true) {
        for (int j = dirty; j <= n; ++j) prefix[j] = G.mul(prefix[j - 1], digit(j, digits[j - 1]));
        fn(digits, prefix[n]);
        int j = 1;
        while (j <= n && ++digits[j - 1] == alphabet_size(j)) {
            digits[j - 1] = 0;
            ++j;
        }
        if (j > n) return;
        dirty = 1;
    }
}

std::vector<Element> padded_digits(const DomainSequence& ds, const Digits& d, int n) {
    std::vector<Element> out(n, ds.group().identity());
    for (int j = 0; j < n && j < static_cast<int>(d.coeffs.size()); ++j) out[j] = d.coeffs[j];
    return out;
}

CarryResult carry_mul(const DomainSequence& ds, const Digits& g, const Digits& h, int n) {
    if (n < 1) throw std::invalid_argument("carry_mul needs n >= 1");
    const Group& G = ds.group();
    const auto pg = padded_digits(ds, g, n);
    const auto ph = padded_digits(ds, h, n);
    CarryResult out;
    out.carries.push_back(G.identity());
    Element s = G.identity();  // ψ_{j-1}(h)
    for (int j = 1; j <= n; ++j) {
        CarryStep st;
        st.level = j;
        st.d = out.carries.back();
        st.p = pg[j - 1];
        st.q = ph[j - 1];
        st.alpha = G.conj(st.p, s);
        st.c = G.mul(G.mul(st.d, st.alpha), st.q);
        auto [digit, carry] = ds.split(st.c, j);
        out.prefix.push_back(ds.digit(j, digit));
        out.carries.push_back(carry);
        out.steps.push_back(st);
        s = G.mul(s, st.q);
    }
    return out;
}

bool CarryRanges::contains(int j, const Element& d) const {
    if (j < 1 || j > levels()) return false;
    return std::binary_search(K[j].begin(), K[j].end(), d);
}

CarryRanges carry_ranges(const DomainSequence& ds, int up_to) {
    if (up_to < 1) throw std::invalid_argument("carry_ranges needs up_to >= 1");
    const Group& G = ds.group();
    struct State {
        Element d;
        Element key;
        bool operator<(const State& o) const { return d != o.d ? d < o.d : key < o.key; }
    };
    CarryRanges out;
    out.K.resize(up_to + 1);
    out.witness.resize(up_to + 1);
    std::map<State, CarryWitness> states;
    states[{G.identity(), G.identity()}] = {G.identity(), G.identity()};
    out.K[1] = {G.identity()};
    out.witness[1] = {{G.identity(), G.identity()}};
    for (int j = 1; j < up_to; ++j) {
        const auto& T = ds.alphabet(j);
        std::map<State, CarryWitness> next;
        for (const auto& [st, w] : states) {
            std::vector<Element> alpha(T.size());
            for (std::size_t i = 0; i < T.size(); ++i) alpha[i] = G.conj(T[i], st.key);
            for (std::size_t ip = 0; ip < T.size(); ++ip) {
                const Element da = G.mul(st.d, alpha[ip]);
                for (std::size_t iq = 0; iq < T.size(); ++iq) {
                    const Element c = G.mul(da, T[iq]);
                    State ns{ds.split(c, j).second, G.conj_key(G.mul(st.key, T[iq]))};
                    if (!next.count(ns)) next.emplace(ns, CarryWitness{G.mul(w.g, T[ip]), G.mul(w.h, T[iq])});
                }
            }
        }
        states = std::move(next);
        std::map<Element, CarryWitness> level;
        for (const auto& [st, w] : states) level.emplace(st.d, w);
        for (const auto& [d, w] : level) {
            out.K[j + 1].push_back(d);
            out.witness[j + 1].push_back(w);
        }
    }
    return out;
}

std::vector<Element> vanhove_boundary(const DomainSequence& ds, const std::vector<Element>& K, int n) {
    const Group& G = ds.group();
    std::vector<Element> Kinv;
    for (const auto& k : K) Kinv.push_back(G.inv(k));
    std::unordered_set<Element, ElementHash> seen;
    std::vector<Element> out;
    ds.for_each(n, [&](std::span<const Digit>, const Element& a) {
        for (const auto& k : K) {
            const Element g = G.mul(k, a);  // K^{-1} g contains a
            if (!seen.insert(g).second) continue;
            bool in = false, outside = false;
            for (const auto& ki : Kinv) {
                if (ds.contains(G.mul(ki, g), n)) in = true;
                else outside = true;
            }
            if (in && outside) out.push_back(g);
        }
    });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace godo
