#include "godo/group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

#include "godo/errors.hpp"

namespace godo {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

}  // namespace

Group Group::from_name(std::string_view name) {
    const std::string n = lower(name);
    if (n == "z") return Group(GroupKind::Z);
    if (n == "z2" || n == "z^2") return Group(GroupKind::Z2);
    if (n == "heisenberg" || n == "h3") return Group(GroupKind::Heisenberg);
    throw ConfigError("unknown group '" + std::string(name) + "' (expected Z, Z2 or Heisenberg)");
}

std::string Group::name() const {
    switch (kind_) {
        case GroupKind::Z: return "Z";
        case GroupKind::Z2: return "Z2";
        case GroupKind::Heisenberg: return "Heisenberg";
    }
    return "?";
}

int Group::dim() const {
    switch (kind_) {
        case GroupKind::Z: return 1;
        case GroupKind::Z2: return 2;
        case GroupKind::Heisenberg: return 3;
    }
    return 0;
}

Element Group::mul(const Element& a, const Element& b) const {
    Element r;
    switch (kind_) {
        case GroupKind::Z:
            r.v[0] = add(a.v[0], b.v[0]);
            break;
        case GroupKind::Z2:
            r.v[0] = add(a.v[0], b.v[0]);
            r.v[1] = add(a.v[1], b.v[1]);
            break;
        case GroupKind::Heisenberg:
            r.v[0] = add(a.v[0], b.v[0]);
            r.v[1] = add(a.v[1], b.v[1]);
            r.v[2] = add(add(a.v[2], b.v[2]), godo::mul(a.v[0], b.v[1]));
            break;
    }
    return r;
}

Element Group::inv(const Element& a) const {
    Element r;
    switch (kind_) {
        case GroupKind::Z:
            r.v[0] = neg(a.v[0]);
            break;
        case GroupKind::Z2:
            r.v[0] = neg(a.v[0]);
            r.v[1] = neg(a.v[1]);
            break;
        case GroupKind::Heisenberg:
            r.v[0] = neg(a.v[0]);
            r.v[1] = neg(a.v[1]);
            r.v[2] = sub(godo::mul(a.v[0], a.v[1]), a.v[2]);
            break;
    }
    return r;
}

Element Group::conj(const Element& h, const Element& g) const {
    if (abelian()) return h;
    return mul(inv(g), mul(h, g));
}

Element Group::reduce(const Element& g, i64 m) const {
    Element r;
    for (int i = 0; i < dim(); ++i) r.v[i] = emod(g.v[i], m);
    return r;
}

Element Group::conj_key(const Element& s) const {
    if (kind_ == GroupKind::Heisenberg) return Element{{s.v[0], s.v[1], 0}};
    return {};
}

std::string Group::format(const Element& g) const {
    if (kind_ == GroupKind::Z) return std::to_string(g.v[0]);
    std::string out = "(";
    for (int i = 0; i < dim(); ++i) {
        if (i) out += ",";
        out += std::to_string(g.v[i]);
    }
    return out + ")";
}

Element Group::parse_element(std::string_view text) const {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')') s += c;
    }
    Element e;
    int count = 0;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        if (count >= dim()) throw ConfigError("too many coordinates in element '" + std::string(text) + "'");
        i64 val = 0;
        const char* b = s.data() + pos;
        const char* en = s.data() + comma;
        auto res = std::from_chars(b, en, val);
        if (res.ec != std::errc() || res.ptr != en || b == en) {
            throw ConfigError("bad element '" + std::string(text) + "'");
        }
        e.v[count++] = val;
        pos = comma + 1;
    }
    if (count != dim()) throw ConfigError("element '" + std::string(text) + "' needs " + std::to_string(dim()) + " coordinates");
    return e;
}

Element Group::make(std::initializer_list<i64> coords) const {
    if (static_cast<int>(coords.size()) != dim()) throw std::invalid_argument("coordinate count mismatch");
    Element e;
    int i = 0;
    for (i64 c : coords) e.v[i++] = c;
    return e;
}

SubgroupChain::SubgroupChain(Group group, std::vector<i64> moduli) : group_(group) {
    moduli_.assign(1, 1);
    for (i64 m : moduli) {
        const i64 prev = moduli_.back();
        if (m <= prev || m % prev != 0) {
            throw ConfigError("chain moduli must strictly refine: " + std::to_string(m) + " after " + std::to_string(prev));
        }
        moduli_.push_back(m);
    }
    // index must fit in 64 bits
    for (int n = 0; n <= levels(); ++n) (void)index(n);
}

i64 SubgroupChain::modulus(int n) const {
    if (n < 0 || n > levels()) {
        throw ConstraintError("chain level " + std::to_string(n) + " not available (chain has " + std::to_string(levels()) + " levels)");
    }
    return moduli_[n];
}

std::uint64_t SubgroupChain::index(int n) const {
    const auto m = static_cast<std::uint64_t>(modulus(n));
    std::uint64_t r = 1;
    for (int i = 0; i < group_.dim(); ++i) r = umul(r, m);
    return r;
}

CosetLabel SubgroupChain::project(const Element& g, int n) const {
    const i64 m = modulus(n);
    const Element r = group_.reduce(g, m);
    std::uint64_t label = 0;
    for (int i = group_.dim() - 1; i >= 0; --i) {
        label = umul(label, static_cast<std::uint64_t>(m)) + static_cast<std::uint64_t>(r.v[i]);
    }
    return {n, label};
}

bool SubgroupChain::in_subgroup(const Element& g, int n) const { return project(g, n).label == 0; }

SubgroupChain SubgroupChain::telescoped(const std::vector<int>& raw_levels) const {
    std::vector<i64> picked;
    int prev = 0;
    for (int r : raw_levels) {
        if (r <= prev) throw std::invalid_argument("telescoping levels must increase");
        picked.push_back(modulus(r));
        prev = r;
    }
    return SubgroupChain(group_, std::move(picked));
}

}  // namespace godo
