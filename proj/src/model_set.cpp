#include "godo/model_set.hpp"

#include <json.hpp>

#include "godo/errors.hpp"

namespace godo {

CylinderTree::Result classify(const CylinderTree& tree, const OdometerPoint& x) { return tree.classify(x.digits); }

std::size_t SymbolicPatch::undecided() const {
    std::size_t c = 0;
    for (const auto& e : entries) c += e.value == PatchValue::Undecided;
    return c;
}

std::vector<Element> patch_box(const DomainSequence& ds, int m) {
    std::vector<Element> out;
    out.reserve(ds.size(m));
    ds.for_each(m, [&](std::span<const Digit>, const Element& g) { out.push_back(g); });
    return out;
}

SymbolicPatch emit_patch(const CylinderTree& tree, const OdometerPoint& xi, const std::vector<Element>& patch) {
    const int cap = tree.cap();
    if (xi.precision() < cap) {
        throw PrecisionError("shift point has precision " + std::to_string(xi.precision()) + ", window cap is " +
                             std::to_string(cap));
    }
    const auto& ds = tree.domains();
    SymbolicPatch out;
    out.window = to_string(tree.spec().kind);
    out.xi.assign(xi.digits.begin(), xi.digits.begin() + cap);
    out.level = cap;
    out.entries.reserve(patch.size());
    std::vector<Digit> prod(cap);
    for (const auto& g : patch) {
        PatchEntry e;
        e.g = g;
        e.digits = ds.expand_to(g, cap);
        mul_digits(ds, e.digits, xi.digits, prod);
        switch (tree.classify(prod).cell) {
            case Cell::In: e.value = PatchValue::One; break;
            case Cell::Out: e.value = PatchValue::Zero; break;
            case Cell::Pending: e.value = PatchValue::Undecided; break;
        }
        out.entries.push_back(std::move(e));
    }
    return out;
}

std::string patch_jsonl(const Group& G, const SymbolicPatch& patch) {
    std::string out;
    for (const auto& e : patch.entries) {
        nlohmann::ordered_json j;
        std::vector<i64> coords(e.g.v.begin(), e.g.v.begin() + G.dim());
        j["g"] = coords;
        j["digits"] = e.digits;
        if (e.value == PatchValue::Undecided) j["value"] = "?";
        else j["value"] = static_cast<int>(e.value);
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string render_pgm(const DomainSequence& ds, const SymbolicPatch& patch, int m) {
    if (ds.group().kind() != GroupKind::Z2) throw ConfigError("render needs the group Z2");
    const i64 side = ds.chain().modulus(m);
    if (side > 1 << 14) throw ConfigError("render box side " + std::to_string(side) + " is too large");
    std::string pix(static_cast<std::size_t>(side * side), static_cast<char>(128));
    for (const auto& e : patch.entries) {
        const i64 x = e.g.v[0], y = e.g.v[1];
        if (x < 0 || y < 0 || x >= side || y >= side) continue;
        char v = static_cast<char>(128);
        if (e.value == PatchValue::One) v = static_cast<char>(255);
        else if (e.value == PatchValue::Zero) v = 0;
        pix[static_cast<std::size_t>(y * side + x)] = v;
    }
    return "P5\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n" + pix;
}

PerSets per_sets(const CylinderTree& tree, int n, bool collect) {
    const auto& ds = tree.domains();
    PerSets s;
    s.level = n;
    ds.for_each(n, [&](std::span<const Digit>, const Element& g) {
        const auto digits = ds.expand_to(g, n);
        switch (tree.classify(digits).cell) {
            case Cell::In: ++s.per1; break;
            case Cell::Out: ++s.per0; break;
            case Cell::Pending:
                ++s.nonper;
                if (collect) s.nonper_elements.push_back(g);
                break;
        }
    });
    return s;
}

Regularity regularity(const CylinderTree& tree, int n) {
    const auto p = per_sets(tree, n);
    Regularity r;
    r.level = n;
    r.d = ratio(p.per1 + p.per0, tree.domains().size(n));
    r.one_minus_nu = 1 - tree.pending_measure(n);
    if (r.d != r.one_minus_nu) {
        throw InternalError("regularity mismatch at level " + std::to_string(n) + ": " + to_string(r.d) + " vs " +
                            to_string(r.one_minus_nu));
    }
    return r;
}

}  // namespace godo
