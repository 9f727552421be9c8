#include "godo/config.hpp"

#include <charconv>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "godo/errors.hpp"

namespace godo {

namespace {

std::vector<std::string> tokens(const std::string& s) {
    std::string t = s;
    for (char& c : t)
        if (c == ',') c = ' ';
    std::istringstream in(t);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

i64 to_int(const std::string& key, const std::string& s) {
    i64 v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw ConfigError(key + ": expected an integer, got '" + s + "'");
    }
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Elements are written "(a,b)" or bare integers, separated by spaces.
std::vector<Element> parse_elements(const Group& G, const std::string& s) {
    std::vector<Element> out;
    std::string cur;
    int depth = 0;
    auto flush = [&] {
        if (!trim(cur).empty()) out.push_back(G.parse_element(trim(cur)));
        cur.clear();
    };
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth == 0 && (c == ' ' || c == '\t')) {
            flush();
            continue;
        }
        cur += c;
        if (c == ')' && depth == 0) flush();
    }
    flush();
    return out;
}

struct Chain {
    std::string growth;
    std::vector<i64> moduli, ratios;
    i64 base = 0;
    int levels = 0;
};

}  // namespace

BuildParams RunConfig::build_params() const {
    BuildParams p;
    p.group = group;
    p.raw_moduli = moduli;
    p.epsilon = epsilon;
    p.a = a;
    p.cap = cap;
    p.max_domain = max_domain;
    return p;
}

int RunConfig::effective_patch_level() const { return patch_level.value_or(std::max(cap - 1, 0)); }

void RunConfig::validate() const {
    if (moduli.empty()) throw ConfigError("chain: no moduli");
    SubgroupChain(Group(group), moduli);  // strict refinement, overflow
    if (epsilon <= 0 || epsilon >= 1) throw ConfigError("window.epsilon must lie in (0,1)");
    if (cap < 1) throw ConfigError("window.cap must be >= 1");
    for (int v : a)
        if (v < 3) throw ConfigError("window.a: every a_n must be >= 3 (got " + std::to_string(v) + ")");
    if (a.empty()) throw ConfigError("window.a is empty");
    if (kind != WindowKind::Perf) {
        if (k < 1) throw ConfigError("window.k must be >= 1");
        if (L < 1 || L > cap) throw ConfigError("window.L must satisfy 1 <= L <= cap");
    }
    const int pl = effective_patch_level();
    if (pl < 0 || pl > cap) throw ConfigError("patch.level must lie in [0, cap]");
    if ((xi == XiRule::Haar || xi == XiRule::Critical) && !seed) {
        throw ConfigError("patch.xi = haar/critical needs patch.seed");
    }
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    const Group G(cfg.group);
    if (key == "group.name") {
        cfg.group = Group::from_name(v).kind();
    } else if (key == "window.kind") {
        cfg.kind = parse_window_kind(v);
    } else if (key == "window.k") {
        cfg.k = static_cast<int>(to_int(key, v));
    } else if (key == "window.L") {
        cfg.L = static_cast<int>(to_int(key, v));
    } else if (key == "window.cap") {
        cfg.cap = static_cast<int>(to_int(key, v));
    } else if (key == "window.epsilon") {
        cfg.epsilon = parse_rational(v);
    } else if (key == "window.a") {
        cfg.a.clear();
        for (const auto& t : tokens(v)) cfg.a.push_back(static_cast<int>(to_int(key, t)));
    } else if (key == "window.e_rule") {
        cfg.e_rule = parse_e_rule(v);
    } else if (key == "window.max_domain") {
        cfg.max_domain = static_cast<std::uint64_t>(to_int(key, v));
    } else if (key == "patch.level") {
        cfg.patch_level = static_cast<int>(to_int(key, v));
    } else if (key == "patch.elements") {
        cfg.patch_elements = parse_elements(G, v);
    } else if (key == "patch.xi") {
        if (v == "identity") cfg.xi = XiRule::Identity;
        else if (v == "haar") cfg.xi = XiRule::Haar;
        else if (v == "critical") cfg.xi = XiRule::Critical;
        else throw ConfigError("patch.xi must be identity, haar or critical");
    } else if (key == "patch.seed") {
        cfg.seed = static_cast<std::uint64_t>(to_int(key, v));
    } else if (key == "verify.census_limit") {
        cfg.census_limit = static_cast<std::uint64_t>(to_int(key, v));
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

RunConfig parse_config(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    RunConfig cfg;
    // group first: element parsing depends on it
    if (auto g = tree.get_optional<std::string>("group.name")) set_config_value(cfg, "group.name", *g);
    else throw ConfigError("config: [group] name is required");

    Chain chain;
    for (const auto& [section, body] : tree) {
        if (!body.data().empty()) throw ConfigError("config: key '" + section + "' outside a section");
        for (const auto& [key, val] : body) {
            const std::string full = section + "." + key;
            const std::string v = val.get_value<std::string>();
            if (section == "group") {
                if (key != "name") throw ConfigError("unknown config key '" + full + "'");
            } else if (section == "chain") {
                if (key == "growth") chain.growth = trim(v);
                else if (key == "moduli")
                    for (const auto& t : tokens(v)) chain.moduli.push_back(to_int(full, t));
                else if (key == "ratios")
                    for (const auto& t : tokens(v)) chain.ratios.push_back(to_int(full, t));
                else if (key == "base") chain.base = to_int(full, trim(v));
                else if (key == "levels") chain.levels = static_cast<int>(to_int(full, trim(v)));
                else throw ConfigError("unknown config key '" + full + "'");
            } else if (section == "window" || section == "patch" || section == "verify") {
                set_config_value(cfg, full, v);
            } else {
                throw ConfigError("unknown config section [" + section + "]");
            }
        }
    }
    if (chain.growth.empty()) chain.growth = chain.moduli.empty() ? (chain.ratios.empty() ? "power" : "ratios") : "list";
    if (chain.growth == "list") {
        cfg.moduli = chain.moduli;
    } else if (chain.growth == "ratios") {
        i64 m = 1;
        for (i64 r : chain.ratios) {
            if (r < 2) throw ConfigError("chain.ratios entries must be >= 2");
            if (__builtin_mul_overflow(m, r, &m)) throw ConfigError("chain.ratios overflow 64 bits");
            cfg.moduli.push_back(m);
        }
    } else if (chain.growth == "power") {
        if (chain.base < 2) throw ConfigError("chain.base must be >= 2 for growth = power");
        if (chain.levels < 1) throw ConfigError("chain.levels must be >= 1 for growth = power");
        i64 m = 1;
        for (int i = 0; i < chain.levels; ++i) {
            if (__builtin_mul_overflow(m, chain.base, &m)) throw ConfigError("chain.levels overflow 64 bits");
            cfg.moduli.push_back(m);
        }
    } else {
        throw ConfigError("chain.growth must be list, ratios or power");
    }
    return cfg;
}

}  // namespace godo
