#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "godo/window.hpp"

namespace godo {

enum class XiRule { Identity, Haar, Critical };

struct RunConfig {
    GroupKind group = GroupKind::Z;
    std::vector<i64> moduli;  // raw chain m_1, m_2, ...

    WindowKind kind = WindowKind::Perf;
    int k = 1;
    int L = 1;
    int cap = 3;
    Rational epsilon{1, 2};
    std::vector<int> a{3};
    ERule e_rule = ERule::PerParent;
    std::uint64_t max_domain = 1ull << 34;

    std::optional<int> patch_level;      // default cap - 1
    std::vector<Element> patch_elements;  // overrides the box when nonempty
    XiRule xi = XiRule::Identity;
    std::optional<std::uint64_t> seed;

    std::uint64_t census_limit = 1ull << 22;

    BuildParams build_params() const;
    int effective_patch_level() const;
    // Throws ConfigError on any invariant violation.
    void validate() const;
};

// INI text with sections [group], [chain], [window], [patch], [verify].
RunConfig parse_config(const std::string& text);
// Override one "section.key" entry after parsing.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace godo
