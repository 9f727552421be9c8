#pragma once

#include <string>

#include "godo/config.hpp"
#include "godo/odometer.hpp"
#include "godo/window.hpp"

// Command layer shared by the C API and the acceptance runner.
namespace godo {

struct BuildOutcome {
    WindowSpec spec;
    std::string report;  // JSON
};
BuildOutcome run_build(const RunConfig& cfg);

struct VerifyOutcome {
    bool pass = true;
    std::string report;  // JSON
};
VerifyOutcome run_verify(const WindowSpec& spec, std::uint64_t census_limit);

OdometerPoint choose_xi(const CylinderTree& tree, const RunConfig& cfg);

std::string run_emit(const WindowSpec& spec, const RunConfig& cfg);    // JSON-lines
std::string run_render(const WindowSpec& spec, const RunConfig& cfg);  // PGM bytes
std::string run_fiber(const WindowSpec& spec, const RunConfig& cfg);   // JSON
std::string run_stats(const WindowSpec& spec, const RunConfig& cfg);   // JSON

}  // namespace godo
