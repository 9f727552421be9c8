// godo: build, verify and explore Toeplitz windows over G-odometers.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "godo/godo.h"

namespace {

struct Options {
    std::string config;
    std::string out;
    std::string window;
    std::optional<int> cap;
    std::optional<unsigned long long> seed;
    std::optional<int> patch_level;
    std::string mode;
    std::string xi;
    bool strict_e_rule = false;
};

struct Failure {
    int code;
    std::string message;
};

int exit_code(godo_status s) {
    switch (s) {
        case GODO_OK: return 0;
        case GODO_VERIFY_FAILED:
        case GODO_ERR_INTERNAL: return 1;
        default: return 2;
    }
}

void check(godo_status s, const char* what) {
    if (s != GODO_OK) throw Failure{exit_code(s), std::string(what) + ": " + godo_last_error()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{2, "cannot read " + path};
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void emit(const std::string& path, const char* data, std::size_t size) {
    if (path.empty() || path == "-") {
        std::fwrite(data, 1, size, stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure{2, "cannot write " + path};
    out.write(data, static_cast<std::streamsize>(size));
    if (!out) throw Failure{2, "write failed: " + path};
}

struct String {
    char* p = nullptr;
    ~String() { godo_string_free(p); }
};
using ConfigPtr = std::unique_ptr<godo_config, decltype(&godo_config_free)>;
using WindowPtr = std::unique_ptr<godo_window, decltype(&godo_window_free)>;

ConfigPtr load_config(const Options& o) {
    godo_config* c = nullptr;
    check(godo_config_parse(slurp(o.config).c_str(), &c), "config");
    ConfigPtr cfg(c, godo_config_free);
    auto set = [&](const char* key, const std::string& v) { check(godo_config_set(cfg.get(), key, v.c_str()), key); };
    if (o.cap) set("window.cap", std::to_string(*o.cap));
    if (!o.mode.empty()) set("window.kind", o.mode);
    if (o.strict_e_rule) set("window.e_rule", "literal");
    if (o.seed) set("patch.seed", std::to_string(*o.seed));
    if (o.patch_level) set("patch.level", std::to_string(*o.patch_level));
    if (!o.xi.empty()) set("patch.xi", o.xi);
    return cfg;
}

WindowPtr window_for(const Options& o, const godo_config* cfg) {
    godo_window* w = nullptr;
    if (!o.window.empty()) check(godo_window_parse(slurp(o.window).c_str(), &w), "window");
    else check(godo_window_build(cfg, &w, nullptr), "build");
    return WindowPtr(w, godo_window_free);
}

int cmd_build(const Options& o) {
    auto cfg = load_config(o);
    godo_window* w = nullptr;
    String report, text;
    check(godo_window_build(cfg.get(), &w, &report.p), "build");
    WindowPtr win(w, godo_window_free);
    check(godo_window_serialize(win.get(), &text.p), "serialize");
    emit(o.out, text.p, std::strlen(text.p));
    if (!o.out.empty() && o.out != "-") std::fputs(report.p, stdout);
    else std::fputs(report.p, stderr);
    return 0;
}

int cmd_verify(const Options& o) {
    ConfigPtr cfg(nullptr, godo_config_free);
    if (!o.config.empty()) cfg = load_config(o);
    if (o.window.empty()) throw Failure{2, "verify needs a window file"};
    auto win = window_for(o, cfg.get());
    String report;
    const godo_status s = godo_window_verify(win.get(), cfg.get(), &report.p);
    if (s != GODO_OK && s != GODO_VERIFY_FAILED) check(s, "verify");
    emit(o.out, report.p, std::strlen(report.p));
    return exit_code(s);
}

template <class F>
int cmd_output(const Options& o, F&& produce) {
    auto cfg = load_config(o);
    auto win = window_for(o, cfg.get());
    String s;
    std::size_t size = 0;
    check(produce(win.get(), cfg.get(), &s.p, &size), "command");
    emit(o.out, s.p, size ? size : std::strlen(s.p));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toeplitz windows over G-odometers"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool need_config) {
        auto* c = sub->add_option("--config", o.config, "INI run configuration");
        if (need_config) c->required();
        sub->add_option("--out", o.out, "output path (default stdout)");
        sub->add_option("--cap", o.cap, "override window.cap");
        sub->add_option("--seed", o.seed, "seed for sampled shift points");
        sub->add_option("--patch-level", o.patch_level, "patch box level m");
        sub->add_option("--mode", o.mode, "window kind")->check(CLI::IsMember({"perf", "k", "ktilde"}));
        sub->add_option("--xi", o.xi, "shift point rule")->check(CLI::IsMember({"identity", "haar", "critical"}));
        sub->add_flag("--strict-e-rule", o.strict_e_rule, "one removed cylinder per level (KTilde)");
    };

    auto* build = app.add_subcommand("build", "build a window and write it to --out");
    common(build, true);
    auto* verify = app.add_subcommand("verify", "run all window checks");
    common(verify, false);
    verify->add_option("window", o.window, "window file")->required();
    auto* emitc = app.add_subcommand("emit", "patch of the Toeplitz array as JSON lines");
    auto* fiber = app.add_subcommand("fiber", "similarity classes and fiber candidates");
    auto* stats = app.add_subcommand("stats", "exact Birkhoff frequencies per level");
    auto* render = app.add_subcommand("render", "PGM image of a Z2 patch");
    for (auto* s : {emitc, fiber, stats, render}) {
        common(s, true);
        s->add_option("--window", o.window, "window file (built from the config if absent)");
    }

    CLI11_PARSE(app, argc, argv);
    try {
        if (*build) return cmd_build(o);
        if (*verify) return cmd_verify(o);
        if (*emitc)
            return cmd_output(o, [](auto* w, auto* c, char** s, std::size_t*) { return godo_emit(w, c, s); });
        if (*fiber)
            return cmd_output(o, [](auto* w, auto* c, char** s, std::size_t*) { return godo_fiber(w, c, s); });
        if (*stats)
            return cmd_output(o, [](auto* w, auto* c, char** s, std::size_t*) { return godo_stats(w, c, s); });
        if (*render) {
            if (o.out.empty()) throw Failure{2, "render writes binary PGM; give --out"};
            return cmd_output(o, [](auto* w, auto* c, char** s, std::size_t* n) { return godo_render(w, c, s, n); });
        }
    } catch (const Failure& f) {
        std::fprintf(stderr, "godo: %s\n", f.message.c_str());
        return f.code;
    }
    return 0;
}
