#include "godo/godo.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "godo/app.hpp"
#include "godo/errors.hpp"

struct godo_config {
    godo::RunConfig cfg;
};

struct godo_window {
    godo::WindowSpec spec;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.data(), s.size());
    p[s.size()] = '\0';
    return p;
}

template <class F>
godo_status guard(F&& f) {
    last_error.clear();
    try {
        return f();
    } catch (const godo::ConfigError& e) {
        last_error = e.what();
        return GODO_ERR_CONFIG;
    } catch (const godo::ParseError& e) {
        last_error = e.what();
        return GODO_ERR_PARSE;
    } catch (const godo::ConstraintError& e) {
        last_error = e.what();
        return GODO_ERR_CONSTRAINT;
    } catch (const godo::PrecisionError& e) {
        last_error = e.what();
        return GODO_ERR_PRECISION;
    } catch (const godo::InternalError& e) {
        last_error = e.what();
        return GODO_ERR_INTERNAL;
    } catch (const std::invalid_argument& e) {
        last_error = e.what();
        return GODO_ERR_ARGUMENT;
    } catch (const std::exception& e) {
        last_error = e.what();
        return GODO_ERR_INTERNAL;
    }
}

#define GODO_REQUIRE(cond)                                          \
    do {                                                            \
        if (!(cond)) throw std::invalid_argument("null argument"); \
    } while (0)

}  // namespace

extern "C" {

const char* godo_last_error(void) { return last_error.c_str(); }

godo_status godo_config_parse(const char* ini_text, godo_config** out) {
    return guard([&] {
        GODO_REQUIRE(ini_text && out);
        *out = new godo_config{godo::parse_config(ini_text)};
        return GODO_OK;
    });
}

godo_status godo_config_set(godo_config* cfg, const char* key, const char* value) {
    return guard([&] {
        GODO_REQUIRE(cfg && key && value);
        godo::set_config_value(cfg->cfg, key, value);
        return GODO_OK;
    });
}

void godo_config_free(godo_config* cfg) { delete cfg; }

godo_status godo_window_build(const godo_config* cfg, godo_window** out, char** report) {
    return guard([&] {
        GODO_REQUIRE(cfg && out);
        auto r = godo::run_build(cfg->cfg);
        *out = new godo_window{std::move(r.spec)};
        if (report) *report = dup(r.report);
        return GODO_OK;
    });
}

godo_status godo_window_parse(const char* text, godo_window** out) {
    return guard([&] {
        GODO_REQUIRE(text && out);
        *out = new godo_window{godo::parse_window(text)};
        return GODO_OK;
    });
}

godo_status godo_window_serialize(const godo_window* w, char** text) {
    return guard([&] {
        GODO_REQUIRE(w && text);
        *text = dup(godo::serialize(w->spec));
        return GODO_OK;
    });
}

void godo_window_free(godo_window* w) { delete w; }

godo_status godo_window_verify(const godo_window* w, const godo_config* cfg, char** report) {
    return guard([&] {
        GODO_REQUIRE(w && report);
        const std::uint64_t limit = cfg ? cfg->cfg.census_limit : godo::RunConfig{}.census_limit;
        auto r = godo::run_verify(w->spec, limit);
        *report = dup(r.report);
        return r.pass ? GODO_OK : GODO_VERIFY_FAILED;
    });
}

godo_status godo_emit(const godo_window* w, const godo_config* cfg, char** jsonl) {
    return guard([&] {
        GODO_REQUIRE(w && cfg && jsonl);
        *jsonl = dup(godo::run_emit(w->spec, cfg->cfg));
        return GODO_OK;
    });
}

godo_status godo_render(const godo_window* w, const godo_config* cfg, char** pgm, size_t* size) {
    return guard([&] {
        GODO_REQUIRE(w && cfg && pgm && size);
        const auto img = godo::run_render(w->spec, cfg->cfg);
        *pgm = dup(img);
        *size = img.size();
        return GODO_OK;
    });
}

godo_status godo_fiber(const godo_window* w, const godo_config* cfg, char** json) {
    return guard([&] {
        GODO_REQUIRE(w && cfg && json);
        *json = dup(godo::run_fiber(w->spec, cfg->cfg));
        return GODO_OK;
    });
}

godo_status godo_stats(const godo_window* w, const godo_config* cfg, char** json) {
    return guard([&] {
        GODO_REQUIRE(w && cfg && json);
        *json = dup(godo::run_stats(w->spec, cfg->cfg));
        return GODO_OK;
    });
}

void godo_string_free(char* s) { std::free(s); }

}  // extern "C"
