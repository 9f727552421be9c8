/* C interface to the godo library: windows in G-odometers, Toeplitz patches, fibers. */
#ifndef GODO_H
#define GODO_H

#include <stddef.h>

#if defined(GODO_BUILDING)
#define GODO_API __attribute__((visibility("default")))
#else
#define GODO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    GODO_OK = 0,
    GODO_VERIFY_FAILED = 1,
    GODO_ERR_CONFIG = 2,
    GODO_ERR_PARSE = 3,
    GODO_ERR_CONSTRAINT = 4,
    GODO_ERR_PRECISION = 5,
    GODO_ERR_INTERNAL = 6,
    GODO_ERR_ARGUMENT = 7
} godo_status;

typedef struct godo_config godo_config;
typedef struct godo_window godo_window;

/* Message of the last failing call on this thread ("" if none). */
GODO_API const char* godo_last_error(void);

GODO_API godo_status godo_config_parse(const char* ini_text, godo_config** out);
/* key is "section.key", e.g. "window.cap". */
GODO_API godo_status godo_config_set(godo_config* cfg, const char* key, const char* value);
GODO_API void godo_config_free(godo_config* cfg);

/* report (JSON) may be NULL. */
GODO_API godo_status godo_window_build(const godo_config* cfg, godo_window** out, char** report);
GODO_API godo_status godo_window_parse(const char* text, godo_window** out);
GODO_API godo_status godo_window_serialize(const godo_window* w, char** text);
GODO_API void godo_window_free(godo_window* w);

/* GODO_VERIFY_FAILED when any check fails; the report is written either way. */
GODO_API godo_status godo_window_verify(const godo_window* w, const godo_config* cfg, char** report);

GODO_API godo_status godo_emit(const godo_window* w, const godo_config* cfg, char** jsonl);
GODO_API godo_status godo_render(const godo_window* w, const godo_config* cfg, char** pgm, size_t* size);
GODO_API godo_status godo_fiber(const godo_window* w, const godo_config* cfg, char** json);
GODO_API godo_status godo_stats(const godo_window* w, const godo_config* cfg, char** json);

/* Frees strings returned by this library. */
GODO_API void godo_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
