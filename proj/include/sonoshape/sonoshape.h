#ifndef SONOSHAPE_H
#define SONOSHAPE_H

/*
 * C interface to the sonoshape core: script compilation and execution,
 * audio feature extraction, LLM-driven authoring and the streaming session.
 *
 * Every function returns a sono_status. On failure, sono_last_error() gives
 * a message for the calling thread, valid until that thread's next call.
 * Strings returned through char** parameters are heap-allocated and must be
 * released with sono_string_free. Handles are opaque and released with their
 * *_destroy function; destroying NULL is a no-op.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(SONO_BUILDING_LIBRARY)
#define SONO_API __attribute__((visibility("default")))
#else
#define SONO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sono_status {
    SONO_OK = 0,
    SONO_ERR_INVALID_ARGUMENT = 1,
    SONO_ERR_IO = 2,
    SONO_ERR_PARSE = 3,
    SONO_ERR_UNSUPPORTED = 4,
    SONO_ERR_COMPILE = 5,      /* script has compile errors */
    SONO_ERR_SCRIPT_FAULT = 6, /* a handler faulted; see the diagnostic output */
    SONO_ERR_AUTHORING = 7,    /* authoring ended without a working script */
    SONO_ERR_INTERNAL = 8
} sono_status;

typedef struct sono_config sono_config;
typedef struct sono_script sono_script;
typedef struct sono_instance sono_instance;
typedef struct sono_session sono_session;

SONO_API const char* sono_version(void);
SONO_API const char* sono_status_name(sono_status status);
SONO_API const char* sono_last_error(void);
SONO_API void sono_string_free(char* s);

/* Configuration: the key=value settings accepted by `sonoshape serve`. */
SONO_API sono_status sono_config_create(sono_config** out);
SONO_API void sono_config_destroy(sono_config* config);
SONO_API sono_status sono_config_set(sono_config* config, const char* key, const char* value);
/* Lines of key=value; # starts a comment line. */
SONO_API sono_status sono_config_load_file(sono_config* config, const char* path);
SONO_API sono_status sono_config_validate(const sono_config* config);

/*
 * Compiles script text. *out_diagnostics receives a JSON array of
 * {severity, code, line, col, message} (empty array when clean) and may be
 * NULL if not wanted. *out_script is set only when there are no errors;
 * warnings alone still produce a script. Returns SONO_ERR_COMPILE on errors.
 */
SONO_API sono_status sono_compile(const char* source, size_t length, const char* origin, sono_script** out_script,
                                  char** out_diagnostics);
SONO_API void sono_script_destroy(sono_script* script);
SONO_API sono_status sono_script_title(const sono_script* script, char** out_title);

/*
 * Script instances. Handler calls that fault return SONO_ERR_SCRIPT_FAULT
 * and, when out_diagnostic is non-NULL, a JSON object describing the fault;
 * the variable store is left as it was before the call. step_budget 0 uses
 * the default.
 */
SONO_API sono_status sono_instance_create(const sono_script* script, uint64_t step_budget, sono_instance** out,
                                          char** out_diagnostic);
SONO_API void sono_instance_destroy(sono_instance* instance);
SONO_API sono_status sono_instance_dispatch_sound(sono_instance* instance, const char* classification,
                                                  double frequency, double distance, char** out_diagnostic);
SONO_API sono_status sono_instance_tick(sono_instance* instance, double dt_seconds, char** out_diagnostic);
/* *out_commands receives a JSON array of shape commands. */
SONO_API sono_status sono_instance_render(sono_instance* instance, int should_draw, char** out_commands,
                                          char** out_diagnostic);
/* Fails with SONO_ERR_INVALID_ARGUMENT if the variable is missing or not a number. */
SONO_API sono_status sono_instance_get_number(const sono_instance* instance, const char* name, double* out);
SONO_API sono_status sono_instance_set_number(sono_instance* instance, const char* name, double value);

/* Audio: one NDJSON line per 100 ms chunk of the file. */
SONO_API sono_status sono_analyze_wav(const char* path, char** out_ndjson);

/*
 * Runs one authoring request against the configured registry and agents.
 * *out_result receives a JSON object {success, title, iterations_used,
 * transcript, diagnostics, error, script}. on_phase may be NULL.
 */
typedef void (*sono_phase_fn)(const char* phase, const char* detail, void* user);
SONO_API sono_status sono_author(const sono_config* config, const char* prompt, sono_phase_fn on_phase, void* user,
                                 char** out_result);

/* Long-running session: audio, scripts and the WebSocket/HTTP server. */
SONO_API sono_status sono_session_create(const sono_config* config, sono_session** out);
SONO_API void sono_session_destroy(sono_session* session);
SONO_API sono_status sono_session_start(sono_session* session);
SONO_API sono_status sono_session_stop(sono_session* session);
/* Blocks until sono_session_stop is called from another thread. */
SONO_API sono_status sono_session_wait(sono_session* session);
SONO_API sono_status sono_session_port(const sono_session* session, uint16_t* out_port);

#ifdef __cplusplus
}
#endif

#endif
