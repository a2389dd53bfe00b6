#ifndef DIRAC_STAB_H
#define DIRAC_STAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define DS_PASS 0

#define DS_FAIL 1

#define DS_INVALID_INPUT 2

#define DS_NULL_POINTER -1

#define DS_BAD_UTF8 -2

#define DS_BAD_OPTIONS -3

/**
 * A parsed input document plus the exact bytes it came from (reports
 * digest the bytes, so they are kept verbatim).
 */
typedef struct DsDocument DsDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON input document. On success returns a handle and sets
 * `*err_out` to NULL; on failure returns NULL and sets `*err_out` to
 * the parse error (caller frees). `err_out` may be NULL.
 */
struct DsDocument *ds_document_parse(const char *json, char **err_out);

/**
 * The document's `kind` discriminator. The pointer is borrowed from
 * the handle and lives until `ds_document_free`.
 */
const char *ds_document_kind(const struct DsDocument *doc);

void ds_document_free(struct DsDocument *doc);

/**
 * Runs one command ("verify", "cohomology", "stability", "flow",
 * "rectify") on a parsed document. `options_json` is an optional JSON
 * object mirroring the command-line flags (seed, tol, format, mc, xi,
 * t, step, q, qprime, subalgebra, degree, point, max_iter); NULL
 * means defaults. `*report_out` receives the report on codes 0 and 1
 * and the error message on code 2.
 */
int32_t ds_document_run(const struct DsDocument *doc,
                        const char *command,
                        const char *options_json,
                        char **report_out);

/**
 * One-shot parse + run for callers that do not need a handle.
 */
int32_t ds_run(const char *command,
               const char *input_json,
               const char *options_json,
               char **report_out);

/**
 * Frees a string returned by this library. NULL is a no-op.
 */
void ds_string_free(char *s);

/**
 * Library version as a static string; do not free.
 */
const char *ds_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIRAC_STAB_H */
