#ifndef QCS_H
#define QCS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QcsStatus {
  QCS_STATUS_OK = 0,
  QCS_STATUS_NULL_POINTER = 1,
  QCS_STATUS_INVALID_UTF8 = 2,
  QCS_STATUS_PARSE_ERROR = 3,
  QCS_STATUS_DOMAIN_ERROR = 4,
  QCS_STATUS_USAGE_ERROR = 5,
  QCS_STATUS_PANIC = 6,
} QcsStatus;

// Finite étale group model `(A, F)`.
typedef struct QcsModel QcsModel;

// Quasicharacter sheaf as a pair of cocycle tables.
typedef struct QcsSheaf QcsSheaf;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version string; static, do not free.
const char *qcs_version(void);

// Copy of the last error message on this thread, or null. Free with
// `qcs_string_free`.
char *qcs_last_error_message(void);

// # Safety
// `s` must come from this library and not have been freed.
void qcs_string_free(char *s);

// Runs a CLI command such as `"coh total"` on JSON input. `bound < 0`
// keeps the command's default limit. On `Ok` and on a `DomainError` whose
// report records a failed check, `*out` receives the report; otherwise it
// is set to null.
//
// # Safety
// `command` and `input` must be nul-terminated; `out` must be writable.
enum QcsStatus qcs_run_json(const char *command,
                            const char *input,
                            uint64_t seed,
                            int64_t bound,
                            char **out);

// Parses `{"factors": [...], "frob": [[...]]}`.
//
// # Safety
// `json` must be nul-terminated; `out` must be writable.
enum QcsStatus qcs_model_from_json(const char *json, struct QcsModel **out);

// # Safety
// `m` must come from `qcs_model_from_json` and not have been freed.
void qcs_model_free(struct QcsModel *m);

// `|A|`.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum QcsStatus qcs_model_order(const struct QcsModel *m, size_t *out);

// Number of isomorphism classes of sheaves on the model.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum QcsStatus qcs_model_class_count(const struct QcsModel *m, uint64_t *out);

// Parses `{"base": model, "a": {"x,y": "n/d", ...}, "b": {...}}`. The
// tables are not validated; see `qcs_sheaf_is_valid`.
//
// # Safety
// `json` must be nul-terminated; `out` must be writable.
enum QcsStatus qcs_sheaf_from_json(const char *json, struct QcsSheaf **out);

// # Safety
// `s` must come from `qcs_sheaf_from_json` and not have been freed.
void qcs_sheaf_free(struct QcsSheaf *s);

// # Safety
// `s` must be a live handle; `out` must be writable.
enum QcsStatus qcs_sheaf_is_valid(const struct QcsSheaf *s, bool *out);

// # Safety
// `a` and `b` must be live handles; `out` must be writable.
enum QcsStatus qcs_sheaf_is_isomorphic(const struct QcsSheaf *a,
                                       const struct QcsSheaf *b,
                                       bool *out);

// Full tables as JSON. Free with `qcs_string_free`.
//
// # Safety
// `s` must be a live handle; `out` must be writable.
enum QcsStatus qcs_sheaf_to_json(const struct QcsSheaf *s, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCS_H */
