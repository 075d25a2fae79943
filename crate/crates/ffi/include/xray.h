#ifndef XRAY_H
#define XRAY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum XrayMode {
  XRAY_MODE_USES = 0,
  XRAY_MODE_CALLS = 1,
  XRAY_MODE_COMBINED = 2,
} XrayMode;

typedef enum XrayStatus {
  XRAY_STATUS_OK = 0,
  XRAY_STATUS_NULL_ARGUMENT = 1,
  XRAY_STATUS_INVALID_UTF8 = 2,
  XRAY_STATUS_LEX_ERROR = 3,
  XRAY_STATUS_PARSE_ERROR = 4,
  XRAY_STATUS_RESOLVE_ERROR = 5,
  XRAY_STATUS_UNKNOWN_CLASS = 6,
  XRAY_STATUS_NO_FOCUS = 7,
  XRAY_STATUS_CXT_ERROR = 8,
  XRAY_STATUS_INVALID_ARGUMENT = 9,
  XRAY_STATUS_INTERNAL = 10,
} XrayStatus;

/*
 An analysed class.
 */
typedef struct XrayAnalysis XrayAnalysis;

/*
 A formal context and its lattice.
 */
typedef struct XrayContext XrayContext;

typedef struct XrayOptions {
  /*
   Class to analyse, or NULL to pick the most-derived one.
   */
  const char *focus;
  enum XrayMode mode;
  bool include_dead;
  bool allow_external_super;
  /*
   Fraction of the attributes a method must reach to count as core, in [0, 1].
   */
  double core_threshold;
} XrayOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Options with the library defaults: no focus, uses mode, threshold 1.0.
 */
struct XrayOptions xray_options_default(void);

/*
 Analyses `count` Java sources.

 `paths[i]` names `texts[i]` in error messages. `options` may be NULL for
 the defaults. On success `*out` receives a handle to free with
 `xray_analysis_free`.

 # Safety
 `paths` and `texts` must point to `count` valid NUL-terminated strings,
 and `out` must be writable.
 */
enum XrayStatus xray_analyze(const char *const *paths,
                             const char *const *texts,
                             size_t count,
                             const struct XrayOptions *options,
                             struct XrayAnalysis **out);

/*
 Analyses a single source; shorthand for `xray_analyze` with one file.

 # Safety
 `path` and `text` must be valid NUL-terminated strings, `options` NULL or
 valid, and `out` writable.
 */
enum XrayStatus xray_analyze_source(const char *path,
                                    const char *text,
                                    const struct XrayOptions *options,
                                    struct XrayAnalysis **out);

/*
 # Safety
 `analysis` must be NULL or a handle from `xray_analyze` not yet freed.
 */
void xray_analysis_free(struct XrayAnalysis *analysis);

/*
 Name of the analysed class.

 # Safety
 `analysis` must be a live handle and `out` writable.
 */
enum XrayStatus xray_analysis_class(const struct XrayAnalysis *analysis, char **out);

/*
 The full report as pretty-printed JSON.

 # Safety
 `analysis` must be a live handle and `out` writable.
 */
enum XrayStatus xray_analysis_to_json(const struct XrayAnalysis *analysis, char **out);

/*
 The report as plain text without colour.

 # Safety
 `analysis` must be a live handle and `out` writable.
 */
enum XrayStatus xray_analysis_to_text(const struct XrayAnalysis *analysis, char **out);

/*
 The concept lattice as Graphviz DOT.

 # Safety
 `analysis` must be a live handle and `out` writable.
 */
enum XrayStatus xray_analysis_to_dot(const struct XrayAnalysis *analysis,
                                     bool reduced_labels,
                                     char **out);

/*
 Number of concepts in the lattice, including top and bottom. 0 for NULL.

 # Safety
 `analysis` must be NULL or a live handle.
 */
size_t xray_analysis_concept_count(const struct XrayAnalysis *analysis);

/*
 Number of concepts with nonempty extent and intent. 0 for NULL.

 # Safety
 `analysis` must be NULL or a live handle.
 */
size_t xray_analysis_proper_concept_count(const struct XrayAnalysis *analysis);

/*
 Number of classified dependency edges. 0 for NULL.

 # Safety
 `analysis` must be NULL or a live handle.
 */
size_t xray_analysis_dependency_count(const struct XrayAnalysis *analysis);

/*
 A copy of the analysis' formal context, to free with `xray_context_free`.

 # Safety
 `analysis` must be a live handle and `out` writable.
 */
enum XrayStatus xray_analysis_context(const struct XrayAnalysis *analysis,
                                      struct XrayContext **out);

/*
 Parses a Burmeister `.cxt` document.

 # Safety
 `text` must be a valid NUL-terminated string and `out` writable.
 */
enum XrayStatus xray_context_from_cxt(const char *text, struct XrayContext **out);

/*
 Serializes a context as Burmeister `.cxt`.

 # Safety
 `context` must be a live handle and `out` writable.
 */
enum XrayStatus xray_context_to_cxt(const struct XrayContext *context, char **out);

/*
 Lattice of a context as Graphviz DOT, titled with `name`.

 # Safety
 `context` must be a live handle, `name` a valid string and `out` writable.
 */
enum XrayStatus xray_context_to_dot(const struct XrayContext *context,
                                    const char *name,
                                    bool reduced_labels,
                                    char **out);

/*
 # Safety
 `context` must be NULL or a live handle.
 */
size_t xray_context_object_count(const struct XrayContext *context);

/*
 # Safety
 `context` must be NULL or a live handle.
 */
size_t xray_context_property_count(const struct XrayContext *context);

/*
 # Safety
 `context` must be NULL or a live handle.
 */
size_t xray_context_concept_count(const struct XrayContext *context);

/*
 # Safety
 `context` must be NULL or a handle not yet freed.
 */
void xray_context_free(struct XrayContext *context);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must be NULL or a string from this library not yet freed.
 */
void xray_string_free(char *s);

/*
 Message of the last failed call on this thread, or NULL after a success.
 The pointer stays valid until the next call into the library on this thread.
 */
const char *xray_last_error_message(void);

/*
 Library version, statically allocated.
 */
const char *xray_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XRAY_H */
