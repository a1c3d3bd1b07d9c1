/* C interface to the tsrlab shared library.
 *
 * Conventions:
 *   - Functions that can fail return a tsr_status and describe the failure
 *     in the caller-provided errbuf (always NUL-terminated, possibly
 *     truncated; pass NULL/0 to ignore).
 *   - Objects created by *_load / *_parse / *_create are released with the
 *     matching *_free; freeing NULL is a no-op.
 */
#ifndef TSRLAB_H
#define TSRLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tsr_status {
  TSR_OK = 0,
  TSR_ERR_IO = 1,               /* unreadable/unwritable file */
  TSR_ERR_PARSE = 2,            /* malformed map, config, or CSV */
  TSR_ERR_INVALID_ARGUMENT = 3, /* bad parameter or index */
  TSR_ERR_LAYOUT_INVALID = 4,   /* map has cells unreachable from the start */
  TSR_ERR_INTERNAL = 5,
} tsr_status;

const char* tsr_status_name(tsr_status status);
const char* tsr_version(void);

/* ---- ASCII map handling ---- */

typedef struct tsr_layout tsr_layout;

tsr_status tsr_layout_load(const char* path, tsr_layout** out, char* errbuf,
                           size_t errlen);
tsr_status tsr_layout_parse(const char* text, tsr_layout** out, char* errbuf,
                            size_t errlen);
void tsr_layout_free(tsr_layout* layout);
int tsr_layout_width(const tsr_layout* layout);
int tsr_layout_height(const tsr_layout* layout);
/* Number of non-wall cells that cannot be reached from the start. */
int tsr_layout_unreachable_count(const tsr_layout* layout);

/* Parses the map at `path` and checks that every non-wall cell is
 * reachable; TSR_ERR_LAYOUT_INVALID if any is not. */
tsr_status tsr_validate_layout(const char* path, char* errbuf, size_t errlen);

/* ---- environment stepping ---- */

typedef struct tsr_env tsr_env;

/* active_goal selects which of the two goal candidates pays out (0 or 1). */
tsr_status tsr_env_create(const tsr_layout* layout, int active_goal,
                          int step_cap, tsr_env** out, char* errbuf,
                          size_t errlen);
void tsr_env_free(tsr_env* env);
int tsr_env_num_states(const tsr_env* env);
int tsr_env_start_state(const tsr_env* env);
/* 1 if terminal, 0 if not, -1 if the state index is invalid. */
int tsr_env_is_terminal(const tsr_env* env, int state);

typedef struct tsr_step_result {
  int next_state;
  double reward;
  int terminal;
  int truncated;
} tsr_step_result;

/* One primitive move (0 north, 1 east, 2 south, 3 west). */
tsr_status tsr_env_step(const tsr_env* env, int state, int action,
                        tsr_step_result* result, char* errbuf, size_t errlen);

/* ---- batch experiment / analysis entry points ---- */

/* Runs the two-phase revaluation experiment described by the config file,
 * writing per-seed and aggregate CSVs. `overrides` holds n_overrides extra
 * "key=value" strings applied on top of the file. */
tsr_status tsr_run(const char* config_path, const char* const* overrides,
                   size_t n_overrides, char* errbuf, size_t errlen);

typedef struct tsr_analytic_params {
  const char* layout_path; /* NULL → use the open grid below */
  int grid_width;
  int grid_height;
  double gamma;
  int repeat;     /* 1 → policy-level field; >= 2 → repeat-conditioned */
  int action;     /* used when repeat >= 2 */
  int target_row; /* -1 → grid center */
  int target_col;
  const char* out_prefix; /* writes <prefix>.csv and <prefix>.svg */
} tsr_analytic_params;

tsr_status tsr_analytic_field(const tsr_analytic_params* params, char* errbuf,
                              size_t errlen);

/* Renders one SVG learning curve per metric from aggregate CSVs. */
tsr_status tsr_plot(const char* const* csv_paths, size_t n_paths,
                    const char* out_dir, char* errbuf, size_t errlen);

#ifdef __cplusplus
}
#endif

#endif /* TSRLAB_H */
