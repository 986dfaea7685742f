#ifndef ARCHBENCH_ARCHBENCH_H
#define ARCHBENCH_ARCHBENCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32) && defined(ARCHBENCH_BUILDING)
#  define ARCHBENCH_API __declspec(dllexport)
#elif defined(_WIN32)
#  define ARCHBENCH_API __declspec(dllimport)
#elif defined(ARCHBENCH_BUILDING)
#  define ARCHBENCH_API __attribute__((visibility("default")))
#else
#  define ARCHBENCH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every call returns a status. On failure, archbench_last_error() holds a
 * message for the calling thread until its next failing call. */
typedef enum archbench_status {
  ARCHBENCH_OK = 0,
  ARCHBENCH_ERR_INVALID_ARCHITECTURE,
  ARCHBENCH_ERR_PARSE,
  ARCHBENCH_ERR_NO_NEIGHBOR,
  ARCHBENCH_ERR_UNSUPPORTED_REDUCTION,
  ARCHBENCH_ERR_FORMAT,
  ARCHBENCH_ERR_DUPLICATE_KEY,
  ARCHBENCH_ERR_MISSING_ARCH,
  ARCHBENCH_ERR_EPOCH,
  ARCHBENCH_ERR_PARAMETER,
  ARCHBENCH_ERR_NUMERIC,
  ARCHBENCH_ERR_UNDEFINED_CORRELATION,
  ARCHBENCH_ERR_DEGENERATE,
  ARCHBENCH_ERR_MISSING_CELL,
  ARCHBENCH_ERR_VALIDATION,
  ARCHBENCH_ERR_IO,
  ARCHBENCH_ERR_EXHAUSTED,
  ARCHBENCH_ERR_NULL_ARGUMENT,
  ARCHBENCH_ERR_BUFFER_TOO_SMALL,
  ARCHBENCH_ERR_INTERNAL
} archbench_status;

typedef struct archbench_space archbench_space;
typedef struct archbench_bench archbench_bench;
typedef struct archbench_trajectory archbench_trajectory;

ARCHBENCH_API const char *archbench_version(void);
ARCHBENCH_API const char *archbench_status_name(archbench_status status);
ARCHBENCH_API const char *archbench_last_error(void);

/* Text results are written as NUL-terminated strings into buf. *needed (if
 * not NULL) receives the full size including the terminator; when cap is
 * smaller the call returns ARCHBENCH_ERR_BUFFER_TOO_SMALL and writes
 * nothing. */

/* ---- search spaces ---- */

/* Catalog names: nb201, tnb-micro, nb101, nb101-small, asr, tnb-macro,
 * synthetic-<edges>x<ops>, macro-<c1>-<c2>-... */
ARCHBENCH_API archbench_status archbench_space_from_catalog(const char *name, archbench_space **out);
ARCHBENCH_API archbench_status archbench_space_from_json(const char *json, archbench_space **out);
ARCHBENCH_API void archbench_space_free(archbench_space *space);

/* *has_exact is 0 when the space is too large to count exactly. */
ARCHBENCH_API archbench_status archbench_space_size(const archbench_space *space, uint64_t *exact,
                                                    int *has_exact, double *log10_size);
ARCHBENCH_API archbench_status archbench_space_sample(const archbench_space *space, uint64_t seed,
                                                      char *buf, size_t cap, size_t *needed);
/* Canonical ids of all neighbors, one per line. */
ARCHBENCH_API archbench_status archbench_space_neighbors(const archbench_space *space, const char *arch,
                                                         char *buf, size_t cap, size_t *needed);
ARCHBENCH_API archbench_status archbench_space_neighbor_count(const archbench_space *space,
                                                              const char *arch, size_t *count);
/* Re-encodes an id in canonical form; fails on malformed or invalid ids. */
ARCHBENCH_API archbench_status archbench_space_canonicalize(const archbench_space *space, const char *arch,
                                                            char *buf, size_t cap, size_t *needed);
/* Distinct classes under the expression-equivalence reduction. */
ARCHBENCH_API archbench_status archbench_space_equivalence_classes(const archbench_space *space,
                                                                   uint64_t *count);

/* ---- benchmarks ---- */

ARCHBENCH_API archbench_status archbench_bench_load(const char *path, archbench_bench **out);
/* spec_json: the synthetic spec plus "space": <catalog name>. */
ARCHBENCH_API archbench_status archbench_bench_synthetic(const char *spec_json, archbench_bench **out);
/* Writes a tabular file; synthetic benchmarks are enumerated first. */
ARCHBENCH_API archbench_status archbench_bench_save(const archbench_bench *bench, const char *path);
ARCHBENCH_API void archbench_bench_free(archbench_bench *bench);

ARCHBENCH_API archbench_status archbench_bench_id(const archbench_bench *bench, char *buf, size_t cap,
                                                  size_t *needed);
/* metric NULL: default metric. epoch < 0: last epoch. seed < 0: mean over seeds. */
ARCHBENCH_API archbench_status archbench_bench_query(const archbench_bench *bench, const char *arch,
                                                     const char *metric, int epoch, int seed,
                                                     double *value);
ARCHBENCH_API archbench_status archbench_bench_train_time(const archbench_bench *bench, const char *arch,
                                                          double *seconds);
/* Metadata, record count and value ranges of a tabular file. */
ARCHBENCH_API archbench_status archbench_bench_info(const char *path, char *buf, size_t cap, size_t *needed);

/* ---- optimizers and predictors ---- */

/* config_json: {"kind": "rs"|"re"|"ls"|"bananas"|"npenas", "budget": n, ...}. */
ARCHBENCH_API archbench_status archbench_run_optimizer(const archbench_bench *bench, const char *config_json,
                                                       uint64_t seed, archbench_trajectory **out);
ARCHBENCH_API void archbench_trajectory_free(archbench_trajectory *traj);
ARCHBENCH_API size_t archbench_trajectory_length(const archbench_trajectory *traj);
ARCHBENCH_API archbench_status archbench_trajectory_step(const archbench_trajectory *traj, size_t index,
                                                         double *value, double *incumbent,
                                                         double *cumulative_seconds);
ARCHBENCH_API archbench_status archbench_trajectory_json(const archbench_trajectory *traj, char *buf,
                                                         size_t cap, size_t *needed);
/* Brute-force optimum of the default metric; the space must be enumerable. */
ARCHBENCH_API archbench_status archbench_bench_optimum(const archbench_bench *bench, double *optimum);

/* config_json: {"kind": "gp"|"rf"|"gbt", ...}. Spearman correlation on the
 * held-out draw. */
ARCHBENCH_API archbench_status archbench_evaluate_predictor(const archbench_bench *bench,
                                                           const char *config_json, size_t train_size,
                                                           size_t test_size, uint64_t seed,
                                                           double *spearman);

/* ---- statistics ---- */

ARCHBENCH_API archbench_status archbench_spearman(const double *a, const double *b, size_t n, double *out);
ARCHBENCH_API archbench_status archbench_kendall_tau_b(const double *a, const double *b, size_t n,
                                                       double *out);

typedef struct archbench_distribution {
  double min, q1, median, q3, max, mean, stddev, iqr;
  uint64_t sample_size;
  int exhaustive;
} archbench_distribution;

ARCHBENCH_API archbench_status archbench_distribution_stats(const archbench_bench *bench, size_t sample_cap,
                                                            uint64_t seed, archbench_distribution *out);
/* Writes rho(1..max_lag) into out. */
ARCHBENCH_API archbench_status archbench_rwa(const archbench_bench *bench, int walk_len, int max_lag,
                                             int n_walks, uint64_t seed, double *out);

/* ---- campaigns ---- */

enum {
  ARCHBENCH_STATS_BOX = 1,
  ARCHBENCH_STATS_RWA = 2,
  ARCHBENCH_STATS_NBHD = 4,
  ARCHBENCH_STATS_TIME = 8,
  ARCHBENCH_STATS_IQR = 16
};

enum {
  ARCHBENCH_ANALYZE_REGRET = 1,
  ARCHBENCH_ANALYZE_KENDALL = 2,
  ARCHBENCH_ANALYZE_LOO = 4,
  ARCHBENCH_ANALYZE_RANKS = 8
};

typedef struct archbench_campaign_summary {
  uint64_t planned, skipped, completed, failed;
} archbench_campaign_summary;

/* output_dir NULL keeps the configured directory. With require_sweep set,
 * a config without sweep blocks is rejected. */
ARCHBENCH_API archbench_status archbench_run_campaign(const char *config_path, const char *output_dir,
                                                      int require_sweep, archbench_campaign_summary *summary);
ARCHBENCH_API archbench_status archbench_analyze(const char *results_dir, const char *out_dir, unsigned flags);
/* sample_cap 0: 100,000. */
ARCHBENCH_API archbench_status archbench_write_stats(const archbench_bench *bench, const char *out_dir,
                                                     unsigned flags, size_t sample_cap, uint64_t seed);

#ifdef __cplusplus
}
#endif

#endif
