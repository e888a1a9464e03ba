#ifndef HOLOSIM_H
#define HOLOSIM_H

/* C interface to the holacracy-organization simulator.  All functions
 * return HOLOSIM_OK on success; on failure holosim_last_error() describes
 * the problem for the calling thread.  Handles are opaque and must be
 * released with their matching _free function. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct holosim_config holosim_config;

typedef enum holosim_status {
    HOLOSIM_OK = 0,
    HOLOSIM_ERR_CONFIG = 1,  /* invalid configuration or arguments */
    HOLOSIM_ERR_IO = 2,      /* file system failure */
    HOLOSIM_ERR_BACKEND = 3, /* decision backend failed after retries */
    HOLOSIM_ERR_RUNTIME = 4, /* any other failure */
} holosim_status;

/* Progress lines during grid/analyze; `user` is passed through verbatim. */
typedef void (*holosim_log_fn)(const char* line, void* user);

const char* holosim_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* holosim_last_error(void);

/* -- configuration ------------------------------------------------------ */

holosim_status holosim_config_default(holosim_config** out);
holosim_status holosim_config_load(const char* path, holosim_config** out);
holosim_status holosim_config_save(const holosim_config* cfg, const char* path);

/* brain is "deterministic" or "llm". */
holosim_status holosim_config_set_brain(holosim_config* cfg, const char* brain);
holosim_status holosim_config_base_seed(const holosim_config* cfg, uint64_t* out);

void holosim_config_free(holosim_config* cfg);

/* -- execution ----------------------------------------------------------- */

/* One simulation run; writes config.json, events.jsonl, snapshots.json
 * under out_dir.  A backend failure still writes the partial artifact and
 * returns HOLOSIM_ERR_BACKEND. */
holosim_status holosim_run(const holosim_config* cfg, uint64_t seed, const char* out_dir,
                           holosim_log_fn log, void* user);

/* The full factor grid with at most `parallelism` concurrent cells.
 * Intact completed cells are skipped; per-cell failures are recorded in
 * out_dir/manifest.json and do not abort the grid. */
holosim_status holosim_grid(const holosim_config* cfg, const char* out_dir, int parallelism,
                            holosim_log_fn log, void* user);

/* Regression tables, coefficient sign summary, and graph exports for every
 * complete run listed in the manifest. */
holosim_status holosim_analyze(const char* manifest_path, const char* out_dir,
                               holosim_log_fn log, void* user);

/* Re-executes the run that produced events_path (config.json must sit next
 * to it) and compares event-log digests.  Both hex digests are written to
 * the caller's buffers (at least 65 bytes each); *matched is 1 when they
 * agree.  Only deterministic-brain artifacts can be replayed. */
holosim_status holosim_replay(const char* events_path, char* file_hash_hex, size_t file_hash_len,
                              char* replay_hash_hex, size_t replay_hash_len, int* matched);

#ifdef __cplusplus
}
#endif

#endif /* HOLOSIM_H */
