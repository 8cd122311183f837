/* bgpimpact: BGP prefix-hijack impact simulation and estimation.
 *
 * C interface to the simulation core. All functions return a status code;
 * on failure bgpi_last_error() describes the problem for the calling thread.
 * Objects are opaque handles created and released through their matching
 * *_free functions. Strings and buffers returned through out-parameters are
 * owned by the caller and released with bgpi_string_free / bgpi_buffer_free.
 */
#ifndef BGPIMPACT_H
#define BGPIMPACT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BGPI_API __declspec(dllexport)
#else
#define BGPI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bgpi_status {
    BGPI_OK = 0,
    BGPI_ERR_ARGUMENT = 1, /* bad arguments or configuration */
    BGPI_ERR_DATA = 2,     /* malformed or inconsistent input data */
    BGPI_ERR_INTERNAL = 3,
} bgpi_status;

/* Message for the most recent failure on this thread; never NULL. */
BGPI_API const char* bgpi_last_error(void);
BGPI_API const char* bgpi_version(void);

BGPI_API void bgpi_string_free(char* s);
BGPI_API void bgpi_buffer_free(void* p);

/* ---------------- topology ---------------- */

typedef struct bgpi_graph bgpi_graph;

/* CAIDA serial-1 AS-relationship file; gunzipped when the name ends in .gz. */
BGPI_API bgpi_status bgpi_graph_load(const char* path, bgpi_graph** out);
BGPI_API bgpi_status bgpi_graph_parse(const char* text, bgpi_graph** out);
/* Synthetic connected hierarchy, deterministic in (n_ases, seed). */
BGPI_API bgpi_status bgpi_graph_generate(uint32_t n_ases, uint64_t seed, bgpi_graph** out);
BGPI_API bgpi_status bgpi_graph_node_count(const bgpi_graph* g, size_t* out);
BGPI_API bgpi_status bgpi_graph_edge_count(const bgpi_graph* g, size_t* out);
/* JSON {"violations": [...], "components": n, "isolated": n}. */
BGPI_API bgpi_status bgpi_graph_validate(const bgpi_graph* g, char** report_json);
BGPI_API void bgpi_graph_free(bgpi_graph* g);

/* One ASN per line with '#' comments (monitor lists, victim/hijacker pools).
 * The returned array is released with bgpi_buffer_free. */
BGPI_API bgpi_status bgpi_load_asn_list(const char* path, uint32_t** out, size_t* out_len);

/* Monitor sampling; outputs are ASN arrays released with bgpi_buffer_free. */
BGPI_API bgpi_status bgpi_sample_monitors_random(const bgpi_graph* g, size_t m, uint64_t seed,
                                                 uint32_t** out, size_t* out_len);
BGPI_API bgpi_status bgpi_sample_monitors_clustered(const bgpi_graph* g, size_t m,
                                                    uint64_t seed, size_t n_clusters,
                                                    uint32_t** out, size_t* out_len);

/* ---------------- scenarios and datasets ---------------- */

typedef struct bgpi_dataset bgpi_dataset;

/* Random {victim, hijacker} scenarios. Empty pools mean "any AS". With
 * symmetric_pairs != 0 every pair is followed by its swapped twin sharing the
 * same per-scenario seed. Impacts are filled in by bgpi_dataset_simulate. */
BGPI_API bgpi_status bgpi_dataset_generate(const bgpi_graph* g, size_t count,
                                           uint32_t hijack_type, int subprefix, uint64_t seed,
                                           const uint32_t* victim_pool, size_t victim_pool_len,
                                           const uint32_t* hijacker_pool,
                                           size_t hijacker_pool_len, int symmetric_pairs,
                                           bgpi_dataset** out);
/* Runs every scenario; keep_decisions stores the per-AS decision dump. */
BGPI_API bgpi_status bgpi_dataset_simulate(const bgpi_graph* g, bgpi_dataset* ds,
                                           unsigned jobs, int keep_decisions);
/* Control-plane observation of one monitor set, stored under `label`. */
BGPI_API bgpi_status bgpi_dataset_observe_control_plane(const bgpi_graph* g, bgpi_dataset* ds,
                                                        const char* label,
                                                        const uint32_t* monitors,
                                                        size_t n_monitors);
/* Ping observation: n_ip selects the failure-table point; fixed_p >= 0
 * overrides the table with a constant failure probability. */
BGPI_API bgpi_status bgpi_dataset_observe_ping(const bgpi_graph* g, bgpi_dataset* ds,
                                               const char* label, const uint32_t* monitors,
                                               size_t n_monitors, uint32_t n_ip,
                                               double fixed_p, uint64_t seed);
BGPI_API bgpi_status bgpi_dataset_write(const bgpi_dataset* ds, const char* path);
BGPI_API bgpi_status bgpi_dataset_read(const char* path, bgpi_dataset** out);
BGPI_API bgpi_status bgpi_dataset_size(const bgpi_dataset* ds, size_t* out);
BGPI_API bgpi_status bgpi_dataset_impact(const bgpi_dataset* ds, size_t index, double* out);
BGPI_API void bgpi_dataset_free(bgpi_dataset* ds);

/* ---------------- estimators ---------------- */

typedef struct bgpi_lre_model bgpi_lre_model;

/* One-row CSV report of the NIE over a stored monitor set. */
BGPI_API bgpi_status bgpi_eval_nie(const bgpi_dataset* ds, const char* label, char** csv);

/* Ridge fit on the dataset's stored observations for `label`. */
BGPI_API bgpi_status bgpi_fit_lre(const bgpi_dataset* train, const char* label, double alpha,
                                  bgpi_lre_model** out);
BGPI_API bgpi_status bgpi_lre_model_save(const bgpi_lre_model* model, const char* path);
BGPI_API bgpi_status bgpi_lre_model_load(const char* path, bgpi_lre_model** out);
/* CSV `id,impact,estimate` for every record in the dataset. */
BGPI_API bgpi_status bgpi_lre_predict(const bgpi_lre_model* model, const bgpi_dataset* ds,
                                      const char* label, char** csv);
/* One-row CSV report of the LRE over a labeled test dataset. */
BGPI_API bgpi_status bgpi_eval_lre(const bgpi_lre_model* model, const bgpi_dataset* ds,
                                   const char* label, char** csv);
BGPI_API void bgpi_lre_model_free(bgpi_lre_model* model);

/* ---------------- experiments ---------------- */

/* monitor_source: "random", "clustered", or "file:<path>" (fixed set).
 * With ping_n_ip > 0 the NIE observes through the ping failure model
 * (fixed_p >= 0 overrides the table). CSV schema:
 * estimator,monitor_set,M,bias,rmse,mae,relmae,n. */
BGPI_API bgpi_status bgpi_run_nie_experiment(const bgpi_graph* g, size_t n_scenarios,
                                             uint32_t hijack_type, const char* monitor_source,
                                             const size_t* m_grid, size_t m_grid_len,
                                             uint64_t seed, unsigned jobs, uint32_t ping_n_ip,
                                             double fixed_p, char** csv);
BGPI_API bgpi_status bgpi_run_lre_experiment(const bgpi_graph* g, size_t n_train,
                                             size_t n_test, uint32_t hijack_type,
                                             const char* monitor_source, double alpha,
                                             const size_t* m_grid, size_t m_grid_len,
                                             uint64_t seed, unsigned jobs,
                                             int leave_pair_out, char** csv);

/* ---------------- closed-form accuracy curves ---------------- */

/* Curves over a monitor-count grid at fixed failure probability p:
 * CSV `M,rmse_nie,bias,rmse_with_failures,rmse_floor`. Impacts define the
 * empirical impact distribution (e.g. impacts of a simulated dataset). */
BGPI_API bgpi_status bgpi_theory_curve_m(const double* impacts, size_t n_impacts,
                                         const size_t* m_grid, size_t m_grid_len, double p,
                                         char** csv);
/* Curves over a failure-probability grid at fixed M:
 * CSV `p,rmse_nie,bias,rmse_with_failures,rmse_floor`. */
BGPI_API bgpi_status bgpi_theory_curve_p(const double* impacts, size_t n_impacts,
                                         const double* p_grid, size_t p_grid_len, size_t m,
                                         char** csv);

/* ---------------- measurement ingestion ---------------- */

typedef struct bgpi_pfx2as bgpi_pfx2as;

/* Loads one or more pfx2as snapshots; several snapshots are merged keeping
 * (prefix, origin) pairs present in strictly more than min_consistency of
 * them. */
BGPI_API bgpi_status bgpi_pfx2as_load(const char* const* paths, size_t n_paths,
                                      double min_consistency, bgpi_pfx2as** out);
/* JSON array of origin ASNs for the longest matching prefix (empty = none). */
BGPI_API bgpi_status bgpi_pfx2as_lookup(const bgpi_pfx2as* map, const char* ip, char** json);
BGPI_API void bgpi_pfx2as_free(bgpi_pfx2as* map);

/* Hitlist `<ip> <score>` lines -> per-AS ping target JSONL plus a trailing
 * diagnostics line. */
BGPI_API bgpi_status bgpi_build_ping_targets(const char* hitlist_path, const bgpi_pfx2as* map,
                                             double min_score, size_t per_as_cap,
                                             char** jsonl);

/* Records are JSON Lines ({"monitor":asn,"path":[...]} respectively
 * {"monitor":asn,"hops":["ip",...]}); event_json is
 * {"victim","hijacker","prefix","victim_upstreams","hijacker_upstreams"}.
 * Result JSON: {"monitors":[...],"m":[...],"corrupted":false,
 * "no_inference":n,"record_errors":[...]}. */
BGPI_API bgpi_status bgpi_classify_bgp_paths(const char* records_path, const char* event_json,
                                             int origin_only, char** result_json);
BGPI_API bgpi_status bgpi_classify_traceroutes(const char* records_path,
                                               const char* event_json,
                                               const bgpi_pfx2as* map, char** result_json);

#ifdef __cplusplus
}
#endif

#endif /* BGPIMPACT_H */
