/* C interface of the pcnsim library. All handles are opaque; every call that can
 * fail returns a pcn_status and leaves a message for pcn_last_error(). */
#ifndef PCN_PCN_H
#define PCN_PCN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PCN_API __declspec(dllexport)
#else
#define PCN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pcn_status {
  PCN_OK = 0,
  PCN_ERR_INVALID_ARGUMENT = 2, /* bad spec, flag value or unknown node */
  PCN_ERR_INPUT_DATA = 3,       /* unreadable or malformed snapshot */
  PCN_ERR_RUNTIME = 4
} pcn_status;

typedef struct pcn_graph pcn_graph;
typedef struct pcn_candidates pcn_candidates;
typedef struct pcn_route pcn_route;
typedef struct pcn_experiment pcn_experiment;

/* Message of the last failed call on this thread; "" if none. */
PCN_API const char* pcn_last_error(void);
/* Frees strings returned through char** out-parameters. */
PCN_API void pcn_string_free(char* s);

/* Graphs. balance_mode is "equal" or "random:<seed>" (NULL = equal). */
PCN_API pcn_status pcn_graph_load_snapshot(const char* path, const char* balance_mode,
                                           int largest_component_only, pcn_graph** out);
PCN_API pcn_status pcn_graph_parse_snapshot(const char* json, size_t len, const char* balance_mode,
                                            int largest_component_only, pcn_graph** out);
/* kind: "scale_free:N:M0" | "path:N" | "star:N" | "cliques:A:B". */
PCN_API pcn_status pcn_graph_synth(const char* kind, uint64_t seed, int64_t capacity_sat,
                                   pcn_graph** out);
PCN_API void pcn_graph_free(pcn_graph* g);

typedef struct pcn_graph_info {
  size_t nodes;
  size_t channels;
  int64_t total_capacity_msat;
  size_t skipped_invalid;  /* ingest only */
  size_t skipped_disabled; /* ingest only */
  size_t duplicate_nodes;  /* ingest only */
} pcn_graph_info;

PCN_API pcn_status pcn_graph_get_info(const pcn_graph* g, pcn_graph_info* out);
/* Snapshot JSON of the graph (after ingest filtering). */
PCN_API pcn_status pcn_graph_to_json(const pcn_graph* g, char** out);

typedef struct pcn_topology {
  double degree_gini;
  double betweenness_gini;
  int64_t diameter_hops;
  double central_point_dominance;
} pcn_topology;

PCN_API pcn_status pcn_graph_metrics(const pcn_graph* g, int64_t amount_msat, pcn_topology* out);

/* Attachment strategies. joining may be NULL for a fresh node id. */
PCN_API pcn_status pcn_suggest(const pcn_graph* g, const char* strategy, const char* joining, int k,
                               int64_t cap_msat, int64_t amount_hint_msat, uint64_t seed,
                               pcn_candidates** out);
PCN_API size_t pcn_candidates_count(const pcn_candidates* c);
PCN_API const char* pcn_candidates_peer(const pcn_candidates* c, size_t i);
/* Returns 1 and writes *value when the strategy recorded an objective for step i. */
PCN_API int pcn_candidates_objective(const pcn_candidates* c, size_t i, double* value);
PCN_API void pcn_candidates_free(pcn_candidates* c);

/* Routing. */
typedef struct pcn_routing_options {
  double cltv_penalty;
  int retries;
} pcn_routing_options;

typedef struct pcn_route_hop {
  const char* channel;
  const char* from;
  const char* to;
  int64_t amount_msat;
  int64_t fee_msat;
} pcn_route_hop;

/* *out is always set on PCN_OK; pcn_route_found() tells NoPath apart. */
PCN_API pcn_status pcn_route_find(const pcn_graph* g, const char* source, const char* dest,
                                  int64_t amount_msat, const pcn_routing_options* options,
                                  pcn_route** out);
PCN_API int pcn_route_found(const pcn_route* r);
PCN_API size_t pcn_route_hop_count(const pcn_route* r);
PCN_API pcn_status pcn_route_hop_at(const pcn_route* r, size_t i, pcn_route_hop* out);
PCN_API int64_t pcn_route_total_fee_msat(const pcn_route* r);
PCN_API int64_t pcn_route_total_sent_msat(const pcn_route* r);
PCN_API void pcn_route_free(pcn_route* r);

/* Experiments. kind: "join-eval" | "growth" | "baseline". Keys follow the
 * key=value config format. */
PCN_API pcn_status pcn_experiment_create(const char* kind, pcn_experiment** out);
PCN_API pcn_status pcn_experiment_set(pcn_experiment* e, const char* key, const char* value);
PCN_API pcn_status pcn_experiment_load_config(pcn_experiment* e, const char* path);
/* Runs on a copy of g and returns the CSV (header included). */
PCN_API pcn_status pcn_experiment_run(const pcn_experiment* e, const pcn_graph* g, char** csv);
PCN_API void pcn_experiment_free(pcn_experiment* e);

/* Wall-clock medians per (strategy, k). strategies is comma separated; k_values
 * uses the list syntax "3", "1..10" or "1,2,5". */
PCN_API pcn_status pcn_bench(const pcn_graph* g, const char* strategies, const char* k_values,
                             int64_t cap_msat, int64_t amount_hint_msat, uint64_t seed, int runs,
                             char** csv);

#ifdef __cplusplus
}
#endif

#endif
