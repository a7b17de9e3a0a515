/* Exercises the shared library through its C header only. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "pcn/pcn.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static void snapshot_graph(void) {
  pcn_graph* g = NULL;
  pcn_graph_info info;
  EXPECT(pcn_graph_load_snapshot(FIXTURES "/two_components.json", "equal", 1, &g) == PCN_OK);
  EXPECT(pcn_graph_get_info(g, &info) == PCN_OK);
  EXPECT(info.nodes == 5);
  EXPECT(info.channels == 4);
  EXPECT(info.skipped_disabled == 1);
  EXPECT(info.total_capacity_msat == 4 * 50000 * 1000LL);

  pcn_topology t;
  EXPECT(pcn_graph_metrics(g, 100000, &t) == PCN_OK);
  EXPECT(t.diameter_hops == 4);

  char* json = NULL;
  EXPECT(pcn_graph_to_json(g, &json) == PCN_OK);
  EXPECT(json && strstr(json, "\"a5\"") != NULL);
  pcn_graph* again = NULL;
  EXPECT(pcn_graph_parse_snapshot(json, strlen(json), NULL, 0, &again) == PCN_OK);
  EXPECT(pcn_graph_get_info(again, &info) == PCN_OK && info.channels == 4);
  pcn_string_free(json);
  pcn_graph_free(again);
  pcn_graph_free(g);
}

static void errors(void) {
  pcn_graph* g = NULL;
  EXPECT(pcn_graph_load_snapshot(FIXTURES "/truncated.json", NULL, 1, &g) == PCN_ERR_INPUT_DATA);
  EXPECT(strstr(pcn_last_error(), "byte") != NULL);
  EXPECT(pcn_graph_load_snapshot(FIXTURES "/missing_field.json", NULL, 1, &g) == PCN_ERR_INPUT_DATA);
  EXPECT(strstr(pcn_last_error(), "capacity") != NULL);
  EXPECT(pcn_graph_load_snapshot(FIXTURES "/star.json", "sideways", 1, &g) == PCN_ERR_INVALID_ARGUMENT);
  EXPECT(pcn_graph_synth("ring:4", 0, 1000, &g) == PCN_ERR_INVALID_ARGUMENT);
  EXPECT(pcn_graph_get_info(NULL, NULL) == PCN_ERR_INVALID_ARGUMENT);
  EXPECT(g == NULL);
}

static void suggest(void) {
  pcn_graph* g = NULL;
  pcn_candidates* c = NULL;
  double value = 0.0;
  EXPECT(pcn_graph_load_snapshot(FIXTURES "/star.json", NULL, 1, &g) == PCN_OK);
  EXPECT(pcn_suggest(g, "degree", NULL, 1, 2000000, 100000, 0, &c) == PCN_OK);
  EXPECT(pcn_candidates_count(c) == 1);
  EXPECT(strcmp(pcn_candidates_peer(c, 0), "hub") == 0);
  EXPECT(pcn_candidates_objective(c, 0, &value) == 1 && value == 4.0);
  EXPECT(pcn_candidates_peer(c, 5) == NULL);
  pcn_candidates_free(c);

  c = NULL;
  EXPECT(pcn_suggest(g, "degree", NULL, 9, 2000000, 100000, 0, &c) == PCN_ERR_INVALID_ARGUMENT);
  EXPECT(strstr(pcn_last_error(), "n-1=4") != NULL);
  EXPECT(pcn_suggest(g, "telepathy", NULL, 1, 2000000, 100000, 0, &c) == PCN_ERR_INVALID_ARGUMENT);
  EXPECT(c == NULL);
  pcn_graph_free(g);
}

static void route(void) {
  pcn_graph* g = NULL;
  pcn_route* r = NULL;
  pcn_route_hop hop;
  pcn_routing_options opts = {0.0, 0};
  EXPECT(pcn_graph_load_snapshot(FIXTURES "/star.json", NULL, 1, &g) == PCN_OK);
  EXPECT(pcn_route_find(g, "leaf-a", "leaf-b", 100000, &opts, &r) == PCN_OK);
  EXPECT(pcn_route_found(r));
  EXPECT(pcn_route_hop_count(r) == 2);
  EXPECT(pcn_route_total_fee_msat(r) == 1000);
  EXPECT(pcn_route_total_sent_msat(r) == 101000);
  EXPECT(pcn_route_hop_at(r, 1, &hop) == PCN_OK);
  EXPECT(strcmp(hop.from, "hub") == 0 && strcmp(hop.channel, "102") == 0 && hop.fee_msat == 1000);
  EXPECT(pcn_route_hop_at(r, 2, &hop) == PCN_ERR_INVALID_ARGUMENT);
  pcn_route_free(r);

  /* leaf-d never published a policy, so nothing leaves it */
  EXPECT(pcn_route_find(g, "leaf-d", "hub", 1000, NULL, &r) == PCN_OK);
  EXPECT(!pcn_route_found(r));
  pcn_route_free(r);
  EXPECT(pcn_route_find(g, "leaf-a", "nobody", 1000, NULL, &r) == PCN_ERR_INVALID_ARGUMENT);
  pcn_graph_free(g);
}

static void experiment(void) {
  pcn_graph* g = NULL;
  pcn_experiment* e = NULL;
  char* first = NULL;
  char* second = NULL;
  EXPECT(pcn_graph_synth("scale_free:50:2", 4, 1000000, &g) == PCN_OK);
  EXPECT(pcn_experiment_create("join-eval", &e) == PCN_OK);
  EXPECT(pcn_experiment_set(e, "strategy", "k-median") == PCN_OK);
  EXPECT(pcn_experiment_set(e, "k_values", "1..2") == PCN_OK);
  EXPECT(pcn_experiment_set(e, "amounts_sat", "100") == PCN_OK);
  EXPECT(pcn_experiment_set(e, "repetitions", "3") == PCN_OK);
  EXPECT(pcn_experiment_set(e, "tx_per_batch", "60") == PCN_OK);
  EXPECT(pcn_experiment_set(e, "colour", "blue") == PCN_ERR_INVALID_ARGUMENT);
  EXPECT(pcn_experiment_run(e, g, &first) == PCN_OK);
  EXPECT(pcn_experiment_run(e, g, &second) == PCN_OK);
  EXPECT(first && second && strcmp(first, second) == 0);
  EXPECT(strncmp(first, "label,nodes_added,", 18) == 0);
  {
    int lines = 0;
    const char* p;
    for (p = first; *p; ++p) lines += *p == '\n';
    EXPECT(lines == 1 + 2 * 4);
  }
  pcn_string_free(first);
  pcn_string_free(second);
  pcn_experiment_free(e);

  EXPECT(pcn_experiment_create("growth", &e) == PCN_OK);
  EXPECT(pcn_experiment_load_config(e, FIXTURES "/growth.cfg") == PCN_OK);
  EXPECT(pcn_experiment_run(e, g, &first) == PCN_OK);
  EXPECT(strstr(first, "random,6,") != NULL);
  pcn_string_free(first);
  EXPECT(pcn_experiment_load_config(e, FIXTURES "/absent.cfg") == PCN_ERR_INVALID_ARGUMENT);
  pcn_experiment_free(e);
  EXPECT(pcn_experiment_create("sideways", &e) == PCN_ERR_INVALID_ARGUMENT);

  EXPECT(pcn_bench(g, "degree,k-center", "1..2", 2000000, 100000, 0, 1, &first) == PCN_OK);
  EXPECT(strncmp(first, "strategy,k,median_seconds,ordering_ok\n", 38) == 0);
  pcn_string_free(first);
  EXPECT(pcn_bench(g, "", "1", 2000000, 100000, 0, 1, &first) == PCN_ERR_INVALID_ARGUMENT);
  pcn_graph_free(g);
}

int main(void) {
  snapshot_graph();
  errors();
  suggest();
  route();
  experiment();
  if (failures) {
    fprintf(stderr, "%d C API check(s) failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
