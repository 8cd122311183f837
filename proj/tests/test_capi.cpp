#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <string>
#include <vector>

#include "bgpimpact.h"

namespace {

std::string take(char* s) {
    REQUIRE(s != nullptr);
    std::string out = s;
    bgpi_string_free(s);
    return out;
}

struct GraphHandle {
    bgpi_graph* g = nullptr;
    ~GraphHandle() { bgpi_graph_free(g); }
};

}  // namespace

TEST_CASE("graph lifecycle and validation over the C surface") {
    GraphHandle h;
    REQUIRE(bgpi_graph_generate(100, 7, &h.g) == BGPI_OK);
    size_t nodes = 0, edges = 0;
    CHECK(bgpi_graph_node_count(h.g, &nodes) == BGPI_OK);
    CHECK(bgpi_graph_edge_count(h.g, &edges) == BGPI_OK);
    CHECK(nodes == 100);
    CHECK(edges >= 99);
    std::string report = take([&] {
        char* r = nullptr;
        REQUIRE(bgpi_graph_validate(h.g, &r) == BGPI_OK);
        return r;
    }());
    CHECK(report.find("\"violations\":[]") != std::string::npos);

    bgpi_graph* bad = nullptr;
    CHECK(bgpi_graph_parse("1|2|9\n", &bad) == BGPI_ERR_DATA);
    CHECK(std::string(bgpi_last_error()).find("line 1") != std::string::npos);
    CHECK(bgpi_graph_generate(1, 0, &bad) == BGPI_ERR_ARGUMENT);
    CHECK(bgpi_graph_load("missing.txt", &bad) == BGPI_ERR_DATA);
}

TEST_CASE("dataset pipeline: generate, simulate, observe, persist, fit, predict") {
    GraphHandle h;
    REQUIRE(bgpi_graph_generate(200, 3, &h.g) == BGPI_OK);

    bgpi_dataset* ds = nullptr;
    REQUIRE(bgpi_dataset_generate(h.g, 60, 0, 0, 11, nullptr, 0, nullptr, 0, 0, &ds) ==
            BGPI_OK);
    size_t n = 0;
    CHECK(bgpi_dataset_size(ds, &n) == BGPI_OK);
    CHECK(n == 60);
    REQUIRE(bgpi_dataset_simulate(h.g, ds, 2, /*keep_decisions=*/0) == BGPI_OK);
    double impact = -1;
    CHECK(bgpi_dataset_impact(ds, 0, &impact) == BGPI_OK);
    CHECK(impact >= 0.0);
    CHECK(impact <= 1.0);

    uint32_t* monitors = nullptr;
    size_t n_monitors = 0;
    REQUIRE(bgpi_sample_monitors_random(h.g, 40, 5, &monitors, &n_monitors) == BGPI_OK);
    REQUIRE(n_monitors == 40);
    REQUIRE(bgpi_dataset_observe_control_plane(h.g, ds, "rc", monitors, n_monitors) ==
            BGPI_OK);
    REQUIRE(bgpi_dataset_observe_ping(h.g, ds, "pings", monitors, n_monitors, 1, -1.0, 99) ==
            BGPI_OK);
    bgpi_buffer_free(monitors);

    REQUIRE(bgpi_dataset_write(ds, "capi_ds.jsonl") == BGPI_OK);
    bgpi_dataset* back = nullptr;
    REQUIRE(bgpi_dataset_read("capi_ds.jsonl", &back) == BGPI_OK);
    size_t n_back = 0;
    CHECK(bgpi_dataset_size(back, &n_back) == BGPI_OK);
    CHECK(n_back == 60);

    std::string nie_csv = take([&] {
        char* csv = nullptr;
        REQUIRE(bgpi_eval_nie(back, "rc", &csv) == BGPI_OK);
        return csv;
    }());
    CHECK(nie_csv.find("estimator,monitor_set,M,bias,rmse,mae,relmae,n") == 0);
    CHECK(nie_csv.find("nie,rc,40,") != std::string::npos);

    bgpi_lre_model* model = nullptr;
    REQUIRE(bgpi_fit_lre(back, "rc", 50.0, &model) == BGPI_OK);
    REQUIRE(bgpi_lre_model_save(model, "capi_model.json") == BGPI_OK);
    bgpi_lre_model* loaded = nullptr;
    REQUIRE(bgpi_lre_model_load("capi_model.json", &loaded) == BGPI_OK);

    std::string pred = take([&] {
        char* csv = nullptr;
        REQUIRE(bgpi_lre_predict(loaded, back, "rc", &csv) == BGPI_OK);
        return csv;
    }());
    CHECK(pred.find("id,impact,estimate") == 0);

    std::string lre_eval = take([&] {
        char* csv = nullptr;
        REQUIRE(bgpi_eval_lre(loaded, back, "rc", &csv) == BGPI_OK);
        return csv;
    }());
    CHECK(lre_eval.find("lre,rc,40,") != std::string::npos);

    CHECK(bgpi_eval_nie(back, "nope", nullptr) == BGPI_ERR_ARGUMENT);
    char* csv = nullptr;
    CHECK(bgpi_eval_nie(back, "nope", &csv) == BGPI_ERR_DATA);

    // observation without decisions must fail cleanly on a loaded dataset
    uint32_t one = 1;
    CHECK(bgpi_dataset_observe_control_plane(h.g, back, "late", &one, 1) == BGPI_ERR_DATA);

    bgpi_lre_model_free(model);
    bgpi_lre_model_free(loaded);
    bgpi_dataset_free(ds);
    bgpi_dataset_free(back);
}

TEST_CASE("observation works on datasets reloaded with decision dumps") {
    GraphHandle h;
    REQUIRE(bgpi_graph_generate(50, 1, &h.g) == BGPI_OK);
    bgpi_dataset* ds = nullptr;
    REQUIRE(bgpi_dataset_generate(h.g, 5, 0, 0, 2, nullptr, 0, nullptr, 0, 0, &ds) == BGPI_OK);
    REQUIRE(bgpi_dataset_simulate(h.g, ds, 1, /*keep_decisions=*/1) == BGPI_OK);
    REQUIRE(bgpi_dataset_write(ds, "capi_ds_dec.jsonl") == BGPI_OK);
    bgpi_dataset* back = nullptr;
    REQUIRE(bgpi_dataset_read("capi_ds_dec.jsonl", &back) == BGPI_OK);
    uint32_t* monitors = nullptr;
    size_t n_monitors = 0;
    REQUIRE(bgpi_sample_monitors_random(h.g, 10, 4, &monitors, &n_monitors) == BGPI_OK);
    CHECK(bgpi_dataset_observe_control_plane(h.g, back, "late", monitors, n_monitors) ==
          BGPI_OK);
    bgpi_buffer_free(monitors);
    bgpi_dataset_free(ds);
    bgpi_dataset_free(back);
}

TEST_CASE("experiments and theory curves through the C surface") {
    GraphHandle h;
    REQUIRE(bgpi_graph_generate(300, 9, &h.g) == BGPI_OK);
    size_t m_grid[] = {10, 50};
    std::string nie_csv = take([&] {
        char* csv = nullptr;
        REQUIRE(bgpi_run_nie_experiment(h.g, 40, 0, "random", m_grid, 2, 7, 2, 0, -1.0,
                                        &csv) == BGPI_OK);
        return csv;
    }());
    CHECK(nie_csv.find("nie,random,10,") != std::string::npos);
    CHECK(nie_csv.find("nie,random,50,") != std::string::npos);

    std::string lre_csv = take([&] {
        char* csv = nullptr;
        REQUIRE(bgpi_run_lre_experiment(h.g, 60, 40, 0, "clustered", 50.0, m_grid, 2, 7, 2, 1,
                                        &csv) == BGPI_OK);
        return csv;
    }());
    CHECK(lre_csv.find("lre,clustered,10,") != std::string::npos);
    CHECK(lre_csv.find("nie,clustered,50,") != std::string::npos);

    bgpi_graph* null_graph = nullptr;
    char* csv = nullptr;
    CHECK(bgpi_run_nie_experiment(null_graph, 1, 0, "random", m_grid, 2, 0, 1, 0, -1, &csv) ==
          BGPI_ERR_ARGUMENT);
    CHECK(bgpi_run_nie_experiment(h.g, 1, 0, "bogus", m_grid, 2, 0, 1, 0, -1, &csv) ==
          BGPI_ERR_ARGUMENT);

    double impacts[] = {0.5, 0.5, 0.5, 0.5};
    std::string curve = take([&] {
        char* c = nullptr;
        REQUIRE(bgpi_theory_curve_m(impacts, 4, m_grid, 2, 0.128, &c) == BGPI_OK);
        return c;
    }());
    CHECK(curve.find("M,rmse_nie,bias,rmse_with_failures,rmse_floor") == 0);
    CHECK(curve.find("\n10,") != std::string::npos);
    CHECK(curve.find("0.064") != std::string::npos);

    double p_grid[] = {0.0, 0.2};
    std::string pcurve = take([&] {
        char* c = nullptr;
        REQUIRE(bgpi_theory_curve_p(impacts, 4, p_grid, 2, 100, &c) == BGPI_OK);
        return c;
    }());
    CHECK(pcurve.find("p,rmse_nie,") == 0);
}

TEST_CASE("ingest pipeline through the C surface") {
    {
        std::ofstream f("capi_pfx2as.txt");
        f << "10.0.0.0/8|11\n20.0.0.0/8|22\n99.99.99.0/24|100\n";
    }
    {
        std::ofstream f("capi_hitlist.txt");
        f << "10.0.0.1 0.95\n10.0.0.2 0.5\nbroken\n";
    }
    {
        std::ofstream f("capi_paths.jsonl");
        f << R"({"monitor": 1, "path": [1, 5, 200]})" << "\n"
          << R"({"monitor": 2, "path": [2, 6, 100]})" << "\n";
    }
    {
        std::ofstream f("capi_traces.jsonl");
        f << R"({"monitor": 1, "hops": ["1.1.1.1", "10.0.0.7", "99.99.99.1"]})" << "\n";
    }

    const char* paths[] = {"capi_pfx2as.txt"};
    bgpi_pfx2as* map = nullptr;
    REQUIRE(bgpi_pfx2as_load(paths, 1, 0.5, &map) == BGPI_OK);
    std::string lookup = take([&] {
        char* j = nullptr;
        REQUIRE(bgpi_pfx2as_lookup(map, "10.1.2.3", &j) == BGPI_OK);
        return j;
    }());
    CHECK(lookup == "[11]");

    std::string targets = take([&] {
        char* j = nullptr;
        REQUIRE(bgpi_build_ping_targets("capi_hitlist.txt", map, 0.9, 10, &j) == BGPI_OK);
        return j;
    }());
    CHECK(targets.find("\"asn\":11") != std::string::npos);
    CHECK(targets.find("\"malformed_lines\":1") != std::string::npos);

    const char* event =
        R"({"victim":100,"hijacker":200,"prefix":"99.99.99.0/24","victim_upstreams":[22],"hijacker_upstreams":[11]})";
    std::string bgp = take([&] {
        char* j = nullptr;
        REQUIRE(bgpi_classify_bgp_paths("capi_paths.jsonl", event, 0, &j) == BGPI_OK);
        return j;
    }());
    CHECK(bgp.find("\"monitors\":[1,2]") != std::string::npos);
    CHECK(bgp.find("\"m\":[1,0]") != std::string::npos);

    std::string traces = take([&] {
        char* j = nullptr;
        REQUIRE(bgpi_classify_traceroutes("capi_traces.jsonl", event, map, &j) == BGPI_OK);
        return j;
    }());
    CHECK(traces.find("\"m\":[1]") != std::string::npos);

    CHECK(bgpi_classify_bgp_paths("capi_paths.jsonl", "{\"victim\":1}", 0, nullptr) ==
          BGPI_ERR_ARGUMENT);
    char* j = nullptr;
    CHECK(bgpi_classify_bgp_paths("capi_paths.jsonl", "{\"victim\":1}", 0, &j) ==
          BGPI_ERR_DATA);
    bgpi_pfx2as_free(map);
}
