#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli() { return BGPIMPACT_CLI_PATH; }

int run(const std::string& args) {
    std::string cmd = cli() + " " + args + " >cli_stdout.txt 2>cli_stderr.txt";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool same_file(const std::string& a, const std::string& b) { return slurp(a) == slurp(b); }

}  // namespace

TEST_CASE("help and usage errors") {
    CHECK(run("--help") == 0);
    CHECK(run("simulate --help") == 0);
    CHECK(run("") == 1);
    CHECK(run("bogus-subcommand") == 1);
    CHECK(run("simulate --no-such-flag") == 1);  // unknown flags fail fast
    CHECK(run("simulate --synthetic 10 --graph-seed 1 --count 5 --output o.jsonl") == 1);
    CHECK(run("eval --dataset does_not_exist.jsonl --monitor-set rc") == 2);
}

TEST_CASE("simulate is reproducible and honors config with flag overrides") {
    std::string base =
        "simulate --synthetic 200 --graph-seed 9 --count 30 --type 1 --seed 77 "
        "--monitors rc=clustered:30 --monitors pings=random:50:ping:2 ";
    REQUIRE(run(base + "--output cli_a.jsonl") == 0);
    REQUIRE(run(base + "--output cli_b.jsonl") == 0);
    CHECK(same_file("cli_a.jsonl", "cli_b.jsonl"));
    CHECK(slurp("cli_a.jsonl").find("\"pings\"") != std::string::npos);

    {
        std::ofstream cfg("cli_cfg.json");
        cfg << R"({
  "topology": {"synthetic": 200, "seed": 9},
  "scenarios": {"count": 30, "type": 1, "seed": 77},
  "monitors": [
    {"label": "rc", "source": "clustered", "m": 30},
    {"label": "pings", "source": "random", "m": 50, "observation": "ping", "n_ip": 2}
  ],
  "output": "cli_c.jsonl"
})";
    }
    REQUIRE(run("simulate --config cli_cfg.json") == 0);
    CHECK(same_file("cli_a.jsonl", "cli_c.jsonl"));

    // a flag override changes the output
    REQUIRE(run("simulate --config cli_cfg.json --seed 78 --output cli_d.jsonl") == 0);
    CHECK_FALSE(same_file("cli_a.jsonl", "cli_d.jsonl"));

    // parallelism must not change results
    REQUIRE(run(base + "--jobs 4 --output cli_e.jsonl") == 0);
    CHECK(same_file("cli_a.jsonl", "cli_e.jsonl"));
}

TEST_CASE("train/test datasets share monitor sets via --monitor-seed") {
    REQUIRE(run("simulate --synthetic 200 --graph-seed 9 --count 30 --seed 100 "
                "--monitor-seed 1 --monitors rc=clustered:20 --output cli_tr.jsonl") == 0);
    REQUIRE(run("simulate --synthetic 200 --graph-seed 9 --count 30 --seed 200 "
                "--monitor-seed 1 --monitors rc=clustered:20 --output cli_te.jsonl") == 0);
    REQUIRE(run("fit-lre --dataset cli_tr.jsonl --monitor-set rc --out cli_m.json") == 0);
    // same monitor sampling seed -> the model applies to the second dataset
    CHECK(run("eval --dataset cli_te.jsonl --monitor-set rc --estimator lre "
              "--model cli_m.json") == 0);
    // different monitor seeds -> different monitor set -> clean data error
    REQUIRE(run("simulate --synthetic 200 --graph-seed 9 --count 30 --seed 200 "
                "--monitor-seed 2 --monitors rc=clustered:20 --output cli_other.jsonl") == 0);
    CHECK(run("eval --dataset cli_other.jsonl --monitor-set rc --estimator lre "
              "--model cli_m.json") == 2);
}

TEST_CASE("fit, eval, predict pipeline and failure cleanup") {
    REQUIRE(run("simulate --synthetic 200 --graph-seed 9 --count 40 --seed 5 "
                "--monitors rc=clustered:25 --output cli_train.jsonl") == 0);
    REQUIRE(run("fit-lre --dataset cli_train.jsonl --monitor-set rc --alpha 50 "
                "--out cli_model.json") == 0);
    REQUIRE(run("eval --dataset cli_train.jsonl --monitor-set rc --estimator lre "
                "--model cli_model.json --out cli_eval.csv") == 0);
    std::string csv = slurp("cli_eval.csv");
    CHECK(csv.find("estimator,monitor_set,M,bias,rmse,mae,relmae,n") == 0);
    CHECK(csv.find("lre,rc,25,") != std::string::npos);
    REQUIRE(run("predict --model cli_model.json --dataset cli_train.jsonl --monitor-set rc "
                "--out cli_pred.csv") == 0);
    CHECK(slurp("cli_pred.csv").find("id,impact,estimate") == 0);

    // a failing run must not leave partial output behind
    std::filesystem::remove("cli_missing.csv");
    CHECK(run("eval --dataset cli_train.jsonl --monitor-set nope --out cli_missing.csv") == 2);
    CHECK_FALSE(std::filesystem::exists("cli_missing.csv"));
    CHECK_FALSE(std::filesystem::exists("cli_missing.csv.tmp"));
}

TEST_CASE("experiment and theory subcommands emit CSV") {
    REQUIRE(run("eval --experiment nie --synthetic 200 --graph-seed 3 --scenarios 30 "
                "--m-grid 10,20 --seed 6 --out cli_nie.csv") == 0);
    std::string nie_csv = slurp("cli_nie.csv");
    CHECK(nie_csv.find("nie,random,10,") != std::string::npos);
    CHECK(nie_csv.find("nie,random,20,") != std::string::npos);

    REQUIRE(run("eval --experiment lre --synthetic 200 --graph-seed 3 --train 40 --test 30 "
                "--monitor-source clustered --m-grid 15 --seed 6 --out cli_lre.csv") == 0);
    CHECK(slurp("cli_lre.csv").find("lre,clustered,15,") != std::string::npos);

    REQUIRE(run("theory --uniform 1000 --m-grid 10,100 --p 0.128 --out cli_theory.csv") == 0);
    CHECK(slurp("cli_theory.csv").find("M,rmse_nie,bias,rmse_with_failures,rmse_floor") == 0);
}

TEST_CASE("ping-targets and classify subcommands") {
    {
        std::ofstream f("cli_pfx.txt");
        f << "10.0.0.0/8|11\n99.99.99.0/24|100\n";
    }
    {
        std::ofstream f("cli_hitlist.txt");
        f << "10.0.0.1 0.95\n10.0.0.2 0.97\n";
    }
    {
        std::ofstream f("cli_event.json");
        f << R"({"victim":100,"hijacker":200,"prefix":"99.99.99.0/24",)"
          << R"("victim_upstreams":[22],"hijacker_upstreams":[11]})";
    }
    {
        std::ofstream f("cli_paths.jsonl");
        f << R"({"monitor": 1, "path": [1, 5, 200]})" << "\n"
          << R"({"monitor": 2, "path": [2, 6, 100]})" << "\n";
    }
    {
        std::ofstream f("cli_traces.jsonl");
        f << R"({"monitor": 9, "hops": ["1.1.1.1", "10.0.0.7", "99.99.99.1"]})" << "\n";
    }

    REQUIRE(run("ping-targets --hitlist cli_hitlist.txt --pfx2as cli_pfx.txt "
                "--out cli_targets.jsonl") == 0);
    CHECK(slurp("cli_targets.jsonl").find("\"asn\":11") != std::string::npos);

    REQUIRE(run("classify --kind bgp --records cli_paths.jsonl --event cli_event.json "
                "--out cli_bgp.json") == 0);
    CHECK(slurp("cli_bgp.json").find("\"m\":[1,0]") != std::string::npos);

    REQUIRE(run("classify --kind traceroute --records cli_traces.jsonl --event cli_event.json "
                "--pfx2as cli_pfx.txt --out cli_tr.json") == 0);
    CHECK(slurp("cli_tr.json").find("\"m\":[1]") != std::string::npos);

    CHECK(run("classify --kind nope --records cli_paths.jsonl --event cli_event.json") == 1);
}
