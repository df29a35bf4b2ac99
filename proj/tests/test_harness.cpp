#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "rwbal/harness.hpp"
#include "rwbal/stats.hpp"
#include "support/oracles.hpp"

using namespace rwbal;

namespace {

std::string run_cli(const std::string& args, int* exit_code = nullptr) {
    std::string cmd = std::string(RWBAL_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    if (exit_code) *exit_code = WEXITSTATUS(status);
    return out;
}

ExperimentConfig small_config() {
    std::istringstream in(
        "graph = random-regular:4\n"
        "scheme = indep-uniform\n"
        "scheme = rw-no-reset\n"
        "n = 256\n"
        "n = 512\n"
        "c = 1.0\n"
        "d = 2\n"
        "trials = 5\n"
        "master_seed = 77\n");
    return parse_config(in);
}

}  // namespace

TEST_CASE("config parsing") {
    ExperimentConfig cfg = small_config();
    CHECK(cfg.schemes.size() == 2);
    CHECK(cfg.schemes[0].scheme == Scheme::indep_uniform);
    CHECK(cfg.schemes[1].scheme == Scheme::rw_no_reset);
    CHECK(cfg.n_axis == std::vector<int64_t>{256, 512});
    CHECK(cfg.c_axis == std::vector<double>{1.0});
    CHECK(cfg.trials == 5);
    CHECK(cfg.master_seed == 77);

    std::istringstream empty("n = 256\ntrials = 3\n");
    CHECK_THROWS_AS(parse_config(empty), std::invalid_argument);  // no schemes

    std::istringstream unknown("whatever = 3\n");
    CHECK_THROWS_AS(parse_config(unknown), std::invalid_argument);

    std::istringstream comments(
        "# comment line\n"
        "graph = cycle  # inline comment\n"
        "scheme = one-choice\n"
        "n = 64\n");
    ExperimentConfig c2 = parse_config(comments);
    CHECK(c2.graph.kind == GraphSpec::Kind::cycle);
}

TEST_CASE("graph spec parsing round-trips") {
    for (const char* text : {"cycle", "circulant:1,2", "random-regular:8"}) {
        GraphSpec spec = GraphSpec::parse(text);
        CHECK(spec.to_string() == text);
    }
    CHECK_THROWS_AS(GraphSpec::parse("torus"), std::invalid_argument);
    CHECK_THROWS_AS(GraphSpec::parse("circulant:"), std::invalid_argument);

    GraphSpec file = GraphSpec::parse("file:/tmp/rwbal_spec_test.graph");
    write_graph_file(gen_cycle(16), "/tmp/rwbal_spec_test.graph");
    CHECK(file.build(16, 0).n == 16);
    CHECK_THROWS_AS(file.build(17, 0), std::invalid_argument);  // n mismatch
}

TEST_CASE("sweep shape, order and seed uniqueness") {
    ExperimentConfig cfg = small_config();
    auto rows = run_sweep(cfg);
    CHECK(rows.size() == 2 * 2 * 1 * 5);

    std::set<uint64_t> seeds;
    size_t i = 0;
    for (size_t si = 0; si < 2; ++si)
        for (size_t ni = 0; ni < 2; ++ni)
            for (int64_t tr = 0; tr < 5; ++tr, ++i) {
                CHECK(rows[i].scheme == scheme_name(cfg.schemes[si].scheme));
                CHECK(rows[i].n == cfg.n_axis[ni]);
                CHECK(rows[i].trial == tr);
                seeds.insert(rows[i].seed);
            }
    CHECK(seeds.size() == rows.size());

    // schemes share the same random graph at equal n: k recorded identically
    CHECK(rows[0].k == 4);
    CHECK(rows[0].k == rows[10].k);
}

TEST_CASE("sweep output is byte-identical across reruns and worker counts") {
    ExperimentConfig cfg = small_config();
    cfg.workers = 1;
    std::string csv1 = rows_to_csv(run_sweep(cfg));
    cfg.workers = 4;
    std::string csv4 = rows_to_csv(run_sweep(cfg));
    CHECK(csv1 == csv4);
    std::string again = rows_to_csv(run_sweep(cfg));
    CHECK(csv1 == again);

    CHECK(csv1.substr(0, csv1.find('\n')) ==
          "scheme,n,k,c,trial,seed,max_load,resets,resets_by_cause,girth,wall_ms,trace_digest");
    // deterministic mode leaves wall_ms empty
    std::istringstream lines(csv1);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    auto last_comma = line.rfind(',');
    auto second_last = line.rfind(',', last_comma - 1);
    CHECK(last_comma - second_last == 1);  // empty wall_ms cell
}

TEST_CASE("median max load rises with n under one choice of two") {
    std::istringstream in(
        "graph = cycle\n"
        "scheme = indep-uniform\n"
        "n = 1024\nn = 4096\nn = 16384\n"
        "trials = 10\n"
        "master_seed = 9\n");
    auto rows = run_sweep(parse_config(in));
    CHECK(rows.size() == 30);
    std::vector<double> medians;
    for (int ni = 0; ni < 3; ++ni) {
        std::vector<int32_t> loads;
        for (int t = 0; t < 10; ++t) loads.push_back(rows[10 * ni + t].max_load);
        medians.push_back(median_of(loads));
    }
    CHECK(medians[0] <= medians[1]);
    CHECK(medians[1] <= medians[2]);
}

TEST_CASE("trial seeds derive deterministically") {
    CHECK(trial_seed(1, 2, 3) == trial_seed(1, 2, 3));
    CHECK(trial_seed(1, 2, 3) != trial_seed(1, 2, 4));
    CHECK(trial_seed(1, 2, 3) != trial_seed(1, 3, 3));
    CHECK(graph_seed(7, 0) != graph_seed(7, 1));
}

TEST_CASE("sweep errors identify the failing point") {
    ExperimentConfig cfg = small_config();
    cfg.schemes[1].scheme = Scheme::rw_periodic_reset;
    cfg.schemes[1].c = 0.01;  // rho = 0
    cfg.c_axis = {0.01};
    CHECK_THROWS_WITH_AS(run_sweep(cfg), doctest::Contains("point"), std::runtime_error);
}

TEST_CASE("trace dump format") {
    Graph g = oracles::make_petersen();
    SchemeConfig sc;
    sc.scheme = Scheme::rw_intersect_reset;
    sc.d = 2;
    sc.rho_override = 3;
    sc.seed = 1;
    sc.balls = 12;
    Trace trace;
    run_trial(g, sc, &trace);
    std::ostringstream os;
    write_trace(trace, 12, os);
    std::istringstream is(os.str());
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) {
        int64_t t, w1, w2;
        int j;
        std::string cause;
        std::istringstream ls(line);
        CHECK((ls >> t >> w1 >> w2 >> j >> cause));
        CHECK(t == lines);
        CHECK((j == 0 || j == 1));
        ++lines;
    }
    CHECK(lines == 12);
}

TEST_CASE("cli: gen-graph then girth") {
    int code = 0;
    run_cli("gen-graph --type cycle --n 1000 --out /tmp/rwbal_c1000.graph", &code);
    CHECK(code == 0);
    std::string out = run_cli("girth /tmp/rwbal_c1000.graph", &code);
    CHECK(code == 0);
    CHECK(out == "1000\n");
}

TEST_CASE("cli: theory-bound worked point") {
    int code = 0;
    std::string out = run_cli("theory-bound --scheme 1 --n 1000000 --c 1", &code);
    CHECK(code == 0);
    CHECK(out.find("\"i_star\": 8") != std::string::npos);
    CHECK(out.find("\"final_bound\": 10") != std::string::npos);
}

TEST_CASE("cli: run twice gives identical digests") {
    int code = 0;
    run_cli("gen-graph --type cycle --n 1000 --out /tmp/rwbal_c1000.graph", &code);
    std::string a =
        run_cli("run --graph /tmp/rwbal_c1000.graph --scheme rw-intersect-reset --rho 15 --seed 42",
                &code);
    CHECK(code == 0);
    std::string b =
        run_cli("run --graph /tmp/rwbal_c1000.graph --scheme rw-intersect-reset --rho 15 --seed 42",
                &code);
    auto digest = [](const std::string& s) {
        auto pos = s.find("trace_digest");
        return s.substr(pos, 40);
    };
    CHECK(digest(a) == digest(b));
}

TEST_CASE("cli: validation failures exit 1") {
    int code = 0;
    run_cli("girth /nonexistent.graph", &code);
    CHECK(code == 1);
    run_cli("theory-bound --scheme 9 --n 100", &code);
    CHECK(code == 1);
}

TEST_CASE("cli: verification subcommands") {
    write_graph_file(oracles::make_k4(), "/tmp/rwbal_k4.graph");
    write_graph_file(oracles::make_petersen(), "/tmp/rwbal_pet.graph");

    int code = 0;
    std::string mix = run_cli("verify-mixing /tmp/rwbal_k4.graph --tmax 40", &code);
    CHECK(code == 0);
    CHECK(mix.find("\"certified_t\"") != std::string::npos);
    run_cli("verify-mixing /tmp/rwbal_c1000.graph --tmax 20", &code);
    CHECK(code == 1);  // cycles never certify

    std::string ret = run_cli("verify-return /tmp/rwbal_pet.graph --alpha 0.6 --horizon 12", &code);
    CHECK(code == 0);
    CHECK(ret.find("\"ok\": true") != std::string::npos);
    run_cli("verify-return /tmp/rwbal_k4.graph --alpha 1.0", &code);
    CHECK(code == 1);  // girth assumption fails, inapplicable

    std::string asm1 =
        run_cli("check-assumption1 /tmp/rwbal_c1000.graph --rho 15 --trials 2000 --seed 3", &code);
    CHECK(code == 0);
    CHECK(asm1.find("\"pass\": true") != std::string::npos);

    std::string tail = run_cli("tail-check --process markov --trials 20000 --seed 5", &code);
    CHECK(code == 0);
    CHECK(tail.find("declared mean ok: yes") != std::string::npos);
}

TEST_CASE("workers default comes from the environment") {
    setenv("RWBAL_WORKERS", "2", 1);
    ExperimentConfig cfg = small_config();
    cfg.workers = 0;
    std::string via_env = rows_to_csv(run_sweep(cfg));
    unsetenv("RWBAL_WORKERS");
    cfg.workers = 1;
    CHECK(via_env == rows_to_csv(run_sweep(cfg)));
}

TEST_CASE("cli: sweep from a config file") {
    {
        std::ofstream f("/tmp/rwbal_sweep.cfg");
        f << "graph = cycle\nscheme = indep-uniform\nscheme = one-choice\n"
          << "n = 128\nn = 256\ntrials = 3\nmaster_seed = 5\n";
    }
    int code = 0;
    std::string csv1 = run_cli("sweep --config /tmp/rwbal_sweep.cfg --workers 1", &code);
    CHECK(code == 0);
    std::string csv2 = run_cli("sweep --config /tmp/rwbal_sweep.cfg --workers 2", &code);
    CHECK(csv1 == csv2);
    int rows = -1;  // header
    for (char ch : csv1)
        if (ch == '\n') ++rows;
    CHECK(rows == 2 * 2 * 3);
}
