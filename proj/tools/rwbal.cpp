// rwbal: random-walk based balanced allocation. Simulators, graph tools and
// bound calculators; see README for the subcommand tour.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rwbal/analysis.hpp"
#include "rwbal/graph.hpp"
#include "rwbal/harness.hpp"
#include "rwbal/nbmatrix.hpp"
#include "rwbal/stats.hpp"

using nlohmann::json;
using namespace rwbal;

namespace {

json report_to_json(const TheoryReport& rep) {
    json j;
    j["scheme"] = rep.scheme;
    j["n"] = rep.n;
    j["c"] = rep.c;
    if (rep.k > 0) j["k"] = rep.k;
    if (rep.alpha > 0) j["alpha"] = rep.alpha;
    j["beta_first"] = rep.beta_first;
    j["beta"] = rep.beta;
    j["i_star"] = rep.i_star;
    if (rep.i_star_star >= 0) j["i_star_star"] = rep.i_star_star;
    if (!rep.r.empty()) {
        j["L"] = rep.L;
        j["r"] = rep.r;
    }
    j["final_bound"] = rep.final_bound;
    json terms = json::array();
    for (const auto& t : rep.failure_terms) terms.push_back({{"name", t.name}, {"value", t.value}});
    j["failure_terms"] = terms;
    json appl = json::array();
    for (const auto& a : rep.applicability)
        appl.push_back({{"name", a.name}, {"satisfied", a.satisfied}, {"required_n", a.required_n}});
    j["applicability"] = appl;
    return j;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open for writing: " + out_path);
        f << text;
    }
}

Graph load_or_gen(const std::string& graph_path, const std::string& gen_spec, int64_t n,
                  uint64_t seed) {
    if (!graph_path.empty()) return read_graph_file(graph_path);
    if (gen_spec.empty())
        throw std::invalid_argument("need --graph FILE or --gen SPEC with --n");
    return GraphSpec::parse(gen_spec).build(n, seed);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random-walk based balanced allocation toolkit"};
    app.require_subcommand(1);

    // gen-graph ------------------------------------------------------------
    auto* gen = app.add_subcommand("gen-graph", "generate a graph file");
    std::string gen_type = "cycle";
    int64_t gen_n = 0;
    int gen_k = 3;
    std::string gen_offsets;
    uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--type", gen_type, "cycle | circulant | random-regular")->required();
    gen->add_option("--n", gen_n, "vertex count")->required();
    gen->add_option("--k", gen_k, "degree (random-regular)");
    gen->add_option("--offsets", gen_offsets, "comma list (circulant)");
    gen->add_option("--seed", gen_seed, "seed (random-regular)");
    gen->add_option("--out", gen_out, "output path (default stdout)");

    // girth ------------------------------------------------------------------
    auto* gir = app.add_subcommand("girth", "exact girth of a graph file");
    std::string gir_path;
    gir->add_option("graph", gir_path, "graph file")->required();

    // run ----------------------------------------------------------------
    auto* run = app.add_subcommand("run", "single allocation trial");
    std::string run_graph, run_gen, run_scheme = "indep-uniform", run_tie = "lowest-id";
    std::string run_trace_out;
    int64_t run_n = 0, run_rho = 0, run_balls = 0;
    int run_d = 2;
    double run_c = 1.0;
    uint64_t run_seed = 0;
    bool run_strict = false;
    run->add_option("--graph", run_graph, "graph file");
    run->add_option("--gen", run_gen, "generator spec, e.g. random-regular:8");
    run->add_option("--n", run_n, "vertex count for --gen");
    run->add_option("--scheme", run_scheme,
                    "rw-intersect-reset | rw-periodic-reset | rw-no-reset | indep-uniform | "
                    "single-walk | one-choice");
    run->add_option("--d", run_d, "walkers / choices per ball");
    run->add_option("--c", run_c, "reset constant, rho = floor(c ln n)");
    run->add_option("--rho", run_rho, "explicit reset period (overrides --c)");
    run->add_option("--seed", run_seed, "trial seed");
    run->add_option("--balls", run_balls, "balls to place (default n)");
    run->add_option("--tie-break", run_tie, "lowest-id | walker-order");
    run->add_flag("--strict-prose", run_strict, "also reset on simultaneous fresh collisions");
    run->add_option("--trace-out", run_trace_out, "dump per-step trace to file");

    // sweep ----------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "run a config-driven experiment sweep");
    std::string sweep_cfg, sweep_out;
    int sweep_workers = 0;
    sweep->add_option("--config", sweep_cfg, "key=value config file")->required();
    sweep->add_option("--out", sweep_out, "CSV path (overrides config 'out')");
    sweep->add_option("--workers", sweep_workers, "worker threads (overrides config)");

    // verify-mixing ---------------------------------------------------------
    auto* vm = app.add_subcommand("verify-mixing", "exact mixing certificate scan");
    std::string vm_graph;
    int64_t vm_tmax = 64;
    vm->add_option("graph", vm_graph, "graph file")->required();
    vm->add_option("--tmax", vm_tmax, "scan horizon");

    // verify-return ------------------------------------------------------------
    auto* vr = app.add_subcommand("verify-return", "exact conditioned return-probability check");
    std::string vr_graph;
    double vr_alpha = 0.5;
    int64_t vr_horizon = 30;
    vr->add_option("graph", vr_graph, "graph file")->required();
    vr->add_option("--alpha", vr_alpha, "girth exponent")->required();
    vr->add_option("--horizon", vr_horizon, "max gap to verify");

    // check-assumption1 --------------------------------------------------------
    auto* ca = app.add_subcommand("check-assumption1",
                                  "Monte Carlo estimate of the early-intersection probability");
    std::string ca_graph;
    double ca_c = 1.0;
    int64_t ca_trials = 1000, ca_rho = 0;
    int ca_d = 2;
    uint64_t ca_seed = 0;
    ca->add_option("graph", ca_graph, "graph file")->required();
    ca->add_option("--c", ca_c, "reset constant");
    ca->add_option("--rho", ca_rho, "explicit period (overrides --c)");
    ca->add_option("--trials", ca_trials, "Monte Carlo trials (>= 100)");
    ca->add_option("--d", ca_d, "walker count");
    ca->add_option("--seed", ca_seed, "seed");

    // theory-bound -----------------------------------------------------------
    auto* tb = app.add_subcommand("theory-bound", "evaluate a bound recursion");
    std::string tb_scheme;
    int64_t tb_n = 0;
    double tb_c = 1.0, tb_alpha = 0.5;
    int tb_k = 3;
    tb->add_option("--scheme", tb_scheme, "1 | 2 | 3 | lowgirth")->required();
    tb->add_option("--n", tb_n, "bin count")->required();
    tb->add_option("--c", tb_c, "reset constant");
    tb->add_option("--k", tb_k, "degree (schemes 2, 3, lowgirth)");
    tb->add_option("--alpha", tb_alpha, "girth exponent (schemes 2, 3, lowgirth)");

    // tail-check ----------------------------------------------------------------
    auto* tcheck = app.add_subcommand("tail-check", "empirical concentration-bound check");
    std::string tc_process = "iid-bernoulli";
    int64_t tc_trials = 100000, tc_N = 100;
    double tc_B = 1.0, tc_m = 0.1;
    int tc_grid = 9;
    uint64_t tc_seed = 7;
    tcheck->add_option("--process", tc_process, "iid-bernoulli | markov");
    tcheck->add_option("--trials", tc_trials, "Monte Carlo trials");
    tcheck->add_option("--N", tc_N, "summands per trial");
    tcheck->add_option("--B", tc_B, "per-increment bound");
    tcheck->add_option("--m", tc_m, "conditional-mean bound");
    tcheck->add_option("--grid", tc_grid, "lambda grid points");
    tcheck->add_option("--seed", tc_seed, "seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            GraphSpec spec;
            if (gen_type == "cycle") spec = GraphSpec::parse("cycle");
            else if (gen_type == "circulant") spec = GraphSpec::parse("circulant:" + gen_offsets);
            else if (gen_type == "random-regular")
                spec = GraphSpec::parse("random-regular:" + std::to_string(gen_k));
            else throw std::invalid_argument("gen-graph: unknown --type " + gen_type);
            Graph g = spec.build(gen_n, gen_seed);
            if (gen_out.empty()) write_graph(g, std::cout);
            else write_graph_file(g, gen_out);
        } else if (*gir) {
            int64_t len = girth(read_graph_file(gir_path));
            if (len == kAcyclic) std::cout << "acyclic\n";
            else std::cout << len << '\n';
        } else if (*run) {
            Graph g = load_or_gen(run_graph, run_gen, run_n, mix64(run_seed ^ kStreamGraph));
            SchemeConfig sc;
            sc.scheme = scheme_from_name(run_scheme);
            sc.d = run_d;
            sc.c = run_c;
            sc.rho_override = run_rho;
            sc.seed = run_seed;
            sc.balls = run_balls;
            sc.strict_prose = run_strict;
            if (run_tie == "lowest-id") sc.tie_break = TieBreak::lowest_id;
            else if (run_tie == "walker-order") sc.tie_break = TieBreak::walker_order;
            else throw std::invalid_argument("unknown tie-break: " + run_tie);

            Trace trace;
            const bool want_trace = !run_trace_out.empty();
            TrialResult res = run_trial(g, sc, want_trace ? &trace : nullptr);
            if (want_trace) {
                std::ofstream tf(run_trace_out);
                if (!tf) throw std::invalid_argument("cannot open " + run_trace_out);
                write_trace(trace, sc.balls > 0 ? sc.balls : g.n, tf);
            }
            json j;
            j["scheme"] = scheme_name(sc.scheme);
            j["n"] = g.n;
            j["k"] = g.k;
            j["seed"] = sc.seed;
            j["max_load"] = res.max_load;
            j["load_histogram"] = res.load_histogram;
            j["resets"] = res.resets_total;
            j["resets_by_cause"] = {{"intersection", res.resets_intersect},
                                    {"timer", res.resets_timer}};
            char digest[32];
            std::snprintf(digest, sizeof digest, "%016llx",
                          static_cast<unsigned long long>(res.trace_digest));
            j["trace_digest"] = digest;
            j["wall_ms"] = res.wall_ms;
            std::cout << j.dump(2) << '\n';
        } else if (*sweep) {
            ExperimentConfig cfg = parse_config_file(sweep_cfg);
            if (!sweep_out.empty()) cfg.out = sweep_out;
            if (sweep_workers > 0) cfg.workers = sweep_workers;
            std::string csv = rows_to_csv(run_sweep(cfg));
            emit(csv, cfg.out);
        } else if (*vm) {
            Graph g = read_graph_file(vm_graph);
            MixingCertificate cert = mixing_certificate(g, vm_tmax);
            json j;
            j["threshold"] = cert.threshold;
            j["t_max"] = cert.t_max;
            if (cert.certified_t) j["certified_t"] = *cert.certified_t;
            else j["certified_t"] = nullptr;
            j["deviation_curve"] = cert.deviation_curve;
            std::cout << j.dump(2) << '\n';
            if (!cert.certified_t) {
                std::cerr << "no certificate <= t_max\n";
                return 1;
            }
        } else if (*vr) {
            Graph g = read_graph_file(vr_graph);
            ReturnProbCheck chk = return_prob_check(g, vr_alpha, vr_horizon);
            json j;
            j["applicable"] = chk.applicable;
            j["ok"] = chk.ok;
            j["bound"] = chk.bound;
            j["girth"] = chk.girth;
            j["threshold"] = chk.threshold;
            j["exact_curve"] = chk.exact_curve;
            j["loose_curve"] = chk.loose_curve;
            std::cout << j.dump(2) << '\n';
            if (!chk.applicable || !chk.ok) return 1;
        } else if (*ca) {
            Graph g = read_graph_file(ca_graph);
            auto est = estimate_assumption1(g, ca_c, ca_trials, ca_seed, ca_d, ca_rho);
            json j;
            j["p_hat"] = est.p_hat;
            j["ci95"] = {est.lo, est.hi};
            j["rho"] = est.rho;
            j["trials"] = est.trials;
            j["pass"] = est.pass;
            std::cout << j.dump(2) << '\n';
        } else if (*tb) {
            TheoryReport rep;
            if (tb_scheme == "1") rep = theory_bounds_scheme1(tb_n, tb_c);
            else if (tb_scheme == "2") rep = theory_bounds_scheme2(tb_n, tb_c, tb_k, tb_alpha);
            else if (tb_scheme == "3") rep = theory_bounds_scheme3(tb_n, tb_c, tb_k, tb_alpha);
            else if (tb_scheme == "lowgirth")
                rep = theory_bounds_lowgirth(tb_n, tb_c, tb_k, tb_alpha);
            else throw std::invalid_argument("theory-bound: unknown --scheme " + tb_scheme);
            std::cout << report_to_json(rep).dump(2) << '\n';
        } else if (*tcheck) {
            ConcentrationSpec spec{tc_B, tc_m, tc_N};
            ProcessSampler sampler;
            if (tc_process == "iid-bernoulli") {
                const double p = tc_m, B = tc_B;
                sampler = [p, B](Rng& rng, std::span<double> out) {
                    for (auto& z : out) z = (rng.unit() < p) ? B : 0.0;
                };
            } else if (tc_process == "markov") {
                // Two-state chain; conditional mean is p0 or p1 <= m by construction.
                const double p0 = tc_m, p1 = tc_m / 2.0, B = tc_B;
                sampler = [p0, p1, B](Rng& rng, std::span<double> out) {
                    int s = 0;
                    for (auto& z : out) {
                        const double p = (s == 0) ? p0 : p1;
                        s = (rng.unit() < p) ? 1 : 0;
                        z = (s == 1) ? B : 0.0;
                    }
                };
            } else
                throw std::invalid_argument("tail-check: unknown --process " + tc_process);
            TailCheckReport rep = empirical_tail_check(sampler, spec, tc_trials, tc_grid, tc_seed);
            std::printf("%12s %12s %12s %12s %s\n", "lambda", "empirical", "bound", "3*stderr",
                        "ok");
            for (const auto& row : rep.rows)
                std::printf("%12.4f %12.6g %12.6g %12.6g %s\n", row.lambda, row.empirical,
                            row.bound, 3 * row.mc_stderr, row.ok ? "yes" : "NO");
            std::printf("declared mean ok: %s (empirical %.6g vs declared %.6g)\n",
                        rep.declared_mean_ok ? "yes" : "NO", rep.empirical_mean, tc_m);
            if (!rep.all_ok) return 1;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
