#include "rwbal/harness.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rwbal {

GraphSpec GraphSpec::parse(const std::string& text) {
    GraphSpec spec;
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "cycle") {
        spec.kind = Kind::cycle;
    } else if (head == "circulant") {
        spec.kind = Kind::circulant;
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) spec.offsets.push_back(std::stoi(tok));
        if (spec.offsets.empty())
            throw std::invalid_argument("graph spec: circulant needs offsets, e.g. circulant:1,2");
    } else if (head == "random-regular") {
        spec.kind = Kind::random_regular;
        if (rest.empty())
            throw std::invalid_argument("graph spec: random-regular needs k, e.g. random-regular:8");
        spec.k = std::stoi(rest);
    } else if (head == "file") {
        spec.kind = Kind::file;
        if (rest.empty()) throw std::invalid_argument("graph spec: file needs a path");
        spec.path = rest;
    } else {
        throw std::invalid_argument("graph spec: unknown kind '" + head + "'");
    }
    return spec;
}

std::string GraphSpec::to_string() const {
    switch (kind) {
        case Kind::cycle: return "cycle";
        case Kind::circulant: {
            std::string s = "circulant:";
            for (size_t i = 0; i < offsets.size(); ++i) {
                if (i) s += ',';
                s += std::to_string(offsets[i]);
            }
            return s;
        }
        case Kind::random_regular: return "random-regular:" + std::to_string(k);
        case Kind::file: return "file:" + path;
    }
    return "?";
}

Graph GraphSpec::build(int64_t n, uint64_t seed) const {
    switch (kind) {
        case Kind::cycle: return gen_cycle(n);
        case Kind::circulant: return gen_circulant(n, offsets);
        case Kind::random_regular: return gen_random_regular(n, k, seed);
        case Kind::file: {
            Graph g = read_graph_file(path);
            if (g.n != n)
                throw std::invalid_argument("graph file has n=" + std::to_string(g.n) +
                                            " but the sweep point asks for n=" + std::to_string(n));
            return g;
        }
    }
    throw std::logic_error("unreachable");
}

void ExperimentConfig::validate() const {
    if (schemes.empty()) throw std::invalid_argument("config: no schemes given");
    if (n_axis.empty()) throw std::invalid_argument("config: empty n axis");
    if (c_axis.empty()) throw std::invalid_argument("config: empty c axis");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    for (int64_t n : n_axis)
        if (n < 3) throw std::invalid_argument("config: n must be >= 3");
}

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig cfg;
    SchemeConfig proto;  // d / tie_break / rho / strict_prose apply to every scheme
    std::vector<std::string> scheme_names;
    std::string line;
    int lineno = 0;
    bool saw_c = false;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r\n");
            auto e = s.find_last_not_of(" \t\r\n");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "graph") cfg.graph = GraphSpec::parse(val);
        else if (key == "scheme") scheme_names.push_back(val);
        else if (key == "n") cfg.n_axis.push_back(std::stoll(val));
        else if (key == "c") {
            if (!saw_c) {
                cfg.c_axis.clear();
                saw_c = true;
            }
            cfg.c_axis.push_back(std::stod(val));
        } else if (key == "d") proto.d = std::stoi(val);
        else if (key == "trials") cfg.trials = std::stoll(val);
        else if (key == "master_seed") cfg.master_seed = std::stoull(val);
        else if (key == "out") cfg.out = val;
        else if (key == "workers") cfg.workers = std::stoi(val);
        else if (key == "balls") cfg.balls = std::stoll(val);
        else if (key == "rho") proto.rho_override = std::stoll(val);
        else if (key == "strict_prose") proto.strict_prose = (val == "1" || val == "true");
        else if (key == "timing") cfg.timing = (val == "1" || val == "true");
        else if (key == "girth") cfg.with_girth = (val == "1" || val == "true");
        else if (key == "tie_break") {
            if (val == "lowest-id") proto.tie_break = TieBreak::lowest_id;
            else if (val == "walker-order") proto.tie_break = TieBreak::walker_order;
            else throw std::invalid_argument("config: unknown tie_break '" + val + "'");
        } else
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
    }
    for (const auto& name : scheme_names) {
        SchemeConfig sc = proto;
        sc.scheme = scheme_from_name(name);
        cfg.schemes.push_back(sc);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config: " + path);
    return parse_config(f);
}

uint64_t trial_seed(uint64_t master, uint64_t point_index, uint64_t trial_index) {
    return mix64(mix64(mix64(master) ^ point_index) ^ trial_index);
}

uint64_t graph_seed(uint64_t master, uint64_t n_index) {
    return mix64(mix64(master ^ kStreamGraph) ^ n_index);
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();

    // One graph per n-axis entry, shared across schemes and c so paired
    // comparisons see the same instance. Random graphs get a per-n seed.
    std::vector<Graph> graphs;
    std::vector<int64_t> girths;
    graphs.reserve(cfg.n_axis.size());
    for (size_t ni = 0; ni < cfg.n_axis.size(); ++ni) {
        graphs.push_back(cfg.graph.build(cfg.n_axis[ni], graph_seed(cfg.master_seed, ni)));
        girths.push_back(cfg.with_girth ? girth(graphs.back()) : -2);
    }

    struct Task {
        size_t scheme_i, n_i, c_i;
        int64_t trial;
        uint64_t point_index;
    };
    std::vector<Task> tasks;
    const size_t points = cfg.schemes.size() * cfg.n_axis.size() * cfg.c_axis.size();
    tasks.reserve(points * cfg.trials);
    uint64_t point = 0;
    for (size_t si = 0; si < cfg.schemes.size(); ++si)
        for (size_t ni = 0; ni < cfg.n_axis.size(); ++ni)
            for (size_t ci = 0; ci < cfg.c_axis.size(); ++ci) {
                for (int64_t tr = 0; tr < cfg.trials; ++tr)
                    tasks.push_back({si, ni, ci, tr, point});
                ++point;
            }

    std::vector<ResultRow> rows(tasks.size());
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::string fail_msg;
    std::mutex fail_mu;

    int workers = cfg.workers;
    if (workers <= 0) {
        if (const char* env = std::getenv("RWBAL_WORKERS")) workers = std::atoi(env);
        if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers <= 0) workers = 1;
    }
    workers = static_cast<int>(
        std::min<size_t>(static_cast<size_t>(workers), std::max<size_t>(tasks.size(), 1)));

    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size() || failed.load()) break;
            const Task& task = tasks[i];
            try {
                SchemeConfig sc = cfg.schemes[task.scheme_i];
                sc.c = cfg.c_axis[task.c_i];
                sc.balls = cfg.balls;
                sc.seed = trial_seed(cfg.master_seed, task.point_index,
                                     static_cast<uint64_t>(task.trial));
                const Graph& g = graphs[task.n_i];
                TrialResult res = run_trial(g, sc);
                ResultRow& row = rows[i];
                row.scheme = scheme_name(sc.scheme);
                row.n = g.n;
                row.k = g.k;
                row.c = sc.c;
                row.trial = task.trial;
                row.seed = sc.seed;
                row.max_load = res.max_load;
                row.resets = res.resets_total;
                row.resets_intersect = res.resets_intersect;
                row.resets_timer = res.resets_timer;
                row.girth = girths[task.n_i];
                row.wall_ms = cfg.timing ? res.wall_ms : -1.0;
                row.trace_digest = res.trace_digest;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mu);
                if (!failed.exchange(true))
                    fail_msg = "trial failed at point " + std::to_string(task.point_index) +
                               " trial " + std::to_string(task.trial) + ": " + e.what();
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) throw std::runtime_error(fail_msg);
    return rows;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::string out =
        "scheme,n,k,c,trial,seed,max_load,resets,resets_by_cause,girth,wall_ms,trace_digest\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%lld,%d,%.6g,%lld,%llu,%d,%lld,", r.scheme.c_str(),
                      static_cast<long long>(r.n), r.k, r.c, static_cast<long long>(r.trial),
                      static_cast<unsigned long long>(r.seed), r.max_load,
                      static_cast<long long>(r.resets));
        out += buf;
        std::snprintf(buf, sizeof buf, "intersection:%lld;timer:%lld,",
                      static_cast<long long>(r.resets_intersect),
                      static_cast<long long>(r.resets_timer));
        out += buf;
        if (r.girth != -2) {
            std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(r.girth));
            out += buf;
        }
        out += ',';
        if (r.wall_ms >= 0) {
            std::snprintf(buf, sizeof buf, "%.6g", r.wall_ms);
            out += buf;
        }
        std::snprintf(buf, sizeof buf, ",%016llx\n",
                      static_cast<unsigned long long>(r.trace_digest));
        out += buf;
    }
    return out;
}

void write_trace(const Trace& trace, int64_t balls, std::ostream& os) {
    size_t next_reset = 0;
    for (int64_t t = 0; t < balls && t < static_cast<int64_t>(trace.candidates.size()); ++t) {
        os << t;
        for (int32_t v : trace.candidates[t]) os << ' ' << v;
        // reset events are logged at time t+1, i.e. on the step out of t
        if (next_reset < trace.resets.size() && trace.resets[next_reset].time == t + 1) {
            os << " 1 "
               << (trace.resets[next_reset].cause == ResetCause::intersection ? "intersection"
                                                                              : "timer");
            ++next_reset;
        } else {
            os << " 0 -";
        }
        os << '\n';
    }
}

}  // namespace rwbal
