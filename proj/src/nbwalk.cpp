#include "rwbal/nbwalk.hpp"

#include <stdexcept>

namespace rwbal {

DirectedEdge t_map(const Graph& g, DirectedEdge e, int l) {
    const int k = g.k;
    if (l < 1 || l > k - 1) throw std::invalid_argument("t_map: rank out of range");
    auto row = g.neighbors(e.head);
    // row is ascending; skip the slot occupied by the tail (present exactly once)
    int idx = l - 1;
    for (int j = 0; j <= idx && j < k; ++j)
        if (row[j] == e.tail) {
            idx = l;
            break;
        }
    return {e.head, row[idx]};
}

DirectedEdge uniform_edge(const Graph& g, Rng& rng) {
    const int64_t id = static_cast<int64_t>(rng.below(static_cast<uint64_t>(g.directed_edges())));
    return {static_cast<int32_t>(id / g.k), g.adj[id]};
}

void draw_ranks(const Graph& g, int d, Rng& rank_rng, std::vector<int>& out) {
    out.resize(d);
    for (int j = 0; j < d; ++j)
        out[j] = 1 + static_cast<int>(rank_rng.below(static_cast<uint64_t>(g.k - 1)));
}

WalkerEnsemble spawn_uniform(const Graph& g, int d, Rng& edge_rng, bool track_visited) {
    if (d < 1) throw std::invalid_argument("spawn_uniform: need d >= 1");
    WalkerEnsemble ens;
    ens.edges.resize(d);
    for (int j = 0; j < d; ++j) ens.edges[j] = uniform_edge(g, edge_rng);
    ens.track_visited = track_visited;
    if (track_visited) {
        ens.visit_mark.assign(g.n, 0);
        for (const auto& e : ens.edges) ens.visit_mark[e.head] = ens.mark_gen;
    }
    return ens;
}

StepOutcome step_scheme1(const Graph& g, WalkerEnsemble& ens, const std::vector<int>& ranks,
                         Rng& edge_rng, int64_t rho, bool strict_prose) {
    const int d = ens.d();
    if (rho < 1) throw std::invalid_argument("step_scheme1: need rho >= 1");
    if (!ens.track_visited)
        throw std::logic_error("step_scheme1: ensemble was spawned without visited tracking");

    static thread_local std::vector<DirectedEdge> propose;
    propose.resize(d);
    bool hit = false;
    for (int j = 0; j < d; ++j) {
        propose[j] = t_map(g, ens.edges[j], ranks[j]);
        if (ens.visit_mark[propose[j].head] == ens.mark_gen) hit = true;
    }
    if (strict_prose && !hit) {
        for (int a = 0; a < d && !hit; ++a)
            for (int b = a + 1; b < d; ++b)
                if (propose[a].head == propose[b].head) {
                    hit = true;
                    break;
                }
    }
    const bool timer = ens.counter == rho - 1;
    ens.time += 1;

    if (hit || timer) {
        for (int j = 0; j < d; ++j) ens.edges[j] = uniform_edge(g, edge_rng);
        ens.mark_gen += 1;
        for (const auto& e : ens.edges) ens.visit_mark[e.head] = ens.mark_gen;
        ens.counter = 0;
        ens.epoch += 1;
        ResetCause cause = hit ? ResetCause::intersection : ResetCause::timer;
        ens.reset_log.push_back({ens.time, cause});
        return {true, cause};
    }
    for (int j = 0; j < d; ++j) {
        ens.edges[j] = propose[j];
        ens.visit_mark[propose[j].head] = ens.mark_gen;
    }
    ens.counter += 1;
    return {false, ResetCause::timer};
}

StepOutcome step_scheme1(const Graph& g, WalkerEnsemble& ens, Rng& rank_rng, Rng& edge_rng,
                         int64_t rho, bool strict_prose) {
    static thread_local std::vector<int> ranks;
    draw_ranks(g, ens.d(), rank_rng, ranks);
    return step_scheme1(g, ens, ranks, edge_rng, rho, strict_prose);
}

StepOutcome step_scheme2(const Graph& g, WalkerEnsemble& ens, Rng& rank_rng, Rng& edge_rng,
                         int64_t rho) {
    if (rho < 1) throw std::invalid_argument("step_scheme2: need rho >= 1");
    static thread_local std::vector<int> ranks;
    draw_ranks(g, ens.d(), rank_rng, ranks);  // consumed every step, used unless resetting
    ens.time += 1;
    if (ens.counter == rho - 1) {
        for (auto& e : ens.edges) e = uniform_edge(g, edge_rng);
        ens.counter = 0;
        ens.epoch += 1;
        ens.reset_log.push_back({ens.time, ResetCause::timer});
        return {true, ResetCause::timer};
    }
    for (int j = 0; j < ens.d(); ++j) ens.edges[j] = t_map(g, ens.edges[j], ranks[j]);
    ens.counter += 1;
    return {false, ResetCause::timer};
}

void step_scheme3(const Graph& g, WalkerEnsemble& ens, Rng& rank_rng) {
    static thread_local std::vector<int> ranks;
    draw_ranks(g, ens.d(), rank_rng, ranks);
    for (int j = 0; j < ens.d(); ++j) ens.edges[j] = t_map(g, ens.edges[j], ranks[j]);
    ens.time += 1;
    ens.counter += 1;
}

}  // namespace rwbal
