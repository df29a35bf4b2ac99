#pragma once

#include <cstdint>
#include <vector>

#include "rwbal/graph.hpp"
#include "rwbal/rng.hpp"

namespace rwbal {

struct DirectedEdge {
    int32_t tail = -1;
    int32_t head = -1;
    bool operator==(const DirectedEdge&) const = default;
};

// Step map T(e, l): from edge (tail, head), move to the l-th ranked neighbor
// of head excluding tail (rank = ascending vertex id), l in [1, k-1].
DirectedEdge t_map(const Graph& g, DirectedEdge e, int l);

// Uniform draw over all n*k directed edges.
DirectedEdge uniform_edge(const Graph& g, Rng& rng);

enum class ResetCause : uint8_t { intersection, timer };

struct ResetEvent {
    int64_t time = 0;  // step index t at which the walkers jumped
    ResetCause cause = ResetCause::timer;
};

// d directed-edge walkers plus the scheme-1 visited set (epoch-stamped) and
// reset bookkeeping. Single-trial state; one ensemble per logical thread.
struct WalkerEnsemble {
    std::vector<DirectedEdge> edges;
    int64_t counter = 0;  // steps since last reset
    int64_t epoch = 0;    // resets so far
    int64_t time = 0;     // total steps taken
    std::vector<ResetEvent> reset_log;

    // scheme 1 only: visited(v) iff visit_mark[v] == mark_gen
    bool track_visited = false;
    std::vector<int64_t> visit_mark;
    int64_t mark_gen = 1;

    int d() const { return static_cast<int>(edges.size()); }
    bool visited(int64_t v) const { return track_visited && visit_mark[v] == mark_gen; }
};

// d independent uniform directed edges; for the intersecting scheme the
// initial visited set is the heads of all walkers.
WalkerEnsemble spawn_uniform(const Graph& g, int d, Rng& edge_rng, bool track_visited = false);

struct StepOutcome {
    bool reset = false;
    ResetCause cause = ResetCause::timer;
};

// Scheme 1: propose T(e_j, rank_j) for every walker; if any proposed head is
// already visited, or the counter hit rho-1, all walkers jump to fresh
// uniform edges and the visited set restarts from the fresh heads. With
// strict_prose, two walkers proposing the same fresh vertex also triggers the
// jump (default keeps the formal update, which catches it one step later).
StepOutcome step_scheme1(const Graph& g, WalkerEnsemble& ens, const std::vector<int>& ranks,
                         Rng& edge_rng, int64_t rho, bool strict_prose = false);
StepOutcome step_scheme1(const Graph& g, WalkerEnsemble& ens, Rng& rank_rng, Rng& edge_rng,
                         int64_t rho, bool strict_prose = false);

// Scheme 2: advance every walker; every rho-th step the ensemble jumps to
// fresh uniform edges instead. Intersections are allowed.
StepOutcome step_scheme2(const Graph& g, WalkerEnsemble& ens, Rng& rank_rng, Rng& edge_rng,
                         int64_t rho);

// Scheme 3: advance only, never reset.
void step_scheme3(const Graph& g, WalkerEnsemble& ens, Rng& rank_rng);

// Draw d ranks uniform on [1, k-1] in walker order.
void draw_ranks(const Graph& g, int d, Rng& rank_rng, std::vector<int>& out);

}  // namespace rwbal
