#include "rwbal/allocator.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace rwbal {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::rw_intersect_reset: return "rw-intersect-reset";
        case Scheme::rw_periodic_reset: return "rw-periodic-reset";
        case Scheme::rw_no_reset: return "rw-no-reset";
        case Scheme::indep_uniform: return "indep-uniform";
        case Scheme::single_walk: return "single-walk";
        case Scheme::one_choice: return "one-choice";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "rw-intersect-reset") return Scheme::rw_intersect_reset;
    if (name == "rw-periodic-reset") return Scheme::rw_periodic_reset;
    if (name == "rw-no-reset") return Scheme::rw_no_reset;
    if (name == "indep-uniform") return Scheme::indep_uniform;
    if (name == "single-walk") return Scheme::single_walk;
    if (name == "one-choice") return Scheme::one_choice;
    throw std::invalid_argument("unknown scheme: " + name);
}

int64_t SchemeConfig::rho_for(int64_t n) const {
    if (rho_override > 0) return rho_override;
    return static_cast<int64_t>(std::floor(c * std::log(static_cast<double>(n))));
}

bool SchemeConfig::uses_walkers() const {
    return scheme == Scheme::rw_intersect_reset || scheme == Scheme::rw_periodic_reset ||
           scheme == Scheme::rw_no_reset || scheme == Scheme::single_walk;
}

std::vector<int64_t> LoadState::nu() const {
    std::vector<int64_t> out(max_load + 1, 0);
    int64_t acc = 0;
    for (int64_t i = max_load; i >= 0; --i) {
        acc += (i < static_cast<int64_t>(level_counts.size())) ? level_counts[i] : 0;
        out[i] = acc;
    }
    return out;
}

std::vector<int64_t> LoadState::mu() const {
    std::vector<int64_t> out(max_load + 1, 0);
    int64_t acc = 0;
    for (int64_t i = max_load; i >= 1; --i) {
        acc += (i < static_cast<int64_t>(height_hist.size())) ? height_hist[i] : 0;
        out[i] = acc;
    }
    out[0] = balls_placed;
    return out;
}

int64_t place_ball(LoadState& state, const std::vector<int32_t>& candidates, TieBreak tie) {
    if (candidates.empty()) throw std::invalid_argument("place_ball: empty candidate list");
    int32_t best = candidates[0];
    int32_t best_load = state.loads[best];
    for (size_t i = 1; i < candidates.size(); ++i) {
        int32_t cand = candidates[i];
        int32_t load = state.loads[cand];
        if (load < best_load ||
            (load == best_load && tie == TieBreak::lowest_id && cand < best)) {
            best = cand;
            best_load = load;
        }
    }
    const int32_t new_load = best_load + 1;
    state.loads[best] = new_load;
    if (static_cast<size_t>(new_load) >= state.level_counts.size())
        state.level_counts.resize(new_load + 1, 0);
    state.level_counts[best_load] -= 1;
    state.level_counts[new_load] += 1;
    if (static_cast<size_t>(new_load) >= state.height_hist.size())
        state.height_hist.resize(new_load + 1, 0);
    state.height_hist[new_load] += 1;  // height = post-insertion count
    state.balls_placed += 1;
    if (new_load > state.max_load) state.max_load = new_load;
    return best;
}

TrialResult run_trial(const Graph& g, const SchemeConfig& cfg, Trace* trace,
                      LoadState* final_state) {
    const auto t0 = std::chrono::steady_clock::now();
    const int64_t n = g.n;
    if (n < 1) throw std::invalid_argument("run_trial: empty graph");
    int d = cfg.d;
    if (cfg.scheme == Scheme::single_walk || cfg.scheme == Scheme::one_choice) d = 1;
    if (d < 1) throw std::invalid_argument("run_trial: need d >= 1");
    if (cfg.uses_walkers() && g.k < 2)
        throw std::invalid_argument("run_trial: walker schemes need k >= 2");

    const int64_t balls = cfg.balls > 0 ? cfg.balls : n;
    int64_t rho = 0;
    if (cfg.scheme == Scheme::rw_intersect_reset || cfg.scheme == Scheme::rw_periodic_reset) {
        rho = cfg.rho_for(n);
        if (rho < 1)
            throw std::invalid_argument(
                "run_trial: rho = floor(c ln n) < 1; raise c or pass an explicit rho");
    }

    Rng rank_rng(derive_seed(cfg.seed, kStreamRanks));
    Rng edge_rng(derive_seed(cfg.seed, kStreamEdges));

    WalkerEnsemble ens;
    if (cfg.uses_walkers())
        ens = spawn_uniform(g, d, edge_rng, cfg.scheme == Scheme::rw_intersect_reset);

    LoadState state(n);
    uint64_t digest = kFnvOffset;
    std::vector<int32_t> candidates(d);

    for (int64_t t = 0; t < balls; ++t) {
        if (cfg.uses_walkers()) {
            for (int j = 0; j < d; ++j) candidates[j] = ens.edges[j].head;
        } else {
            for (int j = 0; j < d; ++j) candidates[j] = uniform_edge(g, edge_rng).head;
        }
        const int64_t chosen = place_ball(state, candidates, cfg.tie_break);
        digest = fnv1a_u64(digest, static_cast<uint64_t>(t));
        digest = fnv1a_u64(digest, static_cast<uint64_t>(chosen));
        if (trace) {
            trace->chosen.push_back(chosen);
            trace->candidates.push_back(candidates);
        }
        switch (cfg.scheme) {
            case Scheme::rw_intersect_reset:
                step_scheme1(g, ens, rank_rng, edge_rng, rho, cfg.strict_prose);
                break;
            case Scheme::rw_periodic_reset:
                step_scheme2(g, ens, rank_rng, edge_rng, rho);
                break;
            case Scheme::rw_no_reset:
            case Scheme::single_walk:
                step_scheme3(g, ens, rank_rng);
                break;
            default:
                break;
        }
    }

    TrialResult out;
    out.max_load = state.max_load;
    out.load_histogram = state.level_counts;
    for (const auto& ev : ens.reset_log) {
        out.resets_total += 1;
        if (ev.cause == ResetCause::intersection)
            out.resets_intersect += 1;
        else
            out.resets_timer += 1;
    }
    out.trace_digest = digest;
    if (trace) trace->resets = ens.reset_log;
    if (final_state) *final_state = std::move(state);
    out.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace rwbal
