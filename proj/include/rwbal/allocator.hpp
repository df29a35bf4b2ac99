#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rwbal/graph.hpp"
#include "rwbal/nbwalk.hpp"
#include "rwbal/rng.hpp"

namespace rwbal {

enum class Scheme {
    rw_intersect_reset,  // walkers jump on path intersection or timer
    rw_periodic_reset,   // walkers jump on timer only
    rw_no_reset,         // walkers never jump
    indep_uniform,       // classical power-of-d: fresh uniform bins per ball
    single_walk,         // one walker, every position takes a ball
    one_choice,          // one fresh uniform bin per ball
};

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

enum class TieBreak : uint8_t {
    lowest_id,     // among minimum-load candidates, smallest vertex id
    walker_order,  // first candidate in walker order achieving the minimum
};

struct SchemeConfig {
    Scheme scheme = Scheme::indep_uniform;
    int d = 2;
    double c = 1.0;            // reset constant; rho = floor(c * ln n)
    int64_t rho_override = 0;  // > 0 overrides the c-derived period
    TieBreak tie_break = TieBreak::lowest_id;
    uint64_t seed = 0;
    int64_t balls = 0;  // 0 means n
    bool strict_prose = false;

    int64_t rho_for(int64_t n) const;
    bool uses_walkers() const;
};

// Bin loads plus the derived profiles: level_counts[L] counts bins at load
// exactly L (supports nu), height_hist[h] counts balls of height exactly h
// (supports mu).
struct LoadState {
    std::vector<int32_t> loads;
    std::vector<int64_t> level_counts;
    std::vector<int64_t> height_hist;
    int64_t balls_placed = 0;
    int32_t max_load = 0;

    explicit LoadState(int64_t n) : loads(n, 0), level_counts{n} {}

    // nu[i] = #bins with load >= i, i = 0..max_load
    std::vector<int64_t> nu() const;
    // mu[i] = #balls of height >= i, i = 0..max_load (mu[0] = balls_placed)
    std::vector<int64_t> mu() const;
};

// Least loaded candidate wins; ties resolved deterministically (never
// randomly). Returns the chosen bin and updates all counters.
int64_t place_ball(LoadState& state, const std::vector<int32_t>& candidates, TieBreak tie);

struct TrialResult {
    int32_t max_load = 0;
    std::vector<int64_t> load_histogram;  // bins by exact load
    int64_t resets_total = 0;
    int64_t resets_intersect = 0;
    int64_t resets_timer = 0;
    uint64_t trace_digest = 0;  // FNV-1a over (t, chosen) pairs
    double wall_ms = 0.0;
};

// Optional per-ball capture for tests and the debug trace dump.
struct Trace {
    std::vector<int64_t> chosen;                  // chosen bin per ball
    std::vector<std::vector<int32_t>> candidates; // sampled bins per ball
    std::vector<ResetEvent> resets;
};

TrialResult run_trial(const Graph& g, const SchemeConfig& cfg, Trace* trace = nullptr,
                      LoadState* final_state = nullptr);

// FNV-1a64 helpers; the digest is the reproducibility fingerprint of a trial.
inline constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr uint64_t kFnvPrime = 0x100000001b3ULL;
inline uint64_t fnv1a_u64(uint64_t h, uint64_t x) {
    for (int i = 0; i < 8; ++i) {
        h ^= (x >> (8 * i)) & 0xff;
        h *= kFnvPrime;
    }
    return h;
}

}  // namespace rwbal
