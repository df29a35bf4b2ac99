#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rwbal/allocator.hpp"
#include "rwbal/graph.hpp"

namespace rwbal {

struct GraphSpec {
    enum class Kind { cycle, circulant, random_regular, file };
    Kind kind = Kind::cycle;
    int k = 0;                     // random_regular
    std::vector<int32_t> offsets;  // circulant
    std::string path;              // file

    static GraphSpec parse(const std::string& text);
    std::string to_string() const;
    // Seed matters only for random_regular; cycle/circulant are deterministic.
    Graph build(int64_t n, uint64_t seed) const;
};

struct ExperimentConfig {
    GraphSpec graph;
    std::vector<SchemeConfig> schemes;  // seeds are assigned per trial by the sweep
    std::vector<int64_t> n_axis;
    std::vector<double> c_axis{1.0};
    int64_t trials = 1;
    uint64_t master_seed = 0;
    std::string out;
    int workers = 0;  // 0: RWBAL_WORKERS env or hardware_concurrency
    bool timing = false;      // real wall_ms column (breaks byte reproducibility)
    bool with_girth = false;  // compute per-graph girth column
    int64_t balls = 0;        // 0: n balls

    void validate() const;
};

// Flat key=value config, one pair per line, '#' comments, repeated keys for
// lists. Keys: graph, scheme, n, c, d, trials, master_seed, out, workers,
// balls, tie_break, rho, strict_prose, timing, girth.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_file(const std::string& path);

struct ResultRow {
    std::string scheme;
    int64_t n = 0;
    int k = 0;
    double c = 0.0;
    int64_t trial = 0;
    uint64_t seed = 0;
    int32_t max_load = 0;
    int64_t resets = 0;
    int64_t resets_intersect = 0;
    int64_t resets_timer = 0;
    int64_t girth = -2;  // -2: not computed
    double wall_ms = -1.0;  // <0: not reported
    uint64_t trace_digest = 0;
};

// Derivation chain, documented in the README so other implementations can
// reproduce streams:
//   trial_seed = mix64(mix64(mix64(master) ^ point_index) ^ trial_index)
//   graph_seed = mix64(mix64(master ^ kStreamGraph) ^ n_index)
uint64_t trial_seed(uint64_t master, uint64_t point_index, uint64_t trial_index);
uint64_t graph_seed(uint64_t master, uint64_t n_index);

// Runs all (scheme x n x c) points x trials, fanned over a worker pool;
// rows come back in deterministic (point, trial) order regardless of
// completion order.
std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg);

// CSV with a fixed header; floats use 6 significant digits. wall_ms and girth
// cells stay empty unless requested in the config.
std::string rows_to_csv(const std::vector<ResultRow>& rows);

// Debug trace dump: "t walker_positions... J cause" per time step. Format is
// documented but not stability-guaranteed.
void write_trace(const Trace& trace, int64_t balls, std::ostream& os);

}  // namespace rwbal
