#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace rwbal {

// Simple k-regular graph with a canonical neighbor ranking: every adjacency
// row is sorted by ascending vertex id, and the row order in the text format
// is the ranking used by the walk step map.
struct Graph {
    int64_t n = 0;
    int k = 0;
    std::vector<int32_t> adj;  // n*k entries, row v = adj[v*k .. v*k+k)

    std::span<const int32_t> neighbors(int64_t v) const {
        return {adj.data() + v * k, static_cast<size_t>(k)};
    }
    int32_t neighbor(int64_t v, int j) const { return adj[v * k + j]; }
    int64_t directed_edges() const { return n * k; }
};

// Validates regularity, simplicity, symmetry; sorts rows ascending.
// Throws std::invalid_argument naming the offending vertex.
Graph build_graph(const std::vector<std::vector<int32_t>>& rows);

// Cycle C_n, n >= 3.
Graph gen_cycle(int64_t n);

// Circulant graph: v adjacent to v +- o (mod n) for each offset.
// Offsets must be distinct, positive, ascending, max offset < n/2, so the
// degree is exactly 2*|offsets|.
Graph gen_circulant(int64_t n, const std::vector<int32_t>& offsets);

// Random simple k-regular graph from the pairing model. Remaining half-edge
// stubs are paired uniformly among admissible pairs; a construction that
// dead-ends is discarded and restarted (at most 1000 restarts). Deterministic
// given seed.
Graph gen_random_regular(int64_t n, int k, uint64_t seed);

// Exact girth by BFS from every vertex. Returns kAcyclic for forests
// (possible only when k <= 1).
inline constexpr int64_t kAcyclic = -1;
int64_t girth(const Graph& g);

struct GirthCheck {
    bool applicable = false;  // false when k == 2 (log base k-1 undefined)
    bool ok = false;
    int64_t threshold = 0;  // 2*ceil(alpha*log_{k-1} n) + 1
    int64_t girth = 0;
    int64_t margin = 0;  // girth - threshold
};
GirthCheck check_girth_assumption(const Graph& g, double alpha);

struct LambdaEstimate {
    double lambda = 0.0;        // estimate of max{lambda_2, |lambda_n|}
    int64_t iterations = 0;
    bool converged = false;     // false: hit the iteration cap, value degraded
};
// Power iteration on the adjacency operator with the all-ones eigenvector
// (eigenvalue exactly k) deflated each step. Requires a connected graph.
LambdaEstimate adjacency_lambda(const Graph& g, double tol = 1e-8);

bool is_connected(const Graph& g);

// Text format: line 1 "n k"; then n lines of k ascending neighbor ids.
// write/read round-trip bit-exactly.
void write_graph(const Graph& g, std::ostream& os);
Graph read_graph(std::istream& is);
void write_graph_file(const Graph& g, const std::string& path);
Graph read_graph_file(const std::string& path);

}  // namespace rwbal
