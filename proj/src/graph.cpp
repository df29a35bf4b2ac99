#include "rwbal/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "rwbal/rng.hpp"

namespace rwbal {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

Graph build_graph(const std::vector<std::vector<int32_t>>& rows) {
    if (rows.empty()) fail("build_graph: empty input");
    const int64_t n = static_cast<int64_t>(rows.size());
    const size_t k = rows[0].size();
    if (k == 0) fail("build_graph: vertex 0 has no neighbors");

    Graph g;
    g.n = n;
    g.k = static_cast<int>(k);
    g.adj.resize(n * static_cast<int64_t>(k));

    for (int64_t v = 0; v < n; ++v) {
        if (rows[v].size() != k)
            fail("build_graph: not regular, vertex " + std::to_string(v) + " has degree " +
                 std::to_string(rows[v].size()) + " but expected " + std::to_string(k));
        std::vector<int32_t> row = rows[v];
        std::sort(row.begin(), row.end());
        for (size_t j = 0; j < k; ++j) {
            int32_t u = row[j];
            if (u < 0 || u >= n)
                fail("build_graph: vertex " + std::to_string(v) + " lists out-of-range neighbor " +
                     std::to_string(u));
            if (u == v) fail("build_graph: self-loop at vertex " + std::to_string(v));
            if (j > 0 && row[j] == row[j - 1])
                fail("build_graph: duplicate neighbor " + std::to_string(u) + " at vertex " +
                     std::to_string(v));
            g.adj[v * static_cast<int64_t>(k) + static_cast<int64_t>(j)] = u;
        }
    }
    // symmetry: u in adj[v] iff v in adj[u]
    for (int64_t v = 0; v < n; ++v) {
        for (int32_t u : g.neighbors(v)) {
            auto nu = g.neighbors(u);
            if (!std::binary_search(nu.begin(), nu.end(), static_cast<int32_t>(v)))
                fail("build_graph: asymmetric edge, vertex " + std::to_string(v) + " lists " +
                     std::to_string(u) + " but not vice versa");
        }
    }
    return g;
}

Graph gen_cycle(int64_t n) {
    if (n < 3) fail("gen_cycle: need n >= 3");
    Graph g;
    g.n = n;
    g.k = 2;
    g.adj.resize(2 * n);
    for (int64_t v = 0; v < n; ++v) {
        auto a = static_cast<int32_t>((v + n - 1) % n);
        auto b = static_cast<int32_t>((v + 1) % n);
        if (a > b) std::swap(a, b);
        g.adj[2 * v] = a;
        g.adj[2 * v + 1] = b;
    }
    return g;
}

Graph gen_circulant(int64_t n, const std::vector<int32_t>& offsets) {
    if (offsets.empty()) fail("gen_circulant: no offsets");
    for (size_t i = 0; i < offsets.size(); ++i) {
        if (offsets[i] <= 0) fail("gen_circulant: offsets must be positive");
        if (i > 0 && offsets[i] <= offsets[i - 1])
            fail("gen_circulant: offsets must be strictly ascending");
    }
    if (2 * static_cast<int64_t>(offsets.back()) >= n)
        fail("gen_circulant: max offset must be < n/2 (degree would collapse)");
    std::vector<std::vector<int32_t>> rows(n);
    for (int64_t v = 0; v < n; ++v) {
        for (int32_t o : offsets) {
            rows[v].push_back(static_cast<int32_t>((v + o) % n));
            rows[v].push_back(static_cast<int32_t>((v + n - o) % n));
        }
    }
    return build_graph(rows);  // catches any residual degree defect
}

Graph gen_random_regular(int64_t n, int k, uint64_t seed) {
    if (k < 1 || k >= n) fail("gen_random_regular: need 1 <= k < n");
    if ((n * k) % 2 != 0) fail("gen_random_regular: n*k must be even");

    Rng rng(seed);
    const int max_restarts = 1000;
    for (int attempt = 0; attempt < max_restarts; ++attempt) {
        std::vector<int32_t> stubs;
        stubs.reserve(n * k);
        for (int64_t v = 0; v < n; ++v)
            for (int j = 0; j < k; ++j) stubs.push_back(static_cast<int32_t>(v));

        std::vector<std::vector<int32_t>> rows(n);
        bool stuck = false;
        while (!stubs.empty()) {
            bool paired = false;
            // Random admissible pair among remaining stubs; after enough
            // misses, scan exhaustively to distinguish bad luck from a
            // genuine dead end.
            for (int tries = 0; tries < 64; ++tries) {
                size_t i = rng.below(stubs.size());
                size_t j = rng.below(stubs.size() - 1);
                if (j >= i) ++j;
                int32_t u = stubs[i], v = stubs[j];
                if (u == v) continue;
                if (std::find(rows[u].begin(), rows[u].end(), v) != rows[u].end()) continue;
                rows[u].push_back(v);
                rows[v].push_back(u);
                if (i < j) std::swap(i, j);
                stubs[i] = stubs.back();
                stubs.pop_back();
                stubs[j] = stubs.back();
                stubs.pop_back();
                paired = true;
                break;
            }
            if (paired) continue;
            bool any = false;
            for (size_t i = 0; i < stubs.size() && !any; ++i)
                for (size_t j = i + 1; j < stubs.size() && !any; ++j) {
                    int32_t u = stubs[i], v = stubs[j];
                    if (u != v &&
                        std::find(rows[u].begin(), rows[u].end(), v) == rows[u].end())
                        any = true;
                }
            if (!any) {
                stuck = true;
                break;
            }
        }
        if (!stuck) return build_graph(rows);
    }
    throw std::runtime_error(
        "gen_random_regular: restart cap exceeded (k too large relative to n?)");
}

int64_t girth(const Graph& g) {
    const int64_t n = g.n;
    int64_t best = kAcyclic;
    std::vector<int64_t> dist(n);
    std::vector<int32_t> parent(n);
    std::vector<int64_t> q(n);
    for (int64_t root = 0; root < n; ++root) {
        std::fill(dist.begin(), dist.end(), -1);
        size_t head = 0, tail = 0;
        q[tail++] = root;
        dist[root] = 0;
        parent[root] = -1;
        const int64_t depth_cap = (best == kAcyclic) ? n : best / 2;
        while (head < tail) {
            int64_t u = q[head++];
            if (dist[u] > depth_cap) break;
            for (int32_t v : g.neighbors(u)) {
                if (v == parent[u]) {
                    parent[u] = -2;  // skip the tree edge back once; parallel edges impossible
                    continue;
                }
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    parent[v] = static_cast<int32_t>(u);
                    q[tail++] = v;
                } else {
                    int64_t cyc = dist[u] + dist[v] + 1;
                    if (best == kAcyclic || cyc < best) best = cyc;
                }
            }
        }
    }
    return best;
}

GirthCheck check_girth_assumption(const Graph& g, double alpha) {
    if (alpha <= 0) fail("check_girth_assumption: alpha must be positive");
    GirthCheck r;
    r.girth = girth(g);
    if (g.k < 3) return r;  // log base k-1 undefined or trivial: inapplicable
    r.applicable = true;
    double log_km1_n = std::log(static_cast<double>(g.n)) / std::log(static_cast<double>(g.k - 1));
    r.threshold = 2 * static_cast<int64_t>(std::ceil(alpha * log_km1_n)) + 1;
    r.ok = (r.girth != kAcyclic) && r.girth >= r.threshold;
    r.margin = r.girth - r.threshold;
    return r;
}

bool is_connected(const Graph& g) {
    if (g.n == 0) return false;
    std::vector<char> seen(g.n, 0);
    std::vector<int64_t> stack{0};
    seen[0] = 1;
    int64_t count = 1;
    while (!stack.empty()) {
        int64_t u = stack.back();
        stack.pop_back();
        for (int32_t v : g.neighbors(u))
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
    }
    return count == g.n;
}

LambdaEstimate adjacency_lambda(const Graph& g, double tol) {
    if (!is_connected(g)) fail("adjacency_lambda: graph must be connected");
    const int64_t n = g.n;
    LambdaEstimate out;
    if (n == 1) {
        out.converged = true;
        return out;
    }

    // Deterministic pseudo-random start vector, all-ones component removed.
    Rng rng(0x6C616D626461ULL);  // "lambda"
    std::vector<double> x(n), y(n);
    for (auto& xi : x) xi = rng.unit() - 0.5;

    auto deflate = [&](std::vector<double>& v) {
        double mean = 0;
        for (double vi : v) mean += vi;
        mean /= static_cast<double>(n);
        for (double& vi : v) vi -= mean;
    };
    auto normalize = [&](std::vector<double>& v) {
        double s = 0;
        for (double vi : v) s += vi * vi;
        s = std::sqrt(s);
        if (s == 0) {
            v[0] = 1.0;
            v[1] = -1.0;
            s = std::sqrt(2.0);
        }
        for (double& vi : v) vi /= s;
        return s;
    };

    deflate(x);
    normalize(x);
    double prev = 0.0;
    const int64_t cap = 100000;
    for (int64_t it = 1; it <= cap; ++it) {
        for (int64_t v = 0; v < n; ++v) {
            double s = 0;
            for (int32_t u : g.neighbors(v)) s += x[u];
            y[v] = s;
        }
        deflate(y);
        x.swap(y);
        double est = normalize(x);  // ||A x_prev|| with x_prev unit: Rayleigh-like modulus
        out.lambda = est;
        out.iterations = it;
        if (it > 1 && std::abs(est - prev) < tol) {
            out.converged = true;
            return out;
        }
        prev = est;
    }
    out.converged = false;  // report last iterate, degraded confidence
    return out;
}

void write_graph(const Graph& g, std::ostream& os) {
    os << g.n << ' ' << g.k << '\n';
    for (int64_t v = 0; v < g.n; ++v) {
        auto row = g.neighbors(v);
        for (int j = 0; j < g.k; ++j) {
            if (j) os << ' ';
            os << row[j];
        }
        os << '\n';
    }
}

Graph read_graph(std::istream& is) {
    int64_t n = 0;
    int k = 0;
    if (!(is >> n >> k)) fail("read_graph: malformed header, expected 'n k'");
    if (n <= 0 || k <= 0) fail("read_graph: non-positive n or k");
    std::vector<std::vector<int32_t>> rows(n, std::vector<int32_t>(k));
    for (int64_t v = 0; v < n; ++v)
        for (int j = 0; j < k; ++j)
            if (!(is >> rows[v][j]))
                fail("read_graph: truncated adjacency at vertex " + std::to_string(v));
    return build_graph(rows);
}

void write_graph_file(const Graph& g, const std::string& path) {
    std::ofstream f(path);
    if (!f) fail("cannot open for writing: " + path);
    write_graph(g, f);
}

Graph read_graph_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail("cannot open for reading: " + path);
    return read_graph(f);
}

}  // namespace rwbal
