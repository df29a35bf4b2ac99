#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <queue>
#include <stdexcept>

namespace oracles {

using rwbal::Graph;

std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n,
                                       std::vector<double>* vectors) {
    std::vector<double> v(n * n, 0.0);
    for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;

    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
        if (off < 1e-26) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = a[i * n + p], aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = a[p * n + i], aqi = a[q * n + i];
                    a[p * n + i] = c * api - s * aqi;
                    a[q * n + i] = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v[i * n + p], viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return a[x * n + x] < a[y * n + y]; });
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = a[order[i] * n + order[i]];
    if (vectors) {
        vectors->assign(n * n, 0.0);
        for (int col = 0; col < n; ++col)
            for (int row = 0; row < n; ++row)
                (*vectors)[row * n + col] = v[row * n + order[col]];
    }
    return eig;
}

namespace {

void walk_rec(const Graph& g, int32_t prev, int32_t cur, int left, int64_t* row) {
    if (left == 0) {
        row[cur] += 1;
        return;
    }
    for (int32_t w : g.neighbors(cur))
        if (w != prev) walk_rec(g, cur, w, left - 1, row);
}

}  // namespace

std::vector<int64_t> nb_walk_counts_bruteforce(const Graph& g, int t) {
    std::vector<int64_t> counts(g.n * g.n, 0);
    for (int64_t u = 0; u < g.n; ++u) walk_rec(g, -1, static_cast<int32_t>(u), t, counts.data() + u * g.n);
    return counts;
}

double exact_mu_t(const Graph& g, int64_t t) {
    const int n = static_cast<int>(g.n);
    auto counts = nb_walk_counts_bruteforce(g, static_cast<int>(t));
    const double denom = static_cast<double>(g.k) * std::pow(g.k - 1.0, static_cast<double>(t - 1));
    std::vector<double> p(n * n);
    for (int i = 0; i < n * n; ++i) p[i] = static_cast<double>(counts[i]) / denom;
    std::vector<double> vecs;
    auto eig = jacobi_eigenvalues(p, n, &vecs);
    // Drop the eigenvalue whose eigenvector is (closest to) constant.
    int drop = 0;
    double best = -1;
    for (int col = 0; col < n; ++col) {
        double dot = 0, norm = 0;
        for (int row = 0; row < n; ++row) {
            dot += vecs[row * n + col];
            norm += vecs[row * n + col] * vecs[row * n + col];
        }
        const double align = std::abs(dot) / std::sqrt(norm * n);
        if (align > best) {
            best = align;
            drop = col;
        }
    }
    double mu = 0;
    for (int col = 0; col < n; ++col)
        if (col != drop) mu = std::max(mu, std::abs(eig[col]));
    return mu;
}

int64_t girth_by_edge_deletion(const Graph& g) {
    int64_t best = rwbal::kAcyclic;
    std::vector<int64_t> dist(g.n);
    for (int64_t u = 0; u < g.n; ++u) {
        for (int32_t v : g.neighbors(u)) {
            if (v < u) continue;  // each undirected edge once
            std::fill(dist.begin(), dist.end(), -1);
            std::queue<int64_t> q;
            q.push(u);
            dist[u] = 0;
            while (!q.empty()) {
                int64_t x = q.front();
                q.pop();
                if (x == v) break;
                for (int32_t w : g.neighbors(x)) {
                    if ((x == u && w == v) || (x == v && w == u)) continue;  // deleted edge
                    if (dist[w] < 0) {
                        dist[w] = dist[x] + 1;
                        q.push(w);
                    }
                }
            }
            if (dist[v] > 0 && (best == rwbal::kAcyclic || dist[v] + 1 < best))
                best = dist[v] + 1;
        }
    }
    return best;
}

SimpleSimResult simple_power_of_d(const Graph& g, int d, int64_t balls, uint64_t trial_seed) {
    rwbal::Rng edges(rwbal::derive_seed(trial_seed, rwbal::kStreamEdges));
    std::vector<int32_t> loads(g.n, 0);
    SimpleSimResult out{0, {}};
    for (int64_t t = 0; t < balls; ++t) {
        int32_t best = -1;
        for (int j = 0; j < d; ++j) {
            const int64_t id = static_cast<int64_t>(edges.below(g.n * g.k));
            const int32_t v = g.adj[id];
            if (best < 0 || loads[v] < loads[best] || (loads[v] == loads[best] && v < best))
                best = v;
        }
        loads[best] += 1;
        out.max_load = std::max(out.max_load, loads[best]);
        out.chosen.push_back(best);
    }
    return out;
}

double cycle_intersection_prob_exact(int64_t n, int64_t rho) {
    // Walker 1 fixed at head 0 by rotation invariance; directions and walker
    // 2's start range over everything. Rotors: head_j(t) = h_j + t * sigma_j.
    std::vector<int64_t> stamp(n, -1);
    int64_t hits = 0, total = 0;
    for (int s1 = -1; s1 <= 1; s1 += 2) {
        for (int64_t h2 = 0; h2 < n; ++h2) {
            for (int s2 = -1; s2 <= 1; s2 += 2) {
                const int64_t id = total;
                ++total;
                stamp[0] = id;
                stamp[h2] = id;
                int64_t p1 = 0, p2 = h2;
                bool hit = false;
                for (int64_t t = 1; t < rho && !hit; ++t) {
                    p1 = (p1 + s1 + n) % n;
                    p2 = (p2 + s2 + n) % n;
                    if (stamp[p1] == id || stamp[p2] == id) hit = true;
                    stamp[p1] = id;
                    stamp[p2] = id;
                }
                if (hit) ++hits;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

namespace {

// K_4 step map from first principles: neighbors ascending, tail excluded.
void k4_step(int tail, int head, int rank, int* ntail, int* nhead) {
    int opts[3], cnt = 0;
    for (int v = 0; v < 4; ++v)
        if (v != head && v != tail) opts[cnt++] = v;
    *ntail = head;
    *nhead = opts[rank - 1];
}

double k4_rec(int t1, int h1, int t2, int h2, int visited, int64_t step, int64_t rho) {
    if (step >= rho) return 0.0;  // timer fires at rho; no earlier intersection
    double p = 0.0;
    for (int l1 = 1; l1 <= 2; ++l1)
        for (int l2 = 1; l2 <= 2; ++l2) {
            int a1, b1, a2, b2;
            k4_step(t1, h1, l1, &a1, &b1);
            k4_step(t2, h2, l2, &a2, &b2);
            if ((visited >> b1 & 1) || (visited >> b2 & 1)) {
                p += 0.25;
            } else {
                p += 0.25 * k4_rec(a1, b1, a2, b2, visited | 1 << b1 | 1 << b2, step + 1, rho);
            }
        }
    return p;
}

}  // namespace

double k4_intersection_prob_exact(int64_t rho) {
    double p = 0.0;
    int pairs = 0;
    for (int t1 = 0; t1 < 4; ++t1)
        for (int h1 = 0; h1 < 4; ++h1) {
            if (h1 == t1) continue;
            for (int t2 = 0; t2 < 4; ++t2)
                for (int h2 = 0; h2 < 4; ++h2) {
                    if (h2 == t2) continue;
                    ++pairs;
                    p += k4_rec(t1, h1, t2, h2, 1 << h1 | 1 << h2, 1, rho);
                }
        }
    return p / pairs;
}

Graph make_k4() {
    return rwbal::build_graph({{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}});
}

Graph make_petersen() {
    std::vector<std::vector<int32_t>> rows(10);
    for (int32_t i = 0; i < 5; ++i) {
        rows[i] = {static_cast<int32_t>((i + 1) % 5), static_cast<int32_t>((i + 4) % 5),
                   static_cast<int32_t>(i + 5)};
        rows[i + 5] = {static_cast<int32_t>(5 + (i + 2) % 5), static_cast<int32_t>(5 + (i + 3) % 5),
                       i};
    }
    return rwbal::build_graph(rows);
}

}  // namespace oracles
