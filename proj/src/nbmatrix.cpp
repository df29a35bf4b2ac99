#include "rwbal/nbmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rwbal {

namespace {

constexpr int64_t kDenseGuard = 4096;

// y = A x for a row block: (A X)[u][*] = sum over neighbors w of X[w][*].
void adj_times(const Graph& g, const std::vector<double>& x, std::vector<double>& y) {
    const int64_t n = g.n;
    std::fill(y.begin(), y.end(), 0.0);
    for (int64_t u = 0; u < n; ++u) {
        double* yu = y.data() + u * n;
        for (int32_t w : g.neighbors(u)) {
            const double* xw = x.data() + static_cast<int64_t>(w) * n;
            for (int64_t v = 0; v < n; ++v) yu[v] += xw[v];
        }
    }
}

}  // namespace

NbScan::NbScan(const Graph& g) : g_(g) {
    if (g.n > kDenseGuard) throw std::invalid_argument("NbScan: n exceeds dense guard (4096)");
    if (g.k < 2) throw std::invalid_argument("NbScan: need k >= 2");
    const int64_t n = g.n;
    cur_counts_.assign(n * n, 0);
    cur_probs_.assign(n * n, 0.0);
    for (int64_t u = 0; u < n; ++u)
        for (int32_t v : g.neighbors(u)) {
            cur_counts_[u * n + v] = 1;
            cur_probs_[u * n + v] = 1.0 / g.k;
        }
    // prev slots represent t-1; at t=1 they stand in for A^(0) = I.
    prev_counts_.assign(n * n, 0);
    prev_probs_.assign(n * n, 0.0);
    for (int64_t u = 0; u < n; ++u) {
        prev_counts_[u * n + u] = 1;
        prev_probs_[u * n + u] = 1.0;
    }
}

void NbScan::advance() {
    const int64_t n = g_.n;
    const int64_t k = g_.k;

    if (counts_valid_) {
        // next = A*cur - coef*prev, coef = k at the t=1 step, else k-1.
        const int64_t coef = (t_ == 1) ? k : (k - 1);
        std::vector<int64_t> next(n * n, 0);
        bool overflow = false;
        for (int64_t u = 0; u < n && !overflow; ++u) {
            int64_t* row = next.data() + u * n;
            for (int32_t w : g_.neighbors(u)) {
                const int64_t* cw = cur_counts_.data() + static_cast<int64_t>(w) * n;
                for (int64_t v = 0; v < n; ++v) {
                    if (__builtin_add_overflow(row[v], cw[v], &row[v])) {
                        overflow = true;
                        break;
                    }
                }
                if (overflow) break;
            }
            if (overflow) break;
            const int64_t* pv = prev_counts_.data() + u * n;
            for (int64_t v = 0; v < n; ++v) {
                int64_t sub;
                if (__builtin_mul_overflow(coef, pv[v], &sub) ||
                    __builtin_sub_overflow(row[v], sub, &row[v])) {
                    overflow = true;
                    break;
                }
            }
        }
        if (overflow) {
            counts_valid_ = false;
            prev_counts_.clear();
            cur_counts_.clear();
        } else {
            prev_counts_ = std::move(cur_counts_);
            cur_counts_ = std::move(next);
        }
    }

    // Probability-space recurrence, valid for all t:
    //   P^(2) = (A P^(1) - I) / (k-1),  P^(t+1) = (A P^(t) - P^(t-1)) / (k-1).
    // prev_probs_ holds I at t=1, so the same formula covers both cases.
    std::vector<double> next_p(n * n, 0.0);
    adj_times(g_, cur_probs_, next_p);
    const double inv = 1.0 / static_cast<double>(k - 1);
    for (int64_t i = 0; i < n * n; ++i) next_p[i] = (next_p[i] - prev_probs_[i]) * inv;
    prev_probs_ = std::move(cur_probs_);
    cur_probs_ = std::move(next_p);
    ++t_;
}

double NbScan::deviation() const {
    const double target = 1.0 / static_cast<double>(g_.n);
    double m = 0;
    for (double p : cur_probs_) m = std::max(m, std::abs(p - target));
    return m;
}

double NbScan::max_prob() const {
    double m = 0;
    for (double p : cur_probs_) m = std::max(m, p);
    return m;
}

double NbScan::max_diag_prob() const {
    double m = 0;
    for (int64_t u = 0; u < g_.n; ++u) m = std::max(m, cur_probs_[u * g_.n + u]);
    return m;
}

int64_t NbScan::max_abs_diag_count() const {
    int64_t m = 0;
    for (int64_t u = 0; u < g_.n; ++u)
        m = std::max(m, std::abs(cur_counts_[u * g_.n + u]));
    return m;
}

NbMatrices nb_matrices(const Graph& g, int64_t t) {
    if (t < 1) throw std::invalid_argument("nb_matrices: need t >= 1");
    NbScan scan(g);
    while (scan.t() < t) scan.advance();
    NbMatrices out;
    out.t = t;
    out.n = g.n;
    out.counts_valid = scan.counts_valid();
    if (out.counts_valid) out.counts = scan.counts();
    out.probs = scan.probs();
    return out;
}

double uniform_deviation(const Graph& g, int64_t t) {
    NbScan scan(g);
    while (scan.t() < t) scan.advance();
    return scan.deviation();
}

MixingCertificate mixing_certificate(const Graph& g, int64_t t_max) {
    MixingCertificate out;
    out.t_max = t_max;
    out.threshold = (1.0 - 2.0 / g.k) / static_cast<double>(g.n);
    out.deviation_curve.reserve(t_max);
    NbScan scan(g);
    for (int64_t t = 1; t <= t_max; ++t) {
        if (t > 1) scan.advance();
        out.deviation_curve.push_back(scan.deviation());
    }
    // smallest t such that the deviation stays within threshold through t_max
    int64_t first = -1;
    for (int64_t t = t_max; t >= 1; --t) {
        if (out.deviation_curve[t - 1] <= out.threshold)
            first = t;
        else
            break;
    }
    if (first > 0) out.certified_t = first;
    return out;
}

ReturnProbCheck return_prob_check(const Graph& g, double alpha, int64_t horizon) {
    ReturnProbCheck out;
    out.horizon = horizon;
    out.bound = std::pow(static_cast<double>(g.n), -alpha);
    GirthCheck gc = check_girth_assumption(g, alpha);
    out.girth = gc.girth;
    out.threshold = gc.threshold;
    if (!gc.applicable || !gc.ok) return out;  // verdict: inapplicable
    out.applicable = true;

    const int64_t m = g.directed_edges();
    if (m > 2048)
        throw std::invalid_argument("return_prob_check: n*k exceeds dense edge guard (2048)");
    const int64_t n = g.n;
    const int k = g.k;

    // Directed-edge chain: edge id e = tail*k + j points at head adj[e].
    // dist[e][f] = Pr(walk from start edge e is on edge f after u steps).
    std::vector<double> dist(m * m, 0.0), next(m * m, 0.0);
    for (int64_t e = 0; e < m; ++e) dist[e * m + e] = 1.0;

    const double step_p = 1.0 / static_cast<double>(k - 1);
    NbScan scan(g);

    out.exact_curve.reserve(horizon);
    out.loose_curve.reserve(horizon);
    for (int64_t u = 1; u <= horizon; ++u) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int64_t e = 0; e < m; ++e) {
            const double* de = dist.data() + e * m;
            double* ne = next.data() + e * m;
            for (int64_t f = 0; f < m; ++f) {
                double p = de[f];
                if (p == 0.0) continue;
                const int64_t tail = f / k;
                const int32_t head = g.adj[f];
                auto row = g.neighbors(head);
                for (int j = 0; j < k; ++j) {
                    if (row[j] == tail) continue;  // no backtracking
                    ne[static_cast<int64_t>(head) * k + j] += p * step_p;
                }
            }
        }
        dist.swap(next);

        double worst = 0.0;
        for (int64_t e = 0; e < m; ++e) {
            const int32_t start_head = g.adj[e];
            const double* de = dist.data() + e * m;
            double ret = 0.0;
            for (int64_t f = 0; f < m; ++f)
                if (g.adj[f] == start_head) ret += de[f];
            worst = std::max(worst, ret);
        }
        out.exact_curve.push_back(worst);

        if (u > 1) scan.advance();
        out.loose_curve.push_back(scan.max_diag_prob() * static_cast<double>(k) / (k - 1));
    }

    out.ok = true;
    for (double p : out.exact_curve)
        if (p > out.bound + 1e-12) out.ok = false;
    return out;
}

}  // namespace rwbal
