#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rwbal/graph.hpp"

namespace rwbal {

// Exact non-backtracking walk-count matrix A^(t) and the step-t transition
// matrix P~^(t) = A^(t) / (k (k-1)^(t-1)). Built from
//   A^(1) = A,  A^(2) = A^2 - k I,  A^(t+1) = A A^(t) - (k-1) A^(t-1).
struct NbMatrices {
    int64_t t = 0;
    int64_t n = 0;
    bool counts_valid = true;       // false once integer counts overflowed;
                                    // probs keep evolving in probability space
    std::vector<int64_t> counts;    // n*n row-major, empty if !counts_valid
    std::vector<double> probs;      // n*n row-major, rows sum to 1

    int64_t count(int64_t u, int64_t v) const { return counts[u * n + v]; }
    double prob(int64_t u, int64_t v) const { return probs[u * n + v]; }
};

// Incremental scan over t = 1, 2, ... for the same graph. Dense work is
// guarded at n <= 4096; this machinery is for verification, not production.
class NbScan {
public:
    explicit NbScan(const Graph& g);
    void advance();  // t -> t+1

    int64_t t() const { return t_; }
    bool counts_valid() const { return counts_valid_; }
    const std::vector<int64_t>& counts() const { return cur_counts_; }
    const std::vector<double>& probs() const { return cur_probs_; }

    double deviation() const;   // max_{u,v} |P~_{uv} - 1/n|
    double max_prob() const;
    double max_diag_prob() const;
    int64_t max_abs_diag_count() const;

private:
    const Graph& g_;
    int64_t t_ = 1;
    bool counts_valid_ = true;
    std::vector<int64_t> prev_counts_, cur_counts_;
    std::vector<double> prev_probs_, cur_probs_;
};

NbMatrices nb_matrices(const Graph& g, int64_t t);

// Exact max_{u,v} |P~^(t)_{uv} - 1/n|.
double uniform_deviation(const Graph& g, int64_t t);

struct MixingCertificate {
    std::optional<int64_t> certified_t;   // smallest t with deviation <= (1-2/k)/n
                                          // sustained through t_max
    double threshold = 0.0;
    int64_t t_max = 0;
    std::vector<double> deviation_curve;  // deviation at t = 1..t_max
};
// Sustained-deviation certificate: once the scan deviation stays at or below
// (1-2/k)/n, the conditioned step kernel is <= 2/n via the k/(k-1) lift.
MixingCertificate mixing_certificate(const Graph& g, int64_t t_max = 64);

struct ReturnProbCheck {
    bool applicable = false;  // girth assumption must hold (and k >= 3)
    bool ok = false;
    double bound = 0.0;            // n^{-alpha}
    int64_t girth = 0;
    int64_t threshold = 0;
    int64_t horizon = 0;
    std::vector<double> exact_curve;   // max conditioned return prob per gap
    std::vector<double> loose_curve;   // (k/(k-1)) * max diag P~ per gap
};
// Exact conditioned return probability max_e Pr(V(t+u)=head(e) | start edge e)
// for every gap u in [1, horizon], computed on the directed-edge chain.
// Dense edge-level work guarded at n*k <= 8192.
ReturnProbCheck return_prob_check(const Graph& g, double alpha, int64_t horizon = 30);

}  // namespace rwbal
