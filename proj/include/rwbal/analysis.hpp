#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rwbal/graph.hpp"
#include "rwbal/rng.hpp"

namespace rwbal {

// ---------------------------------------------------------------------------
// Concentration corollary: adapted process 0 <= Z_j <= B with conditional
// means <= m gives Pr(sum_{j<=N} Z_j >= lambda) <= exp(-3 lambda / (16 B))
// whenever lambda >= 2 N m.
// ---------------------------------------------------------------------------

struct ConcentrationSpec {
    double B = 1.0;   // almost-sure bound per increment
    double m = 0.0;   // conditional-mean bound
    int64_t N = 0;    // number of summands
};

// Throws std::domain_error if lambda < 2 N m: outside the corollary's range
// there is no number to return.
double bernstein_corollary_bound(const ConcentrationSpec& spec, double lambda);

struct TailCheckRow {
    double lambda = 0.0;
    double empirical = 0.0;
    double bound = 0.0;
    double mc_stderr = 0.0;
    bool ok = false;
};

struct TailCheckReport {
    std::vector<TailCheckRow> rows;
    bool declared_mean_ok = true;  // false: sampler's empirical mean broke its declaration
    double empirical_mean = 0.0;
    bool all_ok = false;
};

// sampler(rng, out) must fill out with N adapted values in [0, B] whose
// conditional means are <= m by construction. Values outside [0, B] throw.
// A violated mean declaration is reported as such, not as a bound failure.
using ProcessSampler = std::function<void(Rng&, std::span<double>)>;
TailCheckReport empirical_tail_check(const ProcessSampler& sampler, const ConcentrationSpec& spec,
                                     int64_t trials, int grid_points, uint64_t seed);

// ---------------------------------------------------------------------------
// Theory calculators: the level recursions behind the three main theorems and
// the low-girth variant, evaluated mechanically with natural logs.
// ---------------------------------------------------------------------------

struct FailureTerm {
    std::string name;
    double value = 0.0;
};

struct Applicability {
    std::string name;
    bool satisfied = false;
    double required_n = 0.0;
};

struct TheoryReport {
    std::string scheme;
    int64_t n = 0;
    double c = 1.0;
    int k = 0;          // 0 when the calculator does not use it
    double alpha = 0.0; // 0 when unused
    int beta_first = 0;
    std::vector<double> beta;  // beta[i - beta_first]
    int i_star = -1;
    int i_star_star = -1;  // -1 for the first scheme (no second threshold)
    int L = 0;
    std::vector<int64_t> r;  // r[i] for i = 0..i**+1 (empty for scheme 1)
    int64_t final_bound = -1;
    std::vector<FailureTerm> failure_terms;
    std::vector<Applicability> applicability;

    double beta_at(int i) const { return beta[i - beta_first]; }
    int beta_last() const { return beta_first + static_cast<int>(beta.size()) - 1; }
};

TheoryReport theory_bounds_scheme1(int64_t n, double c);
TheoryReport theory_bounds_scheme2(int64_t n, double c, int k, double alpha);
TheoryReport theory_bounds_scheme3(int64_t n, double c, int k, double alpha);
TheoryReport theory_bounds_lowgirth(int64_t n, double c, int k, double alpha);

// The revisit-count constants L from the respective key lemmas.
int scheme2_L(double c, int k, double alpha);                // floor(2(c ln(k-1)/(2a) + 1))
int scheme3_L(double c, int k, double alpha);                // floor(2(c/a ln(k-1) + 1))
int lowgirth_L(int64_t n, double c, int k, double alpha);    // floor(2(c/a ln(k-1) lnln n + 1))

// ---------------------------------------------------------------------------
// Assumption estimators
// ---------------------------------------------------------------------------

struct Assumption1Estimate {
    double p_hat = 0.0;  // Pr(intersection reset strictly before the timer)
    double lo = 0.0, hi = 0.0;
    int64_t rho = 0;
    int64_t trials = 0;
    bool pass = false;  // upper CI end <= 0.1
};

// Monte Carlo estimate of Pr(T_1 < rho) for the intersecting scheme, with a
// Wilson 95% interval. rho = 0 means floor(c ln n).
Assumption1Estimate estimate_assumption1(const Graph& g, double c, int64_t trials, uint64_t seed,
                                         int d = 2, int64_t rho = 0);

// ---------------------------------------------------------------------------
// Appendix polynomial machinery
// ---------------------------------------------------------------------------

// psi(x) = 1 for x <= 1, else x + sqrt(x^2 - 1).
double psi(double x);

// q_t(x) three-term recurrence evaluated in extended precision:
//   q_1(x) = 2x sqrt((k-1)/k)
//   q_2(x) = sqrt((k-1)/k)(4x^2 - 1) - 1/sqrt(k(k-1))
//   q_{t+1}(x) = 2x q_t(x) - q_{t-1}(x)
double qt_eval(int k, int64_t t, double x);

// Analytic envelope for mu(t) = max_{i>=2} |mu_i(t)|:
//   ((k-1)/k)(t+1) beta^t + (1/(k(k-1)))(t-1) beta^{t-2},
// with beta = psi(lambda_tilde / (2 sqrt(k-1))) / sqrt(k-1).
double mu_analytic(int k, double lambda_tilde, int64_t t);

// ---------------------------------------------------------------------------
// Profile recomputation from a raw placement trace (cross-check against the
// allocator's incremental counters).
// ---------------------------------------------------------------------------

struct Profiles {
    std::vector<int64_t> nu;  // nu[i] = #bins with load >= i
    std::vector<int64_t> mu;  // mu[i] = #balls of height >= i (mu[0] = #balls)
};
Profiles profiles_from_trace(std::span<const int64_t> chosen, int64_t n);

}  // namespace rwbal
