#include "rwbal/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rwbal/nbwalk.hpp"
#include "rwbal/stats.hpp"

namespace rwbal {

namespace {

constexpr double kE = 2.718281828459045;
constexpr int kLevelCap = 400;  // recursion safety valve

[[noreturn]] void diverged(const char* scheme) {
    throw std::domain_error(std::string(scheme) +
                            ": level recursion does not contract at these parameters "
                            "(n too small for this c/alpha regime)");
}

}  // namespace

double bernstein_corollary_bound(const ConcentrationSpec& spec, double lambda) {
    if (spec.B <= 0 || spec.m < 0 || spec.N < 0)
        throw std::invalid_argument("bernstein_corollary_bound: bad spec");
    if (lambda < 2.0 * static_cast<double>(spec.N) * spec.m)
        throw std::domain_error("bernstein_corollary_bound: lambda < 2 N m, corollary inapplicable");
    return std::exp(-3.0 * lambda / (16.0 * spec.B));
}

TailCheckReport empirical_tail_check(const ProcessSampler& sampler, const ConcentrationSpec& spec,
                                     int64_t trials, int grid_points, uint64_t seed) {
    if (trials < 1 || grid_points < 2)
        throw std::invalid_argument("empirical_tail_check: need trials >= 1, grid >= 2");
    const double lo = 2.0 * static_cast<double>(spec.N) * spec.m;
    const double hi = static_cast<double>(spec.N) * spec.B;
    if (hi <= lo)
        throw std::invalid_argument("empirical_tail_check: grid is empty (N B <= 2 N m)");

    std::vector<double> grid(grid_points);
    for (int i = 0; i < grid_points; ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / (grid_points - 1);

    Rng rng(seed);
    std::vector<double> z(spec.N);
    std::vector<int64_t> exceed(grid_points, 0);
    double sum_all = 0.0;
    for (int64_t t = 0; t < trials; ++t) {
        sampler(rng, std::span<double>(z));
        double s = 0.0;
        for (double v : z) {
            if (v < -1e-12 || v > spec.B + 1e-12)
                throw std::invalid_argument("empirical_tail_check: sampler left [0, B]");
            s += v;
        }
        sum_all += s;
        for (int i = 0; i < grid_points; ++i)
            if (s >= grid[i]) exceed[i] += 1;
    }

    TailCheckReport rep;
    rep.empirical_mean = sum_all / (static_cast<double>(trials) * static_cast<double>(spec.N));
    // Marginal mean <= m is implied by the conditional declaration; a clear
    // violation means the declaration, not the corollary, is wrong.
    const double mean_se =
        spec.B / (2.0 * std::sqrt(static_cast<double>(trials) * static_cast<double>(spec.N)));
    rep.declared_mean_ok = rep.empirical_mean <= spec.m + 3.0 * mean_se;

    rep.all_ok = rep.declared_mean_ok;
    for (int i = 0; i < grid_points; ++i) {
        TailCheckRow row;
        row.lambda = grid[i];
        row.empirical = static_cast<double>(exceed[i]) / static_cast<double>(trials);
        row.bound = bernstein_corollary_bound(spec, grid[i]);
        row.mc_stderr = std::sqrt(row.empirical * (1.0 - row.empirical) /
                                  static_cast<double>(trials));
        row.ok = row.empirical <= row.bound + 3.0 * row.mc_stderr;
        if (!row.ok) rep.all_ok = false;
        rep.rows.push_back(row);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Theory calculators. All work in x = beta/n units where convenient.
// ---------------------------------------------------------------------------

TheoryReport theory_bounds_scheme1(int64_t n, double c) {
    if (n < 3 || c <= 0) throw std::invalid_argument("theory_bounds_scheme1: need n >= 3, c > 0");
    const double nd = static_cast<double>(n);
    const double ln_n = std::log(nd);
    const double thr = 8.0 * c * ln_n * ln_n;

    TheoryReport rep;
    rep.scheme = "scheme1";
    rep.n = n;
    rep.c = c;
    rep.beta_first = 6;

    double x = 1.0 / (2.0 * kE);  // beta_6 / n
    rep.beta.push_back(nd * x);
    int i = 6;
    while (kE * nd * x * x >= thr) {
        x = kE * x * x;  // beta_{i+1} = e n (beta_i / n)^2
        rep.beta.push_back(nd * x);
        ++i;
        if (i > kLevelCap) diverged("theory_bounds_scheme1");
    }
    rep.i_star = i;
    rep.beta.push_back(thr);  // beta_{i*+1} = 8 c (ln n)^2
    rep.beta.push_back(0.8);  // beta_{i*+2}
    rep.final_bound = rep.i_star + 2;

    rep.failure_terms.push_back(
        {"levels_bernstein_union", static_cast<double>(rep.i_star - 4) * std::pow(nd, -1.5)});
    rep.failure_terms.push_back(
        {"markov_tail", (kE * nd / 2.0) * (thr / nd) * (thr / nd) / 0.8});
    rep.failure_terms.push_back({"reset_count_tail", std::exp(-nd / (340.0 * c * ln_n))});

    const double a = 0.5;  // free exponent in the n-threshold condition
    rep.applicability.push_back(
        {"n >= exp(10/c)", nd >= std::exp(10.0 / c), std::exp(10.0 / c)});
    rep.applicability.push_back({"n >= (40c/(a e))^(1/(1-a)), a=1/2",
                                 nd >= std::pow(40.0 * c / (a * kE), 1.0 / (1.0 - a)),
                                 std::pow(40.0 * c / (a * kE), 1.0 / (1.0 - a))});
    rep.applicability.push_back({"n >= 3", nd >= 3.0, 3.0});
    return rep;
}

namespace {

struct TwoPhaseConstants {
    const char* name;
    int first;          // starting level with beta_first = n / (den * e)
    double den;         // 2, 3 or 6
    double low_coef;    // beta_{i+1} = low_coef * e * n * x^2 below i*
    double thr1_coef;   // i*: x_{i-1}^2 < thr1_coef * c * ln n * n^{-gexp}
    double bern_coef;   // beta_{i*} = bern_coef * e * c * ln n * n^{1-gexp}
    double high_coef;   // beta_{i+1} = high_coef * e * n * x^2 above i*
    double thr2_coef;   // i**: high_coef * e * n * x_{i-1}^2 <= thr2_coef * c * (ln n)^2
    double split;       // 1 = plain union bound, 2 = even/odd split factor
};

// Shared two-threshold recursion for schemes 2, 3 and the low-girth variant.
// gexp is the exponent in the i* threshold (gamma, or alpha/(2 ln ln n)).
void run_two_phase(TheoryReport& rep, const TwoPhaseConstants& tc, double gexp) {
    const double nd = static_cast<double>(rep.n);
    const double ln_n = std::log(nd);
    const double c = rep.c;

    rep.beta_first = tc.first;
    double x = 1.0 / (tc.den * kE);
    rep.beta.push_back(nd * x);
    const double thr1 = tc.thr1_coef * c * ln_n * std::pow(nd, -gexp);

    // i* = smallest i > first with (beta_{i-1}/n)^2 < thr1
    int i = tc.first + 1;
    while (x * x >= thr1) {
        x = tc.low_coef * kE * x * x;
        rep.beta.push_back(nd * x);
        ++i;
        if (i > kLevelCap) diverged(tc.name);
        if (nd * x > nd) diverged(tc.name);  // beta above n: recursion left the meaningful range
    }
    rep.i_star = i;

    // Bernstein-sized beta_{i*} (not the recursion value).
    x = tc.bern_coef * kE * c * ln_n * std::pow(nd, -gexp);
    rep.beta.push_back(nd * x);

    const double thr2 = tc.thr2_coef * c * ln_n * ln_n;
    i = rep.i_star + 1;
    while (tc.high_coef * kE * nd * x * x > thr2) {
        const double nx = tc.high_coef * kE * x * x;
        if (nx >= x) diverged(tc.name);
        x = nx;
        rep.beta.push_back(nd * x);
        ++i;
        if (i > kLevelCap) diverged(tc.name);
    }
    rep.i_star_star = i;
    rep.beta.push_back(thr2);  // beta_{i**}
    rep.beta.push_back(0.8);   // beta_{i**+1}

    const double early_each =
        tc.split * std::exp(-(3.0 / (16.0 * tc.split)) * tc.bern_coef * kE *
                            std::pow(nd, 1.0 - gexp));
    rep.failure_terms.push_back(
        {"early_levels_tail", static_cast<double>(rep.i_star - tc.first) * early_each});
    rep.failure_terms.push_back({"mid_levels_tail",
                                 static_cast<double>(rep.i_star_star - rep.i_star) * tc.split *
                                     std::pow(nd, -1.5)});
    rep.failure_terms.push_back(
        {"markov_tail", (kE * nd / 2.0) * (thr2 / nd) * (thr2 / nd) / 0.8});
}

}  // namespace


int scheme2_L(double c, int k, double alpha) {
    return static_cast<int>(std::floor(2.0 * (c * std::log(k - 1.0) / (2.0 * alpha) + 1.0)));
}

int scheme3_L(double c, int k, double alpha) {
    return static_cast<int>(std::floor(2.0 * (c / alpha * std::log(k - 1.0) + 1.0)));
}

int lowgirth_L(int64_t n, double c, int k, double alpha) {
    const double lln = std::log(std::log(static_cast<double>(n)));
    return static_cast<int>(std::floor(2.0 * (c / alpha * std::log(k - 1.0) * lln + 1.0)));
}

TheoryReport theory_bounds_scheme2(int64_t n, double c, int k, double alpha) {
    if (n < 3 || c <= 0 || k < 3 || alpha <= 0)
        throw std::invalid_argument("theory_bounds_scheme2: need n >= 3, c > 0, k >= 3, alpha > 0");
    TheoryReport rep;
    rep.scheme = "scheme2";
    rep.n = n;
    rep.c = c;
    rep.k = k;
    rep.alpha = alpha;

    const double gamma = std::min(0.5, alpha);
    TwoPhaseConstants tc{"theory_bounds_scheme2", 9, 3.0, 2.0, 2.0, 4.0, 1.0, 8.0, 1.0};
    run_two_phase(rep, tc, gamma);

    rep.L = scheme2_L(c, k, alpha);
    rep.r.resize(rep.i_star_star + 2);
    for (int i = 0; i <= rep.i_star_star + 1; ++i)
        rep.r[i] = (i <= rep.i_star) ? i
                                     : rep.i_star + static_cast<int64_t>(i - rep.i_star) *
                                                        (rep.L + 1);
    rep.final_bound = rep.r[rep.i_star_star + 1];
    return rep;
}

TheoryReport theory_bounds_scheme3(int64_t n, double c, int k, double alpha) {
    if (n < 3 || c <= 0 || k < 3 || alpha <= 0)
        throw std::invalid_argument("theory_bounds_scheme3: need n >= 3, c > 0, k >= 3, alpha > 0");
    TheoryReport rep;
    rep.scheme = "scheme3";
    rep.n = n;
    rep.c = c;
    rep.k = k;
    rep.alpha = alpha;

    const double gamma = std::min(0.5, alpha);
    TwoPhaseConstants tc{"theory_bounds_scheme3", 18, 6.0, 5.0, 9.0, 45.0, 4.0, 16.0, 2.0};
    run_two_phase(rep, tc, gamma);

    rep.L = scheme3_L(c, k, alpha);
    rep.r.resize(rep.i_star_star + 2);
    for (int i = 0; i <= rep.i_star_star + 1; ++i)
        rep.r[i] = (i <= rep.i_star) ? i
                                     : rep.i_star + static_cast<int64_t>(i - rep.i_star) *
                                                        (rep.L + 1);
    rep.final_bound = rep.r[rep.i_star_star + 1];
    return rep;
}

TheoryReport theory_bounds_lowgirth(int64_t n, double c, int k, double alpha) {
    if (n < 16 || c <= 0 || k < 3 || alpha <= 0)
        throw std::invalid_argument(
            "theory_bounds_lowgirth: need n >= 16, c > 0, k >= 3, alpha > 0");
    TheoryReport rep;
    rep.scheme = "lowgirth";
    rep.n = n;
    rep.c = c;
    rep.k = k;
    rep.alpha = alpha;

    const double lln = std::log(std::log(static_cast<double>(n)));
    const double gexp = alpha / (2.0 * lln);
    TwoPhaseConstants tc{"theory_bounds_lowgirth", 18, 6.0, 5.0, 9.0, 45.0, 6.0, 16.0, 2.0};
    run_two_phase(rep, tc, gexp);

    rep.L = lowgirth_L(n, c, k, alpha);
    // r_i = i up to i*, then r_{i-1} + 2^{i-i*} + 1 through i**, then +L+1.
    rep.r.resize(rep.i_star_star + 2);
    for (int i = 0; i <= rep.i_star_star + 1; ++i) {
        if (i <= rep.i_star)
            rep.r[i] = i;
        else if (i <= rep.i_star_star)
            rep.r[i] = rep.r[i - 1] + (int64_t{1} << (i - rep.i_star)) + 1;
        else
            rep.r[i] = rep.r[i - 1] + rep.L + 1;
    }
    rep.final_bound = rep.r[rep.i_star_star + 1];
    return rep;
}

// ---------------------------------------------------------------------------

Assumption1Estimate estimate_assumption1(const Graph& g, double c, int64_t trials, uint64_t seed,
                                         int d, int64_t rho) {
    if (trials < 100) throw std::invalid_argument("estimate_assumption1: need trials >= 100");
    if (rho <= 0)
        rho = static_cast<int64_t>(std::floor(c * std::log(static_cast<double>(g.n))));
    if (rho < 1) throw std::invalid_argument("estimate_assumption1: rho < 1");

    int64_t hits = 0;
    for (int64_t t = 0; t < trials; ++t) {
        Rng rank_rng(derive_seed(derive_seed(seed, t), kStreamRanks));
        Rng edge_rng(derive_seed(derive_seed(seed, t), kStreamEdges));
        WalkerEnsemble ens = spawn_uniform(g, d, edge_rng, true);
        // Only the intersection branch can fire at times 1..rho-1.
        for (int64_t s = 1; s < rho; ++s) {
            auto out = step_scheme1(g, ens, rank_rng, edge_rng, rho);
            if (out.reset) {
                hits += 1;
                break;
            }
        }
    }
    auto w = wilson95(hits, trials);
    Assumption1Estimate est;
    est.p_hat = w.p_hat;
    est.lo = w.lo;
    est.hi = w.hi;
    est.rho = rho;
    est.trials = trials;
    est.pass = w.hi <= 0.1;
    return est;
}

// ---------------------------------------------------------------------------

double psi(double x) {
    if (x <= 1.0) return 1.0;
    return x + std::sqrt(x * x - 1.0);
}

double qt_eval(int k, int64_t t, double x) {
    if (k < 3 || t < 1) throw std::invalid_argument("qt_eval: need k >= 3, t >= 1");
    const long double kk = k;
    const long double root = std::sqrt((kk - 1.0L) / kk);
    const long double q1 = 2.0L * static_cast<long double>(x) * root;
    if (t == 1) return static_cast<double>(q1);
    const long double q2 = root * (4.0L * x * x - 1.0L) - 1.0L / std::sqrt(kk * (kk - 1.0L));
    if (t == 2) return static_cast<double>(q2);
    long double prev = q1, cur = q2;
    for (int64_t i = 3; i <= t; ++i) {
        long double next = 2.0L * static_cast<long double>(x) * cur - prev;
        prev = cur;
        cur = next;
    }
    return static_cast<double>(cur);
}

double mu_analytic(int k, double lambda_tilde, int64_t t) {
    if (k < 3 || t < 1) throw std::invalid_argument("mu_analytic: need k >= 3, t >= 1");
    const double beta = psi(lambda_tilde / (2.0 * std::sqrt(k - 1.0))) / std::sqrt(k - 1.0);
    const double kd = k;
    double out = (kd - 1.0) / kd * static_cast<double>(t + 1) * std::pow(beta, t);
    if (t >= 2)
        out += 1.0 / (kd * (kd - 1.0)) * static_cast<double>(t - 1) * std::pow(beta, t - 2);
    return out;
}

// ---------------------------------------------------------------------------

Profiles profiles_from_trace(std::span<const int64_t> chosen, int64_t n) {
    std::vector<int32_t> loads(n, 0);
    int32_t max_load = 0;
    std::vector<int64_t> height_count;
    for (int64_t bin : chosen) {
        if (bin < 0 || bin >= n) throw std::invalid_argument("profiles_from_trace: bad bin id");
        const int32_t h = ++loads[bin];
        if (static_cast<size_t>(h) >= height_count.size()) height_count.resize(h + 1, 0);
        height_count[h] += 1;
        max_load = std::max(max_load, h);
    }
    Profiles p;
    p.nu.assign(max_load + 1, 0);
    p.mu.assign(max_load + 1, 0);
    std::vector<int64_t> level(max_load + 1, 0);
    for (int64_t v = 0; v < n; ++v) level[loads[v]] += 1;
    int64_t acc = 0;
    for (int i = max_load; i >= 0; --i) {
        acc += level[i];
        p.nu[i] = acc;
    }
    acc = 0;
    for (int i = max_load; i >= 1; --i) {
        acc += (i < static_cast<int>(height_count.size())) ? height_count[i] : 0;
        p.mu[i] = acc;
    }
    p.mu[0] = static_cast<int64_t>(chosen.size());
    return p;
}

}  // namespace rwbal
