#pragma once

#include <cstdint>
#include <vector>

namespace rwbal {

// Regularized incomplete gamma functions P(a,x), Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Chi-square survival function Pr(X >= x) with df degrees of freedom.
double chi2_sf(double x, int df);

struct WilsonInterval {
    double p_hat = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};
// 95% Wilson score interval.
WilsonInterval wilson95(int64_t successes, int64_t trials);

// Median of integer samples; returns a half-integer for even counts.
double median_of(std::vector<int32_t> xs);

struct TwoSampleResult {
    double stat = 0.0;
    int df = 0;
    double p_value = 1.0;
};
// Chi-square homogeneity test for two samples of small non-negative integers
// (max-load distributions). Adjacent categories are pooled until every
// expected cell count is at least 5.
TwoSampleResult chi2_two_sample(const std::vector<int32_t>& a, const std::vector<int32_t>& b);

}  // namespace rwbal
