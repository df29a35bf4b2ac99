#include "rwbal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace rwbal {

namespace {

// Series expansion of P(a,x), good for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x), good for x >= a+1 (modified Lentz).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_p: bad arguments");
    if (x == 0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_sf(double x, int df) { return gamma_q(df / 2.0, x / 2.0); }

WilsonInterval wilson95(int64_t successes, int64_t trials) {
    if (trials <= 0) throw std::invalid_argument("wilson95: need trials > 0");
    const double z = 1.959963984540054;
    const double nd = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nd;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nd;
    const double center = (p + z2 / (2 * nd)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / nd + z2 / (4 * nd * nd)) / denom;
    return {p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

double median_of(std::vector<int32_t> xs) {
    if (xs.empty()) throw std::invalid_argument("median_of: empty");
    std::sort(xs.begin(), xs.end());
    const size_t m = xs.size() / 2;
    if (xs.size() % 2 == 1) return xs[m];
    return (static_cast<double>(xs[m - 1]) + static_cast<double>(xs[m])) / 2.0;
}

TwoSampleResult chi2_two_sample(const std::vector<int32_t>& a, const std::vector<int32_t>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("chi2_two_sample: empty sample");
    int32_t lo = std::min(*std::min_element(a.begin(), a.end()),
                          *std::min_element(b.begin(), b.end()));
    int32_t hi = std::max(*std::max_element(a.begin(), a.end()),
                          *std::max_element(b.begin(), b.end()));
    const int cats = hi - lo + 1;
    std::vector<double> ca(cats, 0), cb(cats, 0);
    for (int32_t x : a) ca[x - lo] += 1;
    for (int32_t x : b) cb[x - lo] += 1;

    // Pool adjacent categories until every expected count is >= 5.
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double total = na + nb;
    std::vector<double> pa, pb;
    double accA = 0, accB = 0;
    for (int i = 0; i < cats; ++i) {
        accA += ca[i];
        accB += cb[i];
        const double rowtot = accA + accB;
        if (rowtot * na / total >= 5.0 && rowtot * nb / total >= 5.0) {
            pa.push_back(accA);
            pb.push_back(accB);
            accA = accB = 0;
        }
    }
    if (accA > 0 || accB > 0) {
        if (pa.empty()) {
            pa.push_back(accA);
            pb.push_back(accB);
        } else {
            pa.back() += accA;
            pb.back() += accB;
        }
    }

    TwoSampleResult out;
    out.df = static_cast<int>(pa.size()) - 1;
    if (out.df < 1) {
        out.p_value = 1.0;  // identical support after pooling: indistinguishable
        return out;
    }
    for (size_t i = 0; i < pa.size(); ++i) {
        const double rowtot = pa[i] + pb[i];
        const double ea = rowtot * na / total;
        const double eb = rowtot * nb / total;
        if (ea > 0) out.stat += (pa[i] - ea) * (pa[i] - ea) / ea;
        if (eb > 0) out.stat += (pb[i] - eb) * (pb[i] - eb) / eb;
    }
    out.p_value = chi2_sf(out.stat, out.df);
    return out;
}

}  // namespace rwbal
