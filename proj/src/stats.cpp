#include "airylab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace airylab {

double normal_cdf(double x, double mu, double sigma2) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("normal_cdf: sigma2 must be positive");
    return 0.5 * std::erfc(-(x - mu) / std::sqrt(2.0 * sigma2));
}

double kolmogorov_sf(double x) {
    if (x <= 0.0) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_one_sample(std::vector<double> samples,
                       const std::function<double(double)>& cdf) {
    const auto n = samples.size();
    if (n == 0) throw std::invalid_argument("ks_one_sample: empty sample");
    std::sort(samples.begin(), samples.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    const double sn = std::sqrt(static_cast<double>(n));
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
    return r;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d);
    return r;
}

namespace {

double gamma_q_series_p(double a, double x) {
    // Series for the lower regularized gamma P(a, x).
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

double gamma_q_cont_frac(double a, double x) {
    // Lentz continued fraction for Q(a, x).
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_q_series_p(a, x);
    return gamma_q_cont_frac(a, x);
}

double chi_squared_p_value(double statistic, int dof) {
    if (dof <= 0) throw std::invalid_argument("chi_squared_p_value: dof must be positive");
    return gamma_q(0.5 * dof, 0.5 * statistic);
}

}  // namespace airylab
