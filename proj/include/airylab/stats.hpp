#pragma once

#include <functional>
#include <vector>

namespace airylab {

double normal_cdf(double x, double mu = 0.0, double sigma2 = 1.0);

// Survival function of the Kolmogorov distribution, 2 * sum (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_sf(double x);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// One-sample KS test of `samples` against the given CDF (asymptotic p-value
// with Stephens' small-sample adjustment). Samples need not be sorted.
KsResult ks_one_sample(std::vector<double> samples,
                       const std::function<double(double)>& cdf);

// Two-sample KS test.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Upper regularized incomplete gamma Q(a, x); chi^2 upper tail is
// Q(k/2, x/2).
double gamma_q(double a, double x);

double chi_squared_p_value(double statistic, int dof);

}  // namespace airylab
