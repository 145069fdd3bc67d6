#include "airylab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace airylab {

namespace {

double hypot2(double a, double b) { return std::hypot(a, b); }

// Implicit-shift QL with Wilkinson shifts, after the EISPACK tql1/tql2
// routines. d holds the diagonal, e the subdiagonal in e[0..n-2]. When z is
// non-null it must hold the identity on entry and accumulates the rotations.
void ql_implicit(std::vector<double>& d, std::vector<double>& e,
                 std::vector<double>* z, int n) {
    if (n == 1) return;
    e.push_back(0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw std::runtime_error(
                        "eigen_tridiagonal: QL failed to converge at index " +
                        std::to_string(l));
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z) {
                        for (int k = 0; k < n; ++k) {
                            const std::size_t ki = k + static_cast<std::size_t>(i) * n;
                            const std::size_t ki1 = k + static_cast<std::size_t>(i + 1) * n;
                            f = (*z)[ki1];
                            (*z)[ki1] = s * (*z)[ki] + c * f;
                            (*z)[ki] = c * (*z)[ki] - s * f;
                        }
                    }
                }
                if (r == 0.0 && m - 1 >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    e.pop_back();
}

}  // namespace

EigenDecomposition eigen_tridiagonal(const TridiagonalMatrix& m, bool want_vectors) {
    if (m.n < 1) throw std::invalid_argument("eigen_tridiagonal: empty matrix");
    const int n = m.n;
    std::vector<double> d = m.diag;
    std::vector<double> e = m.offdiag;
    std::vector<double> z;
    if (want_vectors) {
        z.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) z[i + static_cast<std::size_t>(i) * n] = 1.0;
    }
    ql_implicit(d, e, want_vectors ? &z : nullptr, n);

    // Sort descending, permuting eigenvector columns alongside.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] > d[b]; });

    EigenDecomposition out;
    out.n = n;
    out.values.resize(n);
    for (int j = 0; j < n; ++j) out.values[j] = d[order[j]];
    if (want_vectors) {
        out.vectors.resize(static_cast<std::size_t>(n) * n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                out.vectors[i + static_cast<std::size_t>(j) * n] =
                    z[i + static_cast<std::size_t>(order[j]) * n];
    }
    return out;
}

double power_step_count(int big_n, double t) {
    // cbrt is exactly rounded, and the guard keeps floor from undershooting
    // when t N^{2/3} is an exact integer (e.g. N = 1000).
    const double n13 = std::cbrt(static_cast<double>(big_n));
    return std::floor(t * n13 * n13 + 1e-9);
}

double scaled_power_pair(double ratio, long long k) {
    // sign * exp(k * ln|ratio|); 0^0 = 1 by the M^0 = I convention.
    auto signed_pow = [](double r, long long kk) {
        if (kk == 0) return 1.0;
        if (r == 0.0) return 0.0;
        const double mag = std::exp(static_cast<double>(kk) * std::log(std::abs(r)));
        return (r < 0.0 && (kk % 2 != 0)) ? -mag : mag;
    };
    return 0.5 * (signed_pow(ratio, k) + signed_pow(ratio, k - 1));
}

double scaled_power_trace(const EigenDecomposition& eig, int big_n, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("scaled_power_trace: t must be positive");
    const long long k = static_cast<long long>(power_step_count(big_n, t));
    if (k < 1)
        throw std::invalid_argument("scaled_power_trace: floor(t N^{2/3}) < 1, t too small");
    const double denom = 2.0 * std::sqrt(static_cast<double>(big_n));
    double sum = 0.0;
    for (double mu : eig.values) sum += scaled_power_pair(mu / denom, k);
    return sum;
}

EdgeSpectrum edge_spectrum(const EigenDecomposition& eig, int big_n) {
    EdgeSpectrum out;
    out.n = eig.n;
    out.scaled.resize(eig.values.size());
    const double n16 = std::pow(static_cast<double>(big_n), 1.0 / 6.0);
    const double center = 2.0 * std::sqrt(static_cast<double>(big_n));
    for (std::size_t i = 0; i < eig.values.size(); ++i)
        out.scaled[i] = n16 * (eig.values[i] - center);
    return out;
}

double exp_edge_trace(const EdgeSpectrum& edge, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("exp_edge_trace: t must be positive");
    double sum = 0.0;
    for (double l : edge.scaled) sum += std::exp(0.5 * t * l);
    return sum;
}

namespace {

// 7- and 15-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGl7X[] = {0.0, 0.4058451513773972, 0.7415311855993945,
                            0.9491079123427585};
constexpr double kGl7W[] = {0.4179591836734694, 0.3818300505051189,
                            0.2797053914892766, 0.1294849661688697};
constexpr double kGl15X[] = {0.0,
                             0.2011940939974345,
                             0.3941513470775634,
                             0.5709721726085388,
                             0.7244177313601701,
                             0.8482065834104272,
                             0.9372733924007060,
                             0.9879925180204854};
constexpr double kGl15W[] = {0.2025782419255613, 0.1984314853271116,
                             0.1861610000155622, 0.1662692058169939,
                             0.1395706779261543, 0.1071592204671719,
                             0.0703660474881081, 0.0307532419961173};

double gl_rule(const std::function<double(double)>& f, double a, double b,
               const double* x, const double* w, int half) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = w[0] * f(c);
    for (int i = 1; i < half; ++i)
        sum += w[i] * (f(c - h * x[i]) + f(c + h * x[i]));
    return sum * h;
}

double adaptive_gl(const std::function<double(double)>& f, double a, double b,
                   double tol_abs, int depth) {
    const double coarse = gl_rule(f, a, b, kGl7X, kGl7W, 4);
    const double fine = gl_rule(f, a, b, kGl15X, kGl15W, 8);
    if (std::abs(fine - coarse) <= tol_abs || depth >= 40) {
        if (depth >= 40 && std::abs(fine - coarse) > tol_abs)
            throw std::runtime_error("project_function: quadrature did not converge");
        return fine;
    }
    const double mid = 0.5 * (a + b);
    return adaptive_gl(f, a, mid, 0.5 * tol_abs, depth + 1) +
           adaptive_gl(f, mid, b, 0.5 * tol_abs, depth + 1);
}

}  // namespace

GridFunction project_function(const std::function<double(double)>& f, int big_n) {
    if (big_n < 1) throw std::invalid_argument("project_function: N must be >= 1");
    GridFunction out;
    out.n = big_n;
    out.values.resize(big_n);
    const double n13 = std::cbrt(static_cast<double>(big_n));
    const double n16 = std::pow(static_cast<double>(big_n), 1.0 / 6.0);
    for (int i = 1; i <= big_n; ++i) {
        const double lo = (big_n - i) / n13;
        const double hi = (big_n - i + 1) / n13;
        const double rough = gl_rule(f, lo, hi, kGl15X, kGl15W, 8);
        const double tol = 1e-10 * std::max(std::abs(rough), 1e-30);
        out.values[i - 1] = n16 * adaptive_gl(f, lo, hi, tol, 0);
    }
    return out;
}

double bilinear_form(const EigenDecomposition& eig, int big_n, double t,
                     const GridFunction& f, const GridFunction& g) {
    if (!eig.has_vectors())
        throw std::invalid_argument("bilinear_form: eigenvectors required");
    if (eig.n != f.n || eig.n != g.n)
        throw std::invalid_argument("bilinear_form: dimension mismatch");
    const long long k = static_cast<long long>(power_step_count(big_n, t));
    if (k < 1)
        throw std::invalid_argument("bilinear_form: floor(t N^{2/3}) < 1, t too small");
    const double denom = 2.0 * std::sqrt(static_cast<double>(big_n));
    double sum = 0.0;
    for (int j = 0; j < eig.n; ++j) {
        double vf = 0.0, vg = 0.0;
        for (int i = 0; i < eig.n; ++i) {
            const double v = eig.vector(i, j);
            vf += v * f.values[i];
            vg += v * g.values[i];
        }
        sum += vf * vg * scaled_power_pair(eig.values[j] / denom, k);
    }
    return sum;
}

double small_power_trace(const TridiagonalMatrix& m, int k) {
    if (k < 1 || k > 64)
        throw std::invalid_argument("small_power_trace: k must be in [1, 64]");
    const int n = m.n;
    if (k == 1) return m.trace();

    // Band storage: band[b][i] = (M^j)[i, i+b] for b = 0..j (symmetric, upper
    // half only). Multiplying by M widens the band by one.
    auto entry = [&](const std::vector<std::vector<double>>& band, int i, int jcol) {
        const int b = std::abs(jcol - i);
        const int lo = std::min(i, jcol);
        if (b >= static_cast<int>(band.size())) return 0.0;
        if (lo < 0 || lo >= n - b) return 0.0;
        return band[b][lo];
    };

    std::vector<std::vector<double>> cur(2);
    cur[0] = m.diag;
    cur[1] = m.offdiag;
    for (int step = 2; step <= k; ++step) {
        std::vector<std::vector<double>> next(std::min(step, n - 1) + 1);
        for (int b = 0; b < static_cast<int>(next.size()); ++b) {
            next[b].assign(n - b, 0.0);
            for (int i = 0; i < n - b; ++i) {
                const int jcol = i + b;
                double s = entry(cur, i, jcol) * m.diag[jcol];
                if (jcol - 1 >= 0) s += entry(cur, i, jcol - 1) * m.offdiag[jcol - 1];
                if (jcol + 1 < n) s += entry(cur, i, jcol + 1) * m.offdiag[jcol];
                next[b][i] = s;
            }
        }
        cur = std::move(next);
    }
    return std::accumulate(cur[0].begin(), cur[0].end(), 0.0);
}

}  // namespace airylab
