#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "airylab/airy.hpp"
#include "airylab/ensemble.hpp"
#include "airylab/mc.hpp"
#include "airylab/rng.hpp"

using namespace airylab;

TEST_CASE("white noise grid") {
    RngStream rng(51, 0);
    const auto w = sample_white_noise(1.0 / 64.0, 16.0, rng);
    CHECK(w.size() == 1024);
    McEstimate var;
    for (double x : w.incr_xi) var.add(x * x);
    for (double x : w.incr_a) var.add(x * x);
    CHECK(std::abs(var.mean - 1.0 / 64.0) < 4.0 * var.std_error());
    CHECK_THROWS(sample_white_noise(0.0, 16.0, rng));
    CHECK_THROWS(sample_white_noise(1.0, 0.0, rng));
}

TEST_CASE("kernel vanishes outside the window and at the hard wall") {
    RngStream rng(52, 0);
    const auto w = sample_white_noise(1.0 / 64.0, 16.0, rng);
    const auto params = EnsembleParams::gaussian(2.0);
    const PathGrid grid{256};

    KernelQuery q;
    q.x = 3.0;
    q.y = 0.5;
    q.window = {0.0, 2.0};
    const auto out = kernel_mc(q, params, w, 100, grid, rng);
    CHECK(out.est.mean == 0.0);
    CHECK(out.est.count == 100);

    // Dirichlet condition at 0: every bridge cell touching the barrier dies.
    KernelQuery origin;
    origin.x = origin.y = 0.0;
    const auto dead = kernel_mc(origin, params, w, 100, grid, rng);
    CHECK(dead.est.mean == 0.0);

    CHECK_THROWS(kernel_mc(KernelQuery{0.5, 0.5, 0.0}, params, w, 10, grid, rng));
}

TEST_CASE("kernel is symmetric in x and y") {
    RngStream rng(53, 0);
    const auto w = sample_white_noise(1.0 / 64.0, 16.0, rng);
    const auto params = EnsembleParams::gaussian(2.0);
    const PathGrid grid{512};
    KernelQuery q;
    q.x = 0.4;
    q.y = 0.9;
    const auto xy = kernel_mc(q, params, w, 4000, grid, rng);
    std::swap(q.x, q.y);
    const auto yx = kernel_mc(q, params, w, 4000, grid, rng);
    const double comb = std::hypot(xy.est.std_error(), yx.est.std_error());
    CHECK(std::abs(xy.est.mean - yx.est.mean) < 4.0 * comb);
}

TEST_CASE("parity components add up to the full kernel") {
    RngStream rw(54, 0);
    const auto w = sample_white_noise(1.0 / 64.0, 16.0, rw);
    const auto params = EnsembleParams::gaussian(1.0);
    const PathGrid grid{256};
    KernelQuery q;
    q.x = 0.6;
    q.y = 0.6;

    // Identical bridge streams: cosh + sinh = exp holds sample by sample.
    RngStream r_both(55, 9), r_even(55, 9), r_odd(55, 9);
    q.parity = Parity::both;
    const auto both = kernel_mc(q, params, w, 500, grid, r_both);
    q.parity = Parity::even;
    const auto even = kernel_mc(q, params, w, 500, grid, r_even);
    q.parity = Parity::odd;
    const auto odd = kernel_mc(q, params, w, 500, grid, r_odd);
    CHECK(even.est.mean + odd.est.mean == doctest::Approx(both.est.mean).epsilon(1e-12));
}

TEST_CASE("noise-free kernel_mc equals the analytic W average at beta = infinity") {
    RngStream rw(56, 0);
    const auto w = sample_white_noise(1.0 / 64.0, 16.0, rw);
    const PathGrid grid{512};
    KernelQuery q;
    q.x = 0.5;
    q.y = 1.0;
    RngStream r1(57, 0), r2(57, 0);
    const auto mc = kernel_mc(q, EnsembleParams::gaussian(kBetaInfinity), w, 300, grid, r1);
    const auto wavg = kernel_mc_wavg(0.5, 1.0, 1.0, SpectralWindow::full(), kBetaInfinity,
                                     300, grid, r2);
    CHECK(mc.est.mean == doctest::Approx(wavg.mean).epsilon(1e-12));
    CHECK(mc.est.m2 == doctest::Approx(wavg.m2).epsilon(1e-10));
}

TEST_CASE("averaging kernel_mc over the noise reproduces the analytic W average") {
    const PathGrid grid{512};
    const auto params = EnsembleParams::gaussian(2.0);
    McEstimate over_w;
    for (int g = 0; g < 120; ++g) {
        RngStream rng(58, static_cast<std::uint64_t>(g));
        const auto w = sample_white_noise(1.0 / 64.0, 16.0, rng);
        KernelQuery q;
        q.x = q.y = 0.5;
        const auto k = kernel_mc(q, params, w, 100, grid, rng);
        over_w.add(k.est.mean);
    }
    RngStream rng(59, 0);
    const auto wavg = kernel_mc_wavg(0.5, 0.5, 1.0, SpectralWindow::full(), 2.0, 20000,
                                     grid, rng);
    const double comb = std::hypot(over_w.std_error(), wavg.std_error());
    CHECK(std::abs(over_w.mean - wavg.mean) < 4.0 * comb);
}

TEST_CASE("clipping is reported when local times spill past a_max") {
    RngStream rng(60, 0);
    const auto w = sample_white_noise(1.0 / 64.0, 0.5, rng);  // tiny noise grid
    const PathGrid grid{64};
    KernelQuery q;
    q.x = q.y = 2.0;  // bridges live mostly above a_max = 0.5
    const auto out = kernel_mc(q, EnsembleParams::gaussian(2.0), w, 50, grid, rng);
    CHECK(out.clipped > 0);
}

TEST_CASE("trace_mc on an empty window and the noise-free cross-check") {
    RngStream rng(61, 0);
    const auto w = sample_white_noise(1.0 / 64.0, 16.0, rng);
    const QuadratureSpec quad{8.0, 16};
    const PathGrid grid{256};
    const auto empty = trace_mc(1.0, {2.0, 1.0}, EnsembleParams::gaussian(2.0), w, 50,
                                quad, grid, rng);
    CHECK(empty.est.mean == 0.0);

    // With the noise switched off, trace_mc and trace_wavg walk the same
    // bridge stream and must agree to rounding.
    RngStream r1(62, 0), r2(62, 0);
    const auto a = trace_mc(1.0, SpectralWindow::full(), EnsembleParams::gaussian(kBetaInfinity),
                            w, 100, quad, grid, r1);
    const auto b = trace_wavg(1.0, SpectralWindow::full(), kBetaInfinity, 100, quad, grid, r2);
    CHECK(a.est.mean == doctest::Approx(b.mean).epsilon(1e-12));

    CHECK_THROWS(trace_mc(1.0, SpectralWindow::full(), EnsembleParams::gaussian(2.0), w,
                          10, QuadratureSpec{8.0, 3}, grid, rng));
}

TEST_CASE("bridge-route trace matches the excursion route at beta = infinity") {
    RngStream r1(63, 0), r2(63, 1);
    const PathGrid grid{1024};
    const auto quad = QuadratureSpec::for_time(1.0);
    const auto bridge = trace_wavg(1.0, SpectralWindow::full(), kBetaInfinity, 400, quad,
                                   grid, r1);
    const auto exc = expected_trace_excursion(1.0, kBetaInfinity, 20000, 2048, 1.0 / 32.0, r2);
    const double comb = std::hypot(bridge.std_error(), exc.std_error());
    CHECK(std::abs(bridge.mean - exc.mean) < std::max(4.0 * comb, 0.01 * exc.mean));
}

TEST_CASE("excursion trace at beta = 2 hits the closed form") {
    CHECK(okounkov_expected_trace(1.0) ==
          doctest::Approx(std::sqrt(2.0 / M_PI) * std::exp(1.0 / 96.0)).epsilon(1e-14));
    CHECK(okounkov_expected_trace(1.0) == doctest::Approx(0.80624).epsilon(1e-4));
    CHECK(okounkov_expected_trace(0.5) == doctest::Approx(2.2596).epsilon(1e-3));

    RngStream rng(64, 0);
    const auto est = expected_trace_excursion(1.0, 2.0, 20000, 4096, 1.0 / 32.0, rng);
    CHECK(std::abs(est.mean - okounkov_expected_trace(1.0)) <
          std::max(4.0 * est.std_error(), 0.01 * okounkov_expected_trace(1.0)));

    RngStream rng2(64, 1);
    const auto half = expected_trace_excursion(0.5, 2.0, 20000, 4096, 1.0 / 32.0, rng2);
    CHECK(std::abs(half.mean - okounkov_expected_trace(0.5)) <
          std::max(4.0 * half.std_error(), 0.01 * okounkov_expected_trace(0.5)));

    CHECK_THROWS(expected_trace_excursion(0.0, 2.0, 10, 64, 0.1, rng));
    CHECK_THROWS(expected_trace_excursion(1.0, 0.0, 10, 64, 0.1, rng));
}

TEST_CASE("gaussian identity samples center near zero") {
    RngStream rng(65, 0);
    const auto xs = gaussian_identity_sample(5000, 4096, 1.0 / 32.0, rng);
    McEstimate m;
    for (double x : xs) m.add(x);
    CHECK(std::abs(m.mean) < std::max(4.0 * m.std_error(), 0.01));
    CHECK(m.variance() == doctest::Approx(1.0 / 12.0).epsilon(0.15));
}

TEST_CASE("semigroup composition closes on the noise-free kernel") {
    RngStream rw(66, 0), rng(66, 1);
    const auto w = sample_white_noise(1.0 / 64.0, 16.0, rw);
    const PathGrid grid{1024};  // dt matches between T/2 and T
    QuadratureSpec zq;
    zq.x_max = 8.0;
    zq.n_intervals = 32;
    const auto check = semigroup_residual(0.5, 0.5, SpectralWindow::full(),
                                          EnsembleParams::gaussian(kBetaInfinity), w, 200,
                                          {0.5, 1.5}, zq, grid, rng);
    CHECK(check.max_z < 4.0);
    CHECK(check.max_residual < 0.05);
}

TEST_CASE("semigroup check with t2 = 0 compares independent estimates") {
    RngStream rw(67, 0), rng(67, 1);
    const auto w = sample_white_noise(1.0 / 64.0, 16.0, rw);
    const PathGrid grid{512};
    const auto check = semigroup_residual(0.5, 0.0, SpectralWindow::full(),
                                          EnsembleParams::gaussian(2.0), w, 300,
                                          {0.5, 1.0}, QuadratureSpec{8.0, 32}, grid, rng);
    CHECK(check.max_z < 4.0);
    CHECK_THROWS(semigroup_residual(0.0, 0.5, SpectralWindow::full(),
                                    EnsembleParams::gaussian(2.0), w, 10, {0.5},
                                    QuadratureSpec{8.0, 32}, grid, rng));
}
