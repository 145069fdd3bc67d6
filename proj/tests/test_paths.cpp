#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "airylab/mc.hpp"
#include "airylab/paths.hpp"
#include "airylab/rng.hpp"
#include "airylab/stats.hpp"

using namespace airylab;

namespace {

// Net level-crossing count #{h in [x0,y0), h <= v-1} - #{h in [y0,x0), h <= v-1}.
long long netsum(int x0, int y0, int v) {
    long long s = 0;
    for (int h = std::min(x0, y0); h < std::max(x0, y0); ++h) {
        if (h > v - 1) continue;
        s += (x0 <= h && h < y0) ? 1 : -1;
    }
    return s;
}

}  // namespace

TEST_CASE("rw bridge hits forced configurations and validates endpoints") {
    RngStream rng(41, 0);
    const auto up = sample_rw_bridge(0, 3, 3, rng);
    CHECK(up.steps == std::vector<int>{1, 1, 1});
    const auto down = sample_rw_bridge(2, 0, 2, rng);
    CHECK(down.steps == std::vector<int>{-1, -1});
    CHECK(down.end() == 0);
    CHECK_THROWS(sample_rw_bridge(0, 1, 2, rng));  // parity
    CHECK_THROWS(sample_rw_bridge(0, 5, 3, rng));  // unreachable
    for (int i = 0; i < 200; ++i) CHECK(sample_rw_bridge(1, -1, 6, rng).end() == -1);
}

TEST_CASE("rw bridge is uniform over 4-step bridges") {
    RngStream rng(42, 0);
    std::map<int, long long> counts;
    const int n = 120000;
    for (int i = 0; i < n; ++i) {
        const auto p = sample_rw_bridge(0, 0, 4, rng);
        int mask = 0;
        for (int l = 0; l < 4; ++l)
            if (p.steps[l] > 0) mask |= 1 << l;
        ++counts[mask];
    }
    REQUIRE(counts.size() == 6);  // C(4,2) bridges
    double chi2 = 0.0;
    const double expect = n / 6.0;
    for (const auto& [mask, c] : counts) chi2 += (c - expect) * (c - expect) / expect;
    CHECK(chi_squared_p_value(chi2, 5) > 0.001);
}

TEST_CASE("occupation profile counts visits including both endpoints") {
    LatticePath p;
    p.start = 0;
    p.steps = {1, -1};
    const auto prof = occupation_profile(p, 8);
    CHECK(prof.counts.at(0) == 2);
    CHECK(prof.counts.at(1) == 1);
    CHECK(prof.normalized(0) == doctest::Approx(2.0 / std::cbrt(8.0)));
    CHECK(prof.normalized(5) == 0.0);
}

TEST_CASE("quantile transform sorts increments by origin level") {
    LatticePath p;
    p.start = 0;
    p.steps = {1, -1, -1, 1};  // visits 0,1,0,-1,0
    const auto q = quantile_transform(p);
    CHECK(q.start == 0);
    CHECK(q.steps == std::vector<int>{1, 1, -1, -1});
    CHECK(q.positions() == std::vector<int>{0, 1, 2, 1, 0});
}

TEST_CASE("vervaat transform rotates at the first minimum") {
    LatticePath p;
    p.start = 0;
    p.steps = {-1, 1, 1, -1};  // visits 0,-1,0,1,0; argmin at index 1
    const auto v = vervaat_transform(p);
    CHECK(v.positions() == std::vector<int>{0, 1, 2, 1, 0});

    LatticePath already;
    already.start = 2;
    already.steps = {1, -1};
    const auto same = vervaat_transform(already);
    CHECK(same.start == 0);
    CHECK(same.steps == already.steps);
}

TEST_CASE("updown counts and the cumulative above table") {
    LatticePath p;
    p.start = 0;
    p.steps = {1, 1, -1};
    const auto c = updown_counts(p);
    CHECK(c.up.at(0) == 1);
    CHECK(c.up.at(1) == 1);
    CHECK(c.down.at(2) == 1);
    CHECK(c.above.at(2) == 0);
    CHECK(c.above.at(1) == 1);
    CHECK(c.above.at(0) == 2);
    CHECK(c.above.at(-1) == 3);
}

TEST_CASE("quantile-transform level identity and vervaat range identity by enumeration") {
    // For every path: the quantile path, read back t_v = (steps above v) from
    // the end, sits at (up-steps from v) + net crossings of level v. For every
    // bridge: max of the vervaat path equals the range of the original.
    for (int len = 1; len <= 10; ++len) {
        for (int mask = 0; mask < (1 << len); ++mask) {
            LatticePath p;
            p.start = 0;
            for (int l = 0; l < len; ++l) p.steps.push_back((mask >> l) & 1 ? 1 : -1);
            const int y0 = p.end();
            const auto qpos = quantile_transform(p).positions();
            const auto c = updown_counts(p);
            int lo = 0, hi = 0;
            for (int v : p.positions()) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            for (int v = lo; v <= hi; ++v) {
                const long long tv = c.above.count(v) ? c.above.at(v) : 0;
                const long long uv = c.up.count(v) ? c.up.at(v) : 0;
                REQUIRE(qpos[len - tv] == uv + netsum(0, y0, v));
            }
            if (y0 == 0) {
                const auto vpos = vervaat_transform(p).positions();
                REQUIRE(*std::max_element(vpos.begin(), vpos.end()) == hi - lo);
            }
        }
    }
}

TEST_CASE("bridge count xi") {
    // N=1, t=2: 1 * 2^{-2} C(2,1) = 1/2.
    CHECK(bridge_count_xi(0.3, 0.3, 1, 2.0) == doctest::Approx(0.5));
    // Endpoint gap larger than the step count.
    CHECK(bridge_count_xi(0.0, -3.0, 1, 2.0) == 0.0);
    CHECK_THROWS(bridge_count_xi(0.3, 0.3, 1, 1.0));   // parity
    CHECK_THROWS(bridge_count_xi(0.0, 0.0, 1, 0.25));  // non-integer step count
    // Local CLT limit on the diagonal: N^{1/3} 2^{-k} C(k, k/2) -> sqrt(2/pi).
    CHECK(std::abs(bridge_count_xi(0.5, 0.5, 1000000, 1.0) - std::sqrt(2.0 / M_PI)) < 1e-3);
}

TEST_CASE("brownian bridge marginals") {
    RngStream rng(43, 0);
    McEstimate mid, var_mid, cov;
    for (int i = 0; i < 200000; ++i) {
        const auto b = sample_brownian_bridge(0.0, 0.0, 1.0, 4, rng);
        CHECK(b.values.front() == 0.0);
        CHECK(b.values.back() == 0.0);
        mid.add(b.values[2]);
        var_mid.add(b.values[2] * b.values[2]);
        cov.add(b.values[1] * b.values[3]);
    }
    CHECK(std::abs(mid.mean) < 3.0 * mid.std_error());
    CHECK(std::abs(var_mid.mean - 0.25) < 4.0 * var_mid.std_error());   // t(1-t) at 1/2
    CHECK(std::abs(cov.mean - 1.0 / 16.0) < 4.0 * cov.std_error());     // s(1-t) at 1/4,3/4

    const auto shifted = sample_brownian_bridge(1.5, -0.5, 2.0, 8, rng);
    CHECK(shifted.values.front() == doctest::Approx(1.5));
    CHECK(shifted.values.back() == doctest::Approx(-0.5));
    CHECK(shifted.dt() == doctest::Approx(0.25));
    CHECK_THROWS(sample_brownian_bridge(0.0, 0.0, 0.0, 4, rng));
    CHECK_THROWS(sample_brownian_bridge(0.0, 0.0, 1.0, 0, rng));
}

TEST_CASE("excursion sampler: positivity, pinning, mean area") {
    RngStream rng(44, 0);
    McEstimate coarse, fine;
    for (int i = 0; i < 20000; ++i) {
        const auto e = sample_excursion(128, rng);
        CHECK(e.values.front() == 0.0);
        CHECK(e.values.back() == 0.0);
        double area = 0.0;
        for (int s = 0; s < 128; ++s) {
            REQUIRE(e.values[s] >= 0.0);
            area += 0.5 * (e.values[s] + e.values[s + 1]) * e.dt();
        }
        coarse.add(area);
        const auto ef = sample_excursion(512, rng);
        double areaf = 0.0;
        for (int s = 0; s < 512; ++s) areaf += 0.5 * (ef.values[s] + ef.values[s + 1]) * ef.dt();
        fine.add(areaf);
    }
    const double mean_area = std::sqrt(M_PI / 8.0);  // 0.62666
    CHECK(std::abs(coarse.mean - mean_area) < 4.0 * coarse.std_error());
    CHECK(std::abs(fine.mean - mean_area) < 4.0 * fine.std_error());
    const double comb = std::hypot(coarse.std_error(), fine.std_error());
    CHECK(std::abs(coarse.mean - fine.mean) < 4.0 * comb);
}

TEST_CASE("grid vervaat excursion matches the direct sampler in distribution") {
    RngStream rng(45, 0);
    std::vector<double> max_v, max_e;
    for (int i = 0; i < 2000; ++i) {
        const auto v = vervaat_excursion(4096, rng);
        const auto e = sample_excursion(4096, rng);
        max_v.push_back(*std::max_element(v.values.begin(), v.values.end()));
        max_e.push_back(*std::max_element(e.values.begin(), e.values.end()));
        CHECK(v.values.front() == doctest::Approx(v.values.back()));
    }
    CHECK(ks_two_sample(max_v, max_e).p_value > 1e-4);
}

TEST_CASE("local time profile conserves total time") {
    RngStream rng(46, 0);
    const auto b = sample_brownian_bridge(0.0, 0.5, 2.0, 1000, rng);
    const auto prof = local_time_profile(b, 0.05);
    double total = 0.0;
    for (double v : prof.values) total += v * prof.delta;
    CHECK(total == doctest::Approx(2.0).epsilon(1e-9));
    CHECK_THROWS(local_time_profile(b, 0.0));
}

TEST_CASE("local time profile on deterministic paths") {
    SUBCASE("constant path piles into one bin") {
        ContinuumPath flat;
        flat.t_max = 1.0;
        flat.values.assign(11, 0.3);
        const auto prof = local_time_profile(flat, 0.25);
        double total = 0.0;
        for (double v : prof.values) total += v * prof.delta;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(*std::max_element(prof.values.begin(), prof.values.end()) ==
              doctest::Approx(4.0));  // 1 / delta
    }
    SUBCASE("linear ramp has unit density") {
        ContinuumPath ramp;
        ramp.t_max = 1.0;
        ramp.values.resize(101);
        for (int i = 0; i <= 100; ++i) ramp.values[i] = i / 100.0;
        const auto prof = local_time_profile(ramp, 0.2);
        for (int j = 0; j < 5; ++j) CHECK(prof.values[j] == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("area and squared local time on a ramp") {
    ContinuumPath ramp;
    ramp.t_max = 1.0;
    ramp.values.resize(201);
    for (int i = 0; i <= 200; ++i) ramp.values[i] = i / 200.0;
    const auto [area, l2] = area_and_l2(ramp, 0.1);
    CHECK(area == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(l2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("binned l2 correction value") {
    CHECK(binned_l2_correction(0.03, 2.0) == doctest::Approx(0.04));
    CHECK(binned_l2_correction(1.0 / 32.0, 1.0) == doctest::Approx(1.0 / 48.0));
}
