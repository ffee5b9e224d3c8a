#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "risop/channel.hpp"
#include "risop/params.hpp"

using namespace risop;

TEST_CASE("SystemParams invariants") {
    CHECK_THROWS_AS(SystemParams(0, 1, 1, 1, 1, 0, 0, 0), ContractError);
    CHECK_THROWS_AS(SystemParams(4, 1, 1, 1, 0.0, 0, 0, 0), ContractError); // sigma_id = 0
    CHECK_THROWS_AS(SystemParams(4, -1, 1, 1, 1, 0, 0, 0), ContractError);
    SystemParams p(4, 1, 1, 1, 1, 20, 5, 0);
    CHECK(p.gamma_bar_lin == doctest::Approx(std::pow(10.0, 1.5)).epsilon(1e-14));
    CHECK(p.gamma_th_lin == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.gamma_bar_lin > 0.0);
}

TEST_CASE("sampling is deterministic for fixed (seed, stream)") {
    SystemParams p(4, 1, 1, 1, 1, 10, 0, 0);
    Philox4x32 rng1(42, 7), rng2(42, 7);
    ChannelDraw a = sample_channels(p, rng1);
    ChannelDraw b = sample_channels(p, rng2);
    CHECK(a.h_mag == b.h_mag);
    CHECK(a.theta_prime == b.theta_prime);
    CHECK(a.h_i_mag == b.h_i_mag);
    CHECK(a.h_i_phase == b.h_i_phase);

    // a different stream gives a different draw
    Philox4x32 rng3(42, 8);
    ChannelDraw c = sample_channels(p, rng3);
    CHECK(a.h_mag != c.h_mag);
}

TEST_CASE("sample_sir matches instantaneous_sir(sample_channels)") {
    SystemParams p(6, 1.3, 0.8, 1.1, 0.9, 12, 3, 1);
    for (std::uint64_t stream = 0; stream < 8; ++stream) {
        Philox4x32 r1(99, stream), r2(99, stream);
        SirSample via_draw = instantaneous_sir(p, sample_channels(p, r1));
        SirSample direct = sample_sir(p, r2);
        CHECK(via_draw.x_value == doctest::Approx(direct.x_value).epsilon(1e-15));
        CHECK(via_draw.y_value == doctest::Approx(direct.y_value).epsilon(1e-15));
        CHECK(via_draw.sir == doctest::Approx(direct.sir).epsilon(1e-15));
    }
}

TEST_CASE("instantaneous_sir: coherent sum, identity and direct-path cases") {
    // all theta' = 0, h_I = 0, N=2, beta*alpha = 1 each -> y = 2
    SystemParams p2(2, 1, 1, 1, 1, 0, 0, 0);
    ChannelDraw d;
    d.h_mag = {1.0, 1.0};
    d.g_mag = {1.0, 1.0};
    d.alpha_mag = {1.0, 1.0};
    d.beta_mag = {1.0, 1.0};
    d.theta_prime = {0.0, 0.0};
    d.h_i_mag = 0.0;
    d.h_i_phase = 0.0;
    SirSample s = instantaneous_sir(p2, d);
    CHECK(s.y_value == doctest::Approx(2.0).epsilon(1e-15));
    // gamma_bar = 1 and x = y -> sir = 1
    CHECK(s.x_value == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.sir == doctest::Approx(1.0).epsilon(1e-14));

    // N=1, g=h=1, beta=alpha=0, h_I=1, gamma_bar = 10 dB -> sir = 10
    SystemParams p1(1, 1, 1, 1, 1, 10, 0, 0);
    ChannelDraw d1;
    d1.h_mag = {1.0};
    d1.g_mag = {1.0};
    d1.alpha_mag = {0.0};
    d1.beta_mag = {0.0};
    d1.theta_prime = {1.234};
    d1.h_i_mag = 1.0;
    d1.h_i_phase = 0.777;
    CHECK(instantaneous_sir(p1, d1).sir == doctest::Approx(10.0).epsilon(1e-13));

    // dimension mismatch
    CHECK_THROWS_AS(instantaneous_sir(p2, d1), ContractError);
}

TEST_CASE("sir is invariant to a global phase rotation") {
    SystemParams p(5, 1, 1, 1, 1, 7, 2, 0);
    Philox4x32 rng(5, 0);
    ChannelDraw d = sample_channels(p, rng);
    SirSample base = instantaneous_sir(p, d);
    for (double delta : {0.37, 1.9, 4.4}) {
        ChannelDraw rot = d;
        for (double& th : rot.theta_prime) th += delta;
        rot.h_i_phase += delta;
        SirSample r = instantaneous_sir(p, rot);
        CHECK(r.sir == doctest::Approx(base.sir).epsilon(1e-10));
    }
}

TEST_CASE("Rayleigh magnitudes have E[m^2] = sigma^2" * doctest::timeout(120)) {
    SystemParams p(1, 1, 1, 1, 1, 0, 0, 0);
    const std::uint64_t n = 1000000;
    double sum_h2 = 0.0;
    Philox4x32 rng(2024, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        ChannelDraw d = sample_channels(p, rng);
        sum_h2 += d.h_mag[0] * d.h_mag[0];
    }
    CHECK(sum_h2 / n == doctest::Approx(1.0).epsilon(0.005));
}

TEST_CASE("moment invariants: E[X] and E[Y^2]" * doctest::timeout(300)) {
    SystemParams p(8, 1, 1, 1, 1, 0, 0, 0);
    const std::uint64_t n = 1000000;
    double sum_x = 0.0, sum_y2 = 0.0;
    Philox4x32 rng(7, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        SirSample s = sample_sir(p, rng);
        sum_x += s.x_value;
        sum_y2 += s.y_value * s.y_value;
    }
    const double ex_expected = 8.0 * M_PI / 4.0;
    const double ey2_expected = 1.0 + 8.0;
    CHECK(sum_x / n == doctest::Approx(ex_expected).epsilon(0.005));
    CHECK(sum_y2 / n == doctest::Approx(ey2_expected).epsilon(0.01));
}

TEST_CASE("scale covariance: sigma scaling multiplies X by c^2 in distribution" *
          doctest::timeout(120)) {
    const double c = 1.7;
    SystemParams base(4, 1, 1, 1, 1, 0, 0, 0);
    SystemParams scaled(4, c, c, 1, 1, 0, 0, 0);
    const std::size_t n = 100000;
    std::vector<double> a(n), b(n);
    Philox4x32 r1(11, 0), r2(12, 0);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = sample_sir(base, r1).x_value * c * c;
        b[i] = sample_sir(scaled, r2).x_value;
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    // two-sample KS distance
    double ks = 0.0;
    std::size_t i = 0, j = 0;
    while (i < n && j < n) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        ks = std::max(ks, std::abs(static_cast<double>(i) - static_cast<double>(j)) / n);
    }
    CHECK(ks < 0.02);
}
