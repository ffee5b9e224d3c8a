#include "risop/channel.hpp"

#include <cmath>

#include "risop/errors.hpp"

namespace risop {

namespace {

// Rayleigh with E[m^2] = sigma^2: m = sigma * sqrt(-log u).
inline double rayleigh(double sigma, Philox4x32& rng) {
    return sigma * std::sqrt(-std::log(rng.next_open01()));
}

} // namespace

ChannelDraw sample_channels(const SystemParams& params, Philox4x32& rng) {
    const int n = params.n_elements;
    ChannelDraw d;
    d.h_mag.resize(n);
    d.g_mag.resize(n);
    d.alpha_mag.resize(n);
    d.beta_mag.resize(n);
    d.theta_prime.resize(n);
    for (int i = 0; i < n; ++i) d.h_mag[i] = rayleigh(params.sigma_sr, rng);
    for (int i = 0; i < n; ++i) d.g_mag[i] = rayleigh(params.sigma_rd, rng);
    for (int i = 0; i < n; ++i) d.alpha_mag[i] = rayleigh(params.sigma_ir, rng);
    for (int i = 0; i < n; ++i) d.beta_mag[i] = rayleigh(params.sigma_rd, rng);
    for (int i = 0; i < n; ++i) d.theta_prime[i] = 2.0 * M_PI * rng.next_open01();
    d.h_i_mag = rayleigh(params.sigma_id, rng);
    d.h_i_phase = 2.0 * M_PI * rng.next_open01();
    return d;
}

SirSample instantaneous_sir(const SystemParams& params, const ChannelDraw& draw) {
    const std::size_t n = static_cast<std::size_t>(params.n_elements);
    if (draw.h_mag.size() != n || draw.g_mag.size() != n || draw.alpha_mag.size() != n ||
        draw.beta_mag.size() != n || draw.theta_prime.size() != n)
        throw ContractError("instantaneous_sir: draw dimensions do not match n_elements");

    double x = 0.0;
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x += draw.g_mag[i] * draw.h_mag[i];
        const double m = draw.beta_mag[i] * draw.alpha_mag[i];
        re += m * std::cos(draw.theta_prime[i]);
        im += m * std::sin(draw.theta_prime[i]);
    }
    re += draw.h_i_mag * std::cos(draw.h_i_phase);
    im += draw.h_i_mag * std::sin(draw.h_i_phase);

    SirSample s;
    s.x_value = x;
    s.y_value = std::sqrt(re * re + im * im);
    s.sir = params.gamma_bar_lin * (x * x) / (s.y_value * s.y_value);
    return s;
}

SirSample sample_sir(const SystemParams& params, Philox4x32& rng) {
    const int n = params.n_elements;
    double x = 0.0, re = 0.0, im = 0.0;
    // draw order matches sample_channels so both paths produce identical
    // realizations for the same stream position
    thread_local std::vector<double> h, g, a, b;
    h.resize(n);
    g.resize(n);
    a.resize(n);
    b.resize(n);
    for (int i = 0; i < n; ++i) h[i] = rayleigh(params.sigma_sr, rng);
    for (int i = 0; i < n; ++i) g[i] = rayleigh(params.sigma_rd, rng);
    for (int i = 0; i < n; ++i) a[i] = rayleigh(params.sigma_ir, rng);
    for (int i = 0; i < n; ++i) b[i] = rayleigh(params.sigma_rd, rng);
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * M_PI * rng.next_open01();
        const double m = b[i] * a[i];
        re += m * std::cos(th);
        im += m * std::sin(th);
        x += g[i] * h[i];
    }
    const double hi = rayleigh(params.sigma_id, rng);
    const double phi = 2.0 * M_PI * rng.next_open01();
    re += hi * std::cos(phi);
    im += hi * std::sin(phi);

    SirSample s;
    s.x_value = x;
    s.y_value = std::sqrt(re * re + im * im);
    s.sir = params.gamma_bar_lin * (x * x) / (s.y_value * s.y_value);
    return s;
}

} // namespace risop
