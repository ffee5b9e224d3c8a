#ifndef RISOP_CHANNEL_HPP
#define RISOP_CHANNEL_HPP

#include <vector>

#include "risop/params.hpp"
#include "risop/rng.hpp"

namespace risop {

/// One realization of all fading channels.  Magnitudes are Rayleigh with
/// E[m^2] = sigma^2 (the complex-Gaussian variance convention); theta_prime
/// holds the residual interference phases after the RIS alignment, and the
/// direct interference path keeps its own uniform phase.
struct ChannelDraw {
    std::vector<double> h_mag;       // S -> R
    std::vector<double> g_mag;       // R -> D
    std::vector<double> alpha_mag;   // I -> R
    std::vector<double> beta_mag;    // R -> D (interference reflection)
    std::vector<double> theta_prime; // residual phases, [0, 2pi)
    double h_i_mag = 0.0;            // I -> D
    double h_i_phase = 0.0;          // implicit phase of the direct path
};

struct SirSample {
    double x_value = 0.0; // sum |g||h|
    double y_value = 0.0; // | sum |beta||alpha| e^{j theta'} + h_I |
    double sir = 0.0;
};

ChannelDraw sample_channels(const SystemParams& params, Philox4x32& rng);

SirSample instantaneous_sir(const SystemParams& params, const ChannelDraw& draw);

/// sample_channels + instantaneous_sir without materializing the draw;
/// the Monte Carlo hot path.
SirSample sample_sir(const SystemParams& params, Philox4x32& rng);

} // namespace risop

#endif
