#ifndef RISOP_MONTECARLO_HPP
#define RISOP_MONTECARLO_HPP

#include <cstdint>

#include "risop/channel.hpp"
#include "risop/estimates.hpp"
#include "risop/params.hpp"

namespace risop {

struct McConfig {
    std::uint64_t n_samples = 10000;
    std::uint64_t seed = 1;
    double confidence = 0.99;
    int workers = 0; // 0 = RISOP_WORKERS env or hardware

    void validate() const {
        if (n_samples < 100) throw ContractError("McConfig: n_samples must be >= 100");
        if (!(confidence > 0.0 && confidence < 1.0))
            throw ContractError("McConfig: confidence must be in (0, 1)");
    }
};

/// Standard normal quantile (Acklam's rational approximation).
double inv_norm_cdf(double p);

/// Wilson score half-width for k successes out of n at the given confidence.
double wilson_half_width(std::uint64_t k, std::uint64_t n, double confidence);

/// Fraction of sampled SIRs below the threshold, with a Wilson interval
/// half-width as the error descriptor.  Chunked over fixed-size counter-RNG
/// streams, so the result is bit-identical for any worker count.
OutageEstimate estimate_op_mc(const SystemParams& params, const McConfig& cfg);

enum class McVariable { X, Y };

/// Normalized histogram of X or Y on a support covering 99.99% of the mass.
PdfGrid empirical_pdf(McVariable variable, const SystemParams& params, const McConfig& cfg,
                      int bins);

enum class MomentKind { EX, VarX, EY2, EY4 };

struct MomentEstimate {
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Sample moment with a block-bootstrap confidence interval (200 resamples).
MomentEstimate moment_oracle(MomentKind kind, const SystemParams& params, const McConfig& cfg);

} // namespace risop

#endif
