#include "risop/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "risop/parallel.hpp"

namespace risop {

namespace {

constexpr std::uint64_t kChunkSamples = 1 << 16;
constexpr std::uint64_t kBlockSamples = 1 << 12; // bootstrap blocks

struct ChunkStats {
    std::uint64_t below = 0;
    double sum_x = 0.0, sum_x2 = 0.0, sum_y2 = 0.0, sum_y4 = 0.0;
    std::vector<double> block_sums; // per-kind block sums for the bootstrap
};

std::uint64_t chunk_count(std::uint64_t n) { return (n + kChunkSamples - 1) / kChunkSamples; }

std::uint64_t samples_in_chunk(std::uint64_t chunk, std::uint64_t n) {
    std::uint64_t start = chunk * kChunkSamples;
    return std::min<std::uint64_t>(kChunkSamples, n - start);
}

} // namespace

double inv_norm_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ContractError("inv_norm_cdf: p must be in (0, 1)");
    static const double a[6] = {-39.69683028665376, 220.9460984245205,  -275.9285104469687,
                                138.3577518672690,  -30.66479806614716, 2.506628277459239};
    static const double b[5] = {-54.47609879822406, 161.5858368580409, -155.6989798598866,
                                66.80131188771972,  -13.28068155288572};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838,     -2.549732539343734,
                                4.374664141464968,      2.938163982698783};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996,
                                3.754408661907416};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > phigh) {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double wilson_half_width(std::uint64_t k, std::uint64_t n, double confidence) {
    const double z = inv_norm_cdf(0.5 * (1.0 + confidence));
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    return z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
}

OutageEstimate estimate_op_mc(const SystemParams& params, const McConfig& cfg) {
    cfg.validate();
    const std::uint64_t n_chunks = chunk_count(cfg.n_samples);
    std::vector<std::uint64_t> below(n_chunks, 0);

    parallel_for(n_chunks, cfg.workers, [&](std::size_t chunk) {
        Philox4x32 rng(cfg.seed, chunk);
        const std::uint64_t m = samples_in_chunk(chunk, cfg.n_samples);
        std::uint64_t cnt = 0;
        for (std::uint64_t i = 0; i < m; ++i) {
            if (sample_sir(params, rng).sir < params.gamma_th_lin) ++cnt;
        }
        below[chunk] = cnt;
    });

    std::uint64_t total = 0;
    for (std::uint64_t c : below) total += c;

    OutageEstimate est;
    est.method = OpMethod::monte_carlo;
    est.value = static_cast<double>(total) / static_cast<double>(cfg.n_samples);
    est.err = wilson_half_width(total, cfg.n_samples, cfg.confidence);
    est.err_kind = ErrKind::ci_half_width;
    if (total == 0) est.degraded_accuracy = true; // wide-CI flag
    return est;
}

PdfGrid empirical_pdf(McVariable variable, const SystemParams& params, const McConfig& cfg,
                      int bins) {
    cfg.validate();
    if (bins < 20) throw ContractError("empirical_pdf: bins must be >= 20");

    const std::uint64_t n_chunks = chunk_count(cfg.n_samples);
    std::vector<std::vector<double>> per_chunk(n_chunks);
    parallel_for(n_chunks, cfg.workers, [&](std::size_t chunk) {
        Philox4x32 rng(cfg.seed, chunk);
        const std::uint64_t m = samples_in_chunk(chunk, cfg.n_samples);
        std::vector<double> vals(m);
        for (std::uint64_t i = 0; i < m; ++i) {
            SirSample s = sample_sir(params, rng);
            vals[i] = variable == McVariable::X ? s.x_value : s.y_value;
        }
        per_chunk[chunk] = std::move(vals);
    });

    std::vector<double> values;
    values.reserve(cfg.n_samples);
    for (auto& v : per_chunk) values.insert(values.end(), v.begin(), v.end());

    // support: [0, 99.99% quantile]
    std::vector<double> sorted = values;
    std::size_t qi = static_cast<std::size_t>(0.9999 * (sorted.size() - 1));
    std::nth_element(sorted.begin(), sorted.begin() + qi, sorted.end());
    const double hi = sorted[qi];
    const double width = hi / bins;

    std::vector<std::uint64_t> counts(bins, 0);
    std::uint64_t inside = 0;
    for (double v : values) {
        int b = static_cast<int>(v / width);
        if (b >= 0 && b < bins) {
            ++counts[b];
            ++inside;
        }
    }

    PdfGrid grid;
    grid.method = PdfMethod::mc_hist;
    grid.support.resize(bins);
    grid.density.resize(bins);
    for (int b = 0; b < bins; ++b) {
        grid.support[b] = (b + 0.5) * width;
        grid.density[b] = static_cast<double>(counts[b]) / (static_cast<double>(inside) * width);
    }
    // rescale so the trapezoid reading of the piecewise histogram is exactly 1
    double integral = grid.integral();
    for (double& d : grid.density) d /= integral;
    grid.validate();
    return grid;
}

MomentEstimate moment_oracle(MomentKind kind, const SystemParams& params, const McConfig& cfg) {
    cfg.validate();
    const std::uint64_t n = cfg.n_samples;
    const std::uint64_t n_chunks = chunk_count(n);

    // per-block sums of the raw statistics the moments need
    struct BlockSum {
        double x = 0.0, x2 = 0.0, y2 = 0.0, y4 = 0.0;
        std::uint64_t n = 0;
    };
    std::vector<std::vector<BlockSum>> per_chunk(n_chunks);

    parallel_for(n_chunks, cfg.workers, [&](std::size_t chunk) {
        Philox4x32 rng(cfg.seed, chunk);
        const std::uint64_t m = samples_in_chunk(chunk, n);
        std::vector<BlockSum> blocks((m + kBlockSamples - 1) / kBlockSamples);
        for (std::uint64_t i = 0; i < m; ++i) {
            SirSample s = sample_sir(params, rng);
            BlockSum& b = blocks[i / kBlockSamples];
            const double y2 = s.y_value * s.y_value;
            b.x += s.x_value;
            b.x2 += s.x_value * s.x_value;
            b.y2 += y2;
            b.y4 += y2 * y2;
            b.n += 1;
        }
        per_chunk[chunk] = std::move(blocks);
    });

    std::vector<BlockSum> blocks;
    for (auto& v : per_chunk) blocks.insert(blocks.end(), v.begin(), v.end());

    auto moment_of = [&](const std::vector<const BlockSum*>& sel) {
        double x = 0.0, x2 = 0.0, y2 = 0.0, y4 = 0.0, cnt = 0.0;
        for (const BlockSum* b : sel) {
            x += b->x;
            x2 += b->x2;
            y2 += b->y2;
            y4 += b->y4;
            cnt += static_cast<double>(b->n);
        }
        switch (kind) {
            case MomentKind::EX: return x / cnt;
            case MomentKind::VarX: return x2 / cnt - (x / cnt) * (x / cnt);
            case MomentKind::EY2: return y2 / cnt;
            case MomentKind::EY4: return y4 / cnt;
        }
        return 0.0;
    };

    std::vector<const BlockSum*> all;
    all.reserve(blocks.size());
    for (const auto& b : blocks) all.push_back(&b);

    MomentEstimate est;
    est.value = moment_of(all);

    // block bootstrap, 200 resamples on a dedicated stream
    const int kResamples = 200;
    std::vector<double> resampled(kResamples);
    Philox4x32 boot(cfg.seed ^ 0x9E3779B97F4A7C15ull, ~std::uint64_t{0});
    std::vector<const BlockSum*> sel(blocks.size());
    for (int r = 0; r < kResamples; ++r) {
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            std::uint64_t j = boot.next_u64() % blocks.size();
            sel[i] = &blocks[j];
        }
        resampled[r] = moment_of(sel);
    }
    std::sort(resampled.begin(), resampled.end());
    const double alpha = 1.0 - cfg.confidence;
    auto pick = [&](double q) {
        double idx = q * (kResamples - 1);
        int i0 = static_cast<int>(idx);
        int i1 = std::min(i0 + 1, kResamples - 1);
        return resampled[i0] + (idx - i0) * (resampled[i1] - resampled[i0]);
    };
    est.ci_low = pick(0.5 * alpha);
    est.ci_high = pick(1.0 - 0.5 * alpha);
    return est;
}

} // namespace risop
