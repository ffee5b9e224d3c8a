#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "risop/analytic.hpp"
#include "risop/montecarlo.hpp"
#include "risop/rng.hpp"

using namespace risop;

namespace {
SystemParams unit_params(int n, double snr_db = 0.0, double inr_db = 0.0, double gth_db = 0.0) {
    return SystemParams(n, 1, 1, 1, 1, snr_db, inr_db, gth_db);
}
} // namespace

TEST_CASE("gamma_fit_x reproduces the moment formulas") {
    GammaFit f16 = gamma_fit_x(unit_params(16));
    CHECK(f16.mean() == doctest::Approx(4.0 * M_PI).epsilon(1e-12));
    CHECK(f16.variance() == doctest::Approx(16.0 - M_PI * M_PI).epsilon(1e-12));
    CHECK(f16.shape == doctest::Approx(16.0 * M_PI * M_PI / (16.0 - M_PI * M_PI)).epsilon(1e-12));
    CHECK(f16.scale == doctest::Approx((16.0 - M_PI * M_PI) / (4.0 * M_PI)).epsilon(1e-12));

    GammaFit f1 = gamma_fit_x(unit_params(1));
    CHECK(f1.mean() == doctest::Approx(M_PI / 4.0).epsilon(1e-12));

    // shape is scale-free; doubling sigma_sr doubles the scale only
    SystemParams scaled(16, 2, 1, 1, 1, 0, 0, 0);
    GammaFit fs = gamma_fit_x(scaled);
    CHECK(fs.shape == doctest::Approx(f16.shape).epsilon(1e-12));
    CHECK(fs.scale == doctest::Approx(2.0 * f16.scale).epsilon(1e-12));
}

TEST_CASE("gamma_fit_y2 uses the corrected second moment") {
    SystemParams p = unit_params(16);
    CHECK(ey2_moment(p) == doctest::Approx(17.0).epsilon(1e-13));
    CHECK(ey4_corrected(p) == doctest::Approx(610.0).epsilon(1e-13));
    GammaFit f = gamma_fit_y2(p);
    CHECK(f.shape == doctest::Approx(289.0 / 321.0).epsilon(1e-12));
    CHECK(f.scale == doctest::Approx(321.0 / 17.0).epsilon(1e-12));

    // interference only via the direct path: exponential limit (k -> 1)
    SystemParams direct_only(16, 1, 1, 1e-7, 1.3, 0, 0, 0);
    GammaFit fd = gamma_fit_y2(direct_only);
    CHECK(fd.shape == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fd.mean() == doctest::Approx(1.3 * 1.3).epsilon(1e-6));
}

TEST_CASE("pdf_x_exact: single-term density, normalization, grid guard" *
          doctest::timeout(300)) {
    SystemParams p1 = unit_params(1);
    PdfGrid g = pdf_x_exact(p1);
    CHECK(g.method == PdfMethod::cf_fft);
    CHECK(g.integral() == doctest::Approx(1.0).epsilon(1e-3));
    for (double h : {0.3, 0.7, 1.2, 2.0})
        CHECK(std::abs(g.at(h) - pdf_x_single_term(p1, h)) < 1e-4);

    GridSpec small;
    small.x_max = gamma_fit_x(p1).mean();
    CHECK_THROWS_AS(pdf_x_exact(p1, small), GridError);
}

TEST_CASE("pdf_x_exact mode matches the Monte Carlo mode" * doctest::timeout(300)) {
    SystemParams p = unit_params(4);
    PdfGrid g = pdf_x_exact(p);
    std::size_t arg = 0;
    for (std::size_t i = 0; i < g.density.size(); ++i)
        if (g.density[i] > g.density[arg]) arg = i;
    const double grid_mode = g.support[arg];

    McConfig cfg;
    cfg.n_samples = 1000000;
    cfg.seed = 31;
    PdfGrid hist = empirical_pdf(McVariable::X, p, cfg, 160);
    std::size_t ah = 0;
    for (std::size_t i = 0; i < hist.density.size(); ++i)
        if (hist.density[i] > hist.density[ah]) ah = i;
    // least-squares parabola over a 13-bin window around the peak; a 3-point
    // refinement is too sensitive to bin noise on the flat top
    std::size_t lo = ah >= 6 ? ah - 6 : 0;
    std::size_t hi = std::min(ah + 6, hist.density.size() - 1);
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (std::size_t i = lo; i <= hi; ++i) {
        double u = hist.support[i] - hist.support[ah];
        double d = hist.density[i];
        s0 += 1;
        s1 += u;
        s2 += u * u;
        s3 += u * u * u;
        s4 += u * u * u * u;
        t0 += d;
        t1 += d * u;
        t2 += d * u * u;
    }
    // solve the 3x3 normal equations for d ~ a + b u + c u^2
    double det = s0 * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s3 * s2) + s2 * (s1 * s3 - s2 * s2);
    double b = (t0 * (s3 * s2 - s1 * s4) + t1 * (s0 * s4 - s2 * s2) + t2 * (s1 * s2 - s0 * s3)) / det;
    double cc = (t0 * (s1 * s3 - s2 * s2) + t1 * (s2 * s1 - s0 * s3) + t2 * (s0 * s2 - s1 * s1)) / det;
    double mode_mc = hist.support[ah] - 0.5 * b / cc;
    CHECK(grid_mode == doctest::Approx(mode_mc).epsilon(0.02));
}

TEST_CASE("pdf_y_exact: prefactor zero, normalization, direct-path limit" *
          doctest::timeout(600)) {
    CHECK(pdf_y_point(unit_params(4), 0.0) == 0.0);

    for (int n : {4, 16}) {
        PdfGrid g = pdf_y_exact(unit_params(n));
        CHECK(g.method == PdfMethod::hankel);
        CHECK(g.integral() == doctest::Approx(1.0).epsilon(1e-3));
    }

    // vanishing RIS interference: f_Y collapses to Rayleigh with E[Y^2]=sigma_id^2
    SystemParams lim(4, 1, 1, 1e-8, 1.2, 0, 0, 0);
    const double s2 = 1.2 * 1.2;
    for (double y : {0.4, 1.0, 1.9}) {
        double expected = 2.0 * y / s2 * std::exp(-y * y / s2);
        CHECK(pdf_y_point(lim, y) == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("pdf_y_series agrees with the quadrature density where stable" *
          doctest::timeout(300)) {
    struct Case {
        int n;
        double y;
    };
    for (Case c : {Case{4, 2.0}, Case{4, 3.0}, Case{8, 2.5}, Case{16, 4.5}}) {
        SystemParams p = unit_params(c.n);
        double series = pdf_y_series(p, c.y, 40);
        double exact = pdf_y_point(p, c.y);
        CHECK(std::abs(series - exact) <= 0.02 * exact);
    }
    // small y: the expansion's divergent tail dominates and is reported
    CHECK_THROWS_AS(pdf_y_series(unit_params(4), 0.3, 40), PrecisionError);
    CHECK_THROWS_AS(pdf_y_series(unit_params(4), -1.0, 40), ContractError);
}

TEST_CASE("op_exact: threshold limit and sanity" * doctest::timeout(600)) {
    OutageEstimate zero = op_exact(unit_params(4, 0, 0, -100.0));
    CHECK(zero.value < 1e-10);
    CHECK(zero.degraded_accuracy);

    // moderate-OP configuration cross-checked against the Monte Carlo oracle
    SystemParams p = unit_params(4, 8, 0, 0);
    OutageEstimate exact = op_exact(p);
    McConfig cfg;
    cfg.n_samples = 1000000;
    cfg.seed = 17;
    OutageEstimate mc = estimate_op_mc(p, cfg);
    CHECK(std::abs(exact.value - mc.value) <= mc.err);
}

TEST_CASE("op_exact hits the high-SNR anchor band" * doctest::timeout(600)) {
    OutageEstimate est = op_exact(unit_params(4, 20, 0, 0));
    CHECK(est.value > 3.16e-6);
    CHECK(est.value < 3.16e-5);
}

TEST_CASE("both OP routes depend only on the composite ratio") {
    // same gamma_th * inr / snr in three parameterizations
    SystemParams a(8, 1, 1, 1, 1, 20, 0, 0);
    SystemParams b(8, 1, 1, 1, 1, 30, 10, 0);
    SystemParams c(8, 1, 1, 1, 1, 14, 0, -6);
    double pa = op_approx_numeric(a).value;
    double pb = op_approx_numeric(b).value;
    double pc = op_approx_numeric(c).value;
    CHECK(pa == doctest::Approx(pb).epsilon(1e-10));
    CHECK(pa == doctest::Approx(pc).epsilon(1e-10));
    CHECK(op_exact(a).value == doctest::Approx(op_exact(b).value).epsilon(1e-10));
}

TEST_CASE("monotonicity ladders" * doctest::timeout(600)) {
    // nonincreasing in snr
    double prev = 1.1;
    for (double snr : {0.0, 5.0, 10.0, 15.0, 20.0}) {
        double v = op_approx_numeric(unit_params(4, snr, 0, 0)).value;
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
    // nondecreasing in inr
    prev = -0.1;
    for (double inr : {-10.0, -5.0, 0.0, 5.0, 10.0}) {
        double v = op_approx_numeric(unit_params(4, 10, inr, 0)).value;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    // nondecreasing in gamma_th
    prev = -0.1;
    for (double gth : {-6.0, -3.0, 0.0, 3.0, 6.0}) {
        double v = op_approx_numeric(unit_params(4, 10, 0, gth)).value;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    // spot-check the exact route on a 3-point snr ladder
    prev = 1.1;
    for (double snr : {2.0, 8.0, 14.0}) {
        double v = op_exact(unit_params(4, snr, 0, 0)).value;
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
}

TEST_CASE("two-exponential special case matches simulation" * doctest::timeout(300)) {
    // k_X = k_Y = 1: both fits exponential
    GammaFit fx{1.0, 0.7};
    GammaFit fy{1.0, 2.3};
    const double gth = 1.0, gbar = 10.0;
    OutageEstimate est = op_approx_numeric(fx, fy, gth, gbar);

    Philox4x32 rng(123, 0);
    const std::uint64_t n = 1000000;
    std::uint64_t below = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        double x = -fx.scale * std::log(rng.next_open01());
        double y2 = -fy.scale * std::log(rng.next_open01());
        if (gbar * x * x / y2 < gth) ++below;
    }
    double p_mc = static_cast<double>(below) / n;
    double half = wilson_half_width(below, n, 0.99);
    CHECK(std::abs(est.value - p_mc) <= half);
}

TEST_CASE("closed form equals the numeric route at integer shapes") {
    for (double kx : {1.0, 2.0, 5.0, 8.0, 13.0, 20.0}) {
        for (double ky : {0.35, 0.9, 2.3}) {
            for (double ratio : {1e-3, 0.1, 1.0}) {
                GammaFit fx{kx, 0.6};
                GammaFit fy{ky, 1.8};
                double closed = op_approx_closed(fx, fy, ratio, 1.0).value;
                double numeric = op_approx_numeric(fx, fy, ratio, 1.0).value;
                CHECK(std::abs(closed - numeric) <= 1e-6);
            }
        }
    }
}

TEST_CASE("closed form: limits and guards") {
    GammaFit fx{6.0, 0.5};
    GammaFit fy{0.9, 18.9};
    // gamma_th -> 0: outage vanishes
    CHECK(op_approx_closed(fx, fy, 0.0, 1.0).value == 0.0);
    CHECK(op_approx_closed(fx, fy, 1e-10, 1.0).value < 1e-6);
    // very large integer shape: cylinder order guard
    GammaFit huge{600.0, 0.5};
    CHECK_THROWS_AS(op_approx_closed(huge, fy, 1.0, 1.0), PrecisionError);
    // rounding distance is recorded in the error descriptor
    GammaFit frac{6.44, 0.5};
    OutageEstimate est = op_approx_closed(frac, fy, 1.0, 1.0);
    CHECK(est.err == doctest::Approx(0.44).epsilon(1e-10));
    CHECK(est.err_kind == ErrKind::model);
}

TEST_CASE("asymptote: power law, high-SIR convergence, diversity identity") {
    SystemParams p4 = unit_params(4);
    GammaFit fx = gamma_fit_x(p4);
    GammaFit fy = gamma_fit_y2(p4);

    // doubling gamma_bar multiplies P by 2^{-kx/2}
    double p_a = op_asymptotic(fx, fy, 1.0, 1e5).value;
    double p_b = op_asymptotic(fx, fy, 1.0, 2e5).value;
    CHECK(p_b / p_a == doctest::Approx(std::pow(2.0, -0.5 * fx.shape)).epsilon(1e-12));

    // ratio against the numeric route at 60 dB
    double numeric = op_approx_numeric(fx, fy, 1.0, 1e6).value;
    double asym = op_asymptotic(fx, fy, 1.0, 1e6).value;
    CHECK(asym / numeric > 0.95);
    CHECK(asym / numeric < 1.05);

    DiversityReport rep = diversity_and_coding(fx, fy);
    CHECK(rep.diversity_order ==
          doctest::Approx(4.0 * M_PI * M_PI / (2.0 * (16.0 - M_PI * M_PI))).epsilon(1e-12));

    // linear in N
    DiversityReport rep8 = diversity_and_coding(gamma_fit_x(unit_params(8)), fy);
    CHECK(rep8.diversity_order == doctest::Approx(2.0 * rep.diversity_order).epsilon(1e-12));

    // (G_c gamma_bar)^{-G_d} reproduces the asymptote for any gamma_bar
    for (double gth : {0.5, 1.0}) {
        DiversityReport r = diversity_and_coding(fx, fy, gth);
        for (double gbar : {1e4, 1e6}) {
            double via_gain = std::pow(r.coding_gain * gbar, -r.diversity_order);
            double direct = op_asymptotic(fx, fy, gth, gbar).value;
            CHECK(via_gain == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("empirical diversity slope of the numeric route" * doctest::timeout(300)) {
    SystemParams p = unit_params(4);
    GammaFit fx = gamma_fit_x(p);
    GammaFit fy = gamma_fit_y2(p);
    double p50 = op_approx_numeric(fx, fy, 1.0, 1e5).value;
    double p60 = op_approx_numeric(fx, fy, 1.0, 1e6).value;
    double slope = std::log10(p60) - std::log10(p50); // per decade
    CHECK(slope == doctest::Approx(-0.5 * fx.shape).epsilon(0.02));
}

TEST_CASE("pdf grid validation rejects broken grids") {
    PdfGrid g;
    g.support = {0.0, 1.0, 2.0};
    g.density = {0.0, 1.0};
    CHECK_THROWS_AS(g.validate(), ContractError);
    g.density = {0.0, 1.0, -0.1};
    CHECK_THROWS_AS(g.validate(), PrecisionError);
    g.density = {0.0, 0.1, 0.0};
    CHECK_THROWS_AS(g.validate(), PrecisionError); // mass far from 1
}
