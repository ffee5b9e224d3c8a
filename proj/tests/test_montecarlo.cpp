#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "risop/analytic.hpp"
#include "risop/montecarlo.hpp"

using namespace risop;

TEST_CASE("config invariants") {
    McConfig bad;
    bad.n_samples = 50;
    SystemParams p(2, 1, 1, 1, 1, 0, 0, 0);
    CHECK_THROWS_AS(estimate_op_mc(p, bad), ContractError);
    McConfig bad2;
    bad2.confidence = 1.5;
    CHECK_THROWS_AS(estimate_op_mc(p, bad2), ContractError);
}

TEST_CASE("threshold far below any SIR gives zero with a tight upper CI") {
    SystemParams p(4, 1, 1, 1, 1, 0, 0, -100);
    McConfig cfg;
    cfg.n_samples = 10000;
    cfg.seed = 3;
    OutageEstimate est = estimate_op_mc(p, cfg);
    CHECK(est.value == 0.0);
    CHECK(est.err < 1e-3);
    CHECK(est.degraded_accuracy); // wide-CI flag on zero successes
    CHECK(est.method == OpMethod::monte_carlo);
}

TEST_CASE("bit-identical estimates for any worker count") {
    SystemParams p(4, 1, 1, 1, 1, 6, 0, 0);
    McConfig cfg;
    cfg.n_samples = 200123; // exercises a partial tail chunk
    cfg.seed = 77;
    double vals[3], errs[3];
    int idx = 0;
    for (int workers : {1, 4, 16}) {
        cfg.workers = workers;
        OutageEstimate est = estimate_op_mc(p, cfg);
        vals[idx] = est.value;
        errs[idx] = est.err;
        ++idx;
    }
    CHECK(vals[0] == vals[1]);
    CHECK(vals[1] == vals[2]);
    CHECK(errs[0] == errs[1]);
    CHECK(errs[1] == errs[2]);
}

TEST_CASE("wilson interval basics") {
    CHECK(wilson_half_width(0, 10000, 0.99) < 1e-3);
    CHECK(wilson_half_width(5000, 10000, 0.99) ==
          doctest::Approx(2.5758 * 0.5 / 100.0).epsilon(0.01));
    CHECK_THROWS_AS(inv_norm_cdf(0.0), ContractError);
    CHECK(inv_norm_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(inv_norm_cdf(0.995) == doctest::Approx(2.5758293035489004).epsilon(1e-6));
}

TEST_CASE("empirical_pdf: shape and closed-form single-term match" * doctest::timeout(300)) {
    SystemParams p(1, 1, 1, 1, 1, 0, 0, 0);
    McConfig cfg;
    cfg.n_samples = 1000000;
    cfg.seed = 5;
    CHECK_THROWS_AS(empirical_pdf(McVariable::X, p, cfg, 10), ContractError);

    PdfGrid hist = empirical_pdf(McVariable::X, p, cfg, 120);
    CHECK(hist.integral() == doctest::Approx(1.0).epsilon(1e-9));
    double l1 = 0.0;
    double width = hist.support[1] - hist.support[0];
    for (std::size_t i = 0; i < hist.support.size(); ++i)
        l1 += std::abs(hist.density[i] - pdf_x_single_term(p, hist.support[i])) * width;
    CHECK(l1 < 0.02);
}

TEST_CASE("moment_oracle against the closed-form moments" * doctest::timeout(600)) {
    SystemParams p(16, 1, 1, 1, 1, 0, 0, 0);
    McConfig cfg;
    cfg.n_samples = 1000000;
    cfg.seed = 9;

    MomentEstimate ex = moment_oracle(MomentKind::EX, p, cfg);
    CHECK(ex.value == doctest::Approx(4.0 * M_PI).epsilon(0.01));
    CHECK(ex.ci_low < ex.value);
    CHECK(ex.value < ex.ci_high);

    MomentEstimate vx = moment_oracle(MomentKind::VarX, p, cfg);
    CHECK(vx.value == doctest::Approx(16.0 * (1.0 - M_PI * M_PI / 16.0)).epsilon(0.02));

    MomentEstimate ey2 = moment_oracle(MomentKind::EY2, p, cfg);
    CHECK(ey2.value == doctest::Approx(17.0).epsilon(0.01));

    MomentEstimate ey4 = moment_oracle(MomentKind::EY4, p, cfg);
    CHECK(ey4.value == doctest::Approx(610.0).epsilon(0.02));
}

TEST_CASE("99% CI covers the exact OP in at least 95 of 100 seeds" * doctest::timeout(600)) {
    SystemParams p(2, 1, 1, 1, 1, 5, 0, 0);
    const double exact = op_exact(p).value;
    McConfig cfg;
    cfg.n_samples = 20000;
    int covered = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        cfg.seed = seed;
        OutageEstimate est = estimate_op_mc(p, cfg);
        if (std::abs(est.value - exact) <= est.err) ++covered;
    }
    CHECK(covered >= 95);
}
