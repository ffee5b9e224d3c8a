#ifndef RISOP_ANALYTIC_HPP
#define RISOP_ANALYTIC_HPP

#include "risop/estimates.hpp"
#include "risop/params.hpp"

namespace risop {

/// Grid request for the numerical densities.  Zeros pick the automatic
/// choices: support mean + 12 standard deviations, 2^16 points for the
/// Fourier-inverted X density, 800 points for the quadrature-based Y density.
struct GridSpec {
    int n_points = 0;
    double x_max = 0.0;
};

// --- gamma moment matching ---------------------------------------------------

/// Fit of X = sum |g(n)||h(n)|:  E[X] = N pi/4 s_sr s_rd,
/// Var[X] = N (1 - pi^2/16) s_sr^2 s_rd^2.
GammaFit gamma_fit_x(const SystemParams& params);

/// Fit of Y' = Y^2.  First moment E[Y'] = s_id^2 + N s_ir^2 s_rd^2; second
/// moment in the dimensionally consistent form (see ey4_corrected), validated
/// against the Monte Carlo oracle.
GammaFit gamma_fit_y2(const SystemParams& params);

/// E[Y^2] (first moment of Y').
double ey2_moment(const SystemParams& params);

/// E[Y^4] (second moment of Y'), fourth-power form:
///   4N s^4 + 2N(N-1) s^4 + 2 s_id^4 + 4N s^2 s_id^2,  s^2 = s_ir^2 s_rd^2.
double ey4_corrected(const SystemParams& params);

// --- exact densities ----------------------------------------------------------

/// Density of one cascaded (double-Rayleigh) magnitude:
/// f(h) = 4h/(s_sr^2 s_rd^2) K0(2h/(s_sr s_rd)).
double pdf_x_single_term(const SystemParams& params, double h);

/// Exact density of X: characteristic function of the single cascaded term
/// (discrete quadrature of its closed-form density), raised to the N-th
/// power, inverted on a uniform grid by FFT.
PdfGrid pdf_x_exact(const SystemParams& params, const GridSpec& spec = {});

/// Exact density of Y at one point via the oscillatory Bessel-kernel integral
///   f_Y(y) = y Int_0^inf r J0(y r) (4/(4+s^2 r^2))^N exp(-s_id^2 r^2/4) dr.
double pdf_y_point(const SystemParams& params, double y, double rel_tol = 1e-8);

/// pdf_y_point sampled on an automatic grid.
PdfGrid pdf_y_exact(const SystemParams& params, const GridSpec& spec = {});

/// Explicit double-series form of f_Y, evaluated at N+eps and N-eps and
/// averaged to clear the integer-N pole structure, truncated at the smallest
/// term within m_max.  A cross-check of pdf_y_exact, not the primary path;
/// throws PrecisionError where the expansion is unstable (small y).
double pdf_y_series(const SystemParams& params, double y, int m_max);

// --- outage probability -------------------------------------------------------

/// Exact OP: integral of f_Y(y) F_X(y sqrt(gamma_th/gamma_bar)) dy with both
/// factors from the exact densities.  Absolute error target 1e-8 or 1e-3
/// relative, whichever is looser; below 1e-6 the degraded_accuracy flag is set.
OutageEstimate op_exact(const SystemParams& params);

/// Closed-form OP from the gamma fits: finite sum over parabolic cylinder
/// functions, all Gamma ratios and powers in log space.  Requires the shape
/// of the X fit rounded to the nearest integer (recorded in err).
OutageEstimate op_approx_closed(const GammaFit& fit_x, const GammaFit& fit_y,
                                double gamma_th_lin, double gamma_bar_lin);

/// Gamma-approximate OP by quadrature of the pre-series integral form; valid
/// for arbitrary (non-integer) shapes.  The recommended default.
OutageEstimate op_approx_numeric(const GammaFit& fit_x, const GammaFit& fit_y,
                                 double gamma_th_lin, double gamma_bar_lin);

/// High-SIR asymptote
///   P = Gamma(k_Y + k_X/2) / (Gamma(k_X+1) Gamma(k_Y)) *
///       (gamma_th theta_Y / (gamma_bar theta_X^2))^{k_X/2},
/// evaluated in log space with the true (non-rounded) shape.
OutageEstimate op_asymptotic(const GammaFit& fit_x, const GammaFit& fit_y,
                             double gamma_th_lin, double gamma_bar_lin);

/// Diversity order k_X/2 and the coding gain of the asymptote, so that
/// (G_c * gamma_bar)^{-G_d} reproduces op_asymptotic for any gamma_bar.
DiversityReport diversity_and_coding(const GammaFit& fit_x, const GammaFit& fit_y,
                                     double gamma_th_lin = 1.0);

/// Convenience: both fits from params.
OutageEstimate op_approx_closed(const SystemParams& params);
OutageEstimate op_approx_numeric(const SystemParams& params);
OutageEstimate op_asymptotic(const SystemParams& params);

} // namespace risop

#endif
