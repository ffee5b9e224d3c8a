#ifndef RISOP_SPECFUN_HPP
#define RISOP_SPECFUN_HPP

#include "risop/errors.hpp"

namespace risop {

/// Tunable accuracy knobs for the series evaluators.  The switch points are
/// the boundaries between series / asymptotic / integral regimes; they were
/// fixed against the 50-digit reference table in tests/fixtures.
struct PrecisionPolicy {
    double rel_tol = 1e-10;
    int max_terms = 500;
    double j0_series_max = 30.0;  // compensated power series below, Hankel expansion above
    double i0_series_max = 18.0;  // power series below, scaled expansion above
    double k0_series_max = 2.0;   // log series below, scaled integral above
    double pcf_hyp_z2_max = 8.0;  // two-term Kummer form while z^2/2 below this ...
    double pcf_hyp_nu_max = 40.0; // ... and |nu| below this; integral form otherwise

    void validate() const {
        if (!(rel_tol > 0.0) || rel_tol > 1e-4)
            throw ContractError("PrecisionPolicy: rel_tol must be in (0, 1e-4]");
        if (max_terms < 50)
            throw ContractError("PrecisionPolicy: max_terms must be >= 50");
    }
};

/// log|Gamma(x)| for non-pole real x.  Throws PoleError at 0, -1, -2, ...
double ln_gamma(double x);

/// Sign of Gamma(x) (+1 or -1) for non-pole real x.
int gamma_sign(double x);

/// 1/Gamma(x); exactly 0 at the poles.
double rgamma(double x);

/// Regularized lower incomplete gamma P(a, x) = gamma(a,x)/Gamma(a).
/// Series for x < a+1, continued fraction otherwise.
double reg_lower_gamma(double a, double x);

double bessel_j0(double x);
double bessel_i0(double x);
double bessel_k0(double x); // requires x > 0

/// Kummer confluent hypergeometric Phi(a, b; x).  Transforms to
/// exp(x) * Phi(b-a, b; -x) for x < 0.
double kummer_1f1(double a, double b, double x, const PrecisionPolicy& pol = {});

/// Generalized hypergeometric 1F2(a; b1, b2; x).
double hyp_1f2(double a, double b1, double b2, double x, const PrecisionPolicy& pol = {});

/// Parabolic cylinder function D_nu(z) for z >= 0, nu <= 1.
///
/// Uses the two-term Kummer representation
///   D_nu(z) = 2^{nu/2} e^{-z^2/4} [ sqrt(pi)/Gamma((1-nu)/2) Phi(-nu/2, 1/2; z^2/2)
///             - sqrt(2 pi) z / Gamma(-nu/2) Phi((1-nu)/2, 3/2; z^2/2) ]
/// where the subtraction is well conditioned, and switches to the scaled
/// integral representation (nu < 0) or the large-z expansion (nu in (0,1])
/// where it is not.
double pcf_d(double nu, double z, const PrecisionPolicy& pol = {});

/// log D_{-mu}(z) for mu > 0, z >= 0, from the integral representation
///   D_{-mu}(z) = e^{-z^2/4} / Gamma(mu) * int_0^inf t^{mu-1} e^{-t^2/2 - z t} dt,
/// evaluated in log scale so that it stays finite far below the double range.
double ln_pcf_d_neg(double mu, double z);

} // namespace risop

#endif
