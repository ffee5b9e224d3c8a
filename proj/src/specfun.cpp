#include "risop/specfun.hpp"

#include <cmath>
#include <limits>

#include "risop/quad.hpp"

namespace risop {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240;
constexpr double kLnSqrt2Pi = 0.91893853320467274178032973640562;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// ---------------------------------------------------------------------------
// Double-double arithmetic for cancellation-prone series.  Only the handful
// of operations the series recurrences need.
// ---------------------------------------------------------------------------
struct dd {
    double hi = 0.0, lo = 0.0;
};

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd dd_add(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd dd_mul(dd a, double b) {
    dd p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

inline dd dd_mul(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline dd dd_div(dd a, double b) {
    double q1 = a.hi / b;
    dd p = two_prod(q1, b);
    double r = ((a.hi - p.hi) - p.lo) + a.lo;
    double q2 = r / b;
    return quick_two_sum(q1, q2);
}

inline dd dd_neg(dd a) { return {-a.hi, -a.lo}; }

inline dd dd_div(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = dd_add(a, dd_neg(dd_mul(b, q1)));
    double q2 = r.hi / b.hi;
    r = dd_add(r, dd_neg(dd_mul(b, q2)));
    double q3 = r.hi / b.hi;
    dd q = quick_two_sum(q1, q2);
    return dd_add(q, {q3, 0.0});
}

// ---------------------------------------------------------------------------
// log Gamma: Stirling with Bernoulli correction for x >= 12, recurrence shift
// below, reflection for x < 0.
// ---------------------------------------------------------------------------
double ln_gamma_stirling(double x) {
    // B_{2k} / (2k (2k-1))
    static constexpr double c[8] = {
        1.0 / 12.0,      -1.0 / 360.0,       1.0 / 1260.0, -1.0 / 1680.0,
        1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0,      -3617.0 / 122400.0};
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double corr = c[7];
    for (int k = 6; k >= 0; --k) corr = corr * inv2 + c[k];
    return (x - 0.5) * std::log(x) - x + kLnSqrt2Pi + corr * inv;
}

double ln_abs_sin_pi(double x, int* sign) {
    // sin(pi x) with proper range reduction; x is not an integer here.
    double r = x - std::floor(x); // in (0,1)
    double s = std::sin(M_PI * (r <= 0.5 ? r : 1.0 - r));
    long long parity = static_cast<long long>(std::floor(x)) & 1;
    *sign = parity ? -1 : 1;
    return std::log(s);
}

} // namespace

double ln_gamma(double x) {
    if (std::isnan(x)) throw DomainError("ln_gamma: NaN argument");
    if (is_nonpositive_integer(x))
        throw PoleError("ln_gamma: pole at non-positive integer");
    if (x < 0.0) {
        int s;
        return std::log(M_PI) - ln_abs_sin_pi(x, &s) - ln_gamma(1.0 - x);
    }
    if (x >= 12.0) return ln_gamma_stirling(x);
    // shift up: lnGamma(x) = lnGamma(x + m) - sum log(x + i)
    double shift = 0.0;
    double y = x;
    while (y < 12.0) {
        shift += std::log(y);
        y += 1.0;
    }
    return ln_gamma_stirling(y) - shift;
}

int gamma_sign(double x) {
    if (is_nonpositive_integer(x))
        throw PoleError("gamma_sign: pole at non-positive integer");
    if (x > 0.0) return 1;
    int s;
    ln_abs_sin_pi(x, &s);
    return s; // Gamma(1-x) > 0 for x < 0, so the sign is sin's
}

double rgamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    return gamma_sign(x) * std::exp(-ln_gamma(x));
}

// ---------------------------------------------------------------------------
// Regularized lower incomplete gamma.
// ---------------------------------------------------------------------------
double reg_lower_gamma(double a, double x) {
    if (!(a > 0.0)) throw ContractError("reg_lower_gamma: requires a > 0");
    if (x < 0.0) throw ContractError("reg_lower_gamma: requires x >= 0");
    if (x == 0.0) return 0.0;

    const double ln_pref = a * std::log(x) - x - ln_gamma(a);

    if (x < a + 1.0) {
        // series: P = x^a e^-x / Gamma(a) * sum_n x^n / (a (a+1) ... (a+n))
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < 10000; ++n) {
            term *= x / (a + n);
            sum += term;
            if (term < sum * 1e-17) return std::exp(ln_pref) * sum;
        }
        throw PrecisionError("reg_lower_gamma: series did not converge");
    }

    // Lentz continued fraction for Q(a, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-17) {
            double q = std::exp(ln_pref) * h;
            return 1.0 - q;
        }
    }
    throw PrecisionError("reg_lower_gamma: continued fraction did not converge");
}

// ---------------------------------------------------------------------------
// Bessel kernels.
// ---------------------------------------------------------------------------
namespace {

// Hankel expansion coefficients a_k(0) = prod_{j<=k} -(2j-1)^2 / (8k), via
// recurrence; shared by the large-argument J0 and I0 forms.
void hankel_pq(double x, double* p, double* q) {
    double ak = 1.0; // a_0
    double pp = 0.0, qq = 0.0;
    double xpow = 1.0;
    for (int k = 0; k <= 16; ++k) {
        double term = ak / xpow;
        if (k % 2 == 0)
            pp += (k % 4 == 0 ? term : -term);
        else
            qq += ((k - 1) % 4 == 0 ? term : -term);
        ak *= -((2.0 * k + 1.0) * (2.0 * k + 1.0)) / (8.0 * (k + 1.0));
        xpow *= x;
        if (std::abs(ak / xpow) < 1e-19) break;
    }
    *p = pp;
    *q = qq;
}

} // namespace

double bessel_j0(double x) {
    x = std::abs(x);
    if (x <= 30.0) {
        // compensated power series; the largest term reaches ~e^x/(pi x), so
        // double-double headroom keeps the cancelled result near full
        // precision over the whole series range
        const dd q = two_prod(x / 2.0, x / 2.0);
        dd term{1.0, 0.0};
        dd sum = term;
        for (int k = 1; k < 200; ++k) {
            term = dd_mul(term, q);
            term = dd_div(term, -static_cast<double>(k) * k);
            sum = dd_add(sum, term);
            if (std::abs(term.hi) < 1e-40 * (std::abs(sum.hi) + 1e-300) &&
                static_cast<double>(k) > x / 2.0 + 8.0)
                break;
        }
        return sum.hi + sum.lo;
    }
    double p, q;
    hankel_pq(x, &p, &q);
    const double chi = x - 0.25 * M_PI;
    return std::sqrt(2.0 / (M_PI * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel_i0(double x) {
    x = std::abs(x);
    if (x <= 18.0) {
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return sum;
    }
    // scaled expansion, all terms positive for I0
    double ak = 1.0, sum = 0.0, xpow = 1.0;
    for (int k = 0; k <= 20; ++k) {
        double term = std::abs(ak) / xpow;
        sum += term;
        ak *= -((2.0 * k + 1.0) * (2.0 * k + 1.0)) / (8.0 * (k + 1.0));
        xpow *= x;
        if (std::abs(ak) / xpow < 1e-18 * sum) break;
    }
    return std::exp(x) / std::sqrt(2.0 * M_PI * x) * sum;
}

double bessel_k0(double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k0: requires x > 0");
    if (x < 2.0) {
        const double q = 0.25 * x * x;
        double i0_term = 1.0, i0 = 1.0;
        double h = 0.0, s_term = 1.0, s = 0.0;
        for (int k = 1; k < 60; ++k) {
            i0_term *= q / (static_cast<double>(k) * k);
            i0 += i0_term;
            h += 1.0 / k;
            s_term *= q / (static_cast<double>(k) * k);
            s += s_term * h;
            if (i0_term < 1e-18 && s_term * h < 1e-18) break;
        }
        return -(std::log(0.5 * x) + kEulerGamma) * i0 + s;
    }
    // K0(x) = 2 e^{-x} int_0^inf exp(-2 x u^2) / sqrt(1 + u^2) du
    const double u_max = std::sqrt(41.0 / (2.0 * x));
    auto f = [x](double u) { return std::exp(-2.0 * x * u * u) / std::sqrt(1.0 + u * u); };
    double integral = integrate_gk(f, 0.0, u_max, 1e-14, 0.0).value;
    return 2.0 * std::exp(-x) * integral;
}

// ---------------------------------------------------------------------------
// Hypergeometric series.
// ---------------------------------------------------------------------------
namespace {

// Compensated sum of a pFq-type series.  The term recurrence is carried out
// entirely in double-double (numerator factors, denominator factors and the
// division), so the per-term error stays near 1e-31 and the accumulated sum
// can absorb ~20 digits of cancellation before losing the 1e-9 contract.
// Returns the sum; *max_term_out reports the largest |term|, which bounds the
// cancellation the accumulation had to absorb.
double hyper_series(std::initializer_list<double> upper, std::initializer_list<double> lower,
                    double x, int max_terms, double* max_term_out) {
    dd term{1.0, 0.0};
    dd sum = term;
    double max_term = 1.0;
    int settled = 0;
    for (int k = 0; k < max_terms; ++k) {
        dd num{static_cast<double>(x), 0.0};
        for (double a : upper) num = dd_mul(num, two_sum(a, k));
        dd den = two_sum(1.0, k);
        for (double b : lower) den = dd_mul(den, two_sum(b, k));
        term = dd_div(dd_mul(term, num), den);
        sum = dd_add(sum, term);
        max_term = std::max(max_term, std::abs(term.hi));
        if (std::abs(term.hi) < 1e-18 * (std::abs(sum.hi) + 1e-300)) {
            if (++settled >= 3) {
                if (max_term_out) *max_term_out = max_term;
                return sum.hi + sum.lo;
            }
        } else {
            settled = 0;
        }
    }
    throw PrecisionError("hypergeometric series did not converge within max_terms");
}

} // namespace

double kummer_1f1(double a, double b, double x, const PrecisionPolicy& pol) {
    pol.validate();
    if (is_nonpositive_integer(b))
        throw DomainError("kummer_1f1: b is a non-positive integer");
    if (x == 0.0) return 1.0;
    if (x < 0.0) // Kummer transform keeps the series terms same-signed
        return std::exp(x) * kummer_1f1(b - a, b, -x, pol);

    double max_term = 1.0;
    double s = hyper_series({a}, {b}, x, pol.max_terms, &max_term);
    if (max_term * 1e-28 > std::abs(s) * pol.rel_tol)
        throw PrecisionError("kummer_1f1: cancellation beyond working precision");
    return s;
}

double hyp_1f2(double a, double b1, double b2, double x, const PrecisionPolicy& pol) {
    pol.validate();
    if (is_nonpositive_integer(b1) || is_nonpositive_integer(b2))
        throw DomainError("hyp_1f2: lower parameter is a non-positive integer");
    if (x == 0.0) return 1.0;

    double max_term = 1.0;
    double s = hyper_series({a}, {b1, b2}, x, pol.max_terms, &max_term);
    if (max_term * 1e-28 > std::abs(s) * pol.rel_tol)
        throw PrecisionError("hyp_1f2: cancellation beyond working precision");
    return s;
}

// ---------------------------------------------------------------------------
// Parabolic cylinder D_nu.
// ---------------------------------------------------------------------------
namespace {

// log of int_0^inf t^{mu-1} exp(-t^2/2 - z t) dt for mu > 0.
double ln_pcf_integral(double mu, double z) {
    if (mu >= 1.0) {
        // unimodal integrand; shift by the log-maximum and integrate the rest
        const double t_star =
            mu > 1.0 ? 0.5 * (-z + std::sqrt(z * z + 4.0 * (mu - 1.0))) : 0.0;
        auto g = [mu, z](double t) {
            return (mu > 1.0 ? (mu - 1.0) * std::log(t) : 0.0) - 0.5 * t * t - z * t;
        };
        const double g_max = t_star > 0.0 ? g(t_star) : 0.0;
        // expand until the integrand is negligible on both sides
        double lo = t_star, hi = t_star > 0.0 ? t_star : 1.0;
        double step = std::max(1.0, 0.1 * (t_star + 1.0));
        while (lo > 0.0 && g(lo) > g_max - 46.0) lo = std::max(0.0, lo - step), step *= 1.5;
        step = std::max(1.0, 0.1 * (t_star + 1.0));
        while (g(hi) > g_max - 46.0) hi += step, step *= 1.5;
        auto f = [&](double t) {
            if (t <= 0.0) return mu > 1.0 ? 0.0 : std::exp(-g_max);
            return std::exp(g(t) - g_max);
        };
        double integral = integrate_gk(f, lo, hi, 1e-12, 0.0).value;
        return g_max + std::log(integral);
    }
    // 0 < mu < 1: integrable singularity at 0; substitute t = u^{1/mu} on [0,1]
    auto phi = [z](double t) { return std::exp(-0.5 * t * t - z * t); };
    auto left = [&](double u) {
        double t = std::pow(u, 1.0 / mu);
        return phi(t);
    };
    double part1 = integrate_gk(left, 0.0, 1.0, 1e-12, 0.0).value / mu;
    double hi = 1.0;
    while (-0.5 * hi * hi - z * hi + (mu - 1.0) * std::log(hi) > -46.0) hi += 1.0;
    auto right = [&](double t) { return std::pow(t, mu - 1.0) * phi(t); };
    double part2 = integrate_gk(right, 1.0, hi, 1e-12, 0.0).value;
    return std::log(part1 + part2);
}

// Large-z expansion, used for nu in (0, 1] past the Kummer-form switch.
double pcf_large_z(double nu, double z) {
    double sum = 1.0, term = 1.0;
    for (int s = 1; s <= 20; ++s) {
        term *= -(-nu + 2.0 * s - 2.0) * (-nu + 2.0 * s - 1.0) / (2.0 * s * z * z);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::exp(nu * std::log(z) - 0.25 * z * z) * sum;
}

// Two-term Kummer representation, accumulated in double-double so the final
// subtraction keeps headroom.  Reports the realized cancellation factor so
// the caller can decide whether the result is trustworthy.
double pcf_kummer(double nu, double z, const PrecisionPolicy& pol,
                  double* cancellation_out) {
    const dd w = dd_div(two_prod(z, z), 2.0);
    auto phi_dd = [&](double a, double b) {
        dd term{1.0, 0.0};
        dd sum = term;
        for (int k = 0; k < pol.max_terms; ++k) {
            dd num = dd_mul(w, two_sum(a, k));
            dd den = dd_mul(two_sum(b, k), two_sum(1.0, k));
            term = dd_div(dd_mul(term, num), den);
            sum = dd_add(sum, term);
            if (std::abs(term.hi) < 1e-34 * std::abs(sum.hi) && k > 4) break;
        }
        return sum;
    };
    dd t1 = phi_dd(-0.5 * nu, 0.5);
    dd t2 = phi_dd(0.5 * (1.0 - nu), 1.5);
    const double c1 = std::sqrt(M_PI) * rgamma(0.5 * (1.0 - nu));
    const double c2 = std::sqrt(2.0 * M_PI) * z * rgamma(-0.5 * nu);
    dd bracket = dd_add(dd_mul(t1, c1), dd_mul(t2, -c2));
    double scale = std::exp2(0.5 * nu) * std::exp(-0.25 * z * z);
    double big = std::max(std::abs(t1.hi * c1), std::abs(t2.hi * c2));
    // the Gamma prefactors only carry double precision, so the subtraction
    // may absorb at most ~1e6 of cancellation before the 1e-8 contract breaks
    if (cancellation_out)
        *cancellation_out = big / std::max(std::abs(bracket.hi + bracket.lo), 1e-300);
    return (bracket.hi + bracket.lo) * scale;
}

} // namespace

double ln_pcf_d_neg(double mu, double z) {
    if (!(mu > 0.0)) throw ContractError("ln_pcf_d_neg: requires mu > 0");
    if (z < 0.0) throw ContractError("ln_pcf_d_neg: requires z >= 0");
    return -0.25 * z * z - ln_gamma(mu) + ln_pcf_integral(mu, z);
}

double pcf_d(double nu, double z, const PrecisionPolicy& pol) {
    pol.validate();
    if (z < 0.0) throw ContractError("pcf_d: requires z >= 0");
    if (nu > 1.0) throw ContractError("pcf_d: validated domain is nu <= 1");

    constexpr double kCancelBudget = 1e6;

    if (nu <= 0.0) {
        if (nu == 0.0) return std::exp(-0.25 * z * z);
        // Kummer form while well conditioned, integral form otherwise
        if (0.5 * z * z <= pol.pcf_hyp_z2_max && -nu <= pol.pcf_hyp_nu_max) {
            double cancel = 0.0;
            double v = pcf_kummer(nu, z, pol, &cancel);
            if (cancel <= kCancelBudget) return v;
        }
        return std::exp(ln_pcf_d_neg(-nu, z));
    }
    // nu in (0, 1]
    if (0.5 * z * z <= pol.pcf_hyp_z2_max) {
        double cancel = 0.0;
        double v = pcf_kummer(nu, z, pol, &cancel);
        if (cancel <= kCancelBudget) return v;
        if (z < 4.0)
            throw PrecisionError("pcf_d: cancellation beyond working precision");
    }
    return pcf_large_z(nu, z);
}

} // namespace risop
