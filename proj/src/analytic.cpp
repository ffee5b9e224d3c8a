#include "risop/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "risop/fft.hpp"
#include "risop/quad.hpp"
#include "risop/specfun.hpp"

namespace risop {

// ---------------------------------------------------------------------------
// PdfGrid / enum plumbing
// ---------------------------------------------------------------------------

std::string to_string(PdfMethod m) {
    switch (m) {
        case PdfMethod::cf_fft: return "cf_fft";
        case PdfMethod::hankel: return "hankel";
        case PdfMethod::series: return "series";
        case PdfMethod::gamma_fit: return "gamma_fit";
        case PdfMethod::mc_hist: return "mc_hist";
    }
    return "?";
}

std::string to_string(OpMethod m) {
    switch (m) {
        case OpMethod::exact_numeric: return "exact";
        case OpMethod::gamma_closed: return "gamma-closed";
        case OpMethod::gamma_numeric: return "gamma-numeric";
        case OpMethod::asymptotic: return "asymptotic";
        case OpMethod::monte_carlo: return "mc";
        case OpMethod::surrogate: return "surrogate";
    }
    return "?";
}

OpMethod op_method_from_string(const std::string& name) {
    if (name == "exact") return OpMethod::exact_numeric;
    if (name == "gamma-closed") return OpMethod::gamma_closed;
    if (name == "gamma-numeric") return OpMethod::gamma_numeric;
    if (name == "asymptotic") return OpMethod::asymptotic;
    if (name == "mc") return OpMethod::monte_carlo;
    if (name == "surrogate") return OpMethod::surrogate;
    throw ContractError("unknown OP method: " + name);
}

double PdfGrid::integral() const {
    double acc = 0.0;
    for (std::size_t i = 1; i < support.size(); ++i)
        acc += 0.5 * (density[i] + density[i - 1]) * (support[i] - support[i - 1]);
    return acc;
}

double PdfGrid::at(double x) const {
    if (support.empty() || x < support.front() || x > support.back()) return 0.0;
    auto it = std::lower_bound(support.begin(), support.end(), x);
    if (it == support.begin()) return density.front();
    std::size_t i = static_cast<std::size_t>(it - support.begin());
    double t = (x - support[i - 1]) / (support[i] - support[i - 1]);
    return density[i - 1] + t * (density[i] - density[i - 1]);
}

void PdfGrid::validate() const {
    if (support.size() != density.size() || support.size() < 2)
        throw ContractError("PdfGrid: support/density size mismatch");
    for (std::size_t i = 1; i < support.size(); ++i)
        if (!(support[i] > support[i - 1]))
            throw ContractError("PdfGrid: support must be strictly increasing");
    for (double d : density)
        if (d < 0.0 || !std::isfinite(d)) throw PrecisionError("PdfGrid: negative or non-finite density");
    double mass = integral();
    if (mass < 0.999 || mass > 1.001)
        throw PrecisionError("PdfGrid: density mass " + std::to_string(mass) +
                             " outside [0.999, 1.001]");
}

// ---------------------------------------------------------------------------
// Gamma moment matching
// ---------------------------------------------------------------------------

GammaFit gamma_fit_x(const SystemParams& p) {
    const double s = p.sigma_sr * p.sigma_rd;
    const double mean = p.n_elements * 0.25 * M_PI * s;
    const double var = p.n_elements * (1.0 - M_PI * M_PI / 16.0) * s * s;
    return {mean * mean / var, var / mean};
}

double ey2_moment(const SystemParams& p) {
    const double s2 = p.sigma_ir * p.sigma_ir * p.sigma_rd * p.sigma_rd;
    return p.sigma_id * p.sigma_id + p.n_elements * s2;
}

double ey4_corrected(const SystemParams& p) {
    const double n = p.n_elements;
    const double s2 = p.sigma_ir * p.sigma_ir * p.sigma_rd * p.sigma_rd;
    const double sid2 = p.sigma_id * p.sigma_id;
    return 4.0 * n * s2 * s2 + 2.0 * n * (n - 1.0) * s2 * s2 + 2.0 * sid2 * sid2 +
           4.0 * n * s2 * sid2;
}

GammaFit gamma_fit_y2(const SystemParams& p) {
    const double mean = ey2_moment(p);
    const double var = ey4_corrected(p) - mean * mean;
    if (!(var > 0.0))
        throw PrecisionError("gamma_fit_y2: non-positive variance (moment regression)");
    return {mean * mean / var, var / mean};
}

// ---------------------------------------------------------------------------
// Exact density of X (characteristic-function product + Fourier inversion)
// ---------------------------------------------------------------------------

double pdf_x_single_term(const SystemParams& p, double h) {
    const double s = p.sigma_sr * p.sigma_rd;
    if (h <= 0.0) return 0.0;
    return 4.0 * h / (s * s) * bessel_k0(2.0 * h / s);
}

namespace {

// Cached K0 evaluation for the dense f1 sampling: direct series below 0.5,
// four-point (Catmull-Rom) interpolation on a uniform table above.
class K0Table {
public:
    K0Table(double arg_max, int n_nodes = 8192) : h_(arg_max / n_nodes) {
        vals_.resize(n_nodes + 4);
        for (int i = 0; i < n_nodes + 4; ++i) {
            double x = h_ * i;
            vals_[i] = x < 1e-12 ? 0.0 : bessel_k0(x);
        }
    }

    double operator()(double x) const {
        if (x < 0.5) return bessel_k0(x);
        double u = x / h_;
        std::size_t i = static_cast<std::size_t>(u);
        if (i < 1 || i + 2 >= vals_.size()) return bessel_k0(x);
        double t = u - static_cast<double>(i);
        double p0 = vals_[i - 1], p1 = vals_[i], p2 = vals_[i + 1], p3 = vals_[i + 2];
        return p1 + 0.5 * t *
                        (p2 - p0 +
                         t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                              t * (3.0 * (p1 - p2) + p3 - p0)));
    }

private:
    double h_;
    std::vector<double> vals_;
};

int resolve_points(const GridSpec& spec, int fallback) {
    if (spec.n_points <= 0) return fallback;
    return spec.n_points;
}

} // namespace

PdfGrid pdf_x_exact(const SystemParams& p, const GridSpec& spec) {
    GammaFit fit = gamma_fit_x(p);
    const double mean = fit.mean();
    const double sd = std::sqrt(fit.variance());
    const double x_max = spec.x_max > 0.0 ? spec.x_max : mean + 12.0 * sd;

    // tail-mass guard: the gamma fit is an accurate proxy for the tail
    double tail = 1.0 - reg_lower_gamma(fit.shape, x_max / fit.scale);
    if (tail > 1e-6)
        throw GridError("pdf_x_exact: tail mass beyond support exceeds 1e-6", mean + 14.0 * sd);

    int m = resolve_points(spec, 1 << 16);
    if ((m & (m - 1)) != 0) throw ContractError("pdf_x_exact: n_points must be a power of two");

    const double s = p.sigma_sr * p.sigma_rd;
    const double dx = x_max / m;
    K0Table k0(2.0 * x_max / s + 4.0 * dx);

    std::vector<std::complex<double>> a(m);
    a[0] = 0.0;
    const double c = 4.0 / (s * s);
    for (int i = 1; i < m; ++i) {
        double x = i * dx;
        a[i] = c * x * k0(2.0 * x / s) * dx;
    }

    // forward transform = discrete quadrature of the single-term
    // characteristic function on the conjugate grid
    fft_inplace(a, false);
    const int n = p.n_elements;
    for (auto& z : a) {
        double r = std::abs(z);
        if (r < 1e-300) {
            z = 0.0;
        } else {
            z = std::exp(static_cast<double>(n) * std::log(z));
        }
    }
    fft_inplace(a, true);

    PdfGrid grid;
    grid.method = PdfMethod::cf_fft;
    grid.support.resize(m);
    grid.density.resize(m);
    for (int i = 0; i < m; ++i) {
        grid.support[i] = i * dx;
        grid.density[i] = std::max(0.0, a[i].real() / dx);
    }
    grid.validate();
    return grid;
}

// ---------------------------------------------------------------------------
// Exact density of Y (oscillatory Bessel-kernel quadrature)
// ---------------------------------------------------------------------------

namespace {

// quadrature-grade J0: plain series below 12, Hankel expansion above; the
// contract-precision bessel_j0 is reserved for the specfun surface
double j0_fast(double x) {
    x = std::abs(x);
    if (x < 12.0) {
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 64; ++k) {
            term *= -q / (static_cast<double>(k) * k);
            sum += term;
            if (std::abs(term) < 1e-16 && k > x) break;
        }
        return sum;
    }
    double ak = 1.0, pp = 0.0, qq = 0.0, xpow = 1.0;
    for (int k = 0; k <= 10; ++k) {
        double t = ak / xpow;
        if (k % 2 == 0)
            pp += (k % 4 == 0 ? t : -t);
        else
            qq += ((k - 1) % 4 == 0 ? t : -t);
        ak *= -((2.0 * k + 1.0) * (2.0 * k + 1.0)) / (8.0 * (k + 1.0));
        xpow *= x;
    }
    const double chi = x - 0.25 * M_PI;
    return std::sqrt(2.0 / (M_PI * x)) * (pp * std::cos(chi) - qq * std::sin(chi));
}

struct YKernel {
    double s2;   // (sigma_ir sigma_rd)^2
    double sid2; // sigma_id^2
    double n;

    double envelope_log(double rho) const {
        return -(0.25 * sid2 * rho * rho + n * std::log1p(0.25 * s2 * rho * rho));
    }

    double weight(double rho) const { return rho * std::exp(envelope_log(rho)); }

    double rho_max() const {
        double hi = 2.0 * std::sqrt(42.0 / sid2) + 1.0;
        double lo = 0.0;
        for (int i = 0; i < 60; ++i) {
            double mid = 0.5 * (lo + hi);
            (envelope_log(mid) > -42.0 ? lo : hi) = mid;
        }
        return hi;
    }
};

} // namespace

double pdf_y_point(const SystemParams& p, double y, double rel_tol) {
    if (y < 0.0) throw ContractError("pdf_y_point: requires y >= 0");
    if (y == 0.0) return 0.0;
    YKernel ker{p.sigma_ir * p.sigma_ir * p.sigma_rd * p.sigma_rd,
                p.sigma_id * p.sigma_id, static_cast<double>(p.n_elements)};
    const double rho_max = ker.rho_max();
    auto f = [&](double rho) { return ker.weight(rho) * j0_fast(y * rho); };

    double integral;
    if (y * rho_max <= 25.0) {
        integral = integrate_gk(f, 0.0, rho_max, rel_tol, 1e-15).value;
    } else {
        // panel per Bessel half-period, split at the (approximate) J0 roots
        integral = 0.0;
        double lo = 0.0;
        for (int k = 1;; ++k) {
            double beta = (k - 0.25) * M_PI;
            double hi = std::min((beta + 0.125 / beta) / y, rho_max);
            integral += gk15_panel(f, lo, hi);
            lo = hi;
            if (hi >= rho_max) break;
        }
    }
    return y * integral;
}

PdfGrid pdf_y_exact(const SystemParams& p, const GridSpec& spec) {
    const double ey2 = ey2_moment(p);
    const double var = ey4_corrected(p) - ey2 * ey2;
    double y_max = spec.x_max > 0.0 ? spec.x_max : std::sqrt(ey2 + 12.0 * std::sqrt(var));
    if (spec.x_max <= 0.0) {
        int guard = 0;
        while (pdf_y_point(p, y_max, 1e-6) * y_max > 1e-9 && guard++ < 40) y_max *= 1.25;
    } else {
        double tail = pdf_y_point(p, y_max, 1e-6) * y_max;
        if (tail > 1e-6)
            throw GridError("pdf_y_exact: tail mass beyond support exceeds 1e-6", y_max * 2.0);
    }

    const int m = resolve_points(spec, 800);
    PdfGrid grid;
    grid.method = PdfMethod::hankel;
    grid.support.resize(m + 1);
    grid.density.resize(m + 1);
    for (int i = 0; i <= m; ++i) {
        double y = y_max * i / m;
        grid.support[i] = y;
        grid.density[i] = std::max(0.0, pdf_y_point(p, y, 1e-8));
    }
    grid.validate();
    return grid;
}

// ---------------------------------------------------------------------------
// Explicit series form of f_Y
// ---------------------------------------------------------------------------

namespace {

// One evaluation of the two-term expansion at (possibly non-integer) nf,
// truncated at the smallest term within m_max.  Returns the partial sum and
// the magnitude of the truncation bound.
struct SeriesEval {
    double value;
    double trunc;
};

SeriesEval pdf_y_series_at(const SystemParams& p, double y, int m_max, double nf) {
    const double s2 = p.sigma_ir * p.sigma_ir * p.sigma_rd * p.sigma_rd;
    const double sid2 = p.sigma_id * p.sigma_id;
    const double u = y * y / s2;
    const double ln_u = std::log(u);
    const double ln_gn = ln_gamma(nf);

    double sum = 0.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    double trunc = 0.0;
    for (int m = 0; m <= m_max; ++m) {
        // piece A: Gamma(N-m-1)/Gamma(N) 1F2(m+1; 1, m-N+2; u)
        double ga = ln_gamma(nf - m - 1.0);
        int sga = gamma_sign(nf - m - 1.0);
        double fa = hyp_1f2(m + 1.0, 1.0, m - nf + 2.0, u);
        double piece_a = sga * std::exp(ga - ln_gn) * fa;

        // piece B: u^{N-m-1} Gamma(m+1-N)/(Gamma(m+1) Gamma(N-m)) 1F2(N; N-m, N-m; u)
        double gb = ln_gamma(m + 1.0 - nf);
        int sgb = gamma_sign(m + 1.0 - nf);
        double gc = ln_gamma(nf - m);
        int sgc = gamma_sign(nf - m);
        double fb = hyp_1f2(nf, nf - m, nf - m, u);
        double piece_b = sgb * sgc *
                         std::exp((nf - m - 1.0) * ln_u + gb - ln_gamma(m + 1.0) - gc) * fb;

        double pref = 2.0 * y * std::pow(sid2, m) / std::pow(s2, m + 1);
        double term = (m % 2 == 0 ? pref : -pref) * (piece_a + piece_b);

        double mag = std::abs(term);
        if (mag > prev_mag || !std::isfinite(term)) { // divergent tail reached
            trunc = prev_mag;
            break;
        }
        sum += term;
        trunc = mag;
        prev_mag = mag;
    }
    return {sum, trunc};
}

} // namespace

double pdf_y_series(const SystemParams& p, double y, int m_max) {
    if (!(y > 0.0)) throw ContractError("pdf_y_series: requires y > 0");
    if (m_max < 0) throw ContractError("pdf_y_series: m_max must be >= 0");
    const double eps = 1e-4;
    const double nf = static_cast<double>(p.n_elements);

    SeriesEval hi = pdf_y_series_at(p, y, m_max, nf + eps);
    SeriesEval lo = pdf_y_series_at(p, y, m_max, nf - eps);
    const double avg = 0.5 * (hi.value + lo.value);
    const double spread = std::abs(hi.value - lo.value);

    if (!(std::abs(avg) > 0.0) || spread > 1e-2 * std::abs(avg))
        throw PrecisionError("pdf_y_series: unresolved pole cancellation, use pdf_y_exact");
    const double trunc = std::max(hi.trunc, lo.trunc);
    if (trunc > 2e-2 * std::abs(avg))
        throw PrecisionError("pdf_y_series: expansion unstable at this y, use pdf_y_exact");
    return avg;
}

// ---------------------------------------------------------------------------
// Outage probability
// ---------------------------------------------------------------------------

OutageEstimate op_exact(const SystemParams& p) {
    PdfGrid fx = pdf_x_exact(p);
    const std::size_t m = fx.support.size();
    const double dx = fx.support[1] - fx.support[0];
    std::vector<double> cdf(m, 0.0);
    for (std::size_t i = 1; i < m; ++i)
        cdf[i] = cdf[i - 1] + 0.5 * (fx.density[i] + fx.density[i - 1]) * dx;

    const double x_max = fx.support.back();
    auto cdf_x = [&](double v) {
        if (v <= 0.0) return 0.0;
        if (v >= x_max) return 1.0;
        double u = v / dx;
        std::size_t i = static_cast<std::size_t>(u);
        double t = u - static_cast<double>(i);
        return cdf[i] + t * (cdf[i + 1] - cdf[i]);
    };

    const double c = std::sqrt(p.gamma_th_lin / p.gamma_bar_lin);

    const double ey2 = ey2_moment(p);
    const double var = ey4_corrected(p) - ey2 * ey2;
    double y_max = std::sqrt(ey2 + 12.0 * std::sqrt(var));
    int guard = 0;
    while (pdf_y_point(p, y_max, 1e-6) * y_max > 1e-11 && guard++ < 60) y_max *= 1.3;

    auto integrand = [&](double y) { return pdf_y_point(p, y, 1e-7) * cdf_x(c * y); };
    QuadResult q = integrate_gk(integrand, 0.0, y_max, 3e-4, 1e-9, 600);

    OutageEstimate est;
    est.method = OpMethod::exact_numeric;
    est.value = std::clamp(q.value, 0.0, 1.0);
    est.clamped = q.value < 0.0 || q.value > 1.0;
    est.err = std::max(1e-8, 1e-3 * est.value);
    est.err_kind = ErrKind::abs_bound;
    est.degraded_accuracy = est.value < 1e-6;
    return est;
}

OutageEstimate op_approx_numeric(const GammaFit& fit_x, const GammaFit& fit_y,
                                 double gamma_th_lin, double gamma_bar_lin) {
    if (!(fit_x.shape > 0.0 && fit_x.scale > 0.0 && fit_y.shape > 0.0 && fit_y.scale > 0.0))
        throw ContractError("op_approx_numeric: fit parameters must be positive");
    const double ky = fit_y.shape, thy = fit_y.scale;
    const double kx = fit_x.shape, thx = fit_x.scale;
    const double c = gamma_th_lin / gamma_bar_lin;
    const double ln_norm = -ln_gamma(ky) - ky * std::log(thy);

    auto weighted = [&](double y) {
        if (y <= 0.0) return 0.0;
        double ln_pdf = (ky - 1.0) * std::log(y) - y / thy + ln_norm;
        return std::exp(ln_pdf) * reg_lower_gamma(kx, std::sqrt(y * c) / thx);
    };

    const double y_max = thy * (ky + 50.0 * std::sqrt(std::max(ky, 1.0)) + 50.0);
    double total;
    if (ky >= 1.0) {
        total = integrate_gk(weighted, 0.0, y_max, 1e-9, 1e-14, 4000).value;
    } else {
        // integrable singularity at 0: y = u^{1/ky} on [0, y0]
        const double y0 = std::min(thy, y_max);
        auto left = [&](double u) {
            double y = std::pow(u, 1.0 / ky);
            return std::exp(-y / thy + ln_norm) * reg_lower_gamma(kx, std::sqrt(y * c) / thx) / ky;
        };
        total = integrate_gk(left, 0.0, std::pow(y0, ky), 1e-9, 1e-14, 4000).value +
                integrate_gk(weighted, y0, y_max, 1e-9, 1e-14, 4000).value;
    }

    OutageEstimate est;
    est.method = OpMethod::gamma_numeric;
    est.value = std::clamp(total, 0.0, 1.0);
    est.clamped = total < 0.0 || total > 1.0;
    est.err = 1e-9;
    est.err_kind = ErrKind::abs_bound;
    return est;
}

OutageEstimate op_approx_closed(const GammaFit& fit_x, const GammaFit& fit_y,
                                double gamma_th_lin, double gamma_bar_lin) {
    if (!(fit_x.shape > 0.0 && fit_x.scale > 0.0 && fit_y.shape > 0.0 && fit_y.scale > 0.0))
        throw ContractError("op_approx_closed: fit parameters must be positive");
    const long long kx_int = std::max<long long>(1, std::llround(fit_x.shape));
    const double ky = fit_y.shape;
    const double thy = fit_y.scale, thx = fit_x.scale;
    const double c = gamma_th_lin * thy / (gamma_bar_lin * thx * thx);

    OutageEstimate est;
    est.method = OpMethod::gamma_closed;
    est.err = std::abs(fit_x.shape - static_cast<double>(kx_int));
    est.err_kind = ErrKind::model; // integer-shape rounding distance

    if (c == 0.0) {
        est.value = 0.0;
        return est;
    }
    if (2.0 * ky + static_cast<double>(kx_int - 1) > 500.0)
        throw PrecisionError("op_approx_closed: cylinder order below -500, use op_approx_numeric");

    const double z = std::sqrt(0.5 * c);
    const double ln_c = std::log(c);
    const double ln_gky = ln_gamma(ky);
    double series = 0.0;
    double ln_fact = 0.0; // log i!
    for (long long i = 0; i < kx_int; ++i) {
        if (i > 0) ln_fact += std::log(static_cast<double>(i));
        const double order = 2.0 * ky + static_cast<double>(i);
        double ln_term = -ln_fact + ln_gamma(order) - (ky + 0.5 * i - 1.0) * M_LN2 - ln_gky +
                         0.5 * i * ln_c + 0.125 * c + ln_pcf_d_neg(order, z);
        series += std::exp(ln_term);
    }

    double value = 1.0 - series;
    if (value < -1e-9 || value > 1.0 + 1e-9)
        throw PrecisionError("op_approx_closed: series left [0,1] beyond tolerance");
    est.clamped = value < 0.0 || value > 1.0;
    est.value = std::clamp(value, 0.0, 1.0);
    return est;
}

OutageEstimate op_asymptotic(const GammaFit& fit_x, const GammaFit& fit_y, double gamma_th_lin,
                             double gamma_bar_lin) {
    if (!(fit_x.shape > 0.0 && fit_x.scale > 0.0 && fit_y.shape > 0.0 && fit_y.scale > 0.0))
        throw ContractError("op_asymptotic: fit parameters must be positive");
    const double kx = fit_x.shape, ky = fit_y.shape;
    const double ln_p = ln_gamma(ky + 0.5 * kx) - ln_gamma(kx + 1.0) - ln_gamma(ky) +
                        0.5 * kx *
                            std::log(gamma_th_lin * fit_y.scale /
                                     (gamma_bar_lin * fit_x.scale * fit_x.scale));
    OutageEstimate est;
    est.method = OpMethod::asymptotic;
    double v = std::exp(ln_p);
    est.value = std::clamp(v, 0.0, 1.0);
    est.clamped = v > 1.0;
    est.err = 0.0;
    est.err_kind = ErrKind::model;
    return est;
}

DiversityReport diversity_and_coding(const GammaFit& fit_x, const GammaFit& fit_y,
                                     double gamma_th_lin) {
    if (!(fit_x.shape > 0.0 && fit_y.shape > 0.0))
        throw ContractError("diversity_and_coding: fit parameters must be positive");
    const double kx = fit_x.shape, ky = fit_y.shape;
    DiversityReport rep;
    rep.diversity_order = 0.5 * kx;
    const double ln_c = ln_gamma(ky + 0.5 * kx) - ln_gamma(kx + 1.0) - ln_gamma(ky);
    rep.coding_gain = std::exp(-2.0 / kx * ln_c) * fit_x.scale * fit_x.scale /
                      (gamma_th_lin * fit_y.scale);
    return rep;
}

OutageEstimate op_approx_closed(const SystemParams& p) {
    return op_approx_closed(gamma_fit_x(p), gamma_fit_y2(p), p.gamma_th_lin, p.gamma_bar_lin);
}

OutageEstimate op_approx_numeric(const SystemParams& p) {
    return op_approx_numeric(gamma_fit_x(p), gamma_fit_y2(p), p.gamma_th_lin, p.gamma_bar_lin);
}

OutageEstimate op_asymptotic(const SystemParams& p) {
    return op_asymptotic(gamma_fit_x(p), gamma_fit_y2(p), p.gamma_th_lin, p.gamma_bar_lin);
}

} // namespace risop
