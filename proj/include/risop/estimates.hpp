#ifndef RISOP_ESTIMATES_HPP
#define RISOP_ESTIMATES_HPP

#include <string>
#include <vector>

#include "risop/errors.hpp"

namespace risop {

/// Moment-matched gamma distribution (shape k, scale theta).
struct GammaFit {
    double shape = 1.0;
    double scale = 1.0;
    double mean() const { return shape * scale; }
    double variance() const { return shape * scale * scale; }
};

enum class PdfMethod { cf_fft, hankel, series, gamma_fit, mc_hist };

std::string to_string(PdfMethod m);

/// Density sampled on a monotone support grid.  Construction validates
/// nonnegativity and unit mass (trapezoid, 1e-3 tolerance).
struct PdfGrid {
    std::vector<double> support;
    std::vector<double> density;
    PdfMethod method = PdfMethod::cf_fft;

    double integral() const;
    /// Linear interpolation; zero outside the support.
    double at(double x) const;
    void validate() const;
};

enum class OpMethod { exact_numeric, gamma_closed, gamma_numeric, asymptotic, monte_carlo, surrogate };

std::string to_string(OpMethod m);
OpMethod op_method_from_string(const std::string& name);

enum class ErrKind { abs_bound, ci_half_width, model };

/// An outage probability value with its provenance and an error descriptor:
/// an absolute bound, a confidence-interval half width, or the surrogate's
/// validation RMSE.
struct OutageEstimate {
    double value = 0.0;
    OpMethod method = OpMethod::exact_numeric;
    double err = 0.0;
    ErrKind err_kind = ErrKind::abs_bound;
    bool degraded_accuracy = false; // below the guaranteed-accuracy regime
    bool clamped = false;           // value was clipped into [0, 1]
    bool extrapolation = false;     // surrogate input outside training range
};

struct DiversityReport {
    double diversity_order = 0.0;
    double coding_gain = 0.0;
};

} // namespace risop

#endif
