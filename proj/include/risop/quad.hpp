#ifndef RISOP_QUAD_HPP
#define RISOP_QUAD_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "risop/errors.hpp"

namespace risop {

struct QuadResult {
    double value = 0.0;
    double abs_err = 0.0;
    int evals = 0;
    bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (positive half; node 0 included).
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGauss7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
void gk15(const F& f, double a, double b, double& result, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kGk15Nodes[i]);
        fv[14 - i] = f(c + h * kGk15Nodes[i]);
    }
    fv[7] = f(c);
    double kron = kGk15Weights[7] * fv[7];
    double gauss = kGauss7Weights[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kron += kGk15Weights[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1)
            gauss += kGauss7Weights[i / 2] * (fv[i] + fv[14 - i]);
    }
    result = kron * h;
    err = std::abs((kron - gauss) * h);
}

} // namespace detail

/// Adaptive Gauss-Kronrod 15-point integration with worst-interval-first
/// bisection.  Stops when the summed error estimate satisfies either
/// tolerance, or throws PrecisionError after max_subdiv splits.
template <class F>
QuadResult integrate_gk(const F& f, double a, double b, double rel_tol = 1e-10,
                        double abs_tol = 0.0, int max_subdiv = 4000) {
    struct Seg {
        double a, b, val, err;
    };
    std::vector<Seg> segs;
    segs.reserve(64);
    double v, e;
    detail::gk15(f, a, b, v, e);
    segs.push_back({a, b, v, e});
    int evals = 15;
    for (int iter = 0; iter < max_subdiv; ++iter) {
        double total = 0.0, toterr = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].val;
            toterr += segs[i].err;
            if (segs[i].err > segs[worst].err) worst = i;
        }
        if (toterr <= std::max(abs_tol, rel_tol * std::abs(total)))
            return {total, toterr, evals, true};
        Seg s = segs[worst];
        double m = 0.5 * (s.a + s.b);
        if (m <= s.a || m >= s.b) // interval exhausted at double resolution
            return {total, toterr, evals, false};
        double v1, e1, v2, e2;
        detail::gk15(f, s.a, m, v1, e1);
        detail::gk15(f, m, s.b, v2, e2);
        evals += 30;
        segs[worst] = {s.a, m, v1, e1};
        segs.push_back({m, s.b, v2, e2});
    }
    double total = 0.0, toterr = 0.0;
    for (const auto& s : segs) {
        total += s.val;
        toterr += s.err;
    }
    if (toterr > std::max(abs_tol, rel_tol * std::abs(total)) * 100.0)
        throw PrecisionError("integrate_gk: failed to converge");
    return {total, toterr, evals, false};
}

/// Non-adaptive 15-point Gauss-Kronrod on one panel.
template <class F>
double gk15_panel(const F& f, double a, double b) {
    double v, e;
    detail::gk15(f, a, b, v, e);
    return v;
}

namespace detail {
// 48-point Gauss-Legendre nodes (positive half) and weights, for smooth
// fixed-cost integrands.
inline constexpr double kGl48Nodes[24] = {
    0.0323801709628694089904144, 0.0970046992094626969738158,
    0.1612223560688917367578199, 0.2247637903946890225448385,
    0.2873624873554555536614430, 0.3487558862921608104912252,
    0.4086864819907167212242882, 0.4669029047509584140485117,
    0.5231609747222329964699838, 0.5772247260839726834547037,
    0.6288673967765137096108674, 0.6778723796326638906251105,
    0.7240341309238147449178769, 0.7671590325157403578160142,
    0.8070662040294426242681425, 0.8435882616243934872812815,
    0.8765720202742478539548188, 0.9058791367155696327984060,
    0.9313866907065542211086040, 0.9529877031604307990875213,
    0.9705915925462473836660138, 0.9841245837228268511509555,
    0.9935301722663507639765612, 0.9987710072524260684900810};

inline constexpr double kGl48Weights[24] = {
    0.0647376968126837648576100, 0.0644661644359499769185717,
    0.0639242385846480326572205, 0.0631141922862538534699794,
    0.0620394231598924983384080, 0.0607044391658937004807584,
    0.0591148396983953716699034, 0.0572772921004029156311077,
    0.0551995036999841787173082, 0.0528901894851937087738136,
    0.0503590355538542089330889, 0.0476166584924905336717593,
    0.0446745608566941690420471, 0.0415450829434648449822731,
    0.0382413510658308544720718, 0.0347772225647705393591913,
    0.0311672278327978502510121, 0.0274265097083571454672501,
    0.0235707608393246614841843, 0.0196161604573553104147177,
    0.0155793157229427523674525, 0.0114772345792341322334718,
    0.0073275539012757533521847, 0.0031533460523092797511691};
} // namespace detail

/// Fixed 48-point Gauss-Legendre rule on [a, b].
template <class F>
double gl48(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 24; ++i) {
        const double x = h * detail::kGl48Nodes[i];
        acc += detail::kGl48Weights[i] * (f(c - x) + f(c + x));
    }
    return acc * h;
}

} // namespace risop

#endif
