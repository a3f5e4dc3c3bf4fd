#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>

#include "walklab/errors.hpp"

namespace walklab {

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
inline constexpr double kGk15Nodes[8] = {
    0.000000000000000000000000000000000e+00, 2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01, 5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01, 8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01, 9.914553711208126392068546975263285e-01};
inline constexpr double kGk15Weights[8] = {
    2.094821410847278280129991748917143e-01, 2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01, 1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01, 1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02, 2.293532201052922496373200805896959e-02};
inline constexpr double kG7Weights[4] = {
    4.179591836734693877551020408163265e-01, 3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01, 1.294849661688696932706114326790820e-01};

template <typename F>
void gk15(const F& f, double a, double b, double& result, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    fv[7] = f(c);
    for (int i = 1; i < 8; ++i) {
        const double dx = h * kGk15Nodes[i];
        fv[7 - i] = f(c - dx);
        fv[7 + i] = f(c + dx);
    }
    double kronrod = kGk15Weights[0] * fv[7];
    double gauss = kG7Weights[0] * fv[7];
    for (int i = 1; i < 8; ++i) {
        kronrod += kGk15Weights[i] * (fv[7 - i] + fv[7 + i]);
        if (i % 2 == 0) gauss += kG7Weights[i / 2] * (fv[7 - i] + fv[7 + i]);
    }
    result = kronrod * h;
    err = std::abs((kronrod - gauss) * h);
}

template <typename F>
double integrate_rec(const F& f, double a, double b, double tol, int depth, double whole) {
    const double m = 0.5 * (a + b);
    double left, lerr, right, rerr;
    gk15(f, a, m, left, lerr);
    gk15(f, m, b, right, rerr);
    if (depth <= 0 || lerr + rerr <= tol || b - a < 1e-15 * (std::abs(a) + std::abs(b) + 1.0))
        return left + right;
    (void)whole;
    return integrate_rec(f, a, m, 0.5 * tol, depth - 1, left) +
           integrate_rec(f, m, b, 0.5 * tol, depth - 1, right);
}

}  // namespace detail

// Adaptive Gauss-Kronrod 7-15. Integrands with square-root endpoint
// singularities must be substituted smooth by the caller first.
template <typename F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-12, double abs_tol = 1e-14) {
    if (a == b) return 0.0;
    double whole, err;
    detail::gk15(f, a, b, whole, err);
    const double tol = std::max(abs_tol, rel_tol * std::abs(whole));
    if (err <= tol) return whole;
    return detail::integrate_rec(f, a, b, tol, 48, whole);
}

// Brent's method. Requires f(a) and f(b) of opposite sign.
template <typename F>
double find_root(const F& f, double x1, double x2, double xtol = 1e-14, int max_iter = 200) {
    double a = x1, b = x2;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) throw ConvergenceError("find_root: endpoints do not bracket");
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw ConvergenceError("find_root: max iterations exceeded");
}

}  // namespace walklab
