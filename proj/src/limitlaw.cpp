#include "walklab/limitlaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "walklab/errors.hpp"
#include "walklab/quadrature.hpp"
#include "walklab/rng.hpp"

namespace walklab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kTablePanels = 1 << 16;

// Substituted density: with x = a sin(u), f(x) dx = g(u) du and
// g(u) = sqrt(1-a^2) (1 - d a sin u) / (pi (1 - a^2 sin^2 u)), smooth on
// [-pi/2, pi/2].
double substituted_pdf(double u, double a, double d) {
    const double s = std::sin(u);
    return std::sqrt(1.0 - a * a) * (1.0 - d * a * s) / (kPi * (1.0 - a * a * s * s));
}

}  // namespace

double transform_forward(double y, const TransformSpec& spec) {
    if (y == 0.0) throw DomainError("transform_forward: y = 0 excluded");
    const double s = y > 0.0 ? 1.0 : -1.0;
    return spec.abs_u11 * std::exp(-std::abs(y)) * s;
}

double transform_inverse(double x, const TransformSpec& spec) {
    if (x == 0.0 || std::abs(x) >= spec.abs_u11) {
        throw DomainError("transform_inverse: need 0 < |x| < |u11|");
    }
    const double s = x > 0.0 ? 1.0 : -1.0;
    return s * std::log(spec.abs_u11 / std::abs(x));
}

CdfTable::CdfTable(double abs_u11, double drift_term) : a_(abs_u11), drift_(drift_term) {
    // Per-panel Simpson with midpoints; the substituted integrand is smooth,
    // so the cumulative error is far below the table's interpolation error.
    const int n = kTablePanels;
    const double h = kPi / double(n);
    c_.resize(std::size_t(n) + 1);
    c_[0] = 0.0;
    double left = substituted_pdf(-kPi / 2, a_, drift_);
    for (int i = 0; i < n; ++i) {
        const double u0 = -kPi / 2 + h * double(i);
        const double mid = substituted_pdf(u0 + 0.5 * h, a_, drift_);
        const double right = substituted_pdf(u0 + h, a_, drift_);
        c_[std::size_t(i) + 1] = c_[std::size_t(i)] + (h / 6.0) * (left + 4.0 * mid + right);
        left = right;
    }
    const double total = c_.back();
    for (double& v : c_) v /= total;  // endpoints exactly 0 and 1
    std::uint64_t h64 = 1469598103934665603ULL;
    for (double v : c_) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        __builtin_memcpy(&bits, &v, sizeof(bits));
        h64 = (h64 ^ bits) * 1099511628211ULL;
    }
    checksum_ = h64;
}

double CdfTable::cdf(double x) const {
    if (x <= -a_) return 0.0;
    if (x >= a_) return 1.0;
    const double u = std::asin(x / a_);
    const double pos = (u + kPi / 2) / kPi * double(kTablePanels);
    const int i = std::clamp(int(pos), 0, kTablePanels - 1);
    const double frac = pos - double(i);
    return c_[std::size_t(i)] + frac * (c_[std::size_t(i) + 1] - c_[std::size_t(i)]);
}

double CdfTable::invert(double v) const {
    v = std::clamp(v, 0.0, 1.0);
    const auto it = std::upper_bound(c_.begin(), c_.end(), v);
    std::size_t i = (it == c_.begin()) ? 0 : std::size_t(it - c_.begin()) - 1;
    if (i >= c_.size() - 1) i = c_.size() - 2;
    const double lo = c_[i], hi = c_[i + 1];
    const double frac = (hi > lo) ? (v - lo) / (hi - lo) : 0.0;
    const double u = -kPi / 2 + kPi * (double(i) + frac) / double(kTablePanels);
    return a_ * std::sin(u);
}

KonnoLaw make_konno_law(const WalkParams& params) {
    struct Key {
        double a[6];
        bool operator<(const Key& o) const {
            for (int i = 0; i < 6; ++i) {
                if (a[i] != o.a[i]) return a[i] < o.a[i];
            }
            return false;
        }
    };
    static std::map<Key, KonnoLaw> cache;
    static std::mutex mutex;
    const Key key{{params.angles.varsigma1, params.angles.varsigma2, params.angles.vartheta,
                   params.angles.gamma1, params.angles.gamma2, params.angles.phi}};
    {
        std::lock_guard<std::mutex> lock(mutex);
        const auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    KonnoLaw law;
    law.params = params;
    law.coeffs = derived_coefficients(params);
    law.drift_coeff = drift_coefficient(params);
    law.drift_sign = +1;
    law.resolution_mean = 0.0;
    if (std::abs(law.drift_coeff) >= 1e-12) {
        // Fix the shift-convention switch empirically: the density's mean is
        // -sign * drift_coeff * (1 - sqrt(1-|u11|^2)); match its sign to the
        // exact walk mean.
        const LatticeDist d = evolve(params, 2000);
        const double m = d.mean() / 2000.0;
        law.resolution_mean = m;
        if (std::abs(m) > 1e-3) {
            law.drift_sign = (m * law.drift_coeff > 0.0) ? -1 : +1;
        }
    }
    law.table = std::make_shared<CdfTable>(law.coeffs.abs_u11,
                                           double(law.drift_sign) * law.drift_coeff);
    {
        std::lock_guard<std::mutex> lock(mutex);
        cache.emplace(key, law);
    }
    return law;
}

double konno_pdf(double x, const KonnoLaw& law) {
    const double a = law.coeffs.abs_u11;
    if (std::abs(x) > a) return 0.0;
    if (std::abs(x) == a) return std::numeric_limits<double>::infinity();
    const double d = double(law.drift_sign) * law.drift_coeff;
    return std::sqrt(1.0 - a * a) * (1.0 - d * x) /
           (kPi * (1.0 - x * x) * std::sqrt(a * a - x * x));
}

double pi_pdf(double y, const KonnoLaw& law) {
    if (y == 0.0) throw DomainError("pi_pdf: y = 0 excluded");
    const double a = law.coeffs.abs_u11;
    const double e = std::exp(-std::abs(y));
    const double sgn = y > 0.0 ? 1.0 : -1.0;
    const double d = double(law.drift_sign) * law.drift_coeff;
    return e * std::sqrt(1.0 - a * a) * (1.0 - d * a * e * sgn) /
           (kPi * (1.0 - a * a * e * e) * std::sqrt(1.0 - e * e));
}

double konno_cdf(double x, const KonnoLaw& law) { return law.table->cdf(x); }

double regularization_tail_mass(double epsilon, const KonnoLaw& law) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw RangeError("epsilon must be in (0, 1/2)");
    const double a = law.coeffs.abs_u11;
    const double d = double(law.drift_sign) * law.drift_coeff;
    const double u1 = std::asin(1.0 - epsilon);
    const double inner =
        integrate([&](double u) { return substituted_pdf(u, a, d); }, -u1, u1, 1e-13, 1e-15);
    return 1.0 - inner;
}

double regularization_tail_mass_y(double epsilon, const KonnoLaw& law) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw RangeError("epsilon must be in (0, 1/2)");
    const double w = -std::log1p(-epsilon);
    const double a = law.coeffs.abs_u11;
    const double d = double(law.drift_sign) * law.drift_coeff;
    // Substitution y = s^2 removes the 1/sqrt(y) singularity at the origin;
    // expm1 keeps 1 - e^{-2y} accurate for tiny y. Quadrature nodes are
    // interior, so s = 0 is never evaluated.
    const auto half = [&](double sgn) {
        return integrate(
            [&](double s) {
                const double y = s * s;
                const double e = std::exp(-y);
                const double one_minus_e2 = -std::expm1(-2.0 * y);
                return 2.0 * s * e * std::sqrt(1.0 - a * a) * (1.0 - d * a * e * sgn) /
                       (kPi * (1.0 - a * a * e * e) * std::sqrt(one_minus_e2));
            },
            0.0, std::sqrt(w), 1e-13, 1e-15);
    };
    return half(1.0) + half(-1.0);
}

double kappa_eps_x(double epsilon, const KonnoLaw& law) {
    return regularization_tail_mass(epsilon, law) / (2.0 * epsilon * law.coeffs.abs_u11);
}

double kappa_eps_y(double epsilon, const KonnoLaw& law) {
    return regularization_tail_mass(epsilon, law) / (-2.0 * std::log1p(-epsilon));
}

RegularizedLaw regularize(const KonnoLaw& law, double epsilon) {
    RegularizedLaw r;
    r.base = law;
    r.epsilon = epsilon;
    r.tail_mass = regularization_tail_mass(epsilon, law);
    r.kappa_x = r.tail_mass / (2.0 * epsilon * law.coeffs.abs_u11);
    r.kappa_y = r.tail_mass / (-2.0 * std::log1p(-epsilon));
    r.x_inner = law.coeffs.abs_u11 * (1.0 - epsilon);
    r.y_plateau = -std::log1p(-epsilon);
    return r;
}

double f_eps_pdf(double x, const RegularizedLaw& law) {
    const double a = law.base.coeffs.abs_u11;
    if (std::abs(x) >= a) return 0.0;
    if (std::abs(x) <= law.x_inner) return konno_pdf(x, law.base);
    return law.kappa_x;
}

double pi_eps_pdf(double y, const RegularizedLaw& law) {
    if (std::abs(y) < law.y_plateau) return law.kappa_y;
    return pi_pdf(y, law.base);
}

double f_eps_cdf(double x, const RegularizedLaw& law) {
    const double a = law.base.coeffs.abs_u11;
    if (x <= -a) return 0.0;
    if (x >= a) return 1.0;
    const double half_tail = 0.5 * law.tail_mass;
    if (x < -law.x_inner) return law.kappa_x * (x + a);
    if (x > law.x_inner) return 1.0 - law.kappa_x * (a - x);
    return half_tail + (konno_cdf(x, law.base) - konno_cdf(-law.x_inner, law.base));
}

double pi_eps_cdf(double y, const RegularizedLaw& law) {
    const double a = law.base.coeffs.abs_u11;
    const double w = law.y_plateau;
    const double F0 = konno_cdf(0.0, law.base);
    if (y <= -w) {
        // Y <= y < 0 maps to x in (-|u11| e^{y}, 0) under the transform.
        return F0 - konno_cdf(-a * std::exp(y), law.base);
    }
    if (y >= w) {
        return 1.0 - (konno_cdf(a * std::exp(-y), law.base) - F0);
    }
    const double left = F0 - konno_cdf(-law.x_inner, law.base);
    return left + law.kappa_y * (y + w);
}

namespace {

template <typename Cdf>
double invert_monotone(const Cdf& cdf, double p, double lo, double hi) {
    p = std::clamp(p, 0.0, 1.0);
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-13 * (1.0 + std::abs(lo) + std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double f_eps_quantile(double p, const RegularizedLaw& law) {
    const double a = law.base.coeffs.abs_u11;
    return invert_monotone([&](double x) { return f_eps_cdf(x, law); }, p, -a, a);
}

double pi_eps_quantile(double p, const RegularizedLaw& law) {
    return invert_monotone([&](double y) { return pi_eps_cdf(y, law); }, p, -745.0, 745.0);
}

namespace {

template <typename Cdf>
LatticeDist project_cdf(const Cdf& cdf, double support, std::int64_t t, ParityMode mode) {
    if (t < 1) throw RangeError("lattice_projection: t must be >= 1");
    LatticeDist out;
    out.t = t;
    const std::int64_t kmax = std::int64_t(std::ceil(support * double(t))) + 2;
    out.offset = -kmax;
    out.probs.assign(std::size_t(2 * kmax + 1), 0.0);
    const double td = double(t);
    if (mode == ParityMode::full) {
        for (std::int64_t k = -kmax; k <= kmax; ++k) {
            const double lo = (double(k) - 0.5) / td;
            const double hi = (double(k) + 0.5) / td;
            out.probs[std::size_t(k + kmax)] = cdf(hi) - cdf(lo);
        }
    } else {
        // Cells of width 2/t centered on sites with k + t even, so the
        // comparison against the walk does not pay a spurious parity cost.
        const std::int64_t parity = ((t % 2) + 2) % 2;
        for (std::int64_t k = -kmax; k <= kmax; ++k) {
            if (((k % 2) + 2) % 2 != parity) continue;
            const double lo = (double(k) - 1.0) / td;
            const double hi = (double(k) + 1.0) / td;
            out.probs[std::size_t(k + kmax)] = cdf(hi) - cdf(lo);
        }
    }
    return out;
}

}  // namespace

LatticeDist lattice_projection(const KonnoLaw& law, std::int64_t t, ParityMode mode) {
    return project_cdf([&](double x) { return konno_cdf(x, law); }, law.coeffs.abs_u11, t, mode);
}

LatticeDist lattice_projection(const RegularizedLaw& law, std::int64_t t, ParityMode mode) {
    return project_cdf([&](double x) { return f_eps_cdf(x, law); }, law.base.coeffs.abs_u11, t,
                       mode);
}

std::vector<double> sample(const KonnoLaw& law, std::size_t n, std::uint64_t seed) {
    RandomStream rng(seed, 0);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = law.table->invert(rng.uniform());
    return out;
}

std::vector<double> sample(const RegularizedLaw& law, std::size_t n, std::uint64_t seed) {
    RandomStream rng(seed, 0);
    const double a = law.base.coeffs.abs_u11;
    const double half_tail = 0.5 * law.tail_mass;
    const double F_inner_lo = konno_cdf(-law.x_inner, law.base);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = rng.uniform();
        if (v < half_tail) {
            out[i] = -a + v / law.kappa_x;
        } else if (v > 1.0 - half_tail) {
            out[i] = a - (1.0 - v) / law.kappa_x;
        } else {
            out[i] = law.base.table->invert(F_inner_lo + (v - half_tail));
        }
    }
    return out;
}

namespace {

double konno_moment_impl(const KonnoLaw& law, int order, bool absolute) {
    if (order != 1 && order != 2 && order != 4) {
        throw RangeError("moment order must be in {1, 2, 4}");
    }
    const double a = law.coeffs.abs_u11;
    const double d = double(law.drift_sign) * law.drift_coeff;
    const auto integrand = [&](double u) {
        const double x = a * std::sin(u);
        const double xp = absolute ? std::pow(std::abs(x), order) : std::pow(x, order);
        return xp * substituted_pdf(u, a, d);
    };
    return integrate(integrand, -kPi / 2, 0.0, 1e-13, 1e-15) +
           integrate(integrand, 0.0, kPi / 2, 1e-13, 1e-15);
}

}  // namespace

double moment(const KonnoLaw& law, int order) { return konno_moment_impl(law, order, false); }

double absolute_moment(const KonnoLaw& law, int order) {
    return konno_moment_impl(law, order, true);
}

double moment(const RegularizedLaw& law, int order) {
    if (order != 1 && order != 2 && order != 4) {
        throw RangeError("moment order must be in {1, 2, 4}");
    }
    const double a = law.base.coeffs.abs_u11;
    const double d = double(law.base.drift_sign) * law.base.drift_coeff;
    const double u1 = std::asin(law.x_inner / a);
    const auto inner = [&](double u) {
        const double x = a * std::sin(u);
        return std::pow(x, order) * substituted_pdf(u, a, d);
    };
    double m = integrate(inner, -u1, 0.0, 1e-13, 1e-15) + integrate(inner, 0.0, u1, 1e-13, 1e-15);
    const auto cap = [&](double x) { return std::pow(x, order) * law.kappa_x; };
    m += integrate(cap, -a, -law.x_inner, 1e-13, 1e-15);
    m += integrate(cap, law.x_inner, a, 1e-13, 1e-15);
    return m;
}

}  // namespace walklab
