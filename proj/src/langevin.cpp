#include "walklab/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <thread>

#include "walklab/errors.hpp"
#include "walklab/rng.hpp"

namespace walklab {

namespace {

void validate(const LangevinConfig& c) {
    if (!(c.epsilon > 0.0 && c.epsilon < 0.5)) throw RangeError("epsilon must be in (0, 1/2)");
    if (!(c.h > 0.0 && c.h <= 0.1)) throw RangeError("h must be in (0, 0.1]");
    if (c.chains < 1) throw RangeError("chains must be >= 1");
    if (c.burn_in < 0 || c.retained < 0 || c.thin < 1) {
        throw RangeError("burn_in/retained/thin invalid");
    }
}

struct Force {
    double epsilon;
    DerivedCoefficients coeffs;
    int drift_sign;
    double operator()(double y) const { return grad_psi_eps(y, epsilon, coeffs, drift_sign); }
};

void init_chain(RandomStream& rng, const LangevinConfig& c, double plateau_halfwidth, double& y,
                double& v) {
    if (c.start_sigma > 0.0) {
        y = c.start_sigma * rng.gaussian();
    } else {
        y = plateau_halfwidth * (2.0 * rng.uniform() - 1.0);
    }
    v = rng.gaussian();
}

void check_finite(double y, double v, int chain, std::int64_t step) {
    if (!std::isfinite(y) || !std::isfinite(v)) {
        throw NonFinite("langevin state non-finite at chain " + std::to_string(chain) +
                        ", step " + std::to_string(step));
    }
}

template <typename StepFn>
Ensemble run_chains(const LangevinConfig& c, int threads, const StepFn& make_chain_runner) {
    Ensemble out;
    out.chains = c.chains;
    out.per_chain = c.retained;
    out.config = c;
    out.y.assign(std::size_t(c.chains) * std::size_t(c.retained), 0.0);
    out.v.assign(std::size_t(c.chains) * std::size_t(c.retained), 0.0);
    const auto worker = [&](int lo, int hi) {
        for (int chain = lo; chain < hi; ++chain) {
            make_chain_runner(chain, out.y.data() + std::size_t(chain) * std::size_t(c.retained),
                              out.v.data() + std::size_t(chain) * std::size_t(c.retained));
        }
    };
    threads = std::max(1, std::min(threads, c.chains));
    if (threads == 1) {
        worker(0, c.chains);
    } else {
        std::vector<std::thread> pool;
        const int per = (c.chains + threads - 1) / threads;
        for (int tix = 0; tix < threads; ++tix) {
            const int lo = tix * per;
            const int hi = std::min(c.chains, lo + per);
            if (lo < hi) pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    out.time_elapsed = c.h * double(c.burn_in + c.retained * c.thin);
    std::uint64_t fp = 1469598103934665603ULL;
    const auto mix = [&fp](std::uint64_t v) { fp = (fp ^ v) * 1099511628211ULL; };
    mix(c.seed);
    mix(std::uint64_t(c.chains));
    mix(std::uint64_t(c.retained));
    out.fingerprint = fp;
    return out;
}

}  // namespace

double grad_psi_eps(double y, double epsilon, const DerivedCoefficients& coeffs, int drift_sign) {
    const double w = -std::log1p(-epsilon);
    const double ay = std::abs(y);
    if (ay < w) return 0.0;
    const double sgn = y >= 0.0 ? 1.0 : -1.0;
    const double a2 = coeffs.abs_u11 * coeffs.abs_u11;
    const double e = std::exp(-ay);
    const double e2 = e * e;
    // The drift denominator carries sign(y): it comes from the density factor
    // 1 - drift * |u11| e^{-|y|} sign(y).
    const double varpi_eff = double(drift_sign) * coeffs.varpi * sgn;
    const double bracket =
        -1.0 + 2.0 / (1.0 - a2 * e2) + 1.0 / (1.0 - e2) - 1.0 / (1.0 - varpi_eff * e);
    return sgn * bracket;
}

void verlet_step(double& y, double& v, double h, double grad_at_y, double& grad_out,
                 const RegularizedLaw& law) {
    const Force f{law.epsilon, law.base.coeffs, law.base.drift_sign};
    v -= 0.5 * h * grad_at_y;
    y += h * v;
    grad_out = f(y);
    v -= 0.5 * h * grad_out;
}

Ensemble integrate_underdamped(const LangevinConfig& c, int threads) {
    validate(c);
    const KonnoLaw law = make_konno_law(c.params);
    const Force force{c.epsilon, law.coeffs, law.drift_sign};
    const double w = -std::log1p(-c.epsilon);
    const double h = c.h;
    const double ou_decay = std::exp(-h);
    const double ou_noise = std::sqrt(-std::expm1(-2.0 * h));
    const std::int64_t total_steps = c.burn_in + c.retained * c.thin;
    const bool euler = c.integrator == Integrator::euler;
    const double sqrt_2h = std::sqrt(2.0 * h);
    return run_chains(c, threads, [&](int chain, double* ys, double* vs) {
        RandomStream rng(c.seed, std::uint64_t(chain));
        double y, v;
        init_chain(rng, c, w, y, v);
        std::int64_t written = 0;
        double g = force(y);
        for (std::int64_t s = 1; s <= total_steps; ++s) {
            if (euler) {
                const double ynew = y + h * v;
                v += -h * v - h * g + sqrt_2h * rng.gaussian();
                y = ynew;
                g = force(y);
            } else {
                v -= 0.5 * h * g;
                y += 0.5 * h * v;
                v = ou_decay * v + ou_noise * rng.gaussian();
                y += 0.5 * h * v;
                g = force(y);
                v -= 0.5 * h * g;
            }
            check_finite(y, v, chain, s);
            if (s > c.burn_in && (s - c.burn_in) % c.thin == 0 && written < c.retained) {
                ys[written] = y;
                vs[written] = v;
                ++written;
            }
        }
    });
}

Ensemble integrate_overdamped(const LangevinConfig& c, int threads) {
    validate(c);
    const KonnoLaw law = make_konno_law(c.params);
    const Force force{c.epsilon, law.coeffs, law.drift_sign};
    const double w = -std::log1p(-c.epsilon);
    const double h = c.h;
    const double sqrt_2h = std::sqrt(2.0 * h);
    const std::int64_t total_steps = c.burn_in + c.retained * c.thin;
    return run_chains(c, threads, [&](int chain, double* ys, double* vs) {
        RandomStream rng(c.seed, std::uint64_t(chain));
        double y, v;
        init_chain(rng, c, w, y, v);  // v drawn but unused by the dynamics
        std::int64_t written = 0;
        for (std::int64_t s = 1; s <= total_steps; ++s) {
            y += -h * force(y) + sqrt_2h * rng.gaussian();
            check_finite(y, 0.0, chain, s);
            if (s > c.burn_in && (s - c.burn_in) % c.thin == 0 && written < c.retained) {
                ys[written] = y;
                vs[written] = v;
                ++written;
            }
        }
    });
}

std::vector<double> observable_xc(const Ensemble& ensemble, std::int64_t t,
                                  const WalkParams& params) {
    const double a = std::abs(params.u11);
    std::vector<double> out(ensemble.y.size());
    for (std::size_t i = 0; i < ensemble.y.size(); ++i) {
        const double y = ensemble.y[i];
        const double sgn = y >= 0.0 ? 1.0 : -1.0;  // sign(0) := +1
        out[i] = double(t) * a * std::exp(-std::abs(y)) * sgn;
    }
    return out;
}

namespace {

// Half-L1 between an empirical histogram and exact bin masses, out-of-range
// mass on both sides included.
double histogram_tv(const std::vector<double>& samples, double lo, double hi, int bins,
                    const std::function<double(double)>& cdf) {
    std::vector<double> emp(std::size_t(bins), 0.0);
    double emp_out = 0.0;
    const double width = (hi - lo) / double(bins);
    const double n = double(samples.size());
    for (double s : samples) {
        const int b = int(std::floor((s - lo) / width));
        if (b < 0 || b >= bins) {
            emp_out += 1.0;
        } else {
            emp[std::size_t(b)] += 1.0;
        }
    }
    double l1 = 0.0;
    double prev = cdf(lo);
    for (int b = 0; b < bins; ++b) {
        const double next = cdf(lo + width * double(b + 1));
        l1 += std::abs(emp[std::size_t(b)] / n - (next - prev));
        prev = next;
    }
    const double exact_out = cdf(lo) + (1.0 - prev);
    return 0.5 * (l1 + emp_out / n + exact_out);
}

}  // namespace

StationarityDiagnostics diagnose(const Ensemble& ensemble, const RegularizedLaw& law) {
    StationarityDiagnostics d;
    d.bins = 128;
    // Fixed, reproducible binning: central 99.9% of the target law.
    d.y_lo = pi_eps_quantile(0.0005, law);
    d.y_hi = pi_eps_quantile(0.9995, law);
    d.tv_y = histogram_tv(ensemble.y, d.y_lo, d.y_hi, d.bins,
                          [&](double y) { return pi_eps_cdf(y, law); });

    const std::size_t n = ensemble.y.size();
    double my = 0.0, mv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        my += ensemble.y[i];
        mv += ensemble.v[i];
    }
    my /= double(n);
    mv /= double(n);
    double syy = 0.0, svv = 0.0, syv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dy = ensemble.y[i] - my;
        const double dv = ensemble.v[i] - mv;
        syy += dy * dy;
        svv += dv * dv;
        syv += dy * dv;
    }
    d.v_mean = mv;
    d.v_var = svv / double(n - 1);
    d.yv_corr = syv / std::sqrt(syy * svv);

    // Pushforward check against the x-form law on matching bins. Samples are
    // kept on the x/t scale so the bins come straight from the law.
    d.x_lo = f_eps_quantile(0.0005, law);
    d.x_hi = f_eps_quantile(0.9995, law);
    const double a = law.base.coeffs.abs_u11;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = ensemble.y[i];
        const double sgn = y >= 0.0 ? 1.0 : -1.0;
        xs[i] = a * std::exp(-std::abs(y)) * sgn;
    }
    d.tv_xc = histogram_tv(xs, d.x_lo, d.x_hi, d.bins,
                           [&](double x) { return f_eps_cdf(x, law); });
    return d;
}

ConvergenceCurve time_to_tv(const LangevinConfig& config, Dynamics dynamics, double threshold,
                            std::int64_t check_every, std::int64_t max_steps, int threads) {
    validate(config);
    const KonnoLaw base = make_konno_law(config.params);
    const RegularizedLaw law = regularize(base, config.epsilon);
    const Force force{config.epsilon, base.coeffs, base.drift_sign};
    const double w = -std::log1p(-config.epsilon);
    const double h = config.h;
    const double ou_decay = std::exp(-h);
    const double ou_noise = std::sqrt(-std::expm1(-2.0 * h));
    const double sqrt_2h = std::sqrt(2.0 * h);
    const bool euler = config.integrator == Integrator::euler;
    const bool overdamped = dynamics == Dynamics::overdamped;

    const int n = config.chains;
    std::vector<double> y(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n)), g(static_cast<std::size_t>(n));
    std::vector<RandomStream> rngs;
    rngs.reserve(std::size_t(n));
    for (int c = 0; c < n; ++c) {
        rngs.emplace_back(config.seed, std::uint64_t(c));
        init_chain(rngs.back(), config, w, y[std::size_t(c)], v[std::size_t(c)]);
        g[std::size_t(c)] = force(y[std::size_t(c)]);
    }
    const double lo = pi_eps_quantile(0.0005, law);
    const double hi = pi_eps_quantile(0.9995, law);
    const auto snapshot_tv = [&]() {
        return histogram_tv(y, lo, hi, 128, [&](double q) { return pi_eps_cdf(q, law); });
    };

    ConvergenceCurve curve;
    const auto advance_block = [&](int clo, int chi, std::int64_t steps, std::int64_t step0) {
        for (int c = clo; c < chi; ++c) {
            double yy = y[std::size_t(c)], vv = v[std::size_t(c)], gg = g[std::size_t(c)];
            RandomStream& rng = rngs[std::size_t(c)];
            for (std::int64_t s = 0; s < steps; ++s) {
                if (overdamped) {
                    yy += -h * gg + sqrt_2h * rng.gaussian();
                    gg = force(yy);
                } else if (euler) {
                    const double ynew = yy + h * vv;
                    vv += -h * vv - h * gg + sqrt_2h * rng.gaussian();
                    yy = ynew;
                    gg = force(yy);
                } else {
                    vv -= 0.5 * h * gg;
                    yy += 0.5 * h * vv;
                    vv = ou_decay * vv + ou_noise * rng.gaussian();
                    yy += 0.5 * h * vv;
                    gg = force(yy);
                    vv -= 0.5 * h * gg;
                }
                check_finite(yy, vv, c, step0 + s);
            }
            y[std::size_t(c)] = yy;
            v[std::size_t(c)] = vv;
            g[std::size_t(c)] = gg;
        }
    };
    std::int64_t done = 0;
    {
        const double tv0 = snapshot_tv();
        curve.tv_by_step.emplace_back(0, tv0);
        if (tv0 <= threshold) {
            curve.steps_to_threshold = 0;
            return curve;
        }
    }
    threads = std::max(1, std::min(threads, n));
    while (done < max_steps) {
        const std::int64_t block = std::min(check_every, max_steps - done);
        if (threads == 1) {
            advance_block(0, n, block, done);
        } else {
            std::vector<std::thread> pool;
            const int per = (n + threads - 1) / threads;
            for (int tix = 0; tix < threads; ++tix) {
                const int clo = tix * per;
                const int chi = std::min(n, clo + per);
                if (clo < chi) pool.emplace_back(advance_block, clo, chi, block, done);
            }
            for (auto& th : pool) th.join();
        }
        done += block;
        const double tv = snapshot_tv();
        curve.tv_by_step.emplace_back(done, tv);
        if (tv <= threshold) {
            curve.steps_to_threshold = done;
            return curve;
        }
    }
    return curve;
}

}  // namespace walklab
