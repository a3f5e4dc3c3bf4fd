#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "walklab/distances.hpp"
#include "walklab/errors.hpp"
#include "walklab/io.hpp"
#include "walklab/langevin.hpp"
#include "walklab/limitlaw.hpp"
#include "walklab/oscillation.hpp"
#include "walklab/walk.hpp"

namespace walklab {

namespace {

constexpr double kPi = std::numbers::pi;

const char* kPlotPreamble =
    "# gnuplot script (generated)\n"
    "set datafile separator ','\n"
    "set key autotitle columnhead\n"
    "set grid\n";

struct Emitter {
    std::filesystem::path dir;
    std::string fp;
    std::vector<std::filesystem::path> written;

    std::filesystem::path path(const std::string& stem, const std::string& ext) {
        return dir / (stem + "-" + fp + ext);
    }
    void csv(const std::string& stem, const CsvWriter& w, const std::string& plot_body) {
        const auto p = path(stem, ".csv");
        write_file_atomic(p, w.str());
        written.push_back(p);
        const auto gp = path(stem, ".gp");
        write_file_atomic(gp, std::string(kPlotPreamble) + plot_body);
        written.push_back(gp);
    }
    void json(const std::string& stem, const nlohmann::ordered_json& j) {
        const auto p = path(stem, ".json");
        write_file_atomic(p, j.dump(2) + "\n");
        written.push_back(p);
    }
};

nlohmann::ordered_json base_report(const ExperimentConfig& c, const std::string& experiment) {
    nlohmann::ordered_json j;
    j["experiment"] = experiment;
    j["fingerprint"] = config_fingerprint(c);
    j["seed"] = c.seed;
    j["theta"] = params_to_json(c.params);
    return j;
}

std::string fmt(double v) { return format_double(v); }

// ---- walk-dist ------------------------------------------------------------

void run_walk_dist(const ExperimentConfig& c, Emitter& em) {
    nlohmann::ordered_json rep = base_report(c, "walk-dist");
    rep["t"] = c.t_list;
    nlohmann::ordered_json checksums = nlohmann::ordered_json::object();
    for (std::int64_t t : c.t_list) {
        const LatticeDist d = evolve(c.params, t);
        CsvWriter w({"k", "prob"});
        std::string bytes;
        for (std::size_t j = 0; j < d.probs.size(); ++j) {
            const std::int64_t k = d.offset + std::int64_t(j);
            const std::string cell = fmt(d.probs[j]);
            bytes += cell;
            bytes += '\n';
            w.add_row({std::to_string(k), cell});
        }
        char buf[20];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(fnv1a(bytes)));
        checksums[std::to_string(t)] = buf;
        em.csv("walk-dist-t" + std::to_string(t), w,
               "plot ARG1 using 1:2 with impulses title 'p(k,t)'\n");
    }
    rep["checksum"] = checksums;
    em.json("walk-dist", rep);
}

// ---- limit-check ----------------------------------------------------------

double tv_smoothed_vs_limit(const LatticeDist& d, double eta, const KonnoLaw& law) {
    const double width_target = eta / 8.0;
    const int cells = std::max(64, int(std::ceil(2.4 / width_target)));
    const DensityGrid g = smooth_pdf(d, eta, {-1.2, 1.2, cells});
    return tv_grid_vs_cdf(g, [&](double x) { return konno_cdf(x, law); });
}

void run_limit_check(const ExperimentConfig& c, Emitter& em) {
    const KonnoLaw law = make_konno_law(c.params);
    CsvWriter w({"t", "eta", "tv"});
    nlohmann::ordered_json rep = base_report(c, "limit-check");
    nlohmann::ordered_json curve = nlohmann::ordered_json::array();
    for (std::int64_t t : c.t_list) {
        const LatticeDist d = evolve(c.params, t);
        for (double eta : c.eta_list) {
            const double tv = tv_smoothed_vs_limit(d, eta, law);
            w.add_row({std::to_string(t), fmt(eta), fmt(tv)});
            curve.push_back({{"t", t}, {"eta", eta}, {"tv", tv}});
        }
    }
    rep["curve"] = curve;
    // successive ratios at the largest t, etas as configured
    if (!c.t_list.empty() && c.eta_list.size() >= 2) {
        const std::int64_t t = *std::max_element(c.t_list.begin(), c.t_list.end());
        const LatticeDist d = evolve(c.params, t);
        std::vector<double> etas = c.eta_list;
        std::sort(etas.rbegin(), etas.rend());
        nlohmann::ordered_json ratios = nlohmann::ordered_json::array();
        double prev = -1.0;
        for (double eta : etas) {
            const double tv = tv_smoothed_vs_limit(d, eta, law);
            if (prev > 0.0) ratios.push_back(prev / tv);
            prev = tv;
        }
        rep["tv_ratios_largest_t"] = ratios;
    }
    rep["drift_sign"] = law.drift_sign;
    em.csv("limit-check", w, "plot ARG1 using 2:3 with linespoints title 'TV vs eta'\n");
    em.json("limit-check", rep);
}

// ---- langevin-sample ------------------------------------------------------

LangevinConfig langevin_config(const ExperimentConfig& c, double epsilon) {
    LangevinConfig lc;
    lc.epsilon = epsilon;
    lc.params = c.params;
    lc.h = c.langevin.h;
    lc.burn_in = c.langevin.burn_in;
    lc.retained = c.langevin.retained;
    lc.thin = c.langevin.thin;
    lc.chains = c.langevin.chains;
    lc.seed = c.seed;
    lc.integrator =
        c.langevin.integrator == "euler" ? Integrator::euler : Integrator::splitting;
    return lc;
}

void run_langevin_sample(const ExperimentConfig& c, Emitter& em) {
    const double epsilon = c.epsilon_list.empty() ? 0.05 : c.epsilon_list.front();
    const LangevinConfig lc = langevin_config(c, epsilon);
    const Ensemble e = integrate_underdamped(lc, c.threads);
    const RegularizedLaw law = regularize(make_konno_law(c.params), epsilon);
    const StationarityDiagnostics diag = diagnose(e, law);

    CsvWriter w({"chain", "step", "y", "v"});
    for (int chain = 0; chain < e.chains; ++chain) {
        for (std::int64_t i = 0; i < e.per_chain; ++i) {
            const std::size_t ix = std::size_t(chain) * std::size_t(e.per_chain) + std::size_t(i);
            w.add_row({std::to_string(chain), std::to_string(lc.burn_in + (i + 1) * lc.thin),
                       fmt(e.y[ix]), fmt(e.v[ix])});
        }
    }
    em.csv("langevin-sample", w, "plot ARG1 using 3:4 with dots title 'phase points'\n");

    nlohmann::ordered_json rep = base_report(c, "langevin-sample");
    rep["epsilon"] = epsilon;
    rep["config"] = {{"h", lc.h},          {"burn_in", lc.burn_in}, {"chains", lc.chains},
                     {"retained", lc.retained}, {"thin", lc.thin},
                     {"integrator", c.langevin.integrator}};
    rep["tv_y"] = diag.tv_y;
    rep["v_mean"] = diag.v_mean;
    rep["v_var"] = diag.v_var;
    rep["corr"] = diag.yv_corr;
    rep["tv_xc"] = diag.tv_xc;
    rep["bins"] = diag.bins;
    rep["y_range"] = {diag.y_lo, diag.y_hi};
    rep["x_range"] = {diag.x_lo, diag.x_hi};
    em.json("langevin-sample", rep);
}

// ---- tv-curves ------------------------------------------------------------

double tv_law_vs_regularized(const KonnoLaw& law, const RegularizedLaw& reg) {
    // |f - f_eps| differs only on the endcaps; fine midpoint panels suffice.
    const double a = law.coeffs.abs_u11;
    const int n = 20000;
    double l1 = 0.0;
    for (int side = 0; side < 2; ++side) {
        const double lo = side ? -a : reg.x_inner;
        const double hi = side ? -reg.x_inner : a;
        for (int i = 0; i < n; ++i) {
            const double x = lo + (hi - lo) * (double(i) + 0.5) / double(n);
            l1 += std::abs(konno_pdf(x, law) - reg.kappa_x) * (hi - lo) / double(n);
        }
    }
    return 0.5 * l1;
}

void run_tv_curves(const ExperimentConfig& c, Emitter& em) {
    const KonnoLaw law = make_konno_law(c.params);
    CsvWriter w({"kind", "t", "eta", "epsilon", "tv", "sqrt_scale"});
    const std::int64_t t = c.t_list.empty()
                               ? 4096
                               : *std::max_element(c.t_list.begin(), c.t_list.end());
    const LatticeDist d = evolve(c.params, t);
    for (double eps : c.epsilon_list) {
        const RegularizedLaw reg = regularize(law, eps);
        w.add_row({"epsilon", std::to_string(t), "0", fmt(eps), fmt(tv_law_vs_regularized(law, reg)),
                   fmt(std::sqrt(eps))});
    }
    for (double eta : c.eta_list) {
        w.add_row({"eta", std::to_string(t), fmt(eta), "0", fmt(tv_smoothed_vs_limit(d, eta, law)),
                   fmt(std::sqrt(eta))});
    }
    for (double eps : c.epsilon_list) {
        for (double eta : c.eta_list) {
            // smoothed randomized walk against the regularized law
            const double width_target = eta / 8.0;
            const int cells = std::max(64, int(std::ceil(2.4 / width_target)));
            const DensityGrid g = smooth_pdf(d, eta, {-1.2, 1.2, cells});
            const RegularizedLaw reg = regularize(law, eps);
            const double tv =
                tv_grid_vs_cdf(g, [&](double x) { return f_eps_cdf(x, reg); });
            w.add_row({"both", std::to_string(t), fmt(eta), fmt(eps), fmt(tv),
                       fmt(std::sqrt(eta) + std::sqrt(eps))});
        }
    }
    em.csv("tv-curves", w, "plot ARG1 using 6:5 with points title 'TV vs sqrt scale'\n");
    nlohmann::ordered_json rep = base_report(c, "tv-curves");
    rep["t"] = t;
    em.json("tv-curves", rep);
}

// ---- c0-estimate ----------------------------------------------------------

void run_c0_estimate(const ExperimentConfig& c, Emitter& em) {
    CsvWriter w({"t", "tv_plateau"});
    nlohmann::ordered_json rep = base_report(c, "c0-estimate");
    double last_tv = 0.0;
    const KonnoLaw law = make_konno_law(symmetric_point(c.params.kappa_margin));
    for (std::int64_t t : c.t_list) {
        const LatticeDist walk = evolve(law.params, t);
        const LatticeDist proj = lattice_projection(law, t, ParityMode::sublattice);
        const std::int64_t lo = std::min(walk.offset, proj.offset);
        const std::int64_t hi = std::max(walk.offset + std::int64_t(walk.probs.size()),
                                         proj.offset + std::int64_t(proj.probs.size()));
        double l1 = 0.0;
        for (std::int64_t k = lo; k < hi; ++k) l1 += std::abs(walk.prob(k) - proj.prob(k));
        last_tv = 0.5 * l1;
        w.add_row({std::to_string(t), fmt(last_tv)});
    }
    em.csv("c0-estimate", w, "plot ARG1 using 1:2 with linespoints title 'TV plateau'\n");
    const std::int64_t t_top = c.t_list.empty()
                                   ? 1024
                                   : *std::max_element(c.t_list.begin(), c.t_list.end());
    const OscillationReport rep_osc = lower_bound_chain(t_top);
    nlohmann::ordered_json osc = report_to_json(rep_osc);
    osc.erase("nodes");  // bulky; the csv carries the headline numbers
    rep["oscillation"] = osc;
    rep["tv_plateau_largest_t"] = last_tv;
    rep["equidistribution_heuristic"] = 1.0 / (std::sqrt(2.0) * kPi);
    rep["explicit_lower_bound"] = 1.0 / (8.0 * std::sqrt(2.0) * kPi);
    rep["literature_estimate"] = 0.3;
    em.json("c0-estimate", rep);
}

// ---- deficiency -----------------------------------------------------------

FiniteDist coarsen(const FiniteDist& p, int bins) {
    const std::int64_t lo = p.labels.front();
    const std::int64_t hi = p.labels.back();
    const double width = double(hi - lo + 1) / double(bins);
    FiniteDist out;
    out.labels.resize(std::size_t(bins));
    out.probs.assign(std::size_t(bins), 0.0);
    for (int b = 0; b < bins; ++b) out.labels[std::size_t(b)] = b;
    for (std::size_t i = 0; i < p.labels.size(); ++i) {
        int b = int(double(p.labels[i] - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        out.probs[std::size_t(b)] += p.probs[i];
    }
    return out;
}

void run_deficiency(const ExperimentConfig& c, Emitter& em) {
    const std::int64_t t = c.t_list.empty()
                               ? 2048
                               : *std::max_element(c.t_list.begin(), c.t_list.end());
    const double eta = c.eta_list.empty() ? 0.02 : c.eta_list.front();
    const double eps = c.epsilon_list.empty() ? 0.01 : c.epsilon_list.front();
    const KonnoLaw law = make_konno_law(c.params);
    const RegularizedLaw reg = regularize(law, eps);

    const LatticeDist walk = evolve(c.params, t);
    const RandomizedDist rnd = randomize(walk, eta);
    const FiniteDist p_sites = from_randomized(rnd);

    // Route 1: cell smear of the randomized walk vs the regularized law on
    // the subcell grid.
    const int subcells = 4;
    const StochasticKernel smear = uniform_convolution_kernel(t, eta, p_sites.labels, subcells);
    const FiniteDist q_sub =
        project_cdf_to_subcells([&](double x) { return f_eps_cdf(x, reg); }, t, subcells,
                                p_sites.labels.front(), p_sites.labels.back());
    const double upper_smear = deficiency_upper(p_sites, q_sub, smear);

    // Route 2: window-randomization kernel applied to the raw walk vs the
    // site-level projection of the regularized law.
    const FiniteDist p_raw = from_lattice(walk);
    const StochasticKernel window =
        randomization_kernel(p_raw.labels.front(), p_raw.labels.back(), rnd.r);
    const LatticeDist qproj = lattice_projection(reg, t, ParityMode::full);
    auto [mapped, q_sites] = align(window.apply(p_raw), from_lattice(qproj));
    const double upper_window = tv(mapped, q_sites);

    // Small exact instance: coarse binning + LP.
    const FiniteDist p64 = coarsen(p_sites, 64);
    FiniteDist q_sites_only = from_lattice(qproj);
    // align q to p's site range first so the coarse bins match
    auto [pa, qa] = align(p_sites, q_sites_only);
    const FiniteDist q64 = coarsen(qa, 64);
    const FiniteDist p64a = coarsen(pa, 64);
    const DeficiencyLpResult lp = deficiency_lp(p64a, q64, 64);

    CsvWriter w({"route", "value"});
    w.add_row({"upper_uniform_convolution", fmt(upper_smear)});
    w.add_row({"upper_randomization_window", fmt(upper_window)});
    w.add_row({"lp_coarse_64", fmt(lp.value)});
    w.add_row({"lp_duality_gap", fmt(lp.duality_gap)});
    em.csv("deficiency", w, "plot ARG1 using 0:2:xtic(1) with boxes title 'deficiency routes'\n");

    CsvWriter kw([&] {
        std::vector<std::string> h;
        for (int j = 0; j < 64; ++j) h.push_back("q" + std::to_string(j));
        return h;
    }());
    for (int i = 0; i < 64; ++i) {
        std::vector<std::string> row;
        for (int j = 0; j < 64; ++j) row.push_back(fmt(lp.kernel[std::size_t(i * 64 + j)]));
        kw.add_row(row);
    }
    em.csv("deficiency-kernel", kw, "# optimal kernel matrix; no plot\n");

    nlohmann::ordered_json rep = base_report(c, "deficiency");
    rep["t"] = t;
    rep["eta"] = eta;
    rep["epsilon"] = eps;
    rep["upper_uniform_convolution"] = upper_smear;
    rep["upper_randomization_window"] = upper_window;
    rep["lp_value"] = lp.value;
    rep["lp_duality_gap"] = lp.duality_gap;
    rep["lp_iterations"] = lp.iterations;
    em.json("deficiency", rep);
}

// ---- speedup --------------------------------------------------------------

void run_speedup(const ExperimentConfig& c, Emitter& em) {
    const double eps = c.epsilon_list.empty() ? 0.05 : c.epsilon_list.front();
    CsvWriter w({"seed", "dynamics", "steps_to_threshold"});
    CsvWriter curves({"seed", "dynamics", "step", "tv"});
    nlohmann::ordered_json rep = base_report(c, "speedup");
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    bool ordering_holds = true;
    for (std::uint64_t seed : c.speedup.seeds) {
        LangevinConfig lc = langevin_config(c, eps);
        lc.seed = seed;
        lc.chains = c.speedup.chains;
        lc.start_sigma = c.speedup.start_sigma;
        lc.burn_in = 0;
        lc.retained = 0;
        const auto run_one = [&](Dynamics dyn, const char* name) {
            const ConvergenceCurve curve = time_to_tv(lc, dyn, c.speedup.threshold,
                                                      c.speedup.check_every,
                                                      c.speedup.max_steps, c.threads);
            for (const auto& [step, tvv] : curve.tv_by_step) {
                curves.add_row({std::to_string(seed), name, std::to_string(step), fmt(tvv)});
            }
            w.add_row({std::to_string(seed), name, std::to_string(curve.steps_to_threshold)});
            return curve.steps_to_threshold;
        };
        const std::int64_t su = run_one(Dynamics::underdamped, "underdamped");
        const std::int64_t so = run_one(Dynamics::overdamped, "overdamped");
        runs.push_back({{"seed", seed}, {"underdamped", su}, {"overdamped", so}});
        if (su < 0 || (so >= 0 && su > so)) ordering_holds = false;
    }
    em.csv("speedup", w, "plot ARG1 using 0:3:xtic(2) with points title 'steps to threshold'\n");
    em.csv("speedup-curves", curves,
           "plot ARG1 using 3:4 with lines title 'TV by step'\n");
    rep["epsilon"] = eps;
    rep["threshold"] = c.speedup.threshold;
    rep["runs"] = runs;
    rep["underdamped_not_slower"] = ordering_holds;
    em.json("speedup", rep);
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& known_experiments() {
    static const std::vector<std::pair<std::string, std::string>> v = {
        {"walk-dist", "exact walk distribution p(k,t) per configured t"},
        {"limit-check", "TV between the smoothed scaled walk and the limit law, per t and eta"},
        {"langevin-sample", "stationarity diagnostics of the underdamped sampler"},
        {"tv-curves", "TV sweeps in epsilon and eta against the sqrt trend"},
        {"c0-estimate", "nonequivalence TV plateau and oscillation functionals"},
        {"deficiency", "kernel deficiency upper bounds and the coarse-bin LP"},
        {"speedup", "underdamped vs overdamped steps to a TV threshold"},
    };
    return v;
}

ExperimentConfig parse_config(const nlohmann::json& raw) {
    ExperimentConfig c;
    if (!raw.is_object()) throw ConfigError("config must be a JSON object");
    const auto exps = raw.value("experiments", nlohmann::json("all"));
    if (exps.is_string()) {
        if (exps.get<std::string>() != "all") {
            throw ConfigError("experiments must be \"all\" or a list of names");
        }
        for (const auto& [name, desc] : known_experiments()) c.experiments.push_back(name);
    } else if (exps.is_array()) {
        for (const auto& e : exps) {
            const std::string name = e.get<std::string>();
            const auto& known = known_experiments();
            const bool ok = std::any_of(known.begin(), known.end(),
                                        [&](const auto& kv) { return kv.first == name; });
            if (!ok) throw ConfigError("unknown experiment: " + name);
            c.experiments.push_back(name);
        }
    } else {
        throw ConfigError("experiments must be \"all\" or a list of names");
    }

    const double kappa = raw.value("kappa_margin", kDefaultKappaMargin);
    if (raw.contains("theta") && raw["theta"].is_object() && raw["theta"].contains("preset")) {
        const std::string preset = raw["theta"]["preset"].get<std::string>();
        if (preset == "symmetric") {
            c.params = symmetric_point(kappa);
        } else if (preset == "hadamard") {
            c.params = hadamard_point(kappa);
        } else {
            throw ConfigError("unknown theta preset: " + preset);
        }
    } else if (raw.contains("theta")) {
        nlohmann::json t = raw["theta"];
        if (!t.contains("kappa_margin")) t["kappa_margin"] = kappa;
        c.params = params_from_json(t);
    } else {
        c.params = symmetric_point(kappa);
    }

    c.t_list = raw.value("t", std::vector<std::int64_t>{1024, 2048, 4096, 8192});
    c.eta_list = raw.value("eta", std::vector<double>{0.08, 0.02, 0.005});
    c.epsilon_list = raw.value("epsilon", std::vector<double>{0.05, 0.01});
    if (raw.contains("langevin")) {
        const auto& l = raw["langevin"];
        c.langevin.h = l.value("h", c.langevin.h);
        c.langevin.burn_in = l.value("burn_in", c.langevin.burn_in);
        c.langevin.chains = l.value("chains", c.langevin.chains);
        c.langevin.retained = l.value("retained", c.langevin.retained);
        c.langevin.thin = l.value("thin", c.langevin.thin);
        c.langevin.integrator = l.value("integrator", c.langevin.integrator);
        if (c.langevin.integrator != "euler" && c.langevin.integrator != "splitting") {
            throw ConfigError("integrator must be euler or splitting");
        }
    }
    if (raw.contains("speedup")) {
        const auto& s = raw["speedup"];
        c.speedup.chains = s.value("chains", c.speedup.chains);
        c.speedup.check_every = s.value("check_every", c.speedup.check_every);
        c.speedup.max_steps = s.value("max_steps", c.speedup.max_steps);
        c.speedup.start_sigma = s.value("start_sigma", c.speedup.start_sigma);
        c.speedup.threshold = s.value("threshold", c.speedup.threshold);
        c.speedup.seeds = s.value("seeds", c.speedup.seeds);
    }
    c.seed = raw.value("seed", std::uint64_t(20240801));
    c.out_dir = raw.value("out_dir", std::string("out"));
    for (std::int64_t t : c.t_list) {
        if (t < 0) throw ConfigError("t must be nonnegative");
        if (t > kMaxWalkSteps) {
            throw CapExceeded("t exceeds the evolution cap " + std::to_string(kMaxWalkSteps));
        }
    }
    for (double e : c.eta_list) {
        if (!(e > 0.0 && e < 1.0)) throw ConfigError("eta must be in (0, 1)");
    }
    for (double e : c.epsilon_list) {
        if (!(e > 0.0 && e < 0.5)) throw ConfigError("epsilon must be in (0, 1/2)");
    }
    return c;
}

nlohmann::ordered_json canonical_config(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["experiments"] = c.experiments;
    j["theta"] = params_to_json(c.params);
    j["t"] = c.t_list;
    j["eta"] = c.eta_list;
    j["epsilon"] = c.epsilon_list;
    j["langevin"] = {{"h", c.langevin.h},
                     {"burn_in", c.langevin.burn_in},
                     {"chains", c.langevin.chains},
                     {"retained", c.langevin.retained},
                     {"thin", c.langevin.thin},
                     {"integrator", c.langevin.integrator}};
    j["speedup"] = {{"chains", c.speedup.chains},
                    {"check_every", c.speedup.check_every},
                    {"max_steps", c.speedup.max_steps},
                    {"start_sigma", c.speedup.start_sigma},
                    {"threshold", c.speedup.threshold},
                    {"seeds", c.speedup.seeds}};
    j["seed"] = c.seed;
    return j;
}

std::string config_fingerprint(const ExperimentConfig& c) {
    return fingerprint_hex(canonical_config(c));
}

nlohmann::ordered_json validate_config(const nlohmann::json& raw) {
    nlohmann::ordered_json out;
    out["ok"] = true;
    out["errors"] = nlohmann::ordered_json::array();
    out["warnings"] = nlohmann::ordered_json::array();
    try {
        // Cap violations downgrade to warnings here; everything else is an error.
        nlohmann::json relaxed = raw;
        if (relaxed.contains("t") && relaxed["t"].is_array()) {
            for (const auto& t : relaxed["t"]) {
                if (t.is_number_integer() && t.get<std::int64_t>() > kMaxWalkSteps) {
                    out["warnings"].push_back(
                        {{"field", "t"},
                         {"kind", "CapExceeded"},
                         {"value", t.get<std::int64_t>()},
                         {"suggested_max", kMaxWalkSteps}});
                }
            }
            nlohmann::json filtered = nlohmann::json::array();
            for (const auto& t : relaxed["t"]) {
                if (!t.is_number_integer() || t.get<std::int64_t>() <= kMaxWalkSteps) {
                    filtered.push_back(t);
                }
            }
            relaxed["t"] = filtered;
        }
        const ExperimentConfig c = parse_config(relaxed);
        double amp_updates = 0.0;
        for (std::int64_t t : c.t_list) amp_updates += double(t) * double(t);
        const double langevin_steps =
            double(c.langevin.chains) *
            double(c.langevin.burn_in + c.langevin.retained * c.langevin.thin);
        out["cost"] = {{"amplitude_updates", amp_updates}, {"langevin_steps", langevin_steps}};
        out["fingerprint"] = config_fingerprint(c);
        out["experiments"] = c.experiments;
    } catch (const Error& e) {
        out["ok"] = false;
        out["errors"].push_back({{"kind", "ConfigError"}, {"message", e.what()}});
    }
    return out;
}

std::vector<std::filesystem::path> run_experiments(const ExperimentConfig& c) {
    std::filesystem::create_directories(c.out_dir);
    Emitter em{c.out_dir, config_fingerprint(c), {}};
    // Emitted config: rerunning it reproduces every file bit-for-bit.
    nlohmann::ordered_json cfg = canonical_config(c);
    const auto cfg_path = c.out_dir / ("config-" + em.fp + ".json");
    write_file_atomic(cfg_path, cfg.dump(2) + "\n");
    em.written.push_back(cfg_path);
    for (const std::string& name : c.experiments) {
        if (name == "walk-dist") run_walk_dist(c, em);
        else if (name == "limit-check") run_limit_check(c, em);
        else if (name == "langevin-sample") run_langevin_sample(c, em);
        else if (name == "tv-curves") run_tv_curves(c, em);
        else if (name == "c0-estimate") run_c0_estimate(c, em);
        else if (name == "deficiency") run_deficiency(c, em);
        else if (name == "speedup") run_speedup(c, em);
    }
    return em.written;
}

}  // namespace walklab
