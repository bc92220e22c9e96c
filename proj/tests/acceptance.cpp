// Acceptance driver: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>

#include "fujita/certificates.hpp"
#include "fujita/config.hpp"
#include "fujita/core.hpp"
#include "fujita/operators.hpp"
#include "fujita/scan.hpp"
#include "fujita/scenario.hpp"
#include "fujita/solver.hpp"

using namespace fujita;

namespace {

struct Check {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

Field gaussian_data(const RadialGrid& g, double amp) {
    Field f = sample_profile(ProfileSpec(profile::Gaussian{amp}), g);
    f.zero_boundary();
    return f;
}

// 1. Exponent identities and q1 < q_F above p_F.
Check exponent_fidelity() {
    std::mt19937_64 rng(20261017);
    std::uniform_int_distribution<int> dn(1, 10);
    std::uniform_real_distribution<double> u(1.0005, 25.0);
    double worst = 0.0;
    int q1_failures = 0;
    for (int i = 0; i < 10000; ++i) {
        const int n = dn(rng);
        const double p = u(rng), q = u(rng);
        const auto e = rate_exponents(n, p, q);
        // Independent recomputation of the three forms.
        const double r = p * (q - 1.0) / (q * (p - 1.0));
        const double a = n * r - 1.0 / (p - 1.0);
        const double b = 1.0 + n * r - r * q / (q - 1.0);
        const double c = ((q - 1.0) * (n * p - 1.0) - 1.0) / (q * (p - 1.0));
        const double scale = 1.0 + n * r + 1.0 / (p - 1.0) + r * q / (q - 1.0);
        worst = std::max({worst, std::abs(a - b) / scale, std::abs(a - c) / scale,
                          std::abs(e.combined - c) / scale, std::abs(e.e1 - a) / scale});

        const auto ce = critical_exponents(n);
        const double pf = 1.0 + 2.0 / n;
        const double pp = pf * (1.0 + 1e-9) + std::uniform_real_distribution<double>(0.0, 20.0)(rng);
        if (!(ce.q_one_of_p(pp) < 1.0 + 1.0 / (n + 1.0))) ++q1_failures;
        if (ce.p_fujita != pf) ++q1_failures;
    }
    const auto one = critical_exponents(1);
    const bool table = one.p_fujita == 3.0 && one.q_fujita == 1.5;
    return {worst <= 1e-12 && q1_failures == 0 && table,
            fmt("max scaled identity gap %.2e (tol 1e-12), q1/p_F failures %d", worst, q1_failures)};
}

// 2. Principal eigenvalues against π²/4, j0,1² and π².
Check eigenpair_oracle() {
    // j0,1 by bracketed root-finding on J0.
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t iters = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        [](double x) { return boost::math::cyl_bessel_j(0, x); }, 2.0, 3.0, tol, iters);
    const double j01 = 0.5 * (bracket.first + bracket.second);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double e1 = rel_diff(principal_eigenpair(1, 1.0, 2000).lambda, pi2 / 4.0);
    const double e2 = rel_diff(principal_eigenpair(2, 1.0, 2000).lambda, j01 * j01);
    const double e3 = rel_diff(principal_eigenpair(3, 1.0, 2000).lambda, pi2);
    double spread = 0.0;
    for (int n : {1, 2, 3}) {
        std::vector<double> scaled;
        for (double R : {1.0, 2.0, 5.0}) scaled.push_back(principal_eigenpair(n, R, 2000).lambda * R * R);
        const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
        spread = std::max(spread, (*hi - *lo) / *lo);
    }
    const double worst = std::max({e1, e2, e3});
    return {worst <= 1e-4 && spread <= 1e-6 && std::abs(j01 * j01 - 5.7832) < 1e-4,
            fmt("rel errors n=1 %.2e, n=2 %.2e (j01^2=%.6f), n=3 %.2e; lambda*R^2 spread %.2e", e1, e2,
                j01 * j01, e3, spread)};
}

// 3. Closed-form ODE blow-up time against quadrature.
Check ode_oracle() {
    const auto ln2 = ode_comparison(2.0, 2.0, 1.0, 1.0);
    const double e_ln2 = rel_diff(*ln2.t_star, std::log(2.0));
    boost::math::quadrature::tanh_sinh<double> integrator;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dp(1.2, 6.0), da(0.0, 3.0), dy(1.05, 4.0);
    double worst = e_ln2;
    int missing = 0;
    for (int i = 0; i < 100; ++i) {
        const double p = dp(rng), a = da(rng);
        const double y0 = std::max(std::pow(a, 1.0 / (p - 1.0)), 0.2) * dy(rng);
        const auto v = ode_comparison(y0, p, a, 1.0);
        if (!v.t_star) {
            ++missing;
            continue;
        }
        // t* = ∫_{y0}^∞ dy / (y^p - a y) with s = y0/y.
        const double c = std::pow(y0, p - 1.0);
        const double ref = integrator.integrate(
            [&](double s) { return std::pow(s, p - 2.0) / (c - a * std::pow(s, p - 1.0)); }, 0.0, 1.0, 1e-15);
        worst = std::max(worst, rel_diff(*v.t_star, ref));
    }
    return {worst <= 1e-8 && missing == 0, fmt("max rel gap %.2e over 100 triples (ln2 case %.1e)", worst, e_ln2)};
}

// 4. Pure heat against the translated heat kernel.
Check heat_convergence() {
    ProblemParams pr;
    pr.use_source = false;
    pr.use_gradient = false;
    std::vector<double> errors, spacings;
    for (int M : {300, 600, 1200}) {
        const RadialGrid g(1, 12.0, M);
        SolveConfig cfg;
        cfg.t_end = 1.0;
        cfg.dt_init = cfg.dt_min = cfg.dt_max = 1e-4;
        cfg.theta = 0.5;
        cfg.trace_stride = 1000000;
        const auto out = run(pr, gaussian_data(g, 1.0), nullptr, cfg);
        const Field ref = heat_reference(1.0, g);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(out.final_field[i] - ref[i]));
        errors.push_back(err);
        spacings.push_back(g.spacing());
    }
    const double o1 = std::log(errors[0] / errors[1]) / std::log(spacings[0] / spacings[1]);
    const double o2 = std::log(errors[1] / errors[2]) / std::log(spacings[1] / spacings[2]);
    return {std::min(o1, o2) >= 1.8,
            fmt("errors %.3e %.3e %.3e, orders %.3f %.3f (min 1.8)", errors[0], errors[1], errors[2], o1, o2)};
}

// 5. Viscous Hamilton-Jacobi monotonicity.
Check vhj_invariants() {
    double worst = -1e300;
    std::string statuses;
    bool ok = true;
    for (double q : {1.2, 1.5, 2.5}) {
        ProblemParams pr;
        pr.q = q;
        pr.use_source = false;
        // Wide enough that the flow never reaches the held boundary before t = 20.
        const RadialGrid g(1, 40.0, 2000);
        SolveConfig cfg;
        cfg.t_end = 20.0;
        cfg.dt_max = 0.01;
        const auto out = run(pr, gaussian_data(g, 1.0), nullptr, cfg);
        ok = ok && out.status == SolveStatus::ReachedHorizon;
        for (std::size_t i = 1; i < out.trace.size(); ++i) {
            worst = std::max({worst, out.trace[i].sup_u - out.trace[i - 1].sup_u,
                              out.trace[i].sup_grad_u - out.trace[i - 1].sup_grad_u});
        }
        statuses += " " + to_string(out.status);
    }
    return {ok && worst <= 1e-6, fmt("largest increase %.2e (tol 1e-6); status", worst) + statuses};
}

// 6. Blow-up time stable under refinement.
Check blowup_regime() {
    std::vector<double> tstar;
    bool all_blow = true;
    for (int M : {600, 1200}) {
        ScenarioConfig cfg;
        cfg.problem.p = 2.0;
        cfg.problem.q = 2.0;
        cfg.profile = ProfileSpec(profile::Gaussian{1.0});
        cfg.M = M;
        cfg.solve.t_end = 20.0;
        const auto res = execute_scenario(cfg);
        all_blow = all_blow && res.outcome.status == SolveStatus::BlowUp;
        tstar.push_back(res.outcome.t_star_estimate);
    }
    const double gap = rel_diff(tstar[0], tstar[1]);
    return {all_blow && gap <= 0.05, fmt("t* %.5f (M=600) %.5f (M=1200), rel gap %.2e (tol 5e-2)%s", tstar[0],
                                         tstar[1], gap, all_blow ? "" : ", not both BlowUp")};
}

// 7. Kaplan monitor: threshold crossing, then blow-up, and the discrete inequality.
Check kaplan_pipeline() {
    const RadialGrid g(1, 40.0, 1000);
    const Field u0 = gaussian_data(g, 1.0);
    ProblemParams pr;
    pr.p = 4.0;
    pr.q = 1.3;

    // Plateau of the VHJ flow feeds the monitor radius.
    ProblemParams vhj = pr;
    vhj.use_source = false;
    SolveConfig vcfg;
    vcfg.t_end = 100.0;
    vcfg.dt_max = 0.05;
    vcfg.trace_stride = 50;
    const double ell = sup_norm(run(vhj, u0, nullptr, vcfg).final_field);
    const double R = kaplan_radius(pr.p, ell, std::pow(std::numbers::pi, 2) / 4.0);
    if (R >= g.radius()) return {false, fmt("monitor radius %.3f exceeds the domain", R)};

    SolveConfig cfg;
    cfg.t_end = 50.0;
    cfg.dt_max = 0.05;
    cfg.trace_stride = 10;
    cfg.kaplan_R = R;
    const auto out = run(pr, u0, nullptr, cfg);
    const double a = *out.kaplan_lambda;
    const double threshold = ode_comparison(1.0, pr.p, a, 1.0).threshold;
    double t_cross = -1.0;
    std::size_t holds = 0, total = 0;
    for (std::size_t i = 0; i < out.trace.size(); ++i) {
        const auto& cur = out.trace[i];
        if (t_cross < 0.0 && *cur.kaplan_y > threshold) t_cross = cur.t;
        if (i == 0) continue;
        const auto& prev = out.trace[i - 1];
        const double y = *prev.kaplan_y;
        const double quotient = (*cur.kaplan_y - y) / (cur.t - prev.t);
        const double lower = std::pow(y, pr.p) - a * y;
        const double tol_k = 1e-6 + 1e-2 * (std::pow(y, pr.p) + a * y);
        ++total;
        if (quotient >= lower - tol_k) ++holds;
    }
    const double frac = total ? static_cast<double>(holds) / total : 0.0;
    const bool blew = out.status == SolveStatus::BlowUp;
    return {blew && t_cross >= 0.0 && t_cross < out.t_last_finite && frac >= 0.99,
            fmt("ell %.4f R %.3f threshold %.4f crossed at t=%.4f, %s at t=%.4f, inequality at %.1f%% of %zu records",
                ell, R, threshold, t_cross, to_string(out.status).c_str(), out.t_last_finite, 100.0 * frac, total)};
}

// 8. Gaussian certificate and domination of the solver run.
Check global_certificate() {
    const auto cert = gaussian_certificate(1, 4.0, 2.0, 1.0);
    ProblemParams pr;
    pr.p = 4.0;
    pr.q = 2.0;
    const RadialGrid g(1, 12.0, 600);
    SolveConfig cfg;
    cfg.t_end = 50.0;
    cfg.dt_max = 1e-3;
    cfg.trace_stride = 10;
    const double tol = 10.0 * (g.spacing() * g.spacing() + cfg.dt_max);
    double excess = -1e300;
    const auto out = run(pr, gaussian_data(g, 0.2), nullptr, cfg, [&](const TraceRecord& rec, const Field& u) {
        const Field z = sample_supersolution(cert, rec.t, g);
        for (std::size_t i = 0; i < g.size(); ++i) excess = std::max(excess, u[i] - z[i]);
    });
    const bool ok = cert.verified && cert.residual_min >= 0.0 && cert.lattice.nt == 400 && cert.lattice.nr == 400 &&
                    out.status == SolveStatus::ReachedHorizon && excess <= tol;
    return {ok, fmt("eps %.5f k %.5f residual_min %.3e, %s, max(u-z) %.3e (tol %.3e)", cert.eps, cert.k,
                    cert.residual_min, to_string(out.status).c_str(), excess, tol)};
}

// 9. Stationary certificate and drift of the forced run.
Check stationary_certificate_check() {
    const RadialGrid g(3, 12.0, 1200);
    const auto cert = stationary_certificate(3, 4.0, 2.0, 1.0, g, 0.03);
    double h_min = 1e300;
    for (std::size_t i = 0; i < g.size(); ++i) h_min = std::min(h_min, cert.h[i]);
    ProblemParams pr;
    pr.n = 3;
    pr.p = 4.0;
    pr.q = 2.0;
    SolveConfig cfg;
    cfg.t_end = 1.0;
    cfg.dt_init = cfg.dt_max = 0.01;
    double drift = 0.0;
    const auto out = run(pr, cert.v, &cert.h, cfg, [&](const TraceRecord&, const Field& u) {
        for (std::size_t i = 0; i < g.size(); ++i) drift = std::max(drift, std::abs(u[i] - cert.v[i]));
    });
    const bool ok = std::abs(cert.k - 5.0 / 12.0) < 1e-15 && cert.margin < 0.0 && h_min > 0.0 &&
                    out.status == SolveStatus::ReachedHorizon && drift < 1e-6;
    return {ok, fmt("k %.6f margin %.4f min h %.3e, sup drift %.3e (tol 1e-6)", cert.k, cert.margin, h_min, drift)};
}

// 10. Sign-changing data with small positive mean.
Check sign_changing() {
    ScenarioConfig cfg;
    cfg.problem.p = 4.0;
    cfg.problem.q = 4.0 / 3.0;
    cfg.M = 600;
    cfg.solve.t_end = 50.0;
    cfg.solve.dt_max = 0.05;
    profile::SignedDipole dip;
    dip.a_plus = 2.0;
    dip.c_minus = 4.0;
    cfg.profile = ProfileSpec(dip);
    cfg.dipole_target_mean = 1e-3;
    const auto res = execute_scenario(cfg);
    const double mean0 = res.summary["initial_mean"].get<double>();
    const bool signed_data = sup_norm(res.initial) > 0.0 &&
                             *std::min_element(res.initial.values().begin(), res.initial.values().end()) < 0.0;
    const bool blow = res.outcome.status == SolveStatus::BlowUp &&
                      res.summary["regime"]["verdict"] == "BlowUpAll";

    // Same shape at q = 1.6, positive lobe pushed under the certificate at t = 0.
    const auto cert = gaussian_certificate(1, 4.0, 1.6, 1.0);
    const RadialGrid& g = res.initial.grid();
    const double scale = cert.eps / dip.a_plus;
    Field u0 = res.initial;
    for (auto& v : u0.values()) v *= scale;
    ProblemParams pr;
    pr.p = 4.0;
    pr.q = 1.6;
    SolveConfig scfg;
    scfg.t_end = 50.0;
    scfg.dt_max = 2e-3;
    scfg.trace_stride = 10;
    const double tol = 10.0 * (g.spacing() * g.spacing() + scfg.dt_max);
    double excess = -1e300;
    const auto out = run(pr, u0, nullptr, scfg, [&](const TraceRecord& rec, const Field& u) {
        const Field z = sample_supersolution(cert, rec.t, g);
        for (std::size_t i = 0; i < g.size(); ++i) excess = std::max(excess, u[i] - z[i]);
    });
    const auto theory = classify_mean_nonneg(pr, false);
    const bool dominated = out.status == SolveStatus::ReachedHorizon && excess <= tol;
    return {signed_data && std::abs(mean0 - 1e-3) < 1e-10 && blow && dominated &&
                theory.verdict == Verdict::Inconclusive,
            fmt("mean %.3e, q=4/3 %s at t=%.4f; q=1.6 scaled by %.4f: %s, max(u-z) %.3e (tol %.3e), theory %s", mean0,
                to_string(res.outcome.status).c_str(), res.outcome.t_last_finite, scale,
                to_string(out.status).c_str(), excess, tol, to_string(theory.verdict).c_str())};
}

std::string scan_csv(const char* threads) {
    setenv("FUJITA_THREADS", threads, 1);
    ScanOptions opts;
    opts.p_values = linspace(3.5, 10.0, 8);
    opts.q_values = linspace(1.2, 1.9, 8);
    const auto res = run_scan(opts);
    unsetenv("FUJITA_THREADS");
    std::ostringstream os;
    write_scan_csv(os, res);
    return os.str();
}

std::string serial_scan;

// 11. Check jump across q = 3/2 at p = 10.
Check discontinuity_scan() {
    serial_scan = scan_csv("1");
    std::istringstream is(serial_scan);
    std::string line;
    std::getline(is, line);
    int jumps = 0, rows = 0, hard = 0;
    std::string at14, at16;
    std::string below, above;
    double last_p = -1.0;
    while (std::getline(is, line)) {
        ++rows;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        const double p = std::stod(cells[0]), q = std::stod(cells[1]);
        const std::string& numeric = cells[3];
        if (numeric == "DominationViolated" || numeric == "CertificateFailed") ++hard;
        if (p != last_p) below.clear(), above.clear(), last_p = p;
        if (q < 1.5 + 1e-12) below = numeric;
        if (q > 1.5 + 1e-12 && above.empty()) {
            above = numeric;
            if (below == "BlowUp" && above == "CertifiedGlobal") ++jumps;
        }
        if (p == 10.0 && std::abs(q - 1.4) < 1e-9) at14 = numeric;
        if (p == 10.0 && std::abs(q - 1.6) < 1e-9) at16 = numeric;
    }
    return {rows == 64 && hard == 0 && at14 == "BlowUp" && at16 == "CertifiedGlobal" && jumps == 8,
            fmt("%d points, p=10: q=1.4 %s, q=1.6 %s; jump across q=1.5 in %d/8 rows", rows, at14.c_str(),
                at16.c_str(), jumps)};
}

// 12. Worker count does not change the scan bytes.
Check determinism() {
    if (serial_scan.empty()) serial_scan = scan_csv("1");
    const std::string parallel = scan_csv("8");
    return {parallel == serial_scan && !parallel.empty(),
            fmt("FUJITA_THREADS=1 and 8 CSVs %s (%zu bytes)", parallel == serial_scan ? "identical" : "differ",
                parallel.size())};
}

struct Criterion {
    const char* name;
    double budget_s;
    std::function<Check()> check;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"exponent fidelity", 1.0, exponent_fidelity},
        {"eigenpair oracle", 10.0, eigenpair_oracle},
        {"ODE comparison oracle", 5.0, ode_oracle},
        {"solver convergence", 120.0, heat_convergence},
        {"VHJ invariants", 60.0, vhj_invariants},
        {"blow-up regime", 120.0, blowup_regime},
        {"Kaplan pipeline", 0.0, kaplan_pipeline},
        {"global certificate", 180.0, global_certificate},
        {"stationary certificate", 0.0, stationary_certificate_check},
        {"sign-changing blow-up", 0.0, sign_changing},
        {"discontinuity scan", 300.0, discontinuity_scan},
        {"determinism", 0.0, determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        Check v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_s > 0.0 && secs > c.budget_s) {
            v.pass = false;
            v.detail += fmt("; runtime over %.0f s", c.budget_s);
        }
        if (!v.pass) ++failures;
        std::printf("%s %2zu %-24s %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", i + 1, c.name, v.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
