#include "fujita/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fujita {

// ---------------------------------------------------------------------------
// Kaplan
// ---------------------------------------------------------------------------

double kaplan_functional(const Field& u, const Eigenpair& pair) {
    const auto& ug = u.grid();
    const auto& pg = pair.phi.grid();
    const bool same_spacing = std::abs(pg.spacing() - ug.spacing()) <= 1e-9 * ug.spacing();
    if (pg.dim() != ug.dim() || !same_spacing || pg.size() > ug.size()) {
        throw std::invalid_argument("kaplan_functional: eigenpair grid is not a prefix of the field grid");
    }
    Field prod(pg);
    for (std::size_t i = 0; i < pg.size(); ++i) {
        prod[i] = u[i] * pair.phi[i];
    }
    return integrate(prod);
}

OdeVerdict ode_comparison(double y0, double p, double lambda, double R) {
    if (!(y0 > 0.0) || !(p > 1.0) || !(lambda >= 0.0) || !(R > 0.0)) {
        throw std::invalid_argument("ode_comparison: need y0 > 0, p > 1, lambda >= 0, R > 0");
    }
    const double a = lambda / (R * R);
    OdeVerdict v;
    v.threshold = (a == 0.0) ? 0.0 : std::pow(a, 1.0 / (p - 1.0));
    const double y_pow = std::pow(y0, p - 1.0);
    v.blows_up = y_pow > a;
    if (!v.blows_up) {
        return v;
    }
    if (a == 0.0) {
        v.t_star = 1.0 / ((p - 1.0) * y_pow);
    } else {
        // z = y^{1-p} = 1/a + (z0 - 1/a) e^{(p-1)at} reaches 0 at t*.
        v.t_star = -std::log1p(-a / y_pow) / ((p - 1.0) * a);
    }
    return v;
}

double kaplan_radius(double p, double ell, double lambda1) {
    if (!(ell > 0.0) || !(p > 1.0) || !(lambda1 > 0.0)) {
        throw std::invalid_argument("kaplan_radius: need ell > 0, p > 1, lambda1 > 0");
    }
    return 1.05 * std::sqrt(lambda1) * std::pow(0.5 * ell, 0.5 * (1.0 - p));
}

// ---------------------------------------------------------------------------
// Gaussian supersolution
// ---------------------------------------------------------------------------

double GaussianCertificate::z(double t, double r) const {
    const double tau = t + 1.0;
    return eps * std::pow(tau, k - 0.5 * n) * std::exp(-r * r / (4.0 * tau));
}

double GaussianCertificate::residual(double t, double r) const {
    const double tau = t + 1.0;
    const double zz = z(t, r);
    const double z_t = zz * ((k - 0.5 * n) / tau + r * r / (4.0 * tau * tau));
    const double lap = zz * (r * r / (4.0 * tau * tau) - 0.5 * n / tau);
    const double grad = zz * r / (2.0 * tau);
    return z_t - lap - std::pow(zz, p) - b * std::pow(grad, q);
}

double GaussianCertificate::bracket(double t, double r) const {
    const double tau = t + 1.0;
    const double decay = -r * r / (4.0 * tau);
    // τ z^{p-1} and b τ z^{q-1} (r/2τ)^q written without forming z, so no 0/0 in the tails.
    const double source = std::pow(eps, p - 1.0) * std::pow(tau, (k - 0.5 * n) * (p - 1.0) + 1.0) *
                          std::exp((p - 1.0) * decay);
    const double gradient = b * std::pow(eps, q - 1.0) *
                            std::pow(tau, (k - 0.5 * n) * (q - 1.0) + 1.0) *
                            std::exp((q - 1.0) * decay) * std::pow(r / (2.0 * tau), q);
    return k - source - gradient;
}

double gradient_bound_constant(double q, double b) {
    if (!(q > 1.0)) {
        throw std::invalid_argument("gradient_bound_constant: q must be > 1");
    }
    auto f = [q](double s) { return std::pow(s, q) * std::exp(-(q - 1.0) * s * s / 4.0); };
    const double s_star = std::sqrt(2.0 * q / (q - 1.0));
    double lo = 0.0;
    double hi = 3.0 * s_star;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * s_star; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    return b * std::pow(2.0, -q) * f(0.5 * (lo + hi));
}

namespace {

// Largest x >= 0 with g(x) <= target, for g continuous, increasing and g(0) = 0.
template <class G>
double largest_admissible(G g, double target) {
    double lo = 0.0;
    double hi = 1.0;
    while (g(hi) <= target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return lo;
    }
    for (int it = 0; it < 400 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) <= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

}  // namespace

GaussianCertificate gaussian_certificate(int n, double p, double q, double b,
                                         const LatticeSpec& lattice) {
    ProblemParams params;
    params.n = n;
    params.p = p;
    params.q = q;
    params.b = b;
    params.validate();
    const auto ce = critical_exponents(n);
    if (p <= ce.p_fujita) {
        throw RegimeError("gaussian_certificate: hypothesis fails since p ≤ p_F = 1+2/n; "
                          "every positive solution blows up");
    }
    if (q <= ce.q_fujita) {
        throw RegimeError("gaussian_certificate: hypothesis fails since q ≤ 1+1/(n+1); "
                          "every positive solution blows up");
    }
    if (lattice.nt < 2 || lattice.nr < 2 || !(lattice.t_max > 0.0) || !(lattice.r_max > 0.0)) {
        throw std::invalid_argument("gaussian_certificate: lattice needs >= 2 points per axis");
    }

    GaussianCertificate cert;
    cert.n = n;
    cert.p = p;
    cert.q = q;
    cert.b = b;
    cert.lattice = lattice;
    cert.k_bound_source = 0.5 * n - 1.0 / (p - 1.0);
    cert.k_bound_gradient = 0.5 * n + (q - 2.0) / (2.0 * (q - 1.0));
    cert.k = 0.5 * std::min(cert.k_bound_source, cert.k_bound_gradient);
    cert.C_grad = gradient_bound_constant(q, b);
    const double C = cert.C_grad;
    cert.eps = largest_admissible(
        [&](double e) { return std::pow(e, p - 1.0) + C * std::pow(e, q - 1.0); }, cert.k);

    double res_min = std::numeric_limits<double>::infinity();
    double br_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j < lattice.nt; ++j) {
        const double t = lattice.t_max * j / (lattice.nt - 1);
        for (int i = 0; i < lattice.nr; ++i) {
            const double r = lattice.r_max * i / (lattice.nr - 1);
            res_min = std::min(res_min, cert.residual(t, r));
            br_min = std::min(br_min, cert.bracket(t, r));
        }
    }
    cert.residual_min = res_min;
    cert.bracket_min = br_min;

    // Past t_max the bracket is nondecreasing in t at fixed r/sqrt(t+1) when both
    // time exponents are nonpositive.
    const double e_source = cert.k * (p - 1.0) + 1.0 - 0.5 * n * (p - 1.0);
    const double e_grad = cert.k * (q - 1.0) + 1.0 - 0.5 * (n * (q - 1.0) + q);
    const bool tail_monotone = e_source <= 0.0 && e_grad <= 0.0;

    cert.verified = res_min >= 0.0 && br_min >= 0.0 && tail_monotone;
    if (!cert.verified) {
        throw std::runtime_error("gaussian_certificate: residual check found a negative lattice node");
    }
    return cert;
}

double supersolution_residual(const GaussianCertificate& cert, std::span<const double> times,
                              const RadialGrid& grid) {
    double m = std::numeric_limits<double>::infinity();
    for (double t : times) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            m = std::min(m, cert.residual(t, grid.node(i)));
        }
    }
    return m;
}

Field sample_supersolution(const GaussianCertificate& cert, double t, const RadialGrid& grid) {
    Field f(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        f[i] = cert.z(t, grid.node(i));
    }
    return f;
}

// ---------------------------------------------------------------------------
// Stationary supersolution
// ---------------------------------------------------------------------------

double StationaryCertificate::v_at(double r) const {
    return eps * std::pow(1.0 + r * r, -k);
}

double StationaryCertificate::h_at(double r) const {
    const double s = 1.0 + r * r;
    const double lap = 2.0 * eps * k * (-n * std::pow(s, -k - 1.0) + 2.0 * (k + 1.0) * r * r * std::pow(s, -k - 2.0));
    const double grad = 2.0 * eps * k * r * std::pow(s, -k - 1.0);
    return -lap - std::pow(v_at(r), p) - b * std::pow(grad, q);
}

StationaryCertificate stationary_certificate(int n, double p, double q, double b,
                                             const RadialGrid& grid, std::optional<double> eps) {
    ProblemParams params;
    params.n = n;
    params.p = p;
    params.q = q;
    params.b = b;
    params.validate();
    if (n < 3) {
        throw RegimeError("stationary_certificate: requires n ≥ 3 (no k-window for n ≤ 2)");
    }
    if (grid.dim() != n) {
        throw std::invalid_argument("stationary_certificate: grid dimension differs from n");
    }
    const double p_star = static_cast<double>(n) / (n - 2);
    const double q_star = static_cast<double>(n) / (n - 1);
    if (!(p > p_star)) {
        throw RegimeError("stationary_certificate: empty k-window since p ≤ n/(n-2)");
    }
    if (!(q > q_star)) {
        throw RegimeError("stationary_certificate: empty k-window since q ≤ n/(n-1)");
    }

    StationaryCertificate cert;
    cert.n = n;
    cert.p = p;
    cert.q = q;
    cert.b = b;
    cert.k_low = std::max(1.0 / (p - 1.0), (2.0 - q) / (2.0 * (q - 1.0)));
    cert.k_high = 0.5 * (n - 2);
    if (!(cert.k_low < cert.k_high)) {
        throw RegimeError("stationary_certificate: empty k-window");
    }
    cert.k = 0.5 * (cert.k_low + cert.k_high);
    const double k = cert.k;
    const double diffusion = 2.0 * k * (2.0 * (k + 1.0) - n);

    if (eps) {
        if (!(*eps > 0.0)) {
            throw std::invalid_argument("stationary_certificate: eps must be positive");
        }
        cert.eps = *eps;
    } else {
        // The gradient bound |∇v| ≤ 2εk(1+r²)^{-k-1/2} carries k^q, which exceeds 1 once k > 1.
        const double kq = std::pow(std::max(1.0, k), q);
        cert.eps = largest_admissible(
            [&](double e) {
                return std::pow(e, p - 1.0) + std::pow(2.0, q) * b * kq * std::pow(e, q - 1.0);
            },
            0.75 * std::abs(diffusion));
    }
    cert.margin = diffusion + std::pow(cert.eps, p - 1.0) + std::pow(2.0, q) * b * std::pow(cert.eps, q - 1.0);

    cert.v = Field(grid);
    cert.h = Field(grid);
    double h_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.node(i);
        cert.v[i] = cert.v_at(r);
        cert.h[i] = cert.h_at(r);
        h_min = std::min(h_min, cert.h[i]);
    }
    cert.h_min = h_min;
    cert.verified = cert.margin < 0.0 && h_min > 0.0;
    if (!eps && !cert.verified) {
        throw std::runtime_error("stationary_certificate: constructed forcing is not positive on the grid");
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Rate exponents and test functions
// ---------------------------------------------------------------------------

RateExponents rate_exponents(int n, double p, double q) {
    if (n < 1 || !(p > 1.0) || !(q > 1.0)) {
        throw std::invalid_argument("rate_exponents: need n >= 1, p > 1, q > 1");
    }
    RateExponents e;
    e.r = p * (q - 1.0) / (q * (p - 1.0));
    e.e1 = n * e.r - 1.0 / (p - 1.0);
    e.e2 = 1.0 + n * e.r - e.r * q / (q - 1.0);
    e.combined = ((q - 1.0) * (n * p - 1.0) - 1.0) / (q * (p - 1.0));
    e.inhom = (p / (p - 1.0)) * (n * (q - 1.0) - q) / q;

    // Cancellation error scales with the size of the terms being subtracted.
    const double scale = 1.0 + n * e.r + 1.0 / (p - 1.0) + e.r * q / (q - 1.0);
    const double tol = 1e-12 * scale;
    const double inhom_a = e.e1 - 1.0;
    const double inhom_b = n * e.r - e.r * q / (q - 1.0);
    if (std::abs(e.e1 - e.e2) > tol || std::abs(e.e1 - e.combined) > tol ||
        std::abs(inhom_a - inhom_b) > tol || std::abs(inhom_a - e.inhom) > tol) {
        throw std::logic_error("rate_exponents: exponent identities violated");
    }
    return e;
}

namespace cutoff {

namespace {
double smoothstep5(double x) {
    x = std::clamp(x, 0.0, 1.0);
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}
}  // namespace

double theta(double s) {
    if (s <= 1.0) return 1.0;
    if (s >= 2.0) return 0.0;
    return 1.0 - smoothstep5(s - 1.0);
}

double xi(double z) { return theta(std::abs(z)); }

double eta(double s) {
    if (s <= 0.1 || s >= 0.9) return 0.0;
    if (s < 0.3) return smoothstep5((s - 0.1) / 0.2);
    if (s <= 0.7) return 1.0;
    return 1.0 - smoothstep5((s - 0.7) / 0.2);
}

}  // namespace cutoff

namespace {

Field space_weight(const RadialGrid& grid, double tau, double r_exp, double q) {
    Field g(grid);
    const double scale = std::pow(tau, r_exp);
    const double power = q / (q - 1.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        g[i] = std::pow(cutoff::xi(grid.node(i) / scale), power);
    }
    return g;
}

// ∫ (|u|^p + b|∇u|^q) g dx
double nonlinear_mass(const Field& u, const ProblemParams& params, const Field& g) {
    ProblemParams reaction = params;
    reaction.forcing = {};
    Field integrand = rhs(u, reaction);
    for (std::size_t i = 0; i < integrand.size(); ++i) integrand[i] *= g[i];
    return integrate(integrand);
}

void check_trajectory(const Trajectory& trajectory) {
    if (trajectory.empty()) {
        throw std::invalid_argument("testfunction_scaling: empty trajectory");
    }
    for (std::size_t j = 1; j < trajectory.size(); ++j) {
        if (!(trajectory[j].first > trajectory[j - 1].first)) {
            throw std::invalid_argument("testfunction_scaling: trajectory times must increase");
        }
        if (!(trajectory[j].second.grid() == trajectory[0].second.grid())) {
            throw std::invalid_argument("testfunction_scaling: trajectory grids differ");
        }
    }
}

// Trapezoid in time of weight(t) * F(t) over the stored samples.
template <class W>
double time_integral(const Trajectory& trajectory, const ProblemParams& params, const Field& g,
                     W weight) {
    double total = 0.0;
    double prev_val = 0.0;
    for (std::size_t j = 0; j < trajectory.size(); ++j) {
        const double w = weight(trajectory[j].first);
        const double val = (w == 0.0) ? 0.0 : w * nonlinear_mass(trajectory[j].second, params, g);
        if (j > 0) {
            total += 0.5 * (trajectory[j].first - trajectory[j - 1].first) * (val + prev_val);
        }
        prev_val = val;
    }
    return total;
}

std::optional<double> loglog_slope(const std::vector<ScalingRow>& rows) {
    if (rows.size() < 2) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& row : rows) {
        if (!(row.lhs > 0.0)) return std::nullopt;
        const double x = std::log(row.tau);
        const double y = std::log(row.lhs);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(rows.size());
    const double d = m * sxx - sx * sx;
    if (d == 0.0) return std::nullopt;
    return (m * sxy - sx * sy) / d;
}

}  // namespace

ScalingReport testfunction_scaling(const Trajectory& trajectory, const ProblemParams& params,
                                   std::span<const double> taus, double r) {
    check_trajectory(trajectory);
    if (!(params.p > 1.0) || !(params.q > 1.0)) {
        throw std::invalid_argument("testfunction_scaling: need p > 1 and q > 1");
    }
    const double horizon = trajectory.back().first;
    const Field& u0 = trajectory.front().second;
    const double time_power = params.p / (params.p - 1.0);

    ScalingReport report;
    report.combined = rate_exponents(params.n, params.p, params.q).combined;
    for (double tau : taus) {
        if (!(tau > 0.0) || 2.0 * tau > horizon * (1.0 + 1e-12)) {
            throw std::invalid_argument("testfunction_scaling: tau exceeds trajectory horizon");
        }
        const Field g = space_weight(u0.grid(), tau, r, params.q);
        const double bulk = time_integral(trajectory, params, g, [&](double t) {
            return std::pow(cutoff::theta(t / tau), time_power);
        });
        const double initial = integrate(multiply(u0, g));
        report.rows.push_back({tau, 0.5 * bulk + initial});
    }
    report.fitted_exponent = loglog_slope(report.rows);
    return report;
}

ScalingReport inhomogeneous_testfunction_scaling(const Trajectory& trajectory,
                                                 const ProblemParams& params, const Field& h,
                                                 std::span<const double> taus, double r) {
    check_trajectory(trajectory);
    if (!(params.p > 1.0) || !(params.q > 1.0)) {
        throw std::invalid_argument("inhomogeneous_testfunction_scaling: need p > 1 and q > 1");
    }
    if (!(h.grid() == trajectory.front().second.grid())) {
        throw std::invalid_argument("inhomogeneous_testfunction_scaling: forcing grid differs");
    }
    const double horizon = trajectory.back().first;
    const double time_power = params.p / (params.p - 1.0);

    ScalingReport report;
    report.combined = rate_exponents(params.n, params.p, params.q).inhom;
    for (double tau : taus) {
        if (!(tau > 0.0) || tau > horizon * (1.0 + 1e-12)) {
            throw std::invalid_argument("inhomogeneous_testfunction_scaling: tau exceeds trajectory horizon");
        }
        const Field g = space_weight(h.grid(), tau, r, params.q);
        auto a = [&](double t) { return std::pow(cutoff::eta(t / tau), time_power); };
        const double bulk = time_integral(trajectory, params, g, a);
        // ∫_0^τ a(t) dt
        double a_mass = 0.0;
        constexpr int kSteps = 4000;
        for (int j = 0; j <= kSteps; ++j) {
            const double s = static_cast<double>(j) / kSteps;
            a_mass += ((j == 0 || j == kSteps) ? 0.5 : 1.0) * std::pow(cutoff::eta(s), time_power);
        }
        a_mass *= tau / kSteps;
        const double forcing_term = a_mass * integrate(multiply(h, g));
        report.rows.push_back({tau, 0.5 * bulk + forcing_term});
    }
    report.fitted_exponent = loglog_slope(report.rows);
    return report;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

nlohmann::json to_json(const GaussianCertificate& cert) {
    return nlohmann::json{
        {"type", "gaussian"},
        {"n", cert.n},
        {"p", cert.p},
        {"q", cert.q},
        {"b", cert.b},
        {"k", cert.k},
        {"eps", cert.eps},
        {"C_grad", cert.C_grad},
        {"k_bound_source", cert.k_bound_source},
        {"k_bound_gradient", cert.k_bound_gradient},
        {"residual_min", cert.residual_min},
        {"bracket_min", cert.bracket_min},
        {"verified", cert.verified},
        {"lattice",
         {{"nt", cert.lattice.nt},
          {"nr", cert.lattice.nr},
          {"t_max", cert.lattice.t_max},
          {"r_max", cert.lattice.r_max}}},
    };
}

nlohmann::json to_json(const StationaryCertificate& cert) {
    const auto& g = cert.v.grid();
    return nlohmann::json{
        {"type", "stationary"},
        {"n", cert.n},
        {"p", cert.p},
        {"q", cert.q},
        {"b", cert.b},
        {"k", cert.k},
        {"k_window", {cert.k_low, cert.k_high}},
        {"eps", cert.eps},
        {"margin", cert.margin},
        {"h_min", cert.h_min},
        {"verified", cert.verified},
        {"lattice", {{"L", g.radius()}, {"M", g.interior()}}},
    };
}

}  // namespace fujita
