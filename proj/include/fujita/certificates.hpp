#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fujita/core.hpp"
#include "fujita/grid.hpp"
#include "fujita/operators.hpp"

#include <json.hpp>

namespace fujita {

/// A certificate was requested outside the parameter regime that supports it.
class RegimeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Kaplan functional and the Bernoulli comparison ODE
// ---------------------------------------------------------------------------

/// y = ∫_{B_R} u φ_R with φ_R the unit-mass eigenfunction carried by `pair`.
/// The eigenpair grid must be a prefix of u's grid (same n and spacing).
double kaplan_functional(const Field& u, const Eigenpair& pair);

struct OdeVerdict {
    bool blows_up = false;
    std::optional<double> t_star;
    double threshold = 0.0;  // a^{1/(p-1)}, a = λ R^{-2}
};

/// y' = y^p - a y with a = λ/R². Closed form through z = y^{1-p}.
OdeVerdict ode_comparison(double y0, double p, double lambda, double R);

/// 1.05 * sqrt(λ₁) * (ℓ/2)^{(1-p)/2}: a radius strictly above the Kaplan threshold for y ≥ ℓ/2.
double kaplan_radius(double p, double ell, double lambda1);

// ---------------------------------------------------------------------------
// Gaussian supersolution z = ε (t+1)^k (t+1)^{-n/2} exp(-r²/(4(t+1)))
// ---------------------------------------------------------------------------

struct LatticeSpec {
    int nt = 400;
    int nr = 400;
    double t_max = 100.0;
    double r_max = 12.0;
};

struct GaussianCertificate {
    int n = 1;
    double p = 0.0;
    double q = 0.0;
    double b = 0.0;
    double k = 0.0;
    double eps = 0.0;
    double C_grad = 0.0;
    // Upper bounds on k from the source and gradient terms.
    double k_bound_source = 0.0;
    double k_bound_gradient = 0.0;
    // min 𝒫z over the lattice, and min of 𝒫z / (ε (t+1)^{k-1} φ) (the sign-carrying bracket).
    double residual_min = 0.0;
    double bracket_min = 0.0;
    bool verified = false;
    LatticeSpec lattice;

    double z(double t, double r) const;
    /// 𝒫z = z_t - Δz - z^p - b|∇z|^q from closed-form derivatives.
    double residual(double t, double r) const;
    /// 𝒫z divided by ε (t+1)^{k-1} φ(t, r).
    double bracket(double t, double r) const;
};

/// Requires p > 1+2/n and q > 1+1/(n+1); throws RegimeError otherwise, and
/// std::runtime_error if the lattice check finds a negative residual.
GaussianCertificate gaussian_certificate(int n, double p, double q, double b,
                                         const LatticeSpec& lattice = {});

/// Minimum of 𝒫z over times × grid nodes.
double supersolution_residual(const GaussianCertificate& cert, std::span<const double> times,
                              const RadialGrid& grid);

/// z(t, ·) sampled on a grid.
Field sample_supersolution(const GaussianCertificate& cert, double t, const RadialGrid& grid);

/// C = b 2^{-q} max_{s≥0} s^q exp(-(q-1)s²/4), the maximum located by golden-section search.
double gradient_bound_constant(double q, double b);

// ---------------------------------------------------------------------------
// Stationary supersolution v = ε(1+r²)^{-k} with forcing h = -Δv - v^p - b|∇v|^q
// ---------------------------------------------------------------------------

struct StationaryCertificate {
    int n = 3;
    double p = 0.0;
    double q = 0.0;
    double b = 0.0;
    double k_low = 0.0;
    double k_high = 0.0;
    double k = 0.0;
    double eps = 0.0;
    // 2k(2(k+1)-n) + ε^{p-1} + 2^q b ε^{q-1}; negative for a valid certificate.
    double margin = 0.0;
    double h_min = 0.0;
    bool verified = false;
    Field v;
    Field h;

    double v_at(double r) const;
    double h_at(double r) const;
};

/// Requires n ≥ 3, p > n/(n-2), q > n/(n-1). k is the midpoint of the admissible window.
/// Without `eps`, ε is the largest amplitude whose positive terms use at most 75% of
/// |2k(2(k+1)-n)|.
StationaryCertificate stationary_certificate(int n, double p, double q, double b,
                                             const RadialGrid& grid,
                                             std::optional<double> eps = std::nullopt);

// ---------------------------------------------------------------------------
// Rescaled test-function exponents
// ---------------------------------------------------------------------------

struct RateExponents {
    double r = 0.0;         // p(q-1) / (q(p-1))
    double e1 = 0.0;        // nr - 1/(p-1)
    double e2 = 0.0;        // 1 + nr - rq/(q-1)
    double combined = 0.0;  // ((q-1)(np-1) - 1) / (q(p-1))
    double inhom = 0.0;     // p/(p-1) * (n(q-1) - q)/q
};

/// Throws std::logic_error if the exponent identities fail beyond 1e-12 relative.
RateExponents rate_exponents(int n, double p, double q);

namespace cutoff {
/// 1 on [0,1], 0 on [2,∞), quintic smoothstep in between (C²).
double theta(double s);
/// Radial version of theta in |z|.
double xi(double z);
/// Bump supported in (0.1, 0.9), equal to 1 on [0.3, 0.7].
double eta(double s);
}  // namespace cutoff

struct ScalingRow {
    double tau = 0.0;
    double lhs = 0.0;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    std::optional<double> fitted_exponent;  // log-log slope, when every lhs > 0
    double combined = 0.0;
};

using Trajectory = std::vector<std::pair<double, Field>>;

/// Evaluates ½∫∫(|u|^p + b|∇u|^q) θ^{p/(p-1)}(t/τ) ξ^{q/(q-1)}(x/τ^r) + ∫ u0 ξ^{q/(q-1)}(x/τ^r)
/// on a stored trajectory (first sample is u0). τ with 2τ beyond the trajectory horizon is rejected.
ScalingReport testfunction_scaling(const Trajectory& trajectory, const ProblemParams& params,
                                   std::span<const double> taus, double r);

/// Inhomogeneous variant with time cutoff η^{p/(p-1)}(t/τ):
/// ½∫∫(|u|^p + b|∇u|^q) a g + ∫∫ h a g, compared against τ^{inhom}.
ScalingReport inhomogeneous_testfunction_scaling(const Trajectory& trajectory,
                                                 const ProblemParams& params, const Field& h,
                                                 std::span<const double> taus, double r);

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

nlohmann::json to_json(const GaussianCertificate& cert);
nlohmann::json to_json(const StationaryCertificate& cert);

}  // namespace fujita
