#pragma once

#include <optional>
#include <string>

namespace fujita {

/// Forcing term h(x) attached to a problem instance.
struct ForcingSpec {
    enum class Kind { None, ConstructedStationary, Gaussian };
    Kind kind = Kind::None;
    // Gaussian: h = amplitude * exp(-r^2/4).
    double amplitude = 0.0;
    // ConstructedStationary: optional amplitude override for the stationary profile.
    std::optional<double> eps;
};

/// Full instance of u_t - Δu = use_source·|u|^p + use_gradient·b·|∇u|^q (+ h).
struct ProblemParams {
    int n = 1;
    double p = 2.0;
    double q = 2.0;
    double b = 1.0;
    bool use_source = true;
    bool use_gradient = true;
    ForcingSpec forcing;

    /// Throws std::invalid_argument unless n >= 1, p > 1, q >= 1, b >= 0 (all finite).
    void validate() const;
};

/// Critical exponents for dimension n. p_star is +inf for n = 2 and empty for n = 1;
/// q_star is empty for n = 1.
struct CriticalExponents {
    int n = 1;
    double p_fujita = 0.0;
    double q_fujita = 0.0;
    std::optional<double> p_star;
    std::optional<double> q_star;

    /// 1 + 1/(np - 1): the sign-changing gradient threshold for a given p.
    double q_one_of_p(double p) const;
};

CriticalExponents critical_exponents(int n);

enum class Verdict { BlowUpAll, GlobalForSmallData, Inconclusive };

struct RegimeVerdict {
    Verdict verdict = Verdict::Inconclusive;
    std::string triggered_condition;
    std::string theorem_tag;
};

std::string to_string(Verdict v);

/// Positive data. Closed conditions: p <= 1+2/n or q <= 1+1/(n+1) blow up.
RegimeVerdict classify_positive(const ProblemParams& params);

/// Data with nonnegative mean (possibly sign-changing). `data_nonnegative` lets the
/// caller assert u0 >= 0, which enables the small-data global branch.
RegimeVerdict classify_mean_nonneg(const ProblemParams& params, bool data_nonnegative = false);

/// Inhomogeneous problem with forcing of positive mass. Strict conditions
/// p < n/(n-2) or q < n/(n-1) blow up; requires n >= 2.
RegimeVerdict classify_inhomogeneous(const ProblemParams& params);

}  // namespace fujita
