#include "fujita/core.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fujita {

void ProblemParams::validate() const {
    if (n < 1) {
        throw std::invalid_argument("ProblemParams: n must be >= 1");
    }
    if (!std::isfinite(p) || !(p > 1.0)) {
        throw std::invalid_argument("ProblemParams: p must be > 1");
    }
    if (!std::isfinite(q) || !(q >= 1.0)) {
        throw std::invalid_argument("ProblemParams: q must be >= 1");
    }
    if (!std::isfinite(b) || b < 0.0) {
        throw std::invalid_argument("ProblemParams: b must be >= 0");
    }
}

double CriticalExponents::q_one_of_p(double p) const {
    return 1.0 + 1.0 / (n * p - 1.0);
}

CriticalExponents critical_exponents(int n) {
    if (n < 1) {
        throw std::invalid_argument("critical_exponents: n must be >= 1");
    }
    CriticalExponents ce;
    ce.n = n;
    ce.p_fujita = 1.0 + 2.0 / n;
    ce.q_fujita = 1.0 + 1.0 / (n + 1);
    if (n == 2) {
        ce.p_star = std::numeric_limits<double>::infinity();
    } else if (n >= 3) {
        ce.p_star = static_cast<double>(n) / (n - 2);
    }
    if (n >= 2) {
        ce.q_star = static_cast<double>(n) / (n - 1);
    }
    return ce;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::BlowUpAll: return "BlowUpAll";
        case Verdict::GlobalForSmallData: return "GlobalForSmallData";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

namespace {

void require_positive_b(const ProblemParams& params, const char* who) {
    params.validate();
    if (!(params.b > 0.0)) {
        throw std::invalid_argument(std::string(who) + ": b must be > 0 for a regime query");
    }
}

}  // namespace

RegimeVerdict classify_positive(const ProblemParams& params) {
    require_positive_b(params, "classify_positive");
    const auto ce = critical_exponents(params.n);
    if (params.p <= ce.p_fujita) {
        return {Verdict::BlowUpAll, "p <= p_F = 1+2/n", "positive data, blow-up part (i)"};
    }
    if (params.q <= ce.q_fujita) {
        return {Verdict::BlowUpAll, "q <= 1+1/(n+1)", "positive data, blow-up part (i)"};
    }
    return {Verdict::GlobalForSmallData, "p > 1+2/n and q > 1+1/(n+1)",
            "positive data, small-data global part (ii)"};
}

RegimeVerdict classify_mean_nonneg(const ProblemParams& params, bool data_nonnegative) {
    require_positive_b(params, "classify_mean_nonneg");
    if (!(params.q > 1.0)) {
        throw std::invalid_argument("classify_mean_nonneg: q must be > 1");
    }
    const auto ce = critical_exponents(params.n);
    const double n = params.n;
    if (params.p <= ce.p_fujita) {
        return {Verdict::BlowUpAll, "p <= p_F = 1+2/n", "nonnegative mean, sign-changing data"};
    }
    if ((params.q - 1.0) * (n * params.p - 1.0) <= 1.0) {
        return {Verdict::BlowUpAll, "(q-1)(np-1) <= 1", "nonnegative mean, sign-changing data"};
    }
    if (data_nonnegative && params.q > ce.q_fujita) {
        return {Verdict::GlobalForSmallData,
                "p > 1+2/n and q > 1+1/(n+1) (valid for nonnegative data only)",
                "positive data, small-data global part (ii)"};
    }
    if (params.q <= ce.q_fujita) {
        return {Verdict::Inconclusive,
                "open question: q in (1+1/(np-1), 1+1/(n+1)] with sign-changing data",
                "nonnegative mean, sign-changing data"};
    }
    return {Verdict::Inconclusive,
            "no result for sign-changing data with p > 1+2/n and (q-1)(np-1) > 1",
            "nonnegative mean, sign-changing data"};
}

RegimeVerdict classify_inhomogeneous(const ProblemParams& params) {
    require_positive_b(params, "classify_inhomogeneous");
    if (params.n < 2) {
        throw std::invalid_argument("classify_inhomogeneous: n must be >= 2");
    }
    const auto ce = critical_exponents(params.n);
    const double p_star = *ce.p_star;
    const double q_star = *ce.q_star;
    const std::string tag_blow = "inhomogeneous, positive forcing mass, blow-up part (i)";
    if (params.p < p_star) {
        return {Verdict::BlowUpAll, "p < n/(n-2)", tag_blow};
    }
    if (params.q < q_star) {
        return {Verdict::BlowUpAll, "q < n/(n-1)", tag_blow};
    }
    if (params.n >= 3 && params.p > p_star && params.q > q_star) {
        return {Verdict::GlobalForSmallData, "n >= 3, p > n/(n-2) and q > n/(n-1)",
                "inhomogeneous, constructed forcing, global part (ii)"};
    }
    return {Verdict::Inconclusive, "boundary p = n/(n-2) or q = n/(n-1) not covered",
            "inhomogeneous"};
}

}  // namespace fujita
