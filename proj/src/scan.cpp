#include "fujita/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "fujita/certificates.hpp"
#include "fujita/grid.hpp"
#include "fujita/solver.hpp"

namespace fujita {

std::string to_string(NumericVerdict v) {
    switch (v) {
        case NumericVerdict::BlowUp: return "BlowUp";
        case NumericVerdict::CertifiedGlobal: return "CertifiedGlobal";
        case NumericVerdict::ReachedHorizon: return "ReachedHorizon";
        case NumericVerdict::Unresolved: return "Unresolved";
        case NumericVerdict::CertificateFailed: return "CertificateFailed";
        case NumericVerdict::DominationViolated: return "DominationViolated";
    }
    return "Unresolved";
}

bool is_hard_failure(NumericVerdict v) {
    return v == NumericVerdict::CertificateFailed || v == NumericVerdict::DominationViolated;
}

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 0) {
        throw std::invalid_argument("linspace: count must be >= 0");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    }
    return out;
}

namespace {

void confirm_blowup(const ScanOptions& opts, const ProblemParams& params, ScanPoint& pt) {
    const RadialGrid grid(opts.n, opts.L, opts.M);
    Field u0 = sample_profile(ProfileSpec(profile::Gaussian{opts.amplitude}), grid);
    u0.zero_boundary();
    SolveConfig cfg;
    cfg.t_end = opts.budget;
    cfg.dt_min = opts.dt_min;
    cfg.dt_init = 1e-3;
    cfg.dt_max = 0.05;
    cfg.trace_stride = 10;
    const SolveOutcome out = run(params, u0, nullptr, cfg);
    switch (out.status) {
        case SolveStatus::BlowUp:
            pt.numeric = NumericVerdict::BlowUp;
            pt.t_star = out.t_star_estimate;
            break;
        case SolveStatus::ReachedHorizon:
            pt.numeric = NumericVerdict::ReachedHorizon;
            pt.note = "blow-up predicted but not observed within the budget";
            break;
        case SolveStatus::StepFloorStall:
            pt.numeric = NumericVerdict::Unresolved;
            pt.note = "step size reached dt_min below the blow-up threshold";
            break;
    }
}

void certify_and_dominate(const ScanOptions& opts, const ProblemParams& params, ScanPoint& pt) {
    GaussianCertificate cert;
    try {
        cert = gaussian_certificate(opts.n, pt.p, pt.q, opts.b);
    } catch (const std::runtime_error& e) {
        pt.numeric = NumericVerdict::CertificateFailed;
        pt.note = e.what();
        return;
    }
    pt.cert_eps = cert.eps;
    pt.cert_k = cert.k;
    pt.cert_residual_min = cert.residual_min;

    const RadialGrid grid(opts.n, opts.L, opts.M);
    Field u0 = sample_supersolution(cert, 0.0, grid);
    u0.zero_boundary();
    SolveConfig cfg;
    cfg.t_end = opts.budget;
    cfg.dt_min = opts.dt_min;
    cfg.dt_init = 1e-3;
    cfg.dt_max = 2e-3;
    cfg.trace_stride = 10;
    const double h = grid.spacing();
    const double tol = 10.0 * (h * h + cfg.dt_max);

    double excess = -INFINITY;
    const SolveOutcome out = run(params, u0, nullptr, cfg, [&](const TraceRecord& rec, const Field& u) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            excess = std::max(excess, u[i] - cert.z(rec.t, grid.node(i)));
        }
    });
    pt.max_excess = excess;

    if (out.status == SolveStatus::BlowUp || excess > tol) {
        pt.numeric = NumericVerdict::DominationViolated;
        pt.note = "solution left the region below the certified supersolution";
    } else if (out.status == SolveStatus::StepFloorStall) {
        pt.numeric = NumericVerdict::Unresolved;
        pt.note = "step size reached dt_min";
    } else {
        pt.numeric = NumericVerdict::CertifiedGlobal;
    }
}

}  // namespace

ScanPoint evaluate_point(const ScanOptions& opts, double p, double q) {
    ProblemParams params;
    params.n = opts.n;
    params.p = p;
    params.q = q;
    params.b = opts.b;
    params.validate();

    ScanPoint pt;
    pt.p = p;
    pt.q = q;
    pt.theory = classify_positive(params);
    switch (pt.theory.verdict) {
        case Verdict::BlowUpAll:
            confirm_blowup(opts, params, pt);
            break;
        case Verdict::GlobalForSmallData:
            certify_and_dominate(opts, params, pt);
            break;
        case Verdict::Inconclusive:
            pt.numeric = NumericVerdict::Unresolved;
            pt.note = "no numerical check for an inconclusive regime";
            break;
    }
    return pt;
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FUJITA_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ScanResult run_scan(const ScanOptions& opts) {
    if (opts.n < 1) throw std::invalid_argument("run_scan: n must be >= 1");
    if (!(opts.b > 0.0)) throw std::invalid_argument("run_scan: b must be positive");
    if (!(opts.budget > 0.0)) throw std::invalid_argument("run_scan: budget must be positive");
    if (!(opts.amplitude > 0.0)) throw std::invalid_argument("run_scan: amplitude must be positive");

    std::vector<double> ps = opts.p_values;
    std::vector<double> qs = opts.q_values;
    std::sort(ps.begin(), ps.end());
    std::sort(qs.begin(), qs.end());
    for (double p : ps) {
        if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("run_scan: every p must be > 1");
    }
    for (double q : qs) {
        if (!(q > 1.0) || !std::isfinite(q)) throw std::invalid_argument("run_scan: every q must be > 1");
    }

    ScanResult result;
    result.options = opts;
    result.options.p_values = ps;
    result.options.q_values = qs;
    result.points.resize(ps.size() * qs.size());
    if (result.points.empty()) return result;

    const std::size_t total = result.points.size();
    const unsigned workers =
        std::min<unsigned>(resolve_threads(opts.threads), static_cast<unsigned>(total));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);

    auto work = [&](unsigned w) {
        try {
            for (std::size_t i = next++; i < total; i = next++) {
                result.points[i] = evaluate_point(opts, ps[i / qs.size()], qs[i % qs.size()]);
            }
        } catch (...) {
            errors[w] = std::current_exception();
            next = total;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    result.options.threads = 0;
    return result;
}

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string opt_num(const std::optional<double>& x) { return x ? num(*x) : std::string(); }

nlohmann::json opt_json(const std::optional<double>& x) {
    return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

}  // namespace

void write_scan_csv(std::ostream& os, const ScanResult& result) {
    os << "p,q,verdict_theory,verdict_numeric,t_star,cert_eps,cert_k,cert_residual_min,max_excess\n";
    for (const auto& pt : result.points) {
        os << num(pt.p) << ',' << num(pt.q) << ',' << to_string(pt.theory.verdict) << ','
           << to_string(pt.numeric) << ',' << opt_num(pt.t_star) << ',' << opt_num(pt.cert_eps)
           << ',' << opt_num(pt.cert_k) << ',' << opt_num(pt.cert_residual_min) << ','
           << opt_num(pt.max_excess) << '\n';
    }
}

nlohmann::json to_json(const ScanResult& result) {
    const auto& o = result.options;
    nlohmann::json j;
    j["schema"] = 1;
    j["n"] = o.n;
    j["b"] = o.b;
    j["amplitude"] = o.amplitude;
    j["budget"] = o.budget;
    j["dt_min"] = o.dt_min;
    j["grid"] = {{"L", o.L}, {"M", o.M}};
    j["p_values"] = o.p_values;
    j["q_values"] = o.q_values;
    j["points"] = nlohmann::json::array();
    for (const auto& pt : result.points) {
        nlohmann::json e;
        e["p"] = pt.p;
        e["q"] = pt.q;
        e["verdict_theory"] = to_string(pt.theory.verdict);
        e["condition"] = pt.theory.triggered_condition;
        e["verdict_numeric"] = to_string(pt.numeric);
        e["t_star"] = opt_json(pt.t_star);
        if (pt.cert_eps) {
            e["certificate"] = {{"eps", *pt.cert_eps},
                                {"k", opt_json(pt.cert_k)},
                                {"residual_min", opt_json(pt.cert_residual_min)}};
        } else {
            e["certificate"] = nullptr;
        }
        e["max_excess"] = opt_json(pt.max_excess);
        e["note"] = pt.note;
        j["points"].push_back(std::move(e));
    }
    return j;
}

}  // namespace fujita
