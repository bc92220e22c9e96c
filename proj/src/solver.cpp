#include "fujita/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "fujita/certificates.hpp"
#include "fujita/operators.hpp"

namespace fujita {

void SolveConfig::validate() const {
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
        throw std::invalid_argument("SolveConfig: t_end must be finite and >= 0");
    }
    if (!(dt_min > 0.0) || !(dt_min <= dt_init) || !(dt_init <= dt_max)) {
        throw std::invalid_argument("SolveConfig: need 0 < dt_min <= dt_init <= dt_max");
    }
    if (!(blowup_threshold > 1.0)) {
        throw std::invalid_argument("SolveConfig: blowup_threshold must be > 1");
    }
    if (!(growth_cap > 0.0)) {
        throw std::invalid_argument("SolveConfig: growth_cap must be > 0");
    }
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("SolveConfig: theta must lie in [0, 1]");
    }
    if (trace_stride < 1) {
        throw std::invalid_argument("SolveConfig: trace_stride must be >= 1");
    }
    if (kaplan_R && !(*kaplan_R > 0.0)) {
        throw std::invalid_argument("SolveConfig: kaplan_R must be positive");
    }
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::ReachedHorizon: return "ReachedHorizon";
        case SolveStatus::BlowUp: return "BlowUp";
        case SolveStatus::StepFloorStall: return "StepFloorStall";
    }
    return "ReachedHorizon";
}

namespace {

// Caches the discrete Laplacian of one grid; assembles I - θ dt Δ_h per step.
class ImexStepper {
public:
    ImexStepper(const RadialGrid& grid, const ProblemParams& params, const Field* forcing,
                double theta)
        : grid_(grid), lap_(laplacian_matrix(grid)), params_(params), forcing_(forcing),
          theta_(theta) {}

    std::optional<Field> advance(const Field& u, double dt) const {
        const std::size_t rows = lap_.size();
        const std::size_t last = grid_.boundary_index();
        const Field reaction = rhs(u, params_, forcing_);

        std::vector<double> b(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            double explicit_part = u[i] + dt * reaction[i];
            if (theta_ < 1.0) {
                double lap = lap_.diag[i] * u[i] + lap_.upper[i] * u[i + 1];
                if (i > 0) lap += lap_.lower[i] * u[i - 1];
                explicit_part += dt * (1.0 - theta_) * lap;
            }
            b[i] = explicit_part;
        }
        // Boundary value enters row M through the coupling coefficient.
        b[rows - 1] += theta_ * dt * lap_.upper[rows - 1] * u[last];

        Tridiagonal A(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            A.lower[i] = -theta_ * dt * lap_.lower[i];
            A.diag[i] = 1.0 - theta_ * dt * lap_.diag[i];
            A.upper[i] = (i + 1 < rows) ? -theta_ * dt * lap_.upper[i] : 0.0;
        }
        if (!A.solve(b)) {
            return std::nullopt;
        }
        Field out(grid_);
        for (std::size_t i = 0; i < rows; ++i) out[i] = b[i];
        out[last] = u[last];
        if (!out.all_finite()) {
            return std::nullopt;
        }
        return out;
    }

private:
    RadialGrid grid_;
    Tridiagonal lap_;
    const ProblemParams& params_;
    const Field* forcing_;
    double theta_;
};

constexpr double kMaxFitResidual = 0.1;
constexpr double kCollapseFactor = 1e3;

// sup_u nondecreasing over the last eight records.
bool rising_tail(const std::vector<TraceRecord>& trace) {
    constexpr std::size_t kWindow = 8;
    if (trace.size() < kWindow) return false;
    for (std::size_t i = trace.size() - kWindow + 1; i < trace.size(); ++i) {
        if (trace[i].sup_u < trace[i - 1].sup_u) return false;
    }
    return true;
}

double max_abs(const Field& f) { return sup_norm(f); }

double relative_change(const Field& next, const Field& prev) {
    double diff = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
        diff = std::max(diff, std::abs(next[i] - prev[i]));
    }
    if (diff == 0.0) return 0.0;
    return diff / std::max(max_abs(prev), 1e-300);
}

}  // namespace

std::optional<Field> step(const Field& u, double dt, const ProblemParams& params,
                          const Field* forcing, double theta) {
    if (!u.all_finite()) {
        throw std::invalid_argument("step: input field has non-finite values");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("step: dt must be positive");
    }
    return ImexStepper(u.grid(), params, forcing, theta).advance(u, dt);
}

SolveOutcome run(const ProblemParams& params, const Field& u0, const Field* forcing,
                 const SolveConfig& config, const RecordObserver& observer) {
    params.validate();
    config.validate();
    if (!u0.all_finite()) {
        throw std::invalid_argument("run: initial field has non-finite values");
    }
    if (forcing != nullptr && !(forcing->grid() == u0.grid())) {
        throw std::invalid_argument("run: forcing and initial data live on different grids");
    }

    const RadialGrid& grid = u0.grid();
    const ImexStepper stepper(grid, params, forcing, config.theta);

    SolveOutcome out;
    std::optional<Eigenpair> kaplan;
    if (config.kaplan_R) {
        kaplan = principal_eigenpair_on(grid, *config.kaplan_R);
        out.kaplan_lambda = kaplan->lambda;
        out.kaplan_radius = kaplan->R;
    }

    Field u = u0;
    double t = 0.0;
    double dt = config.dt_init;
    double last_dt = 0.0;
    // Halvings since the step size was last increased.
    int halving_streak = 0;

    auto record = [&](const Field& state) {
        TraceRecord rec;
        rec.t = t;
        rec.dt = last_dt;
        rec.sup_u = *std::max_element(state.values().begin(), state.values().end());
        rec.inf_u = *std::min_element(state.values().begin(), state.values().end());
        rec.l1_u = l1_norm(state);
        rec.mean_u = mean(state);
        rec.sup_grad_u = sup_norm(gradient_magnitude(state));
        if (kaplan) {
            rec.kaplan_y = kaplan_functional(state, *kaplan);
        }
        out.trace.push_back(rec);
        if (observer) {
            observer(rec, state);
        }
    };

    auto finish_blowup = [&]() {
        out.status = SolveStatus::BlowUp;
        out.t_last_finite = t;
        const auto fit = detect_blowup(out.trace, params.p);
        out.t_star_estimate = (fit && fit->t_star >= t) ? fit->t_star : t;
    };

    record(u);
    long since_record = 0;
    // Largest accepted step and the sup norm when it was last taken.
    double peak_dt = 0.0;
    double sup_at_peak_dt = max_abs(u);
    const double dt_floor = config.dt_min * (1.0 + 1e-12);

    while (t < config.t_end) {
        const double remaining = config.t_end - t;
        const double dt_try = std::min(dt, remaining);
        auto next = stepper.advance(u, dt_try);
        const double growth = next ? relative_change(*next, u) : INFINITY;
        const bool clipped = dt_try < dt;

        if (!next || growth > config.growth_cap) {
            if (dt_try <= dt_floor) {
                if (since_record != 0) record(u);
                // At the floor: collapse with super-linear growth means a clean power-law fit,
                // or a relative growth rate (∝ 1/dt under the cap) up a thousandfold while sup
                // at least doubled and kept rising.
                const auto fit = detect_blowup(out.trace, params.p);
                const bool fitted = fit && fit->fit_quality <= kMaxFitResidual && fit->t_star >= t;
                const bool collapsed = peak_dt >= kCollapseFactor * dt_try &&
                                       max_abs(u) >= 2.0 * sup_at_peak_dt && rising_tail(out.trace);
                const bool superlinear = halving_streak >= 3 && (fitted || collapsed);
                if (max_abs(u) >= config.blowup_threshold || superlinear) {
                    finish_blowup();
                } else {
                    out.status = SolveStatus::StepFloorStall;
                    out.t_stall = t;
                }
                out.final_field = u;
                return out;
            }
            dt = std::max(0.5 * dt_try, config.dt_min);
            ++halving_streak;
            ++out.rejections;
            continue;
        }

        u = std::move(*next);
        if (dt_try >= peak_dt) {
            peak_dt = dt_try;
            sup_at_peak_dt = max_abs(u);
        }
        t = clipped ? config.t_end : t + dt_try;
        last_dt = dt_try;
        ++out.steps;
        ++since_record;

        const bool over = max_abs(u) >= config.blowup_threshold;
        // While dt is being cut every step is recorded, so a collapse leaves enough points to fit.
        const bool collapsing = halving_streak > 0 && dt < config.dt_init;
        if (since_record >= config.trace_stride || over || collapsing || t >= config.t_end) {
            record(u);
            since_record = 0;
        }
        if (over && halving_streak >= 3) {
            finish_blowup();
            out.final_field = u;
            return out;
        }
        if (!clipped && growth < 0.25 * config.growth_cap && dt < config.dt_max) {
            dt = std::min(1.2 * dt, config.dt_max);
            halving_streak = 0;
        }
    }

    out.status = SolveStatus::ReachedHorizon;
    out.final_field = u;
    return out;
}

std::optional<BlowupFit> detect_blowup(const std::vector<TraceRecord>& trace, double p) {
    constexpr std::size_t kWindow = 8;
    if (trace.size() < kWindow || !(p > 1.0)) {
        return std::nullopt;
    }
    const std::size_t first = trace.size() - kWindow;
    for (std::size_t i = first + 1; i < trace.size(); ++i) {
        if (!(trace[i].sup_u > trace[i - 1].sup_u) || !(trace[i].t > trace[i - 1].t)) {
            return std::nullopt;
        }
    }
    if (!(trace.back().sup_u > 0.0) || !(trace[first].sup_u > 0.0) ||
        trace.back().sup_u < 2.0 * trace[first].sup_u) {
        return std::nullopt;
    }

    // sup^{1-p} = C^{1-p} (T - t) is linear in t.
    double st = 0.0, ss = 0.0, stt = 0.0, sts = 0.0;
    const double m = static_cast<double>(kWindow);
    std::vector<double> ts, ys;
    for (std::size_t i = first; i < trace.size(); ++i) {
        const double tt = trace[i].t;
        const double y = std::pow(trace[i].sup_u, 1.0 - p);
        ts.push_back(tt);
        ys.push_back(y);
        st += tt;
        ss += y;
        stt += tt * tt;
        sts += tt * y;
    }
    const double denom = m * stt - st * st;
    if (denom == 0.0) {
        return std::nullopt;
    }
    const double slope = (m * sts - st * ss) / denom;
    const double intercept = (ss - slope * st) / m;
    if (!(slope < 0.0)) {
        return std::nullopt;
    }
    double rss = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double r = ys[i] - (intercept + slope * ts[i]);
        rss += r * r;
        scale = std::max(scale, std::abs(ys[i]));
    }
    BlowupFit fit;
    fit.t_star = -intercept / slope;
    fit.fit_quality = std::sqrt(rss / m) / scale;
    return fit;
}

Field heat_reference(double t, const RadialGrid& grid) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("heat_reference: t must be >= 0");
    }
    Field f(grid);
    const double s = t + 1.0;
    const double amp = std::pow(s, -0.5 * grid.dim());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.node(i);
        f[i] = amp * std::exp(-r * r / (4.0 * s));
    }
    return f;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace) {
    os << "t,dt,sup_u,inf_u,l1_u,mean_u,sup_grad_u,kaplan_y\n";
    char buf[320];
    for (const auto& r : trace) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,", r.t, r.dt,
                      r.sup_u, r.inf_u, r.l1_u, r.mean_u, r.sup_grad_u);
        os << buf;
        if (r.kaplan_y) {
            std::snprintf(buf, sizeof buf, "%.17g", *r.kaplan_y);
            os << buf;
        }
        os << '\n';
    }
}

}  // namespace fujita
