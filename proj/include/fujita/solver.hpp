#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fujita/core.hpp"
#include "fujita/grid.hpp"

namespace fujita {

struct SolveConfig {
    double t_end = 1.0;
    double dt_init = 1e-3;
    double dt_min = 1e-9;
    double dt_max = 1e-2;
    double blowup_threshold = 1e8;
    // Max relative change ||u_new - u||_∞ / ||u||_∞ accepted in one step.
    double growth_cap = 0.1;
    // Implicitness of the diffusion: 1 = backward Euler, 0.5 = Crank-Nicolson.
    double theta = 1.0;
    int trace_stride = 1;
    std::optional<double> kaplan_R;

    void validate() const;
};

struct TraceRecord {
    double t = 0.0;
    double dt = 0.0;
    double sup_u = 0.0;
    double inf_u = 0.0;
    double l1_u = 0.0;
    double mean_u = 0.0;
    double sup_grad_u = 0.0;
    std::optional<double> kaplan_y;
};

enum class SolveStatus { ReachedHorizon, BlowUp, StepFloorStall };

std::string to_string(SolveStatus s);

struct SolveOutcome {
    SolveStatus status = SolveStatus::ReachedHorizon;
    // BlowUp: extrapolated blow-up time and the last time with a finite, accepted state.
    double t_star_estimate = 0.0;
    double t_last_finite = 0.0;
    // StepFloorStall: time at which dt hit dt_min.
    double t_stall = 0.0;
    std::vector<TraceRecord> trace;
    Field final_field;
    long steps = 0;
    long rejections = 0;
    // Eigenvalue and radius of the Kaplan monitor, when configured.
    std::optional<double> kaplan_lambda;
    std::optional<double> kaplan_radius;
};

/// One IMEX θ-step: (I - θ dt Δ_h) u_new = u + dt[(1-θ) Δ_h u + N(u)].
/// The boundary node keeps its value (Dirichlet data). Returns nothing if the
/// result is not finite.
std::optional<Field> step(const Field& u, double dt, const ProblemParams& params,
                          const Field* forcing = nullptr, double theta = 1.0);

/// Called with every trace record and the state it was taken from.
using RecordObserver = std::function<void(const TraceRecord&, const Field&)>;

SolveOutcome run(const ProblemParams& params, const Field& u0, const Field* forcing,
                 const SolveConfig& config, const RecordObserver& observer = {});

struct BlowupFit {
    double t_star = 0.0;
    double fit_quality = 0.0;  // RMS residual of the linear fit, relative to the data scale
};

/// Fits sup_u ≈ C (T - t)^{-1/(p-1)} on the last eight records (linear in sup_u^{1-p}).
/// The rate is borrowed from the pure-power ODE and is only an extrapolation device.
std::optional<BlowupFit> detect_blowup(const std::vector<TraceRecord>& trace, double p);

/// Heat flow of the unit Gaussian: (t+1)^{-n/2} exp(-r^2 / (4(t+1))).
Field heat_reference(double t, const RadialGrid& grid);

/// CSV with header t,dt,sup_u,inf_u,l1_u,mean_u,sup_grad_u,kaplan_y.
void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace);

}  // namespace fujita
