#include "fujita/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fujita/certificates.hpp"

namespace fujita {

namespace {

using nlohmann::json;

json verdict_json(const RegimeVerdict& v, const char* classifier) {
    return json{{"classifier", classifier},
                {"verdict", to_string(v.verdict)},
                {"condition", v.triggered_condition},
                {"tag", v.theorem_tag}};
}

// The classifier that matches the data and forcing actually used.
json regime_json(const ScenarioConfig& cfg, const Field& u0) {
    const auto& pr = cfg.problem;
    if (!(pr.b > 0.0) || !pr.use_source || !pr.use_gradient) {
        return nullptr;
    }
    if (pr.forcing.kind != ForcingSpec::Kind::None) {
        if (pr.n < 2) return nullptr;
        return verdict_json(classify_inhomogeneous(pr), "inhomogeneous");
    }
    const auto vals = u0.values();
    const bool nonneg = std::all_of(vals.begin(), vals.end(), [](double x) { return x >= 0.0; });
    if (nonneg) {
        return verdict_json(classify_positive(pr), "positive");
    }
    return verdict_json(classify_mean_nonneg(pr, false), "mean_nonneg");
}

std::optional<double> single_gaussian_amplitude(const ScenarioConfig& cfg) {
    if (cfg.profile_stationary || cfg.profile.terms().size() != 1) return std::nullopt;
    if (const auto* g = std::get_if<profile::Gaussian>(&cfg.profile.terms().front())) {
        return g->amplitude;
    }
    return std::nullopt;
}

std::string render(const auto& writer) {
    std::ostringstream os;
    writer(os);
    return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_scenario_outputs: cannot open " + path.string());
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write_scenario_outputs: write failed for " + path.string());
    }
}

}  // namespace

ScenarioResult execute_scenario(const ScenarioConfig& cfg) {
    const auto& pr = cfg.problem;
    const RadialGrid grid(pr.n, cfg.L, cfg.M);
    ScenarioResult res;

    std::optional<StationaryCertificate> stationary;
    if (pr.forcing.kind == ForcingSpec::Kind::ConstructedStationary) {
        stationary = stationary_certificate(pr.n, pr.p, pr.q, pr.b, grid, pr.forcing.eps);
        res.forcing = stationary->h;
    } else if (pr.forcing.kind == ForcingSpec::Kind::Gaussian) {
        res.forcing = sample_profile(ProfileSpec(profile::Gaussian{pr.forcing.amplitude}), grid);
    }

    if (cfg.profile_stationary) {
        res.initial = stationary->v;
    } else {
        ProfileSpec spec = cfg.profile;
        if (cfg.dipole_target_mean) {
            const auto& d = std::get<profile::SignedDipole>(spec.terms().front());
            spec = ProfileSpec(tune_dipole_mean(d, grid, *cfg.dipole_target_mean));
        }
        res.initial = sample_profile(spec, grid);
    }
    if (cfg.zero_boundary) {
        res.initial.zero_boundary();
    }

    res.outcome = run(pr, res.initial, res.forcing ? &*res.forcing : nullptr, cfg.solve);
    const SolveOutcome& out = res.outcome;

    const bool pure_heat = !pr.use_source && !pr.use_gradient && !res.forcing;
    if (pure_heat && out.status == SolveStatus::ReachedHorizon) {
        if (const auto amp = single_gaussian_amplitude(cfg)) {
            const Field ref = heat_reference(cfg.solve.t_end, grid);
            double err = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                err = std::max(err, std::abs(out.final_field[i] - *amp * ref[i]));
            }
            res.max_error_vs_reference = err;
        }
    }

    json s;
    s["schema"] = 1;
    s["status"] = to_string(out.status);
    s["problem"] = {{"n", pr.n},
                    {"p", pr.p},
                    {"q", pr.q},
                    {"b", pr.b},
                    {"use_source", pr.use_source},
                    {"use_gradient", pr.use_gradient}};
    s["grid"] = {{"L", cfg.L}, {"M", cfg.M}, {"h", grid.spacing()}};
    s["t_end"] = cfg.solve.t_end;
    s["steps"] = out.steps;
    s["rejections"] = out.rejections;
    s["t_star"] = out.status == SolveStatus::BlowUp ? json(out.t_star_estimate) : json(nullptr);
    s["t_last_finite"] = out.status == SolveStatus::BlowUp ? json(out.t_last_finite) : json(nullptr);
    s["t_stall"] = out.status == SolveStatus::StepFloorStall ? json(out.t_stall) : json(nullptr);
    s["final_sup"] = sup_norm(out.final_field);
    s["initial_mean"] = integrate(res.initial);
    s["regime"] = regime_json(cfg, res.initial);
    s["truncation"] =
        "Dirichlet problem on the ball of radius L; for nonnegative data it is a subsolution "
        "of the whole-space problem, so blow-up transfers while bounded runs say nothing "
        "about the whole space";
    s["max_error_vs_reference"] =
        res.max_error_vs_reference ? json(*res.max_error_vs_reference) : json(nullptr);
    if (out.kaplan_lambda) {
        // The monitor eigenvalue belongs to B_R, so it already equals λ₁ R^{-2}.
        const double a = *out.kaplan_lambda;
        const double threshold = std::pow(a, 1.0 / (pr.p - 1.0));
        json crossing = nullptr;
        for (const auto& rec : out.trace) {
            if (rec.kaplan_y && *rec.kaplan_y > threshold) {
                crossing = rec.t;
                break;
            }
        }
        s["kaplan"] = {{"lambda_R", a},
                       {"lambda1", a * *out.kaplan_radius * *out.kaplan_radius},
                       {"R", *out.kaplan_radius},
                       {"threshold", threshold},
                       {"t_cross", crossing}};
    } else {
        s["kaplan"] = nullptr;
    }
    if (stationary) {
        s["forcing"] = to_json(*stationary);
    } else if (pr.forcing.kind == ForcingSpec::Kind::Gaussian) {
        s["forcing"] = {{"type", "gaussian"}, {"amplitude", pr.forcing.amplitude}};
    } else {
        s["forcing"] = nullptr;
    }
    res.summary = std::move(s);
    return res;
}

void write_scenario_outputs(const ScenarioResult& result, const std::filesystem::path& dir) {
    const std::string trace =
        render([&](std::ostream& os) { write_trace_csv(os, result.outcome.trace); });
    const std::string field =
        render([&](std::ostream& os) { write_field_csv(os, result.outcome.final_field); });
    const std::string summary = result.summary.dump(2) + "\n";

    std::filesystem::create_directories(dir);
    write_file(dir / "trace.csv", trace);
    write_file(dir / "final_field.csv", field);
    write_file(dir / "outcome.json", summary);
}

}  // namespace fujita
