#include "fujita/config.hpp"

#include <cmath>
#include <initializer_list>
#include <set>

namespace fujita {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        throw ConfigError("config: '" + path + "' must be an object");
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items()) {
        if (!ok.contains(key)) {
            throw ConfigError("config: unknown key '" + (path.empty() ? key : path + "." + key) + "'");
        }
    }
}

std::string join(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
}

double number_at(const json& obj, const std::string& path, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError("config: '" + join(path, key) + "' must be a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError("config: '" + join(path, key) + "' must be finite");
    }
    return x;
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
    return obj.contains(key) ? number_at(obj, path, key) : fallback;
}

bool bool_or(const json& obj, const std::string& path, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) {
        throw ConfigError("config: '" + join(path, key) + "' must be a boolean");
    }
    return obj.at(key).get<bool>();
}

int int_at(const json& obj, const std::string& path, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError("config: '" + join(path, key) + "' must be an integer");
    }
    return v.get<int>();
}

std::string kind_of(const json& obj, const std::string& path) {
    if (!obj.contains("kind") || !obj.at("kind").is_string()) {
        throw ConfigError("config: '" + join(path, "kind") + "' must be a string");
    }
    return obj.at("kind").get<std::string>();
}

profile::Primitive parse_primitive(const json& obj, const std::string& path) {
    const std::string kind = kind_of(obj, path);
    if (kind == "gaussian") {
        reject_unknown(obj, path, {"kind", "amplitude"});
        return profile::Gaussian{number_or(obj, path, "amplitude", 1.0)};
    }
    if (kind == "algebraic") {
        reject_unknown(obj, path, {"kind", "eps", "k"});
        return profile::Algebraic{number_at(obj, path, "eps"), number_at(obj, path, "k")};
    }
    if (kind == "annular_bump") {
        reject_unknown(obj, path, {"kind", "amplitude", "center", "width"});
        profile::AnnularBump a{number_at(obj, path, "amplitude"), number_at(obj, path, "center"),
                               number_at(obj, path, "width")};
        if (!(a.width > 0.0)) throw ConfigError("config: '" + join(path, "width") + "' must be positive");
        return a;
    }
    if (kind == "signed_dipole") {
        reject_unknown(obj, path,
                       {"kind", "a_plus", "a_minus", "c_plus", "c_minus", "w_plus", "w_minus", "target_mean"});
        profile::SignedDipole d;
        d.a_plus = number_or(obj, path, "a_plus", d.a_plus);
        d.a_minus = number_or(obj, path, "a_minus", d.a_minus);
        d.c_plus = number_or(obj, path, "c_plus", d.c_plus);
        d.c_minus = number_or(obj, path, "c_minus", d.c_minus);
        d.w_plus = number_or(obj, path, "w_plus", d.w_plus);
        d.w_minus = number_or(obj, path, "w_minus", d.w_minus);
        if (!(d.w_plus > 0.0) || !(d.w_minus > 0.0)) {
            throw ConfigError("config: '" + path + "' widths must be positive");
        }
        return d;
    }
    if (kind == "zero") {
        reject_unknown(obj, path, {"kind"});
        return profile::Zero{};
    }
    throw ConfigError("config: unknown profile kind '" + kind + "' at '" + path + "'");
}

}  // namespace

double parse_rational(const json& value, const std::string& key) {
    if (value.is_number()) {
        return value.get<double>();
    }
    if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number()) {
        const double den = value[1].get<double>();
        if (den == 0.0) {
            throw ConfigError("config: '" + key + "' has a zero denominator");
        }
        return value[0].get<double>() / den;
    }
    throw ConfigError("config: '" + key + "' must be a number or a [num, den] pair");
}

ScenarioConfig parse_scenario(const json& doc) {
    reject_unknown(doc, "", {"problem", "profile", "forcing", "grid", "solve", "output"});
    if (!doc.contains("problem")) {
        throw ConfigError("config: missing key 'problem'");
    }
    ScenarioConfig cfg;

    const auto& pr = doc.at("problem");
    reject_unknown(pr, "problem", {"n", "p", "q", "b", "use_source", "use_gradient"});
    for (const char* key : {"n", "p", "q"}) {
        if (!pr.contains(key)) throw ConfigError(std::string("config: missing key 'problem.") + key + "'");
    }
    cfg.problem.n = int_at(pr, "problem", "n");
    cfg.problem.p = parse_rational(pr.at("p"), "problem.p");
    cfg.problem.q = parse_rational(pr.at("q"), "problem.q");
    cfg.problem.b = number_or(pr, "problem", "b", 1.0);
    cfg.problem.use_source = bool_or(pr, "problem", "use_source", true);
    cfg.problem.use_gradient = bool_or(pr, "problem", "use_gradient", true);
    try {
        cfg.problem.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: 'problem' invalid: ") + e.what());
    }

    if (doc.contains("forcing")) {
        const auto& fo = doc.at("forcing");
        const std::string kind = kind_of(fo, "forcing");
        if (kind == "none") {
            reject_unknown(fo, "forcing", {"kind"});
        } else if (kind == "constructed_stationary" || kind == "constructed_thm32") {
            reject_unknown(fo, "forcing", {"kind", "eps"});
            cfg.problem.forcing.kind = ForcingSpec::Kind::ConstructedStationary;
            if (fo.contains("eps")) cfg.problem.forcing.eps = number_at(fo, "forcing", "eps");
        } else if (kind == "gaussian") {
            reject_unknown(fo, "forcing", {"kind", "amplitude"});
            cfg.problem.forcing.kind = ForcingSpec::Kind::Gaussian;
            cfg.problem.forcing.amplitude = number_at(fo, "forcing", "amplitude");
        } else {
            throw ConfigError("config: unknown forcing kind '" + kind + "'");
        }
    }

    if (doc.contains("profile")) {
        const auto& po = doc.at("profile");
        const std::string kind = kind_of(po, "profile");
        cfg.zero_boundary = kind != "stationary";
        if (po.contains("zero_boundary")) {
            cfg.zero_boundary = bool_or(po, "profile", "zero_boundary", cfg.zero_boundary);
        }
        json body = po;
        body.erase("zero_boundary");
        if (kind == "sum") {
            reject_unknown(body, "profile", {"kind", "terms"});
            const auto& terms = body.at("terms");
            if (!terms.is_array() || terms.empty() || terms.size() > ProfileSpec::kMaxTerms) {
                throw ConfigError("config: 'profile.terms' must hold 1 to 4 primitives");
            }
            std::vector<profile::Primitive> prims;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                const std::string sub = "profile.terms[" + std::to_string(i) + "]";
                if (terms[i].contains("target_mean")) {
                    throw ConfigError("config: '" + sub + ".target_mean' is only allowed at top level");
                }
                prims.push_back(parse_primitive(terms[i], sub));
            }
            cfg.profile = ProfileSpec(std::move(prims));
        } else if (kind == "stationary") {
            reject_unknown(body, "profile", {"kind"});
            if (cfg.problem.forcing.kind != ForcingSpec::Kind::ConstructedStationary) {
                throw ConfigError("config: 'profile.kind' stationary requires constructed forcing");
            }
            cfg.profile_stationary = true;
        } else {
            cfg.profile = ProfileSpec(parse_primitive(body, "profile"));
            if (kind == "signed_dipole" && body.contains("target_mean")) {
                cfg.dipole_target_mean = number_at(body, "profile", "target_mean");
            }
        }
    } else {
        cfg.profile = ProfileSpec(profile::Gaussian{1.0});
    }

    if (doc.contains("grid")) {
        const auto& gr = doc.at("grid");
        reject_unknown(gr, "grid", {"L", "M"});
        cfg.L = number_or(gr, "grid", "L", cfg.L);
        if (gr.contains("M")) cfg.M = int_at(gr, "grid", "M");
        if (!(cfg.L > 0.0)) throw ConfigError("config: 'grid.L' must be positive");
        if (cfg.M < 8) throw ConfigError("config: 'grid.M' must be >= 8");
    }

    if (doc.contains("solve")) {
        const auto& so = doc.at("solve");
        reject_unknown(so, "solve",
                       {"t_end", "dt_init", "dt_min", "dt_max", "blowup_threshold", "kaplan_R",
                        "growth_cap", "theta"});
        auto& s = cfg.solve;
        s.t_end = number_or(so, "solve", "t_end", s.t_end);
        s.dt_init = number_or(so, "solve", "dt_init", s.dt_init);
        s.dt_min = number_or(so, "solve", "dt_min", s.dt_min);
        s.dt_max = number_or(so, "solve", "dt_max", s.dt_max);
        s.blowup_threshold = number_or(so, "solve", "blowup_threshold", s.blowup_threshold);
        s.growth_cap = number_or(so, "solve", "growth_cap", s.growth_cap);
        s.theta = number_or(so, "solve", "theta", s.theta);
        if (so.contains("kaplan_R") && !so.at("kaplan_R").is_null()) {
            s.kaplan_R = number_at(so, "solve", "kaplan_R");
        }
    }

    if (doc.contains("output")) {
        const auto& ou = doc.at("output");
        reject_unknown(ou, "output", {"dir", "stride"});
        if (ou.contains("dir")) {
            if (!ou.at("dir").is_string()) throw ConfigError("config: 'output.dir' must be a string");
            cfg.output_dir = ou.at("dir").get<std::string>();
        }
        if (ou.contains("stride")) cfg.solve.trace_stride = int_at(ou, "output", "stride");
    }

    try {
        cfg.solve.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: 'solve' invalid: ") + e.what());
    }
    return cfg;
}

}  // namespace fujita
