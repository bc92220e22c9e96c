// Command-line front end: run, certify, scan, table.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fujita/certificates.hpp"
#include "fujita/config.hpp"
#include "fujita/core.hpp"
#include "fujita/scan.hpp"
#include "fujita/scenario.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitError = 1;
constexpr int kExitRegime = 2;
constexpr int kExitHardFailure = 3;

// "4/3" or "1.5".
double parse_number(const std::string& text) {
    const auto slash = text.find('/');
    std::size_t used = 0;
    try {
        if (slash == std::string::npos) {
            const double v = std::stod(text, &used);
            if (used == text.size()) return v;
        } else {
            const std::string a = text.substr(0, slash);
            const std::string b = text.substr(slash + 1);
            std::size_t ua = 0, ub = 0;
            const double num = std::stod(a, &ua);
            const double den = std::stod(b, &ub);
            if (ua == a.size() && ub == b.size() && den != 0.0) return num / den;
        }
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("not a number or ratio: '" + text + "'");
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_number(item));
    }
    return out;
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto v = parse_list(text);
    if (v.size() != 2) {
        throw CLI::ValidationError("range must look like lo,hi: '" + text + "'");
    }
    return {v[0], v[1]};
}

void save_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

int cmd_run(const std::string& config_path, const std::string& out_override) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "run: cannot open " << config_path << "\n";
        return kExitError;
    }
    fujita::ScenarioConfig cfg;
    try {
        cfg = fujita::parse_scenario(json::parse(in));
    } catch (const json::exception& e) {
        std::cerr << "run: malformed JSON: " << e.what() << "\n";
        return kExitError;
    } catch (const fujita::ConfigError& e) {
        std::cerr << "run: " << e.what() << "\n";
        return kExitError;
    }
    if (!out_override.empty()) cfg.output_dir = out_override;

    fujita::ScenarioResult result;
    try {
        result = fujita::execute_scenario(cfg);
    } catch (const std::exception& e) {
        std::cerr << "run: " << e.what() << "\n";
        return kExitError;
    }
    try {
        fujita::write_scenario_outputs(result, cfg.output_dir);
    } catch (const std::exception& e) {
        std::cerr << "run: " << e.what() << "\n";
        return kExitError;
    }
    std::cout << "status " << result.summary["status"].get<std::string>();
    if (!result.summary["t_star"].is_null()) {
        std::cout << "  t_star " << result.summary["t_star"].get<double>();
    }
    std::cout << "\nwrote " << (fs::path(cfg.output_dir) / "outcome.json").string() << "\n";
    return 0;
}

struct CertifyArgs {
    int n = 1;
    std::string p, q;
    double b = 1.0;
    std::string kind = "gaussian";
    std::optional<double> eps;
    double L = 12.0;
    int M = 1200;
    std::string out;
};

int cmd_certify(const CertifyArgs& a) {
    json doc;
    try {
        const double p = parse_number(a.p);
        const double q = parse_number(a.q);
        if (a.kind == "gaussian") {
            doc = fujita::to_json(fujita::gaussian_certificate(a.n, p, q, a.b));
        } else {
            const fujita::RadialGrid grid(a.n, a.L, a.M);
            doc = fujita::to_json(fujita::stationary_certificate(a.n, p, q, a.b, grid, a.eps));
        }
    } catch (const fujita::RegimeError& e) {
        std::cerr << "certify: outside the certificate regime: " << e.what() << "\n";
        return kExitRegime;
    } catch (const std::exception& e) {
        std::cerr << "certify: " << e.what() << "\n";
        return kExitError;
    }
    const std::string text = doc.dump(2) + "\n";
    std::cout << text;
    const std::string path = a.out.empty() ? "certificate_" + a.kind + ".json" : a.out;
    try {
        save_text(path, text);
    } catch (const std::exception& e) {
        std::cerr << "certify: " << e.what() << "\n";
        return kExitError;
    }
    return doc.value("verified", false) ? 0 : kExitHardFailure;
}

struct ScanArgs {
    int n = 1;
    double b = 1.0;
    std::string p_range, q_range, p_values, q_values;
    int steps = 8;
    double budget = 50.0;
    double amplitude = 2.0;
    int M = 600;
    unsigned threads = 0;
    std::string out = "scan_out";
};

int cmd_scan(const ScanArgs& a) {
    fujita::ScanOptions opts;
    opts.n = a.n;
    opts.b = a.b;
    opts.budget = a.budget;
    opts.amplitude = a.amplitude;
    opts.M = a.M;
    opts.threads = a.threads;
    if (!a.p_values.empty()) {
        opts.p_values = parse_list(a.p_values);
    } else if (!a.p_range.empty()) {
        const auto [lo, hi] = parse_range(a.p_range);
        opts.p_values = fujita::linspace(lo, hi, a.steps);
    }
    if (!a.q_values.empty()) {
        opts.q_values = parse_list(a.q_values);
    } else if (!a.q_range.empty()) {
        const auto [lo, hi] = parse_range(a.q_range);
        opts.q_values = fujita::linspace(lo, hi, a.steps);
    }

    fujita::ScanResult result;
    try {
        result = fujita::run_scan(opts);
    } catch (const std::exception& e) {
        std::cerr << "scan: " << e.what() << "\n";
        return kExitError;
    }
    std::ostringstream csv;
    fujita::write_scan_csv(csv, result);
    try {
        const fs::path dir(a.out);
        fs::create_directories(dir);
        save_text(dir / "scan.csv", csv.str());
        save_text(dir / "scan.json", fujita::to_json(result).dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << "scan: " << e.what() << "\n";
        return kExitError;
    }

    int failures = 0;
    for (const auto& pt : result.points) {
        std::printf("p=%-8.4g q=%-8.4g %-18s %s\n", pt.p, pt.q,
                    fujita::to_string(pt.theory.verdict).c_str(),
                    fujita::to_string(pt.numeric).c_str());
        if (fujita::is_hard_failure(pt.numeric)) ++failures;
    }
    std::printf("%zu points written to %s\n", result.points.size(), a.out.c_str());
    if (failures > 0) {
        std::cerr << "scan: " << failures << " point(s) contradict their certificate\n";
        return kExitHardFailure;
    }
    return 0;
}

json exponent_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    if (std::isinf(*v)) return "inf";
    return *v;
}

int cmd_table(int n, bool as_json) {
    if (n < 1) {
        std::cerr << "table: n must be >= 1\n";
        return kExitError;
    }
    const auto ce = fujita::critical_exponents(n);
    const std::string q1 = "1 + 1/(" + std::to_string(n) + "p - 1)";
    const std::string p_star_note =
        n == 1 ? "undefined for n = 1"
               : (n == 2 ? "n/(n-2) taken as infinity for n = 2" : "n/(n-2)");
    if (as_json) {
        json j;
        j["n"] = n;
        j["p_F"] = {{"value", ce.p_fujita},
                    {"formula", "1 + 2/n"},
                    {"governs", "positive data: every solution blows up if p <= p_F"}};
        j["q_F"] = {{"value", ce.q_fujita},
                    {"formula", "1 + 1/(n+1)"},
                    {"governs", "positive data: every solution blows up if q <= q_F; "
                                "small data are global if p > p_F and q > q_F"}};
        j["q1"] = {{"formula", q1},
                   {"governs", "data with nonnegative mean: blow-up if q <= q1(p)"}};
        j["p_star"] = {{"value", exponent_json(ce.p_star)},
                       {"formula", p_star_note},
                       {"governs", "forcing with positive mass: blow-up if p < p_star"}};
        j["q_star"] = {{"value", exponent_json(ce.q_star)},
                       {"formula", "n/(n-1)"},
                       {"governs", "forcing with positive mass: blow-up if q < q_star; "
                                   "stationary supersolutions above both p_star and q_star"}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    auto show = [](const std::optional<double>& v) -> std::string {
        if (!v) return "n/a";
        if (std::isinf(*v)) return "inf";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.10g", *v);
        return buf;
    };
    std::printf("n = %d\n", n);
    std::printf("  p_F    = %-10s 1 + 2/n        positive data: blow-up if p <= p_F\n",
                show(ce.p_fujita).c_str());
    std::printf("  q_F    = %-10s 1 + 1/(n+1)    positive data: blow-up if q <= q_F\n",
                show(ce.q_fujita).c_str());
    std::printf("  q1(p)  = %-25s nonnegative mean: blow-up if q <= q1(p)\n", q1.c_str());
    std::printf("  p_star = %-10s %-14s forcing: blow-up if p < p_star\n", show(ce.p_star).c_str(),
                n == 2 ? "(n/(n-2) = inf)" : "n/(n-2)");
    std::printf("  q_star = %-10s n/(n-1)        forcing: blow-up if q < q_star\n",
                show(ce.q_star).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial finite-difference lab for u_t - Δu = |u|^p + b|∇u|^q"};
    app.require_subcommand(1);

    std::string config_path, run_out;
    auto* run = app.add_subcommand("run", "Run one scenario from a JSON config");
    run->add_option("config", config_path, "Scenario JSON file")->required();
    run->add_option("--out", run_out, "Override output.dir");

    CertifyArgs ca;
    double eps_value = 0.0;
    auto* certify = app.add_subcommand("certify", "Build a global-existence certificate");
    certify->add_option("--n", ca.n, "Space dimension")->required();
    certify->add_option("--p", ca.p, "Source exponent (number or a/b)")->required();
    certify->add_option("--q", ca.q, "Gradient exponent (number or a/b)")->required();
    certify->add_option("--b", ca.b, "Gradient coefficient")->capture_default_str();
    certify->add_option("--kind", ca.kind, "gaussian or stationary")
        ->check(CLI::IsMember({"gaussian", "stationary"}))
        ->capture_default_str();
    auto* eps_opt = certify->add_option("--eps", eps_value, "Stationary amplitude");
    certify->add_option("--L", ca.L, "Stationary grid radius")->capture_default_str();
    certify->add_option("--M", ca.M, "Stationary grid interior nodes")->capture_default_str();
    certify->add_option("--out", ca.out, "Output file (default certificate_<kind>.json)");

    ScanArgs sa;
    auto* scan = app.add_subcommand("scan", "Classify and test a (p, q) lattice");
    scan->add_option("--n", sa.n, "Space dimension")->capture_default_str();
    scan->add_option("--b", sa.b, "Gradient coefficient")->capture_default_str();
    scan->add_option("--p-range", sa.p_range, "lo,hi");
    scan->add_option("--q-range", sa.q_range, "lo,hi");
    scan->add_option("--p-values", sa.p_values, "Comma-separated p values");
    scan->add_option("--q-values", sa.q_values, "Comma-separated q values");
    scan->add_option("--steps", sa.steps, "Points per range")->capture_default_str();
    scan->add_option("--budget", sa.budget, "Time horizon of each run")->capture_default_str();
    scan->add_option("--amplitude", sa.amplitude, "Gaussian amplitude of blow-up runs")
        ->capture_default_str();
    scan->add_option("--M", sa.M, "Interior nodes")->capture_default_str();
    scan->add_option("--threads", sa.threads, "Worker count (default FUJITA_THREADS)");
    scan->add_option("--out", sa.out, "Output directory")->capture_default_str();

    int table_n = 1;
    bool table_json = false;
    auto* table = app.add_subcommand("table", "Critical exponents for dimension n");
    table->add_option("--n", table_n, "Space dimension")->required();
    table->add_flag("--json", table_json, "Emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed()) return cmd_run(config_path, run_out);
        if (certify->parsed()) {
            if (eps_opt->count() > 0) ca.eps = eps_value;
            return cmd_certify(ca);
        }
        if (scan->parsed()) return cmd_scan(sa);
        if (table->parsed()) return cmd_table(table_n, table_json);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
