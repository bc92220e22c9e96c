#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fujita/core.hpp"

namespace fujita {

struct ScanOptions {
    int n = 1;
    double b = 1.0;
    std::vector<double> p_values;
    std::vector<double> q_values;
    // Gaussian amplitude of the blow-up confirmation runs.
    double amplitude = 2.0;
    // Time horizon of every run.
    double budget = 50.0;
    double dt_min = 1e-9;
    double L = 12.0;
    int M = 600;
    // Worker count; 0 reads FUJITA_THREADS, falling back to the hardware concurrency.
    unsigned threads = 0;
};

/// Observed outcome of one lattice point.
enum class NumericVerdict {
    BlowUp,
    CertifiedGlobal,
    ReachedHorizon,  // blow-up predicted but not seen within the budget
    Unresolved,
    CertificateFailed,    // certificate lattice check found a negative residual
    DominationViolated,   // the run escaped the certified supersolution
};

std::string to_string(NumericVerdict v);

/// True for outcomes that contradict a verified certificate or the certificate itself.
bool is_hard_failure(NumericVerdict v);

struct ScanPoint {
    double p = 0.0;
    double q = 0.0;
    RegimeVerdict theory;
    NumericVerdict numeric = NumericVerdict::Unresolved;
    std::optional<double> t_star;
    // Certificate amplitude, exponent and lattice residual, for GlobalForSmallData points.
    std::optional<double> cert_eps;
    std::optional<double> cert_k;
    std::optional<double> cert_residual_min;
    // max over records and nodes of u - z, for dominated runs.
    std::optional<double> max_excess;
    std::string note;
};

struct ScanResult {
    ScanOptions options;
    std::vector<ScanPoint> points;  // sorted by (p, q)
};

/// `count` evenly spaced values from lo to hi inclusive (lo alone for count 1).
std::vector<double> linspace(double lo, double hi, int count);

/// Evaluates one lattice point: classifier verdict plus the matching numerical check.
ScanPoint evaluate_point(const ScanOptions& opts, double p, double q);

/// Evaluates the (p, q) lattice on a worker pool; result order does not depend on the pool.
ScanResult run_scan(const ScanOptions& opts);

/// Resolves the worker count from `requested`, FUJITA_THREADS and the hardware.
unsigned resolve_threads(unsigned requested);

void write_scan_csv(std::ostream& os, const ScanResult& result);
nlohmann::json to_json(const ScanResult& result);

}  // namespace fujita
