#pragma once

#include "gsqp/drivers.hpp"

namespace gsqp {

/// Flat CSV, one row per IterationRecord, %.17g so every double round-trips.
/// Columns: nu, x1..xn, f, max_g_plus, kappa, theta, d_norm, gamma, T, W_T,
/// xi_inf, kernel_iters, wall_ms, events (|-separated). T/W_T empty when the
/// algorithm carries no threshold.
void write_trace_csv(const std::string& path, const DriverState& st, int n);
std::vector<IterationRecord> read_trace_csv(const std::string& path, int* n_out = nullptr);

struct AuditVerdict {
    std::string suite;
    bool pass = true;
    bool advisory = false;
    double worst_margin = 0.0;  // max over checks of lhs - rhs; <= 0 passes
    std::string detail;
};

struct RunReport {
    int schema = 1;
    std::string problem;
    std::string algo;
    SolverConfig cfg;
    DriverState state;  // trace may be re-read from disk
    StationarityReport stationarity;
    std::optional<ProblemConstants> constants;
    std::vector<AuditVerdict> audits;
    std::vector<std::pair<std::string, PredictedBound>> bounds;
    std::string trace_file;
    bool constant_rule = false;
};

void write_report_json(const std::string& path, const RunReport& rep);
std::string report_to_json(const RunReport& rep);

/// Partial reconstruction (problem name, algo, config, trace path) for
/// auditing a run from disk.
struct StoredRun {
    std::string problem;
    std::string algo;
    SolverConfig cfg;
    std::string trace_file;
    Termination termination = Termination::max_iters;
    bool constant_rule = false;
};
StoredRun read_report_json(const std::string& path);

std::string constants_to_json(const ProblemConstants& c);

}  // namespace gsqp
