#pragma once

#include "gsqp/constants.hpp"
#include "gsqp/core.hpp"

namespace gsqp {

struct DriverError : Error {
    explicit DriverError(const std::string& what) : Error(what) {}
};

enum class Termination { stop_d, stop_theta, max_iters, stationary_exact };
const char* to_string(Termination t);

/// One trace row. x and the derived scalars describe the iterate before the
/// step; gamma/T are the values used to leave it (or the carried values on
/// the stopping row).
struct IterationRecord {
    int nu = 0;
    Vec x;
    double f = 0.0;
    double max_g_plus = 0.0;
    double kappa = 0.0;
    double theta = 0.0;
    double d_norm = 0.0;
    double gamma = 0.0;
    std::optional<double> T;
    std::optional<double> W_T;  // f + max g_+ / T
    double xi_inf = 0.0;
    int kernel_iters = 0;
    double wall_ms = 0.0;
    std::vector<std::string> events;
};

struct DriverState {
    std::string problem;
    std::string algo;  // "1", "2", "3"
    Vec x;             // final iterate
    int iterations = 0;
    Termination termination = Termination::max_iters;
    std::vector<IterationRecord> trace;
    DirectionResult final_direction;
    long w_evaluations = 0;  // candidate ghost-penalty evaluations (algorithm 3)
    long total_halvings = 0;
    bool left_box = false;
};

/// Plain successive-convex-direction loop with a constant or diminishing
/// stepsize schedule. The constant rule without an explicit gamma derives it
/// from the supplied constants.
DriverState run_algorithm1(const ProblemInstance& p, const SolverConfig& cfg,
                           const StepsizeRule& rule, const Vec& x0,
                           const ProblemConstants* constants = nullptr);

/// Piecewise-constant stepsizes steered by the threshold test; requires the
/// Lipschitz constants. feasible_start switches the initial threshold to the
/// accuracy-dependent value that never triggers a reduction from a feasible x0.
DriverState run_algorithm2(const ProblemInstance& p, const SolverConfig& cfg, const Vec& x0,
                           bool feasible_start, const ProblemConstants& constants);

/// Constant-free variant: the threshold test sets T only, and the stepsize is
/// found by halving until the ghost-penalty decrease test accepts. gamma
/// persists across iterations (nonincreasing over the run).
DriverState run_algorithm3(const ProblemInstance& p, const SolverConfig& cfg, const Vec& x0);

enum class BoundMode { constant_step, harmonic, algo2, algo2_feasible, algo3 };

struct PredictedBound {
    double iterations = 0.0;              // may be huge; stored as double
    std::optional<double> lower;          // harmonic window lower edge
    std::optional<double> evaluations;    // algorithm 3 evaluation budget
    bool advisory = false;                // involves empirical constants
    std::string formula;
};

/// Worst-case iteration predictions from the problem constants. The
/// piecewise-constant bounds are evaluated through the stepsize formula so
/// the all-linear-constraints case stays finite.
PredictedBound predict_bound(const ProblemConstants& constants, const SolverConfig& cfg,
                              BoundMode mode);

}  // namespace gsqp
