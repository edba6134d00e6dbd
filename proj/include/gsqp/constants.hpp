#pragma once

#include "gsqp/core.hpp"
#include "gsqp/problem.hpp"

namespace gsqp {

/// Sample-maximum estimates over deterministic low-discrepancy points of
/// box_K for every constant without an analytic value. Prefix-stable in the
/// sample count: growing `samples` never decreases a max-based estimate.
/// Direction subproblems are solved at each sample to bound multipliers (M)
/// and the inner min-max ratio (a).
ProblemConstants estimate_constants(const ProblemInstance& p, const SolverConfig& cfg,
                                    int samples, unsigned long long seed = 0);

/// Fill the start-dependent fields (W0 = W(x0; 1/M), f_x0). Without a start
/// point W0 falls back to the box maximum WM.
ProblemConstants with_start_point(ProblemConstants c, const ProblemInstance& p, const Vec& x0);

/// Largest constant step admitted by the descent argument, with a 0.99 safety
/// factor: 0.99 * 2 eta c / (L_grad_f + M max_i L_grad_g_i), capped at 1.
double constant_step_gamma(const ProblemConstants& c, const SolverConfig& cfg);

/// Decrease coefficient for a given constant step and penalty level 1/M:
/// omega = eta c - (gamma/2) (L_grad_f + M max_i L_grad_g_i).
double compute_omega(const ProblemConstants& c, const SolverConfig& cfg, double gamma);

/// Stepsize produced from a threshold T by the piecewise-constant rule,
/// with the documented floor for all-linear constraints and cap at 1.
double gamma_from_threshold(const ProblemConstants& c, const SolverConfig& cfg, double T);

constexpr double kLgradGFloor = 1e-12;

/// Diagnostic sample of the direction map's Holder-1/2 quotient
/// max ||d(y) - d(z)|| / ||y - z||^(1/2) over sampled pairs. No invariant is
/// asserted on it; the quotient is only reported.
double holder_quotient_sample(const ProblemInstance& p, const SolverConfig& cfg, int samples,
                              unsigned long long seed = 0);

}  // namespace gsqp
