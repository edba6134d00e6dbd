#pragma once

#include "gsqp/kernel.hpp"
#include "gsqp/problem.hpp"
#include "gsqp/surrogate.hpp"

namespace gsqp {

/// Feasibility-relaxation level at a base point, with the inner min-max value
/// and its minimizer (a feasible start for the direction subproblem).
struct KappaResult {
    double kappa = 0.0;
    double phi = 0.0;         // min over the rho-box of max_i g_tilde_i(d)_+
    double max_g_plus = 0.0;  // raw violation at the base point
    Vec d_hat;                // argmin of the inner problem
    int lp_iterations = 0;
    double lp_duality_gap = 0.0;
};

/// Solution of the direction subproblem at a base point.
struct DirectionResult {
    Vec base_x;
    double kappa = 0.0;
    double phi = 0.0;
    double theta = 0.0;  // max g_+ - kappa, by construction
    double max_g_plus = 0.0;
    Vec d;
    Vec xi;
    double d_norm = 0.0;
    double grad_f_dot_d = 0.0;
    std::vector<int> active_rows;
    int lp_iterations = 0;
    int qp_iterations = 0;
};

KappaResult compute_kappa(const SurrogateModelAt& s, const SolverConfig& cfg);
DirectionResult solve_direction(const SurrogateModelAt& s, const KappaResult& kr,
                                const SolverConfig& cfg);

/// Convenience: surrogate + kappa + direction in one call.
DirectionResult direction_at(const ProblemInstance& p, const Vec& x, const SolverConfig& cfg);

/// W(x; eps) = f(x) + (1/eps) max_i g_i(x)_+
double ghost_penalty(const ProblemInstance& p, const Vec& x, double epsilon);

struct BoundPair {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Residual-versus-bound triples relating the stationarity measures to ||d||.
struct ResidualBoundAudit {
    BoundPair lagrangian;       // ||grad f + grad g xi||
    BoundPair feasibility;      // max g_+
    BoundPair complementarity;  // max |g_i xi_i|
    double b_norm_d = 0.0;       // b * ||d||
    double b_value = 0.0;
    bool advisory = false;  // any involved constant is an empirical estimate
    double worst_margin() const;
};

ResidualBoundAudit residual_bounds(const DirectionResult& dr, const ProblemInstance& p,
                          const ProblemConstants& constants);

enum class Classification { KKT, FJ, ES, none };
const char* to_string(Classification c);

struct StationarityReport {
    Classification classification = Classification::none;
    double lagrangian_residual = 0.0;
    double feasibility_residual = 0.0;
    double complementarity_residual = 0.0;
    std::optional<double> feasibility_stationarity;  // simplex-constrained ||grad g z||
    ClassifyTolerances tol;
};

/// Single-label classification with KKT checked first; both certificates can
/// hold at once (balanced constraint gradients), the residuals expose that.
StationarityReport classify_point(const ProblemInstance& p, const Vec& x,
                                  const DirectionResult& dr, const ClassifyTolerances& tol);

/// min ||grad g(x) z|| over the unit simplex restricted to the index set S.
double simplex_gradient_residual(const ProblemInstance& p, const Vec& x,
                                 const std::vector<int>& support);

}  // namespace gsqp
