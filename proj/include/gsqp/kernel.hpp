#pragma once

#include <functional>
#include <optional>

#include "gsqp/linalg.hpp"

namespace gsqp {

struct KernelError : Error {
    explicit KernelError(const std::string& what) : Error(what) {}
};

enum class KernelStatus { optimal, max_iter, infeasible };
const char* to_string(KernelStatus s);

/// Box-bounded linear program: minimize cost^T y subject to A y <= b and
/// lo <= y <= hi (finite bounds on every variable).
struct LpProblem {
    Vec cost;
    Mat A;  // nr x nv
    Vec b;
    Vec lo, hi;
};

/// Strongly convex quadratic program:
///   minimize 0.5 d^T H d + q^T d  s.t.  rows: a_k^T d <= rhs_k, ||d||_inf <= beta.
/// H must be positive definite with smallest eigenvalue >= c (checked).
struct QpProblem {
    Mat H;
    Vec q;
    Mat rows;  // nr x n
    Vec rhs;
    double beta = 1.0;
    double c = 1.0;                 // claimed strong-convexity modulus
    std::optional<Vec> start;       // feasible start; found by phase-1 LP if absent
};

struct KernelSolution {
    Vec point;
    Vec duals;  // one multiplier per inequality row (box handled internally)
    double objective = 0.0;
    KernelStatus status = KernelStatus::optimal;
    int iterations = 0;
};

/// Bounded-variable two-phase primal simplex with Bland's rule. Deterministic.
KernelSolution solve_lp(const LpProblem& lp);

/// Primal-vs-dual objective agreement at the returned solution (strong duality).
double lp_duality_gap(const LpProblem& lp, const KernelSolution& sol);

/// Dense primal active-set method; the box is handled as general rows
/// internally, and the reported duals are the least-norm nonnegative
/// multipliers recomputed on the active rows.
KernelSolution solve_qp(const QpProblem& qp);

/// Worst stationarity violation of a QP solution: the KKT residual reduced by
/// the normal cone of the box (no explicit box multipliers needed).
double qp_kkt_residual(const QpProblem& qp, const KernelSolution& sol);
double qp_primal_infeasibility(const QpProblem& qp, const Vec& d);

/// Projected subgradient on an exact-penalty reformulation; used for general
/// convex surrogates that do not reduce to an LP/QP pair. Multipliers are
/// recovered by least squares on near-active rows.
struct ConvexOracle {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> subgrad;
};

KernelSolution solve_convex_fallback(int dim, const ConvexOracle& objective,
                                     const std::vector<ConvexOracle>& constraints,
                                     const Vec& constraint_rhs, double box_radius,
                                     double strong_convexity, double tol, int max_iter = 200000);

}  // namespace gsqp
