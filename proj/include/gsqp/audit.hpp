#pragma once

#include "gsqp/trace_io.hpp"

namespace gsqp {

/// Trace audits. Each suite recomputes what it needs from the oracles (the
/// direction map is deterministic, so re-deriving d(x) at the recorded x
/// reproduces the run), checks the inequality family, and reports the worst
/// margin (lhs - rhs; nonpositive passes).
AuditVerdict audit_update_identity(const ProblemInstance& p, const SolverConfig& cfg,
                                   const std::vector<IterationRecord>& trace);
AuditVerdict audit_kappa_sandwich(const ProblemInstance& p, const SolverConfig& cfg,
                                  const std::vector<IterationRecord>& trace);
AuditVerdict audit_direction_kkt(const ProblemInstance& p, const SolverConfig& cfg,
                                 const std::vector<IterationRecord>& trace);
AuditVerdict audit_theta_bound(const ProblemInstance& p, const SolverConfig& cfg,
                               const std::vector<IterationRecord>& trace,
                               const ProblemConstants& constants);
/// Ghost-penalty decrease at level 1/M for constant-step traces.
AuditVerdict audit_descent(const ProblemInstance& p, const SolverConfig& cfg,
                           const std::vector<IterationRecord>& trace,
                           const ProblemConstants& constants);
/// Residual triple against b * delta at a stop_d termination.
AuditVerdict audit_stop_quality(const ProblemInstance& p, const SolverConfig& cfg,
                                const std::vector<IterationRecord>& trace,
                                const ProblemConstants& constants, Termination term);
/// Threshold monotonicity and the stepsize formula for piecewise-constant runs.
AuditVerdict audit_threshold_rules(const ProblemInstance& p, const SolverConfig& cfg,
                                   const std::vector<IterationRecord>& trace,
                                   const ProblemConstants& constants);
/// Accepted-step inequality of the line-search variant, recomputed from oracles.
AuditVerdict audit_linesearch_exit(const ProblemInstance& p, const SolverConfig& cfg,
                                   const std::vector<IterationRecord>& trace);

/// Every suite applicable to the given algorithm.
std::vector<AuditVerdict> run_all_audits(const ProblemInstance& p, const SolverConfig& cfg,
                                         const std::vector<IterationRecord>& trace,
                                         const ProblemConstants* constants,
                                         const std::string& algo, Termination term,
                                         bool constant_step_rule);

}  // namespace gsqp
