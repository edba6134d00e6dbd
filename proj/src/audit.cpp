#include "gsqp/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gsqp {

namespace {

AuditVerdict verdict(const std::string& suite, double worst, double budget,
                     const std::string& detail = "") {
    AuditVerdict v;
    v.suite = suite;
    v.worst_margin = worst - budget;
    v.pass = worst <= budget;
    v.detail = detail;
    return v;
}

}  // namespace

AuditVerdict audit_update_identity(const ProblemInstance& p, const SolverConfig& cfg,
                                   const std::vector<IterationRecord>& trace) {
    double worst = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k + 1 < trace.size(); ++k) {
        const DirectionResult dr = direction_at(p, trace[k].x, cfg);
        const Vec pred = add_scaled(trace[k].x, trace[k].gamma, dr.d);
        Vec diff = add_scaled(pred, -1.0, trace[k + 1].x);
        const double scale = 1.0 + nrminf(trace[k].x);
        worst = std::max(worst, nrminf(diff) / scale);
    }
    return verdict("update_identity", worst, 1e-10);
}

AuditVerdict audit_kappa_sandwich(const ProblemInstance& p, const SolverConfig& cfg,
                                  const std::vector<IterationRecord>& trace) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& r : trace) {
        const SurrogateModelAt s = make_quadlin_surrogate(p, r.x, cfg.c);
        const KappaResult kr = compute_kappa(s, cfg);
        worst = std::max(worst, -kr.kappa);                    // kappa >= 0
        worst = std::max(worst, kr.kappa - kr.max_g_plus);     // kappa <= max g_+
        worst = std::max(worst, std::fabs(kr.kappa - r.kappa));  // trace agreement
        if (kr.max_g_plus == 0.0) worst = std::max(worst, kr.kappa);
    }
    return verdict("kappa_sandwich", worst, 1e-9);
}

AuditVerdict audit_direction_kkt(const ProblemInstance& p, const SolverConfig& cfg,
                                 const std::vector<IterationRecord>& trace) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& r : trace) {
        const SurrogateModelAt s = make_quadlin_surrogate(p, r.x, cfg.c);
        const KappaResult kr = compute_kappa(s, cfg);
        const DirectionResult dr = solve_direction(s, kr, cfg);
        const Vec gt = s.eval_g_tilde(dr.d);
        for (int i = 0; i < p.m; ++i) worst = std::max(worst, (gt[i] - dr.kappa) - 1e-8);
        worst = std::max(worst, (nrminf(dr.d) - cfg.beta) - 1e-10);
        for (double xi : dr.xi) worst = std::max(worst, (-xi) - 1e-10);
        for (int i = 0; i < p.m; ++i)
            worst = std::max(worst, std::fabs(dr.xi[i] * (gt[i] - dr.kappa)) - 1e-8);
        worst = std::max(worst, std::fabs(dr.d_norm - r.d_norm) - 1e-9);
    }
    return verdict("direction_kkt", worst, 0.0);
}

AuditVerdict audit_theta_bound(const ProblemInstance& p, const SolverConfig& cfg,
                               const std::vector<IterationRecord>& trace,
                               const ProblemConstants& constants) {
    (void)p;
    (void)cfg;
    const double L = constants.L_tilde_g.get("L_tilde_g");
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& r : trace) {
        worst = std::max(worst, -r.theta);  // theta >= 0
        worst = std::max(worst, std::fabs(r.theta - (r.max_g_plus - r.kappa)));
        worst = std::max(worst, r.theta - (L * r.d_norm + 1e-8));
    }
    AuditVerdict v = verdict("theta_bound", worst, 1e-10);
    v.advisory = !constants.L_tilde_g.analytic();
    return v;
}

AuditVerdict audit_descent(const ProblemInstance& p, const SolverConfig& cfg,
                           const std::vector<IterationRecord>& trace,
                           const ProblemConstants& constants) {
    const double M = constants.M.get("M");
    const double eps = 1.0 / M;
    double worst = -std::numeric_limits<double>::infinity();
    double prevW = 0.0;
    for (size_t k = 0; k < trace.size(); ++k) {
        const double W = ghost_penalty(p, trace[k].x, eps);
        if (k > 0) {
            const auto& r = trace[k - 1];
            const double omega = compute_omega(constants, cfg, r.gamma);
            const double lhs = W - prevW;
            const double rhs = -omega * r.gamma * r.d_norm * r.d_norm + 1e-10;
            worst = std::max(worst, lhs - rhs);
        }
        prevW = W;
    }
    AuditVerdict v = verdict("descent", worst, 0.0);
    v.advisory = true;  // the multiplier bound is a sampling estimate
    return v;
}

AuditVerdict audit_stop_quality(const ProblemInstance& p, const SolverConfig& cfg,
                                const std::vector<IterationRecord>& trace,
                                const ProblemConstants& constants, Termination term) {
    AuditVerdict v;
    v.suite = "stop_quality";
    if (trace.empty() || (term != Termination::stop_d && term != Termination::stationary_exact)) {
        v.detail = "no stop_d termination to audit";
        return v;
    }
    const DirectionResult dr = direction_at(p, trace.back().x, cfg);
    const ResidualBoundAudit l5 = residual_bounds(dr, p, constants);
    const double budget = constants.b.get("b") * cfg.delta;
    double worst = std::max({l5.lagrangian.lhs, l5.feasibility.lhs, l5.complementarity.lhs});
    v = verdict("stop_quality", worst, budget,
                "residual triple vs b*delta=" + std::to_string(budget));
    v.advisory = l5.advisory;
    return v;
}

AuditVerdict audit_threshold_rules(const ProblemInstance& p, const SolverConfig& cfg,
                                   const std::vector<IterationRecord>& trace,
                                   const ProblemConstants& constants) {
    (void)p;
    double worst = -std::numeric_limits<double>::infinity();
    std::optional<double> prevT;
    for (const auto& r : trace) {
        if (!r.T) continue;
        if (prevT) worst = std::max(worst, *r.T - *prevT);  // nonincreasing
        const bool reduced =
            std::find(r.events.begin(), r.events.end(), "T_reduced") != r.events.end();
        if (reduced) {
            const double expect = gamma_from_threshold(constants, cfg, *r.T);
            worst = std::max(worst, std::fabs(r.gamma - expect));
        }
        prevT = r.T;
    }
    return verdict("threshold_rules", worst, 1e-12);
}

AuditVerdict audit_linesearch_exit(const ProblemInstance& p, const SolverConfig& cfg,
                                   const std::vector<IterationRecord>& trace) {
    double worst = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k + 1 < trace.size(); ++k) {
        const auto& r = trace[k];
        if (!r.T) continue;
        const DirectionResult dr = direction_at(p, r.x, cfg);
        const double Wx = ghost_penalty(p, r.x, *r.T);
        const double Wc = ghost_penalty(p, add_scaled(r.x, r.gamma, dr.d), *r.T);
        const double rhs = -r.gamma * cfg.eta * cfg.c / 4.0 * dr.d_norm * dr.d_norm;
        worst = std::max(worst, (Wc - Wx) - rhs);
    }
    return verdict("linesearch_exit", worst, 1e-12);
}

std::vector<AuditVerdict> run_all_audits(const ProblemInstance& p, const SolverConfig& cfg,
                                         const std::vector<IterationRecord>& trace,
                                         const ProblemConstants* constants,
                                         const std::string& algo, Termination term,
                                         bool constant_step_rule) {
    std::vector<AuditVerdict> out;
    out.push_back(audit_update_identity(p, cfg, trace));
    out.push_back(audit_kappa_sandwich(p, cfg, trace));
    out.push_back(audit_direction_kkt(p, cfg, trace));
    if (constants) {
        out.push_back(audit_theta_bound(p, cfg, trace, *constants));
        if (constant_step_rule) out.push_back(audit_descent(p, cfg, trace, *constants));
        out.push_back(audit_stop_quality(p, cfg, trace, *constants, term));
        if (algo == "2") out.push_back(audit_threshold_rules(p, cfg, trace, *constants));
    }
    if (algo == "3") out.push_back(audit_linesearch_exit(p, cfg, trace));
    return out;
}

}  // namespace gsqp
