#include "gsqp/core.hpp"

#include <algorithm>
#include <cmath>

namespace gsqp {

KappaResult compute_kappa(const SurrogateModelAt& s, const SolverConfig& cfg) {
    KappaResult kr;
    const Vec zero(s.n, 0.0);
    const Vec g0 = s.eval_g_tilde(zero);
    for (double gi : g0) kr.max_g_plus = std::max(kr.max_g_plus, gi);
    kr.max_g_plus = std::max(kr.max_g_plus, 0.0);

    if (s.structure == SurrogateModelAt::Structure::quadratic_linear) {
        // epigraph LP over (d, t): min t s.t. g_i0 + a_i^T d - t <= 0,
        // |d| <= rho, 0 <= t <= max g_i0_+ (the value at d = 0, so the upper
        // bound never cuts the optimum away)
        const int n = s.n, m = s.m;
        LpProblem lp;
        lp.cost = Vec(n + 1, 0.0);
        lp.cost[n] = 1.0;
        lp.A = Mat(m, n + 1);
        lp.b = Vec(m);
        for (int i = 0; i < m; ++i) {
            const Vec ai = s.jac0.col(i);
            for (int j = 0; j < n; ++j) lp.A(i, j) = ai[j];
            lp.A(i, n) = -1.0;
            lp.b[i] = -g0[i];
        }
        lp.lo = Vec(n + 1, -cfg.rho);
        lp.hi = Vec(n + 1, cfg.rho);
        lp.lo[n] = 0.0;
        lp.hi[n] = kr.max_g_plus;
        const KernelSolution sol = solve_lp(lp);
        if (sol.status != KernelStatus::optimal)
            throw KernelError(std::string("kappa inner LP failed: ") + to_string(sol.status));
        kr.phi = sol.objective;
        kr.d_hat = Vec(sol.point.begin(), sol.point.begin() + n);
        kr.lp_iterations = sol.iterations;
        kr.lp_duality_gap = lp_duality_gap(lp, sol);
    } else {
        ConvexOracle obj;
        obj.value = [&s](const Vec& d) {
            double v = 0.0;
            for (double gi : s.eval_g_tilde(d)) v = std::max(v, gi);
            return std::max(v, 0.0);
        };
        obj.subgrad = [&s](const Vec& d) {
            const Vec gt = s.eval_g_tilde(d);
            int arg = -1;
            double v = 0.0;
            for (int i = 0; i < static_cast<int>(gt.size()); ++i)
                if (gt[i] > v) {
                    v = gt[i];
                    arg = i;
                }
            if (arg < 0) return Vec(d.size(), 0.0);
            return s.grad1_g_tilde(d).col(arg);
        };
        const KernelSolution sol =
            solve_convex_fallback(s.n, obj, {}, {}, cfg.rho, 1e-6, 1e-10, 60000);
        kr.phi = std::clamp(obj.value(sol.point), 0.0, kr.max_g_plus);
        kr.d_hat = sol.point;
        kr.lp_iterations = sol.iterations;
    }

    kr.kappa = (1.0 - cfg.lambda) * kr.max_g_plus + cfg.lambda * kr.phi;
    return kr;
}

DirectionResult solve_direction(const SurrogateModelAt& s, const KappaResult& kr,
                                const SolverConfig& cfg) {
    DirectionResult dr;
    dr.base_x = s.base_x;
    dr.kappa = kr.kappa;
    dr.phi = kr.phi;
    dr.max_g_plus = kr.max_g_plus;
    dr.theta = kr.max_g_plus - kr.kappa;
    dr.lp_iterations = kr.lp_iterations;

    const int n = s.n, m = s.m;
    const Vec zero(n, 0.0);

    if (s.structure == SurrogateModelAt::Structure::quadratic_linear) {
        QpProblem qp;
        qp.H = Mat(n, n, 0.0);
        for (int j = 0; j < n; ++j) qp.H(j, j) = s.c;
        qp.q = s.grad_f0;
        qp.rows = Mat(m, n);
        qp.rhs = Vec(m);
        for (int i = 0; i < m; ++i) {
            const Vec ai = s.jac0.col(i);
            for (int j = 0; j < n; ++j) qp.rows(i, j) = ai[j];
            qp.rhs[i] = kr.kappa - s.g0[i];
        }
        qp.beta = cfg.beta;
        qp.c = s.c;
        qp.start = kr.d_hat;  // feasible by the construction of kappa
        const KernelSolution sol = solve_qp(qp);
        if (sol.status != KernelStatus::optimal)
            throw KernelError(std::string("direction subproblem failed: ") + to_string(sol.status));
        dr.d = sol.point;
        dr.xi = sol.duals;
        dr.qp_iterations = sol.iterations;
        for (int i = 0; i < m; ++i) {
            const double slack = qp.rhs[i] - dot(qp.rows.row(i), dr.d);
            if (slack <= 1e-8 * (1.0 + std::fabs(qp.rhs[i]))) dr.active_rows.push_back(i);
        }
    } else {
        ConvexOracle obj{s.eval_f_tilde, s.grad1_f_tilde};
        std::vector<ConvexOracle> cons(m);
        for (int i = 0; i < m; ++i) {
            cons[i].value = [&s, i](const Vec& d) { return s.eval_g_tilde(d)[i]; };
            cons[i].subgrad = [&s, i](const Vec& d) { return s.grad1_g_tilde(d).col(i); };
        }
        const KernelSolution sol = solve_convex_fallback(
            n, obj, cons, Vec(m, kr.kappa), cfg.beta, s.c, 1e-8, 200000);
        dr.d = sol.point;
        dr.xi = sol.duals;
        dr.qp_iterations = sol.iterations;
        const Vec gt = s.eval_g_tilde(dr.d);
        for (int i = 0; i < m; ++i)
            if (kr.kappa - gt[i] <= 1e-6 * (1.0 + std::fabs(kr.kappa))) dr.active_rows.push_back(i);
    }

    dr.d_norm = nrm2(dr.d);
    dr.grad_f_dot_d = dot(s.grad_f0, dr.d);
    return dr;
}

DirectionResult direction_at(const ProblemInstance& p, const Vec& x, const SolverConfig& cfg) {
    const SurrogateModelAt s = make_quadlin_surrogate(p, x, cfg.c);
    const KappaResult kr = compute_kappa(s, cfg);
    return solve_direction(s, kr, cfg);
}

double ghost_penalty(const ProblemInstance& p, const Vec& x, double epsilon) {
    if (!(epsilon > 0.0)) throw ValidationError("ghost penalty requires epsilon > 0");
    const double fx = p.f(x);
    const double viol = p.max_g_plus(x);
    if (!std::isfinite(fx) || !std::isfinite(viol)) throw Error("oracle returned non-finite value");
    return fx + viol / epsilon;
}

double ResidualBoundAudit::worst_margin() const {
    double wm = lagrangian.lhs - lagrangian.rhs;
    wm = std::max(wm, feasibility.lhs - feasibility.rhs);
    wm = std::max(wm, complementarity.lhs - complementarity.rhs);
    return wm;
}

ResidualBoundAudit residual_bounds(const DirectionResult& dr, const ProblemInstance& p,
                          const ProblemConstants& constants) {
    if (!constants.bound_coefs_present()) throw Error("residual_bounds: missing constants");
    ResidualBoundAudit out;
    const Vec& x = dr.base_x;
    const Vec gf = p.grad_f(x);
    const Vec gv = p.g(x);
    const Mat J = p.jac_g(x);

    Vec lag = gf;
    for (int i = 0; i < p.m; ++i)
        for (int j = 0; j < p.n; ++j) lag[j] += J(j, i) * dr.xi[i];
    out.lagrangian.lhs = nrm2(lag);
    out.feasibility.lhs = p.max_g_plus(x);
    for (int i = 0; i < p.m; ++i)
        out.complementarity.lhs = std::max(out.complementarity.lhs, std::fabs(gv[i] * dr.xi[i]));

    const double nd = dr.d_norm;
    out.lagrangian.rhs = constants.bound_coef_lagrangian() * nd;
    out.feasibility.rhs = constants.bound_coef_feasibility() * nd;
    out.complementarity.rhs = constants.bound_coef_complementarity() * nd;
    out.b_value = constants.b.get("b");
    out.b_norm_d = out.b_value * nd;
    out.advisory = !(constants.M.analytic() && constants.a.analytic() &&
                     constants.L_tilde_g.analytic() && constants.L_grad_tilde_f.analytic() &&
                     constants.L_grad_tilde_g.analytic());
    return out;
}

const char* to_string(Classification c) {
    switch (c) {
        case Classification::KKT: return "KKT";
        case Classification::FJ: return "FJ";
        case Classification::ES: return "ES";
        case Classification::none: return "none";
    }
    return "?";
}

double simplex_gradient_residual(const ProblemInstance& p, const Vec& x,
                                 const std::vector<int>& support) {
    const int k = static_cast<int>(support.size());
    if (k == 0) throw Error("simplex_gradient_residual: empty support");
    const Mat J = p.jac_g(x);
    Mat G(p.n, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < p.n; ++j) G(j, i) = J(j, support[i]);

    // minimize ||G z||^2 over the unit simplex: tiny ridge-regularized QP with
    // nonnegativity rows and the two halves of the sum-to-one equality
    const double ridge = 1e-8;
    QpProblem qp;
    qp.H = Mat(k, k, 0.0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            double s = 0.0;
            for (int r = 0; r < p.n; ++r) s += G(r, i) * G(r, j);
            qp.H(i, j) = s + (i == j ? ridge : 0.0);
        }
    qp.q = Vec(k, 0.0);
    qp.rows = Mat(k + 2, k, 0.0);
    qp.rhs = Vec(k + 2, 0.0);
    for (int i = 0; i < k; ++i) qp.rows(i, i) = -1.0;  // z_i >= 0
    for (int i = 0; i < k; ++i) {
        qp.rows(k, i) = 1.0;       // sum z <= 1
        qp.rows(k + 1, i) = -1.0;  // sum z >= 1
    }
    qp.rhs[k] = 1.0;
    qp.rhs[k + 1] = -1.0;
    qp.beta = 2.0;
    qp.c = ridge;
    qp.start = Vec(k, 1.0 / k);
    const KernelSolution sol = solve_qp(qp);
    if (sol.status != KernelStatus::optimal)
        throw KernelError("simplex residual subproblem failed");
    return nrm2(matvec(G, sol.point));
}

StationarityReport classify_point(const ProblemInstance& p, const Vec& x,
                                  const DirectionResult& dr, const ClassifyTolerances& tol) {
    StationarityReport rep;
    rep.tol = tol;

    const Vec gf = p.grad_f(x);
    const Vec gv = p.g(x);
    const Mat J = p.jac_g(x);
    rep.feasibility_residual = p.max_g_plus(x);
    Vec lag = gf;
    for (int i = 0; i < p.m; ++i)
        for (int j = 0; j < p.n; ++j) lag[j] += J(j, i) * dr.xi[i];
    rep.lagrangian_residual = nrm2(lag);
    for (int i = 0; i < p.m; ++i)
        rep.complementarity_residual =
            std::max(rep.complementarity_residual, std::fabs(gv[i] * dr.xi[i]));

    const double act = tol.act_scale * (1.0 + rep.feasibility_residual);
    std::vector<int> support;
    if (rep.feasibility_residual > tol.feas) {
        for (int i = 0; i < p.m; ++i)
            if (gv[i] >= rep.feasibility_residual - act) support.push_back(i);
    } else {
        for (int i = 0; i < p.m; ++i)
            if (gv[i] >= -act) support.push_back(i);
    }
    if (!support.empty())
        rep.feasibility_stationarity = simplex_gradient_residual(p, x, support);

    if (rep.feasibility_residual <= tol.feas && rep.lagrangian_residual <= tol.stat &&
        rep.complementarity_residual <= tol.comp) {
        rep.classification = Classification::KKT;
    } else if (rep.feasibility_residual > tol.feas) {
        rep.classification = (rep.feasibility_stationarity &&
                              *rep.feasibility_stationarity <= tol.stat)
                                 ? Classification::ES
                                 : Classification::none;
    } else {
        rep.classification = (rep.feasibility_stationarity &&
                              *rep.feasibility_stationarity <= tol.stat)
                                 ? Classification::FJ
                                 : Classification::none;
    }
    return rep;
}

}  // namespace gsqp
