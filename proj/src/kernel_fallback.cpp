#include <algorithm>
#include <cmath>

#include "gsqp/kernel.hpp"

namespace gsqp {

KernelSolution solve_convex_fallback(int dim, const ConvexOracle& objective,
                                     const std::vector<ConvexOracle>& constraints,
                                     const Vec& constraint_rhs, double box_radius,
                                     double strong_convexity, double tol, int max_iter) {
    const size_t m = constraints.size();
    if (constraint_rhs.size() != m) throw KernelError("fallback: rhs size mismatch");

    KernelSolution out;
    out.duals.assign(m, 0.0);

    auto project = [box_radius](Vec& x) {
        for (double& v : x) v = std::clamp(v, -box_radius, box_radius);
    };
    auto violation = [&](const Vec& x) {
        double v = 0.0;
        for (size_t i = 0; i < m; ++i) v = std::max(v, constraints[i].value(x) - constraint_rhs[i]);
        return v;
    };
    auto penalized = [&](const Vec& x, double P) {
        double s = objective.value(x);
        for (size_t i = 0; i < m; ++i) s += P * std::max(0.0, constraints[i].value(x) - constraint_rhs[i]);
        return s;
    };

    Vec x(dim, 0.0);
    double P = 10.0;
    Vec best = x;
    double best_val = penalized(x, P);
    int used = 0;

    for (int attempt = 0; attempt < 5; ++attempt) {
        x = best;
        best_val = penalized(x, P);
        const int iters = std::max(1000, max_iter / 5);
        for (int k = 0; k < iters && used < max_iter; ++k, ++used) {
            Vec sg = objective.subgrad(x);
            for (size_t i = 0; i < m; ++i) {
                if (constraints[i].value(x) - constraint_rhs[i] > 0.0) {
                    const Vec ci = constraints[i].subgrad(x);
                    for (size_t j = 0; j < sg.size(); ++j) sg[j] += P * ci[j];
                }
            }
            const double step = 2.0 / (strong_convexity * (k + 2.0));
            for (size_t j = 0; j < x.size(); ++j) x[j] -= step * sg[j];
            project(x);
            const double v = penalized(x, P);
            if (v < best_val) {
                best_val = v;
                best = x;
            }
        }
        if (violation(best) <= std::max(1e-10, 0.01 * tol)) break;
        P *= 10.0;  // penalty too weak; the returned point must honor the rows
    }

    out.point = best;
    out.objective = objective.value(best);
    out.status = violation(best) <= std::max(1e-8, tol) ? KernelStatus::optimal : KernelStatus::max_iter;
    out.iterations = used;

    // multipliers by least squares on near-active rows
    if (m > 0) {
        const Vec g = objective.subgrad(best);
        std::vector<int> act;
        for (size_t i = 0; i < m; ++i) {
            const double slack = constraint_rhs[i] - constraints[i].value(best);
            if (slack <= 1e-6 * (1.0 + std::fabs(constraint_rhs[i]))) act.push_back(static_cast<int>(i));
        }
        if (!act.empty()) {
            const int n = static_cast<int>(best.size());
            const int na = static_cast<int>(act.size());
            Mat A(n + na, na, 0.0);
            Vec b(n + na, 0.0);
            for (int i = 0; i < na; ++i) {
                const Vec ci = constraints[act[i]].subgrad(best);
                for (int j = 0; j < n; ++j) A(j, i) = ci[j];
                A(n + i, i) = 1e-6;
            }
            for (int j = 0; j < n; ++j) b[j] = -g[j];
            const Vec mu = nnls(A, b);
            for (int i = 0; i < na; ++i) out.duals[act[i]] = mu[i];
        }
    }
    return out;
}

}  // namespace gsqp
