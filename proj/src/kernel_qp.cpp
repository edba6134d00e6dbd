#include <algorithm>
#include <cmath>

#include "gsqp/kernel.hpp"

namespace gsqp {

namespace {

// Expanded row system: the caller's inequality rows first, then the 2n box
// faces d_j <= beta and -d_j <= beta.
struct ExpandedRows {
    Mat A;
    Vec r;
    int nr = 0;  // caller rows
    int n = 0;
};

ExpandedRows expand(const QpProblem& qp) {
    const int n = qp.H.rows;
    const int nr = qp.rows.rows;
    ExpandedRows e;
    e.nr = nr;
    e.n = n;
    e.A = Mat(nr + 2 * n, n, 0.0);
    e.r = Vec(nr + 2 * n, qp.beta);
    for (int k = 0; k < nr; ++k) {
        for (int j = 0; j < n; ++j) e.A(k, j) = qp.rows(k, j);
        e.r[k] = qp.rhs[k];
    }
    for (int j = 0; j < n; ++j) {
        e.A(nr + 2 * j, j) = 1.0;
        e.A(nr + 2 * j + 1, j) = -1.0;
    }
    return e;
}

Vec find_feasible_start(const QpProblem& qp, const ExpandedRows& e, KernelSolution& out) {
    if (qp.start && qp_primal_infeasibility(qp, *qp.start) <= 1e-9) return *qp.start;
    // phase-1 LP: minimize t s.t. a_k^T d - t <= r_k, |d| <= beta, 0 <= t
    const int n = e.n;
    LpProblem lp;
    lp.cost = Vec(n + 1, 0.0);
    lp.cost[n] = 1.0;
    lp.A = Mat(e.nr, n + 1);
    lp.b = Vec(e.nr);
    double tup = 1.0;
    for (int k = 0; k < e.nr; ++k) {
        for (int j = 0; j < n; ++j) lp.A(k, j) = e.A(k, j);
        lp.A(k, n) = -1.0;
        lp.b[k] = e.r[k];
        tup = std::max(tup, -e.r[k] + 1.0);
    }
    lp.lo = Vec(n + 1, -qp.beta);
    lp.hi = Vec(n + 1, qp.beta);
    lp.lo[n] = 0.0;
    lp.hi[n] = tup;
    const KernelSolution ls = solve_lp(lp);
    if (ls.status != KernelStatus::optimal || ls.point[n] > 1e-9) {
        out.status = KernelStatus::infeasible;
        return {};
    }
    return Vec(ls.point.begin(), ls.point.begin() + n);
}

}  // namespace

double qp_primal_infeasibility(const QpProblem& qp, const Vec& d) {
    double v = 0.0;
    for (int k = 0; k < qp.rows.rows; ++k) v = std::max(v, dot(qp.rows.row(k), d) - qp.rhs[k]);
    for (double dj : d) v = std::max(v, std::fabs(dj) - qp.beta);
    return v;
}

KernelSolution solve_qp(const QpProblem& qp) {
    const int n = qp.H.rows;
    if (qp.H.cols != n || static_cast<int>(qp.q.size()) != n || qp.rows.cols != n ||
        static_cast<int>(qp.rhs.size()) != qp.rows.rows)
        throw KernelError("qp: dimension mismatch");

    KernelSolution out;
    out.duals.assign(qp.rows.rows, 0.0);

    // positive definiteness at the claimed modulus (eigenvalues >= c - 1e-10)
    Mat L;
    {
        Mat shifted = qp.H;
        const double shift = std::max(0.0, qp.c - 1e-10);
        for (int j = 0; j < n; ++j) shifted(j, j) -= shift;
        Mat Ltmp;
        if (!cholesky(shifted, Ltmp))
            throw KernelError("qp: quadratic term not positive definite at modulus c");
    }
    if (!cholesky(qp.H, L)) throw KernelError("qp: quadratic term not positive definite");

    const ExpandedRows e = expand(qp);
    Vec d = find_feasible_start(qp, e, out);
    if (out.status == KernelStatus::infeasible) return out;

    const int nrows = e.A.rows;
    std::vector<int> W;
    Vec mults;
    const int max_iter = 100 * (nrows + 1);

    int it = 0;
    for (; it < max_iter; ++it) {
        // equality-constrained step: H p + grad + A_W^T mu = 0, A_W p = resid_W
        const Vec grad = add_scaled(qp.q, 1.0, matvec(qp.H, d));
        const int nw = static_cast<int>(W.size());
        Vec p(n, 0.0);
        mults.assign(nw, 0.0);
        if (nw == 0) {
            const Vec hg = cholesky_solve(L, grad);
            for (int j = 0; j < n; ++j) p[j] = -hg[j];
        } else {
            Mat Aw(nw, n);
            Vec resid(nw);
            for (int i = 0; i < nw; ++i) {
                for (int j = 0; j < n; ++j) Aw(i, j) = e.A(W[i], j);
                resid[i] = e.r[W[i]] - dot(e.A.row(W[i]), d);
            }
            const Vec Hig = cholesky_solve(L, grad);
            std::vector<Vec> HiA(nw);
            for (int i = 0; i < nw; ++i) HiA[i] = cholesky_solve(L, Aw.row(i));
            Mat S(nw, nw);
            for (int i = 0; i < nw; ++i)
                for (int k = 0; k < nw; ++k) S(i, k) = dot(Aw.row(i), HiA[k]);
            Vec rhs(nw);
            for (int i = 0; i < nw; ++i) rhs[i] = -(dot(Aw.row(i), Hig) + resid[i]);
            mults = lstsq_min_norm(S, rhs);  // min-norm handles dependent active rows
            Vec t = grad;
            for (int i = 0; i < nw; ++i)
                for (int j = 0; j < n; ++j) t[j] += mults[i] * Aw(i, j);
            const Vec Hit = cholesky_solve(L, t);
            for (int j = 0; j < n; ++j) p[j] = -Hit[j];
        }

        if (nrminf(p) <= 1e-11 * (1.0 + nrminf(d))) {
            int drop = -1;
            double most = -1e-11;
            for (int i = 0; i < nw; ++i) {
                if (mults[i] < most) {
                    most = mults[i];
                    drop = i;
                }
            }
            if (drop < 0) break;  // optimal
            W.erase(W.begin() + drop);
            continue;
        }

        double alpha = 1.0;
        int blocking = -1;
        for (int k = 0; k < nrows; ++k) {
            if (std::find(W.begin(), W.end(), k) != W.end()) continue;
            const double ap = dot(e.A.row(k), p);
            if (ap <= 1e-13) continue;
            const double slack = e.r[k] - dot(e.A.row(k), d);
            const double ak = std::max(0.0, slack) / ap;
            if (ak < alpha - 1e-15) {
                alpha = ak;
                blocking = k;
            }
        }
        for (int j = 0; j < n; ++j) d[j] += alpha * p[j];
        if (blocking >= 0) W.push_back(blocking);
    }

    out.iterations = it;
    out.point = d;
    out.objective = 0.5 * dot(d, matvec(qp.H, d)) + dot(qp.q, d);
    if (it >= max_iter) {
        out.status = KernelStatus::max_iter;
        return out;
    }

    // canonical duals: minimal-norm nonnegative least squares on the rows
    // active at the solution; a tiny ridge selects the least-norm multiplier
    // when the active gradients are dependent
    const Vec grad = add_scaled(qp.q, 1.0, matvec(qp.H, d));
    std::vector<int> act;
    for (int k = 0; k < nrows; ++k) {
        const double slack = e.r[k] - dot(e.A.row(k), d);
        if (slack <= 1e-9 * (1.0 + std::fabs(e.r[k]))) act.push_back(k);
    }
    if (!act.empty()) {
        const int na = static_cast<int>(act.size());
        const double ridge = 1e-6;
        Mat As(n + na, na, 0.0);
        Vec bs(n + na, 0.0);
        for (int i = 0; i < na; ++i)
            for (int j = 0; j < n; ++j) As(j, i) = e.A(act[i], j);
        for (int i = 0; i < na; ++i) As(n + i, i) = ridge;
        for (int j = 0; j < n; ++j) bs[j] = -grad[j];
        const Vec mu = nnls(As, bs);
        for (int i = 0; i < na; ++i)
            if (act[i] < e.nr) out.duals[act[i]] = mu[i];
    }

    out.status = KernelStatus::optimal;
    return out;
}

double qp_kkt_residual(const QpProblem& qp, const KernelSolution& sol) {
    const int n = qp.H.rows;
    Vec r = add_scaled(qp.q, 1.0, matvec(qp.H, sol.point));
    for (int k = 0; k < qp.rows.rows; ++k)
        for (int j = 0; j < n; ++j) r[j] += sol.duals[k] * qp.rows(k, j);
    // reduce by the normal cone of the box: at an active face the residual may
    // point into the cone, elsewhere it must vanish
    double worst = 0.0;
    const double tolb = 1e-9 * (1.0 + qp.beta);
    for (int j = 0; j < n; ++j) {
        const double dj = sol.point[j];
        if (dj >= qp.beta - tolb)
            worst = std::max(worst, std::max(0.0, r[j]));
        else if (dj <= -qp.beta + tolb)
            worst = std::max(worst, std::max(0.0, -r[j]));
        else
            worst = std::max(worst, std::fabs(r[j]));
    }
    return worst;
}

}  // namespace gsqp
