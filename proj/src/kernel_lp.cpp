#include <algorithm>
#include <cmath>
#include <limits>

#include "gsqp/kernel.hpp"

namespace gsqp {

const char* to_string(KernelStatus s) {
    switch (s) {
        case KernelStatus::optimal: return "optimal";
        case KernelStatus::max_iter: return "max_iter";
        case KernelStatus::infeasible: return "infeasible";
    }
    return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-10;

// Bounded-variable primal simplex over the equality form
//   [A I | artificials] z = b,  l <= z <= u,
// with Bland's smallest-index rule for entering and leaving variables.
struct Simplex {
    int nr = 0;     // rows
    int ncols = 0;  // structurals + slacks + artificials
    Mat cols;       // nr x ncols
    Vec lo, up;
    Vec cost;
    std::vector<int> basis;  // row -> column
    std::vector<int> state;  // column: -1 at lower, +1 at upper, 0 basic
    Vec xval;
    int iterations = 0;

    Vec solve_basis(Vec rhs) const {
        Mat B(nr, nr);
        for (int i = 0; i < nr; ++i)
            for (int r = 0; r < nr; ++r) B(r, i) = cols(r, basis[i]);
        return lu_solve(B, std::move(rhs));
    }
    Vec solve_basis_t(Vec rhs) const {
        Mat Bt(nr, nr);
        for (int i = 0; i < nr; ++i)
            for (int r = 0; r < nr; ++r) Bt(i, r) = cols(r, basis[i]);
        return lu_solve(Bt, std::move(rhs));
    }

    bool run(int max_iter) {
        for (; iterations < max_iter; ++iterations) {
            Vec cb(nr);
            for (int i = 0; i < nr; ++i) cb[i] = cost[basis[i]];
            const Vec y = solve_basis_t(cb);

            int enter = -1;
            int dir = 0;
            for (int j = 0; j < ncols; ++j) {
                if (state[j] == 0 || lo[j] == up[j]) continue;
                double rc = cost[j];
                for (int r = 0; r < nr; ++r) rc -= y[r] * cols(r, j);
                if (state[j] < 0 && rc < -kTol) {
                    enter = j;
                    dir = +1;
                    break;  // Bland: first eligible index
                }
                if (state[j] > 0 && rc > kTol) {
                    enter = j;
                    dir = -1;
                    break;
                }
            }
            if (enter < 0) return true;

            const Vec w = solve_basis(cols.col(enter));
            // entering moves by t >= 0 toward its other bound; basic i changes by -dir*t*w[i]
            double tmax = up[enter] - lo[enter];
            int leave = -1;
            for (int i = 0; i < nr; ++i) {
                const double wi = dir * w[i];
                const int bj = basis[i];
                double lim = kInf;
                if (wi > kTol)
                    lim = std::max(0.0, (xval[bj] - lo[bj]) / wi);
                else if (wi < -kTol && up[bj] < kInf)
                    lim = std::max(0.0, (up[bj] - xval[bj]) / (-wi));
                if (lim == kInf) continue;
                const double tie = 1e-12 * (1.0 + (std::isfinite(tmax) ? std::fabs(tmax) : 0.0));
                if (lim < tmax - tie) {
                    tmax = lim;
                    leave = i;
                } else if (lim <= tmax + tie && leave >= 0 && bj < basis[leave]) {
                    leave = i;
                    tmax = std::min(tmax, lim);
                }
            }
            if (!(tmax < kInf)) throw KernelError("lp: unbounded direction");
            const double t = std::max(tmax, 0.0);

            for (int i = 0; i < nr; ++i) xval[basis[i]] -= dir * t * w[i];
            xval[enter] = (state[enter] < 0 ? lo[enter] : up[enter]) + dir * t;

            if (leave < 0) {
                state[enter] = -state[enter];  // bound flip
            } else {
                const int bj = basis[leave];
                const double wl = dir * w[leave];
                state[bj] = wl > 0 ? -1 : +1;
                xval[bj] = wl > 0 ? lo[bj] : up[bj];
                basis[leave] = enter;
                state[enter] = 0;
            }
        }
        return false;
    }
};

}  // namespace

KernelSolution solve_lp(const LpProblem& lp) {
    const int nv = static_cast<int>(lp.cost.size());
    const int nr = lp.A.rows;
    if (lp.A.cols != nv || static_cast<int>(lp.b.size()) != nr ||
        static_cast<int>(lp.lo.size()) != nv || static_cast<int>(lp.hi.size()) != nv)
        throw KernelError("lp: dimension mismatch");
    for (int j = 0; j < nv; ++j) {
        if (!std::isfinite(lp.lo[j]) || !std::isfinite(lp.hi[j]) || lp.lo[j] > lp.hi[j])
            throw KernelError("lp: every variable needs finite, ordered bounds");
    }

    Simplex s;
    s.nr = nr;
    s.ncols = nv + 2 * nr;
    s.cols = Mat(nr, s.ncols, 0.0);
    for (int r = 0; r < nr; ++r)
        for (int j = 0; j < nv; ++j) s.cols(r, j) = lp.A(r, j);
    for (int r = 0; r < nr; ++r) s.cols(r, nv + r) = 1.0;  // slack
    s.lo = Vec(s.ncols, 0.0);
    s.up = Vec(s.ncols, kInf);
    for (int j = 0; j < nv; ++j) {
        s.lo[j] = lp.lo[j];
        s.up[j] = lp.hi[j];
    }
    s.state.assign(s.ncols, -1);
    s.xval.assign(s.ncols, 0.0);
    for (int j = 0; j < nv; ++j) s.xval[j] = lp.lo[j];

    // initial basis: the slack where the row residual is nonnegative, else an
    // artificial with coefficient -1 so its starting value is positive
    s.basis.assign(nr, -1);
    Vec resid = lp.b;
    for (int r = 0; r < nr; ++r)
        for (int j = 0; j < nv; ++j) resid[r] -= lp.A(r, j) * s.xval[j];
    bool need_phase1 = false;
    for (int r = 0; r < nr; ++r) {
        const int art = nv + nr + r;
        if (resid[r] >= 0.0) {
            s.basis[r] = nv + r;
            s.state[nv + r] = 0;
            s.xval[nv + r] = resid[r];
            s.lo[art] = s.up[art] = 0.0;
        } else {
            s.cols(r, art) = -1.0;
            s.basis[r] = art;
            s.state[art] = 0;
            s.xval[art] = -resid[r];
            need_phase1 = true;
        }
    }

    const int max_iter = 2000 + 200 * (nv + nr);
    KernelSolution out;

    if (need_phase1) {
        s.cost.assign(s.ncols, 0.0);
        for (int r = 0; r < nr; ++r) s.cost[nv + nr + r] = 1.0;
        if (!s.run(max_iter)) {
            out.status = KernelStatus::max_iter;
            out.iterations = s.iterations;
            return out;
        }
        double infeas = 0.0;
        for (int r = 0; r < nr; ++r) infeas += s.xval[nv + nr + r];
        if (infeas > 1e-8) {
            out.status = KernelStatus::infeasible;
            out.iterations = s.iterations;
            return out;
        }
        for (int r = 0; r < nr; ++r) {
            const int art = nv + nr + r;
            s.lo[art] = s.up[art] = 0.0;
            if (s.state[art] != 0) s.xval[art] = 0.0;
        }
    }

    s.cost.assign(s.ncols, 0.0);
    for (int j = 0; j < nv; ++j) s.cost[j] = lp.cost[j];
    if (!s.run(max_iter)) {
        out.status = KernelStatus::max_iter;
        out.iterations = s.iterations;
        return out;
    }

    out.status = KernelStatus::optimal;
    out.iterations = s.iterations;
    out.point = Vec(s.xval.begin(), s.xval.begin() + nv);
    out.objective = dot(lp.cost, out.point);

    // row duals lambda = -y, y from B^T y = c_B; tiny negative noise clamped
    Vec cb(nr);
    for (int i = 0; i < nr; ++i) cb[i] = s.cost[s.basis[i]];
    const Vec y = s.solve_basis_t(cb);
    out.duals.assign(nr, 0.0);
    for (int r = 0; r < nr; ++r) {
        const double lam = -y[r];
        out.duals[r] = (lam < 0.0 && lam > -1e-9) ? 0.0 : lam;
    }
    return out;
}

double lp_duality_gap(const LpProblem& lp, const KernelSolution& sol) {
    // dual objective -b^T lambda + sum_j (lo_j nu_lo_j - hi_j nu_up_j), with
    // bound duals recovered from the reduced costs c + A^T lambda
    const int nv = static_cast<int>(lp.cost.size());
    Vec rc = lp.cost;
    for (int r = 0; r < lp.A.rows; ++r)
        for (int j = 0; j < nv; ++j) rc[j] += sol.duals[r] * lp.A(r, j);
    double dualobj = -dot(lp.b, sol.duals);
    for (int j = 0; j < nv; ++j) {
        if (rc[j] > 0.0)
            dualobj += lp.lo[j] * rc[j];
        else
            dualobj += lp.hi[j] * rc[j];
    }
    return std::fabs(sol.objective - dualobj);
}

}  // namespace gsqp
