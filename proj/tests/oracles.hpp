#pragma once

// Test-only oracles, kept independent of the solver path they check:
// a feasibility-filtered grid sweep, a closed-form candidate enumeration for
// 1-D/2-D quadratic programs, and a portable deterministic RNG.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "gsqp/kernel.hpp"

namespace testing_oracles {

using gsqp::Mat;
using gsqp::QpProblem;
using gsqp::Vec;

inline double qp_objective(const QpProblem& qp, const Vec& d) {
    double v = gsqp::dot(qp.q, d);
    for (int i = 0; i < qp.H.rows; ++i)
        for (int j = 0; j < qp.H.cols; ++j) v += 0.5 * d[i] * qp.H(i, j) * d[j];
    return v;
}

inline bool qp_feasible(const QpProblem& qp, const Vec& d, double tol = 1e-9) {
    return gsqp::qp_primal_infeasibility(qp, d) <= tol;
}

/// Plain grid sweep with step h over the box, feasible points only.
inline double qp_grid_min(const QpProblem& qp, double h) {
    const int n = qp.H.rows;
    double best = std::numeric_limits<double>::infinity();
    if (n == 1) {
        for (double d0 = -qp.beta; d0 <= qp.beta + 1e-15; d0 += h) {
            const Vec d{d0};
            if (qp_feasible(qp, d, 1e-12)) best = std::min(best, qp_objective(qp, d));
        }
    } else if (n == 2) {
        for (double d0 = -qp.beta; d0 <= qp.beta + 1e-15; d0 += h) {
            for (double d1 = -qp.beta; d1 <= qp.beta + 1e-15; d1 += h) {
                const Vec d{d0, d1};
                if (qp_feasible(qp, d, 1e-12)) best = std::min(best, qp_objective(qp, d));
            }
        }
    }
    return best;
}

/// Exhaustive stationary-candidate enumeration for n <= 2: unconstrained
/// minimum, per-row restricted minima, and all pairwise row intersections
/// (box faces included). Exact up to rounding.
inline double qp_enum_min(const QpProblem& qp) {
    const int n = qp.H.rows;
    std::vector<Vec> rows;
    Vec rhs;
    for (int k = 0; k < qp.rows.rows; ++k) {
        rows.push_back(qp.rows.row(k));
        rhs.push_back(qp.rhs[k]);
    }
    for (int j = 0; j < n; ++j) {
        Vec e(n, 0.0);
        e[j] = 1.0;
        rows.push_back(e);
        rhs.push_back(qp.beta);
        Vec me(n, 0.0);
        me[j] = -1.0;
        rows.push_back(me);
        rhs.push_back(qp.beta);
    }

    std::vector<Vec> cands;
    // unconstrained minimum: H d = -q
    {
        Mat H = qp.H;
        Vec mq(n);
        for (int j = 0; j < n; ++j) mq[j] = -qp.q[j];
        cands.push_back(gsqp::lu_solve(H, mq));
    }
    const int K = static_cast<int>(rows.size());
    if (n == 1) {
        for (int k = 0; k < K; ++k)
            if (std::fabs(rows[k][0]) > 1e-14) cands.push_back(Vec{rhs[k] / rows[k][0]});
    } else if (n == 2) {
        // minimum of the quadratic restricted to each row's boundary line
        for (int k = 0; k < K; ++k) {
            const Vec& a = rows[k];
            const double na = std::hypot(a[0], a[1]);
            if (na < 1e-14) continue;
            const Vec p{a[0] * rhs[k] / (na * na), a[1] * rhs[k] / (na * na)};
            const Vec v{-a[1] / na, a[0] / na};
            const Vec Hp = gsqp::matvec(qp.H, p);
            const Vec Hv = gsqp::matvec(qp.H, v);
            const double denom = gsqp::dot(v, Hv);
            if (std::fabs(denom) < 1e-300) continue;
            const double t = -(gsqp::dot(qp.q, v) + gsqp::dot(Hp, v)) / denom;
            cands.push_back(Vec{p[0] + t * v[0], p[1] + t * v[1]});
        }
        // vertices
        for (int k1 = 0; k1 < K; ++k1) {
            for (int k2 = k1 + 1; k2 < K; ++k2) {
                const double det = rows[k1][0] * rows[k2][1] - rows[k1][1] * rows[k2][0];
                if (std::fabs(det) < 1e-12) continue;
                cands.push_back(Vec{(rhs[k1] * rows[k2][1] - rows[k1][1] * rhs[k2]) / det,
                                    (rows[k1][0] * rhs[k2] - rhs[k1] * rows[k2][0]) / det});
            }
        }
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& d : cands)
        if (qp_feasible(qp, d, 1e-9)) best = std::min(best, qp_objective(qp, d));
    return best;
}

/// Grid oracle for the inner min-max value over the rho-box (quadlin model).
inline double kappa_inner_grid(const Vec& g0, const Mat& jac, double rho, double h) {
    const int n = jac.rows;
    const int m = jac.cols;
    auto val = [&](const Vec& d) {
        double v = 0.0;
        for (int i = 0; i < m; ++i) {
            double gi = g0[i];
            for (int j = 0; j < n; ++j) gi += jac(j, i) * d[j];
            v = std::max(v, gi);
        }
        return std::max(v, 0.0);
    };
    double best = std::numeric_limits<double>::infinity();
    if (n == 1) {
        for (double d0 = -rho; d0 <= rho + 1e-15; d0 += h) best = std::min(best, val(Vec{d0}));
    } else {
        for (double d0 = -rho; d0 <= rho + 1e-15; d0 += h)
            for (double d1 = -rho; d1 <= rho + 1e-15; d1 += h)
                best = std::min(best, val(Vec{d0, d1}));
    }
    return best;
}

/// splitmix64-based uniform doubles: portable across standard libraries.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) {
        const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }
    int pick(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }
};

}  // namespace testing_oracles
