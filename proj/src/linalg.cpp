#include "gsqp/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace gsqp {

double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double nrm2(const Vec& x) { return std::sqrt(dot(x, x)); }

double nrminf(const Vec& x) {
    double s = 0.0;
    for (double v : x) s = std::max(s, std::fabs(v));
    return s;
}

Vec add_scaled(const Vec& x, double alpha, const Vec& y) {
    Vec r = x;
    for (size_t i = 0; i < r.size(); ++i) r[i] += alpha * y[i];
    return r;
}

Vec matvec(const Mat& A, const Vec& x) {
    Vec r(A.rows, 0.0);
    for (int i = 0; i < A.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < A.cols; ++j) s += A(i, j) * x[j];
        r[i] = s;
    }
    return r;
}

Vec mat_tvec(const Mat& A, const Vec& x) {
    Vec r(A.cols, 0.0);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) r[j] += A(i, j) * x[i];
    return r;
}

Vec lu_solve(Mat A, Vec b) {
    const int n = A.rows;
    if (A.cols != n || static_cast<int>(b.size()) != n) throw Error("lu_solve: dimension mismatch");
    std::vector<int> piv(n);
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(A(i, k)) > std::fabs(A(p, k))) p = i;
        if (std::fabs(A(p, k)) < 1e-300) throw Error("lu_solve: singular matrix");
        piv[k] = p;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
            std::swap(b[k], b[p]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = A(i, k) / A(k, k);
            A(i, k) = f;
            for (int j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
            b[i] -= f * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A(i, j) * b[j];
        b[i] = s / A(i, i);
    }
    return b;
}

bool cholesky(const Mat& A, Mat& L) {
    const int n = A.rows;
    if (A.cols != n) return false;
    L = Mat(n, n, 0.0);
    for (int j = 0; j < n; ++j) {
        double d = A(j, j);
        for (int k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
        if (d <= 0.0 || !std::isfinite(d)) return false;
        L(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            L(i, j) = s / L(j, j);
        }
    }
    return true;
}

Vec cholesky_solve(const Mat& L, Vec b) {
    const int n = L.rows;
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= L(i, k) * b[k];
        b[i] = s / L(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= L(k, i) * b[k];
        b[i] = s / L(i, i);
    }
    return b;
}

Vec lstsq_min_norm(const Mat& A, const Vec& b, double rank_tol) {
    const int m = A.rows, n = A.cols;
    // One-sided Jacobi: orthogonalize the columns of U (copy of A), accumulate V.
    Mat U = A;
    Mat V(n, n, 0.0);
    for (int j = 0; j < n; ++j) V(j, j) = 1.0;

    auto coldot = [&](const Mat& M, int p, int q) {
        double s = 0.0;
        for (int i = 0; i < M.rows; ++i) s += M(i, p) * M(i, q);
        return s;
    };

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double app = coldot(U, p, p);
                const double aqq = coldot(U, q, q);
                const double apq = coldot(U, p, q);
                off = std::max(off, std::fabs(apq) / std::max(1e-300, std::sqrt(app * aqq)));
                if (std::fabs(apq) < 1e-30) continue;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (int i = 0; i < m; ++i) {
                    const double up = U(i, p), uq = U(i, q);
                    U(i, p) = cs * up - sn * uq;
                    U(i, q) = sn * up + cs * uq;
                }
                for (int i = 0; i < n; ++i) {
                    const double vp = V(i, p), vq = V(i, q);
                    V(i, p) = cs * vp - sn * vq;
                    V(i, q) = sn * vp + cs * vq;
                }
            }
        }
        if (off < 1e-14) break;
    }

    Vec sigma(n, 0.0);
    double smax = 0.0;
    for (int j = 0; j < n; ++j) {
        sigma[j] = std::sqrt(std::max(0.0, coldot(U, j, j)));
        smax = std::max(smax, sigma[j]);
    }
    // x = V diag(1/sigma) U^T b over the numerical range.
    Vec x(n, 0.0);
    for (int j = 0; j < n; ++j) {
        if (sigma[j] <= rank_tol * std::max(smax, 1e-300)) continue;
        double utb = 0.0;
        for (int i = 0; i < m; ++i) utb += (U(i, j) / sigma[j]) * b[i];
        const double coef = utb / sigma[j];
        for (int i = 0; i < n; ++i) x[i] += coef * V(i, j);
    }
    return x;
}

Vec nnls(const Mat& A, const Vec& b, double tol) {
    const int n = A.cols;
    Vec x(n, 0.0);
    std::vector<bool> passive(n, false);
    int npassive = 0;
    const int max_outer = 3 * n + 12;

    auto residual = [&]() {
        Vec r = b;
        for (int i = 0; i < A.rows; ++i)
            for (int j = 0; j < n; ++j) r[i] -= A(i, j) * x[j];
        return r;
    };
    auto solve_passive = [&]() {
        // least squares restricted to passive columns; zeros elsewhere
        Mat Ap(A.rows, npassive);
        std::vector<int> idx;
        idx.reserve(npassive);
        for (int j = 0; j < n; ++j)
            if (passive[j]) idx.push_back(j);
        for (int i = 0; i < A.rows; ++i)
            for (size_t k = 0; k < idx.size(); ++k) Ap(i, static_cast<int>(k)) = A(i, idx[k]);
        Vec z = lstsq_min_norm(Ap, b);
        Vec full(n, 0.0);
        for (size_t k = 0; k < idx.size(); ++k) full[idx[k]] = z[k];
        return full;
    };

    for (int outer = 0; outer < max_outer; ++outer) {
        Vec w = mat_tvec(A, residual());
        int t = -1;
        double wmax = tol * (1.0 + nrminf(b));
        for (int j = 0; j < n; ++j) {
            if (!passive[j] && w[j] > wmax) {
                wmax = w[j];
                t = j;
            }
        }
        if (t < 0 || npassive == n) break;
        passive[t] = true;
        ++npassive;

        for (int inner = 0; inner < max_outer; ++inner) {
            Vec z = solve_passive();
            double zmin = 0.0;
            for (int j = 0; j < n; ++j)
                if (passive[j]) zmin = std::min(zmin, z[j]);
            if (zmin > -tol) {
                x = z;
                for (int j = 0; j < n; ++j)
                    if (x[j] < 0.0) x[j] = 0.0;
                break;
            }
            double alpha = 1.0;
            for (int j = 0; j < n; ++j) {
                if (passive[j] && z[j] <= 0.0) {
                    const double denom = x[j] - z[j];
                    if (denom > 1e-300) alpha = std::min(alpha, x[j] / denom);
                }
            }
            for (int j = 0; j < n; ++j)
                if (passive[j]) x[j] += alpha * (z[j] - x[j]);
            for (int j = 0; j < n; ++j) {
                if (passive[j] && x[j] <= tol) {
                    x[j] = 0.0;
                    passive[j] = false;
                    --npassive;
                }
            }
        }
    }
    return x;
}

Vec halton_point(unsigned long long index, int dim) {
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (dim > static_cast<int>(sizeof(primes) / sizeof(primes[0])))
        throw Error("halton_point: dimension too large");
    Vec p(dim);
    for (int d = 0; d < dim; ++d) {
        const unsigned long long base = primes[d];
        double f = 1.0, r = 0.0;
        unsigned long long i = index;
        while (i > 0) {
            f /= static_cast<double>(base);
            r += f * static_cast<double>(i % base);
            i /= base;
        }
        p[d] = r;
    }
    return p;
}

}  // namespace gsqp
