#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsqp {

using Vec = std::vector<double>;

/// Dense row-major matrix. Small sizes only; everything here is O(n^3)-naive
/// on purpose (subproblems in this library have a handful of rows/columns).
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {}

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    Vec col(int j) const {
        Vec v(rows);
        for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
        return v;
    }
    Vec row(int i) const {
        Vec v(cols);
        for (int j = 0; j < cols; ++j) v[j] = (*this)(i, j);
        return v;
    }
};

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

double dot(const Vec& x, const Vec& y);
double nrm2(const Vec& x);
double nrminf(const Vec& x);
Vec add_scaled(const Vec& x, double alpha, const Vec& y);  // x + alpha*y
Vec matvec(const Mat& A, const Vec& x);                    // A x
Vec mat_tvec(const Mat& A, const Vec& x);                  // A^T x

/// Solve A x = b by LU with partial pivoting. Throws on (near-)singular A.
Vec lu_solve(Mat A, Vec b);

/// Cholesky factor L (lower) of SPD A, or false if A is not positive definite.
bool cholesky(const Mat& A, Mat& L);
Vec cholesky_solve(const Mat& L, Vec b);

/// Minimum-norm least-squares solution of A x ~= b via one-sided Jacobi SVD.
/// Rank decided against rank_tol * sigma_max (relative).
Vec lstsq_min_norm(const Mat& A, const Vec& b, double rank_tol = 1e-12);

/// Nonnegative least squares (Lawson-Hanson): min ||A x - b||, x >= 0.
Vec nnls(const Mat& A, const Vec& b, double tol = 1e-12);

/// k-th point of the Halton sequence in [0,1)^dim (bases = first dim primes).
Vec halton_point(unsigned long long index, int dim);

}  // namespace gsqp
