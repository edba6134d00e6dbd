#pragma once

#include "gsqp/problem.hpp"

namespace gsqp {

/// Convex model of (f, g) anchored at a base point. eval/grad functions take
/// the displacement d from the base point. Immutable once built.
struct SurrogateModelAt {
    enum class Structure { quadratic_linear, general_convex };

    Vec base_x;
    int n = 0, m = 0;
    double c = 1.0;  // strong-convexity modulus of the objective model
    Structure structure = Structure::general_convex;

    std::function<double(const Vec&)> eval_f_tilde;
    std::function<Vec(const Vec&)> grad1_f_tilde;
    std::function<Vec(const Vec&)> eval_g_tilde;
    std::function<Mat(const Vec&)> grad1_g_tilde;

    // values at d = 0, cached for the quadratic/linear fast path
    Vec grad_f0;
    Vec g0;
    Mat jac0;
};

/// Default model: f_tilde(d) = grad f(x)^T d + (c/2)||d||^2,
/// g_tilde(d) = g(x) + grad g(x)^T d. Exact value/gradient agreement at d=0.
SurrogateModelAt make_quadlin_surrogate(const ProblemInstance& p, const Vec& x, double c);

struct ContractCheckEntry {
    std::string condition;
    enum class Status { pass, fail, not_checkable } status;
    double worst_violation = 0.0;
    std::string note;
};

struct ContractCheckReport {
    std::vector<ContractCheckEntry> entries;
    bool all_checkable_pass() const;
    const ContractCheckEntry& entry(const std::string& cond) const;
};

/// Pointwise contract check for a (possibly user-supplied) surrogate:
/// strong convexity and convexity by sampling, value/gradient consistency at
/// zero. Continuity conditions are reported as not checkable pointwise.
ContractCheckReport check_model_contract(const SurrogateModelAt& s, const ProblemInstance& p,
                                         int samples, double beta);

}  // namespace gsqp
