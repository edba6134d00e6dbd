#include "gsqp/surrogate.hpp"

#include <algorithm>
#include <cmath>

namespace gsqp {

SurrogateModelAt make_quadlin_surrogate(const ProblemInstance& p, const Vec& x, double c) {
    if (static_cast<int>(x.size()) != p.n) throw ValidationError("base point has wrong dimension");
    if (!(c > 0.0)) throw ValidationError("surrogate modulus c must be positive");

    SurrogateModelAt s;
    s.base_x = x;
    s.n = p.n;
    s.m = p.m;
    s.c = c;
    s.structure = SurrogateModelAt::Structure::quadratic_linear;
    s.grad_f0 = p.grad_f(x);
    s.g0 = p.g(x);
    s.jac0 = p.jac_g(x);
    for (double v : s.grad_f0)
        if (!std::isfinite(v)) throw Error("grad_f oracle returned non-finite value");
    for (double v : s.g0)
        if (!std::isfinite(v)) throw Error("g oracle returned non-finite value");
    for (double v : s.jac0.a)
        if (!std::isfinite(v)) throw Error("jac_g oracle returned non-finite value");

    const Vec gf = s.grad_f0;
    const Vec g0 = s.g0;
    const Mat J = s.jac0;
    s.eval_f_tilde = [gf, c](const Vec& d) { return dot(gf, d) + 0.5 * c * dot(d, d); };
    s.grad1_f_tilde = [gf, c](const Vec& d) { return add_scaled(gf, c, d); };
    s.eval_g_tilde = [g0, J](const Vec& d) { return add_scaled(g0, 1.0, mat_tvec(J, d)); };
    s.grad1_g_tilde = [J](const Vec&) { return J; };
    return s;
}

bool ContractCheckReport::all_checkable_pass() const {
    for (const auto& e : entries)
        if (e.status == ContractCheckEntry::Status::fail) return false;
    return true;
}

const ContractCheckEntry& ContractCheckReport::entry(const std::string& cond) const {
    for (const auto& e : entries)
        if (e.condition == cond) return e;
    throw Error("no entry for condition " + cond);
}

ContractCheckReport check_model_contract(const SurrogateModelAt& s, const ProblemInstance& p,
                                         int samples, double beta) {
    if (samples < 1) throw ValidationError("check_model_contract requires samples >= 1");
    const double tol = s.structure == SurrogateModelAt::Structure::quadratic_linear ? 1e-10 : 1e-6;
    const double radius = 1.01 * beta;  // kernels never evaluate outside this inflation

    ContractCheckReport rep;
    auto add = [&rep](const std::string& cond, ContractCheckEntry::Status st, double viol,
                      const std::string& note) {
        rep.entries.push_back({cond, st, viol, note});
    };
    auto verdict = [tol](double viol) {
        return viol <= tol ? ContractCheckEntry::Status::pass : ContractCheckEntry::Status::fail;
    };

    const int n = s.n;
    auto sample_d = [&](int k) {
        Vec u = halton_point(17 + k, n);
        Vec d(n);
        for (int j = 0; j < n; ++j) d[j] = (2.0 * u[j] - 1.0) * radius;
        return d;
    };

    // A1: gradient monotonicity with modulus c on sampled pairs, including
    // axis-aligned pairs which expose a deflated modulus directly.
    double a1 = 0.0;
    for (int k = 0; k < samples; ++k) {
        Vec d1 = sample_d(2 * k);
        Vec d2 = sample_d(2 * k + 1);
        if (k < n) {
            d1.assign(n, 0.0);
            d2.assign(n, 0.0);
            d1[k] = 0.5 * radius;
            d2[k] = -0.5 * radius;
        }
        Vec gd = add_scaled(s.grad1_f_tilde(d1), -1.0, s.grad1_f_tilde(d2));
        Vec dd = add_scaled(d1, -1.0, d2);
        const double lhs = dot(gd, dd);
        const double rhs = s.c * dot(dd, dd);
        a1 = std::max(a1, rhs - lhs);
    }
    add("strong_convexity", verdict(a1), std::max(a1, 0.0), "strong convexity sampling");
    add("objective_continuity", ContractCheckEntry::Status::not_checkable, 0.0, "continuity, not checkable pointwise");
    add("objective_gradient_continuity", ContractCheckEntry::Status::not_checkable, 0.0, "continuity, not checkable pointwise");

    const Vec zero(n, 0.0);
    {
        Vec diff = add_scaled(s.grad1_f_tilde(zero), -1.0, p.grad_f(s.base_x));
        add("objective_gradient_match_at_zero", verdict(nrm2(diff)), nrm2(diff), "grad f_tilde(0) vs grad f");
    }

    double a5 = 0.0;
    for (int k = 0; k < samples; ++k) {
        const Vec d1 = sample_d(1000 + 2 * k);
        const Vec d2 = sample_d(1000 + 2 * k + 1);
        const Vec gt1 = s.eval_g_tilde(d1);
        const Vec gt2 = s.eval_g_tilde(d2);
        const Mat J1 = s.grad1_g_tilde(d1);
        const Vec dd = add_scaled(d2, -1.0, d1);
        for (int i = 0; i < s.m; ++i) {
            const double linear = gt1[i] + dot(J1.col(i), dd);
            a5 = std::max(a5, linear - gt2[i]);
        }
    }
    add("constraint_convexity", a5 <= 1e-10 ? ContractCheckEntry::Status::pass : ContractCheckEntry::Status::fail,
        std::max(a5, 0.0), "convexity of each g_tilde_i");
    add("constraint_continuity", ContractCheckEntry::Status::not_checkable, 0.0, "continuity, not checkable pointwise");

    {
        Vec diff = add_scaled(s.eval_g_tilde(zero), -1.0, p.g(s.base_x));
        add("constraint_value_match_at_zero", verdict(nrminf(diff)), nrminf(diff), "g_tilde(0) vs g");
    }
    add("constraint_gradient_continuity", ContractCheckEntry::Status::not_checkable, 0.0, "continuity, not checkable pointwise");
    {
        const Mat Jt = s.grad1_g_tilde(zero);
        const Mat Jp = p.jac_g(s.base_x);
        double worst = 0.0;
        for (size_t i = 0; i < Jt.a.size(); ++i) worst = std::max(worst, std::fabs(Jt.a[i] - Jp.a[i]));
        add("constraint_gradient_match_at_zero", verdict(worst), worst, "grad g_tilde(0) vs grad g");
    }
    return rep;
}

}  // namespace gsqp
