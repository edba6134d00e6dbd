#include "gsqp/registry.hpp"

#include <cmath>

namespace gsqp {

namespace {

// minimize x^2 s.t. 1 - x <= 0 on [-2,2]; unique KKT point x* = 1, xi* = 2.
ProblemInstance make_prob_A() {
    ProblemInstance p;
    p.name = "prob_A";
    p.n = 1;
    p.m = 1;
    p.f = [](const Vec& x) { return x[0] * x[0]; };
    p.grad_f = [](const Vec& x) { return Vec{2.0 * x[0]}; };
    p.g = [](const Vec& x) { return Vec{1.0 - x[0]}; };
    p.jac_g = [](const Vec&) {
        Mat J(1, 1);
        J(0, 0) = -1.0;
        return J;
    };
    p.box_K = Box{{-2.0}, {2.0}};
    p.analytic.L_grad_f = 2.0;
    p.analytic.L_grad_g = Vec{0.0};
    p.analytic.L_tilde_g = 1.0;
    p.analytic.max_grad_f_norm = 4.0;
    p.analytic.f_min = 0.0;
    p.analytic.f_max = 4.0;
    p.analytic.g_plus_max = 3.0;
    p.analytic.emfcq = true;  // grad g = -1 never vanishes
    return p;
}

// minimize 0 s.t. x^2 + 1 <= 0 on [-2,2]; infeasible, x = 0 stationary for
// the violation problem (grad g vanishes there).
ProblemInstance make_prob_B() {
    ProblemInstance p;
    p.name = "prob_B";
    p.n = 1;
    p.m = 1;
    p.f = [](const Vec&) { return 0.0; };
    p.grad_f = [](const Vec&) { return Vec{0.0}; };
    p.g = [](const Vec& x) { return Vec{x[0] * x[0] + 1.0}; };
    p.jac_g = [](const Vec& x) {
        Mat J(1, 1);
        J(0, 0) = 2.0 * x[0];
        return J;
    };
    p.box_K = Box{{-2.0}, {2.0}};
    p.analytic.L_grad_f = 0.0;
    p.analytic.L_grad_g = Vec{2.0};
    p.analytic.L_tilde_g = 4.0;
    p.analytic.max_grad_f_norm = 0.0;
    p.analytic.f_min = 0.0;
    p.analytic.f_max = 0.0;
    p.analytic.g_plus_max = 5.0;
    p.analytic.emfcq = false;
    return p;
}

// minimize x s.t. x <= 0, -x <= 0 on [-2,2]; feasible set {0}. The two
// constraint gradients cancel, so 0 carries a Fritz-John certificate
// (and, with xi = (0,1), a KKT one as well).
ProblemInstance make_prob_FJ() {
    ProblemInstance p;
    p.name = "prob_FJ";
    p.n = 1;
    p.m = 2;
    p.f = [](const Vec& x) { return x[0]; };
    p.grad_f = [](const Vec&) { return Vec{1.0}; };
    p.g = [](const Vec& x) { return Vec{x[0], -x[0]}; };
    p.jac_g = [](const Vec&) {
        Mat J(1, 2);
        J(0, 0) = 1.0;
        J(0, 1) = -1.0;
        return J;
    };
    p.box_K = Box{{-2.0}, {2.0}};
    p.analytic.L_grad_f = 0.0;
    p.analytic.L_grad_g = Vec{0.0, 0.0};
    p.analytic.L_tilde_g = 1.0;
    p.analytic.max_grad_f_norm = 1.0;
    p.analytic.f_min = -2.0;
    p.analytic.f_max = 2.0;
    p.analytic.g_plus_max = 2.0;
    p.analytic.emfcq = false;
    return p;
}

// 2-D nonconvex objective (double well in x2) with a linear and a quadratic
// constraint on [-3,3]^2:
//   minimize x1^2 - x2^2/2 + x2^4/4  s.t.  1 - x1 - x2 <= 0,  x1^2 + x2^2 - 4 <= 0.
ProblemInstance make_prob_2d() {
    ProblemInstance p;
    p.name = "prob_2d";
    p.n = 2;
    p.m = 2;
    p.f = [](const Vec& x) {
        return x[0] * x[0] - 0.5 * x[1] * x[1] + 0.25 * x[1] * x[1] * x[1] * x[1];
    };
    p.grad_f = [](const Vec& x) { return Vec{2.0 * x[0], -x[1] + x[1] * x[1] * x[1]}; };
    p.g = [](const Vec& x) {
        return Vec{1.0 - x[0] - x[1], x[0] * x[0] + x[1] * x[1] - 4.0};
    };
    p.jac_g = [](const Vec& x) {
        Mat J(2, 2);
        J(0, 0) = -1.0;
        J(1, 0) = -1.0;
        J(0, 1) = 2.0 * x[0];
        J(1, 1) = 2.0 * x[1];
        return J;
    };
    p.box_K = Box{{-3.0, -3.0}, {3.0, 3.0}};
    p.analytic.L_grad_f = 26.0;  // Hessian diag(2, 3 x2^2 - 1), |x2| <= 3
    p.analytic.L_grad_g = Vec{0.0, 2.0};
    p.analytic.L_tilde_g = std::sqrt(72.0);  // max(||(-1,-1)||, sup ||2x||)
    p.analytic.max_grad_f_norm = std::sqrt(36.0 + 576.0);
    p.analytic.f_min = -0.25;   // at (0, +-1)
    p.analytic.f_max = 24.75;   // at the corners
    p.analytic.g_plus_max = 14.0;
    p.analytic.emfcq = true;
    return p;
}

// strictly-feasible-start instance: minimize ||x - (2,2)||^2 over the disk of
// radius 3 on [-4,4]^2; the unconstrained minimum (2,2) lies inside the disk.
ProblemInstance make_prob_sf() {
    ProblemInstance p;
    p.name = "prob_sf";
    p.n = 2;
    p.m = 1;
    p.f = [](const Vec& x) {
        const double a = x[0] - 2.0, b = x[1] - 2.0;
        return a * a + b * b;
    };
    p.grad_f = [](const Vec& x) { return Vec{2.0 * (x[0] - 2.0), 2.0 * (x[1] - 2.0)}; };
    p.g = [](const Vec& x) { return Vec{x[0] * x[0] + x[1] * x[1] - 9.0}; };
    p.jac_g = [](const Vec& x) {
        Mat J(2, 1);
        J(0, 0) = 2.0 * x[0];
        J(1, 0) = 2.0 * x[1];
        return J;
    };
    p.box_K = Box{{-4.0, -4.0}, {4.0, 4.0}};
    p.analytic.L_grad_f = 2.0;
    p.analytic.L_grad_g = Vec{2.0};
    p.analytic.L_tilde_g = std::sqrt(128.0);
    p.analytic.max_grad_f_norm = 2.0 * std::sqrt(72.0);
    p.analytic.f_min = 0.0;
    p.analytic.f_max = 72.0;
    p.analytic.g_plus_max = 23.0;
    p.analytic.emfcq = true;  // grad g vanishes only at 0, which is strictly feasible
    return p;
}

}  // namespace

ProblemInstance registry_get(const std::string& name) {
    if (name == "prob_A") return make_prob_A();
    if (name == "prob_B") return make_prob_B();
    if (name == "prob_FJ") return make_prob_FJ();
    if (name == "prob_2d") return make_prob_2d();
    if (name == "prob_sf") return make_prob_sf();
    throw Error("unknown problem: " + name);
}

std::vector<std::string> registry_names() {
    return {"prob_A", "prob_B", "prob_FJ", "prob_2d", "prob_sf"};
}

}  // namespace gsqp
