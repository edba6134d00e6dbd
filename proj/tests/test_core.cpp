#include <thread>

#include "doctest.h"
#include "gsqp/core.hpp"
#include "gsqp/drivers.hpp"
#include "gsqp/registry.hpp"
#include "oracles.hpp"

using namespace gsqp;
namespace to = testing_oracles;

namespace {

SolverConfig base_cfg() {
    SolverConfig cfg;
    cfg.lambda = 0.5;
    cfg.rho = 0.5;
    cfg.beta = 10.0;
    cfg.c = 1.0;
    cfg.eta = 0.9;
    return cfg;
}

}  // namespace

TEST_CASE("kappa at prob_A base points") {
    const ProblemInstance p = registry_get("prob_A");
    const SolverConfig cfg = base_cfg();

    SUBCASE("x = 0: phi = 0.5, kappa = 0.75 (grid cross-check)") {
        const SurrogateModelAt s = make_quadlin_surrogate(p, {0.0}, cfg.c);
        const KappaResult kr = compute_kappa(s, cfg);
        CHECK(kr.max_g_plus == doctest::Approx(1.0));
        CHECK(kr.phi == doctest::Approx(0.5));
        CHECK(kr.kappa == doctest::Approx(0.75));
        CHECK(kr.lp_duality_gap <= 1e-8);
        const double grid = to::kappa_inner_grid(s.g0, s.jac0, cfg.rho, 1e-4);
        CHECK(kr.phi == doctest::Approx(grid).epsilon(1e-3));
    }
    SUBCASE("feasible points have kappa = 0") {
        for (double x : {1.0, 1.5, 2.0}) {
            const SurrogateModelAt s = make_quadlin_surrogate(p, {x}, cfg.c);
            const KappaResult kr = compute_kappa(s, cfg);
            CHECK(kr.kappa == doctest::Approx(0.0));
            CHECK(kr.phi == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("kappa on the infeasible instance: constant model keeps phi = violation") {
    const ProblemInstance p = registry_get("prob_B");
    const SolverConfig cfg = base_cfg();
    const SurrogateModelAt s = make_quadlin_surrogate(p, {0.0}, cfg.c);
    const KappaResult kr = compute_kappa(s, cfg);
    CHECK(kr.phi == doctest::Approx(1.0));
    CHECK(kr.kappa == doctest::Approx(1.0));
    const DirectionResult dr = solve_direction(s, kr, cfg);
    CHECK(dr.theta == doctest::Approx(0.0));
    CHECK(dr.d_norm == doctest::Approx(0.0));
}

TEST_CASE("direction subproblem at prob_A landmarks") {
    const ProblemInstance p = registry_get("prob_A");
    const SolverConfig cfg = base_cfg();

    SUBCASE("x = 0: d = 0.25, xi = 0.25, theta = 0.25") {
        const DirectionResult dr = direction_at(p, {0.0}, cfg);
        CHECK(dr.d[0] == doctest::Approx(0.25));
        CHECK(dr.xi[0] == doctest::Approx(0.25).epsilon(1e-6));
        CHECK(dr.theta == doctest::Approx(0.25));
        CHECK(dr.grad_f_dot_d == doctest::Approx(0.0));
    }
    SUBCASE("x = 1 (solution): d = 0, xi = 2, theta = 0") {
        const DirectionResult dr = direction_at(p, {1.0}, cfg);
        CHECK(dr.d_norm <= 1e-12);
        CHECK(dr.xi[0] == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(dr.theta == doctest::Approx(0.0));
    }
}

TEST_CASE("kappa sandwich and direction feasibility over sampled points") {
    const SolverConfig cfg = base_cfg();
    for (const auto& name : registry_names()) {
        CAPTURE(name);
        const ProblemInstance p = registry_get(name);
        for (int k = 0; k < 40; ++k) {
            const Vec x = p.box_K.map_unit(halton_point(k + 1, p.n));
            const SurrogateModelAt s = make_quadlin_surrogate(p, x, cfg.c);
            const KappaResult kr = compute_kappa(s, cfg);
            const double viol = p.max_g_plus(x);
            CHECK(kr.kappa >= 0.0);
            CHECK(kr.kappa <= viol + 1e-10);
            if (viol == 0.0) CHECK(kr.kappa == doctest::Approx(0.0));
            const DirectionResult dr = solve_direction(s, kr, cfg);
            CHECK(dr.theta == viol - kr.kappa);  // identity holds bit-exactly
            CHECK(dr.theta >= -1e-10);
            const Vec gt = s.eval_g_tilde(dr.d);
            for (int i = 0; i < p.m; ++i) CHECK(gt[i] <= kr.kappa + 1e-8);
            CHECK(nrminf(dr.d) <= cfg.beta + 1e-10);
            for (double xi : dr.xi) CHECK(xi >= -1e-10);
            for (int i = 0; i < p.m; ++i)
                CHECK(std::fabs(dr.xi[i] * (gt[i] - kr.kappa)) <= 1e-8);
        }
    }
}

TEST_CASE("ghost penalty arithmetic") {
    const ProblemInstance p = registry_get("prob_A");
    CHECK(ghost_penalty(p, {0.0}, 0.5) == doctest::Approx(2.0));
    CHECK(ghost_penalty(p, {2.0}, 1.0) == doctest::Approx(4.0));  // feasible: no penalty term
    for (double eps : {0.1, 1.0, 10.0})
        CHECK(ghost_penalty(p, {1.5}, eps) == doctest::Approx(p.f({1.5})));
    CHECK_THROWS_AS(ghost_penalty(p, {0.0}, 0.0), ValidationError);
}

TEST_CASE("residual bounds: zero direction forces zero residuals") {
    const ProblemInstance p = registry_get("prob_B");
    const SolverConfig cfg = base_cfg();
    ProblemConstants c;
    c.lambda = cfg.lambda;
    c.beta = cfg.beta;
    c.L_grad_tilde_f = ConstVal(cfg.c, Provenance::analytic);
    c.L_grad_tilde_g = ConstVal(0.0, Provenance::analytic);
    c.L_tilde_g = ConstVal(4.0, Provenance::analytic);
    c.M = ConstVal(5.0, Provenance::empirical);
    c.a = ConstVal(12.0, Provenance::empirical);
    c.b = ConstVal(100.0, Provenance::empirical);

    const DirectionResult dr = direction_at(p, {0.0}, cfg);  // d = 0 exactly
    const ResidualBoundAudit a = residual_bounds(dr, p, c);
    CHECK(a.lagrangian.rhs == doctest::Approx(0.0));
    CHECK(a.lagrangian.lhs <= 1e-10);
    CHECK(a.complementarity.lhs <= 1e-10);
    CHECK(a.b_norm_d == doctest::Approx(0.0));
    // the feasibility residual is genuinely 1 here: the bound cannot hold at
    // a point without a constraint qualification, which is what flags it ES
    CHECK(a.feasibility.lhs == doctest::Approx(1.0));
}

TEST_CASE("residual bounds hold along prob_A with exact cancellation at the solution") {
    const ProblemInstance p = registry_get("prob_A");
    const SolverConfig cfg = base_cfg();
    ProblemConstants c;
    c.lambda = cfg.lambda;
    c.beta = cfg.beta;
    c.L_grad_tilde_f = ConstVal(cfg.c, Provenance::analytic);
    c.L_grad_tilde_g = ConstVal(0.0, Provenance::analytic);
    c.L_tilde_g = ConstVal(1.0, Provenance::analytic);
    c.M = ConstVal(3.0, Provenance::empirical);
    c.a = ConstVal(2.5, Provenance::empirical);
    c.b = ConstVal(0.0, Provenance::empirical);
    c.b = ConstVal(std::max({c.bound_coef_lagrangian(), c.bound_coef_feasibility(),
                             c.bound_coef_complementarity()}),
                   Provenance::empirical);

    SUBCASE("x = 1: lagrangian lhs vanishes") {
        const DirectionResult dr = direction_at(p, {1.0}, cfg);
        const ResidualBoundAudit a = residual_bounds(dr, p, c);
        CHECK(a.lagrangian.lhs <= 1e-9);  // |2 + (-1)*2|
        CHECK(a.worst_margin() <= 1e-9);
    }
    SUBCASE("x = 0: all three inequalities satisfied") {
        const DirectionResult dr = direction_at(p, {0.0}, cfg);
        const ResidualBoundAudit a = residual_bounds(dr, p, c);
        CHECK(a.lagrangian.lhs <= a.lagrangian.rhs + 1e-9);
        CHECK(a.feasibility.lhs <= a.feasibility.rhs + 1e-9);
        CHECK(a.complementarity.lhs <= a.complementarity.rhs + 1e-9);
    }
}

TEST_CASE("classification at the three landmark points") {
    const SolverConfig cfg = base_cfg();
    const ClassifyTolerances tol = ClassifyTolerances::for_delta(1e-3);

    SUBCASE("prob_A solution is KKT") {
        const ProblemInstance p = registry_get("prob_A");
        const DirectionResult dr = direction_at(p, {1.0}, cfg);
        const StationarityReport rep = classify_point(p, {1.0}, dr, tol);
        CHECK(rep.classification == Classification::KKT);
        CHECK(rep.lagrangian_residual <= 1e-9);
    }
    SUBCASE("prob_B origin is ES: violated with vanishing gradient combination") {
        const ProblemInstance p = registry_get("prob_B");
        const DirectionResult dr = direction_at(p, {0.0}, cfg);
        const StationarityReport rep = classify_point(p, {0.0}, dr, tol);
        CHECK(rep.classification == Classification::ES);
        CHECK(rep.feasibility_residual == doctest::Approx(1.0));
        REQUIRE(rep.feasibility_stationarity.has_value());
        CHECK(*rep.feasibility_stationarity <= 1e-10);
    }
    SUBCASE("balanced-gradient origin carries both certificates; KKT wins the label") {
        // grad g = (1,-1): xi = (0,1) solves the KKT system, while (1/2,1/2)
        // annihilates the gradients, so the simplex residual is zero too
        const ProblemInstance p = registry_get("prob_FJ");
        const DirectionResult dr = direction_at(p, {0.0}, cfg);
        const StationarityReport rep = classify_point(p, {0.0}, dr, tol);
        CHECK(rep.classification == Classification::KKT);
        REQUIRE(rep.feasibility_stationarity.has_value());
        CHECK(*rep.feasibility_stationarity <= 1e-8);  // the FJ membership test
        CHECK(simplex_gradient_residual(p, {0.0}, {0, 1}) <= 1e-8);
    }
    SUBCASE("plainly nonstationary point classifies none") {
        const ProblemInstance p = registry_get("prob_A");
        const DirectionResult dr = direction_at(p, {1.8}, cfg);
        const StationarityReport rep = classify_point(p, {1.8}, dr, tol);
        CHECK(rep.classification == Classification::none);
    }
}

TEST_CASE("zero direction at registry stationary points never classifies none") {
    const SolverConfig cfg = base_cfg();
    const ClassifyTolerances tol = ClassifyTolerances::for_delta(1e-3);
    struct Case {
        const char* name;
        Vec x;
    };
    for (const Case& c : {Case{"prob_A", {1.0}}, Case{"prob_B", {0.0}}, Case{"prob_FJ", {0.0}},
                          Case{"prob_sf", {2.0, 2.0}}, Case{"prob_2d", {0.0, 1.0}}}) {
        CAPTURE(c.name);
        const ProblemInstance p = registry_get(c.name);
        const DirectionResult dr = direction_at(p, c.x, cfg);
        CHECK(dr.d_norm <= 1e-9);
        const StationarityReport rep = classify_point(p, c.x, dr, tol);
        CHECK(rep.classification != Classification::none);
    }
}

TEST_CASE("general-convex surrogates route through the fallback solver") {
    const ProblemInstance p = registry_get("prob_A");
    SolverConfig cfg;
    cfg.lambda = 0.5;
    cfg.rho = 0.5;
    cfg.beta = 10.0;
    cfg.c = 1.0;
    SurrogateModelAt s = make_quadlin_surrogate(p, {0.0}, cfg.c);
    s.structure = SurrogateModelAt::Structure::general_convex;  // same oracles, general path

    const KappaResult kr = compute_kappa(s, cfg);
    CHECK(kr.phi == doctest::Approx(0.5).epsilon(5e-3));
    CHECK(kr.kappa == doctest::Approx(0.75).epsilon(5e-3));

    const DirectionResult dr = solve_direction(s, kr, cfg);
    CHECK(dr.d[0] == doctest::Approx(0.25).epsilon(2e-2));
    CHECK(dr.xi[0] == doctest::Approx(0.25).epsilon(5e-2));  // least squares on near-active rows
    CHECK(dr.theta == doctest::Approx(kr.max_g_plus - kr.kappa));
}

TEST_CASE("one instance is safely shared by concurrent runs") {
    const ProblemInstance p = registry_get("prob_2d");  // shared, immutable
    SolverConfig cfg;
    cfg.delta = 1e-2;
    DriverState a, b;
    std::thread ta([&] { a = run_algorithm3(p, cfg, {0.0, 0.0}); });
    std::thread tb([&] { b = run_algorithm3(p, cfg, {1.0, -2.0}); });
    ta.join();
    tb.join();
    CHECK((a.termination == Termination::stop_d || a.termination == Termination::stationary_exact));
    CHECK((b.termination == Termination::stop_d || b.termination == Termination::stationary_exact));
    // same start, same problem: identical to a solo run
    const DriverState solo = run_algorithm3(p, cfg, {0.0, 0.0});
    CHECK(solo.x == a.x);
}
