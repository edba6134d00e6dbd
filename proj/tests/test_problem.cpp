#include "doctest.h"
#include "gsqp/constants.hpp"
#include "gsqp/registry.hpp"

using namespace gsqp;

TEST_CASE("registry contents and gradient validation") {
    CHECK_THROWS_AS(registry_get("nosuch"), Error);
    for (const auto& name : registry_names()) {
        CAPTURE(name);
        const ProblemInstance p = registry_get(name);
        CHECK(p.n >= 1);
        CHECK(p.m >= 1);
        const GradientCheckReport rep = check_gradients(p, 20, 1e-5);
        CAPTURE(rep.worst_field);
        CHECK(rep.pass);
    }
}

TEST_CASE("registry landmark points") {
    const ProblemInstance a = registry_get("prob_A");
    CHECK(a.g({1.0})[0] == doctest::Approx(0.0));  // x* = 1 active
    CHECK(a.grad_f({1.0})[0] == doctest::Approx(2.0));

    const ProblemInstance b = registry_get("prob_B");
    CHECK(b.g({0.0})[0] == doctest::Approx(1.0));  // no feasible point anywhere
    CHECK(b.jac_g({0.0})(0, 0) == doctest::Approx(0.0));

    const ProblemInstance fj = registry_get("prob_FJ");
    CHECK(fj.g({0.0})[0] == doctest::Approx(0.0));
    CHECK(fj.g({0.0})[1] == doctest::Approx(0.0));
    CHECK(fj.jac_g({0.0})(0, 0) + fj.jac_g({0.0})(0, 1) == doctest::Approx(0.0));

    const ProblemInstance sf = registry_get("prob_sf");
    CHECK(sf.g(sf.box_K.center())[0] < 0.0);  // strictly feasible start
}

TEST_CASE("estimate_constants on prob_A") {
    const ProblemInstance p = registry_get("prob_A");
    SolverConfig cfg;
    cfg.beta = 10.0;
    cfg.eta = 0.9;
    cfg.c = 1.0;
    const ProblemConstants c = estimate_constants(p, cfg, 1000);

    // analytic fields flow through
    CHECK(c.L_grad_f.analytic());
    CHECK(c.L_grad_f.value == doctest::Approx(2.0));
    CHECK(c.max_L_grad_g.value == doctest::Approx(0.0));
    // B = sup||grad f|| * beta + eta c beta^2 = 4*10 + 90
    CHECK(c.B.value == doctest::Approx(130.0));
    CHECK(c.M.has);
    CHECK(c.Wm.value <= c.W0.value);
    CHECK(c.W0.value <= c.WM.value + 1e-12);
    CHECK(c.fm.value <= c.fM.value);
    CHECK_THROWS_AS(estimate_constants(p, cfg, 1), ValidationError);
}

TEST_CASE("empirical Lipschitz estimate approaches the true modulus") {
    ProblemInstance p = registry_get("prob_A");
    p.analytic = AnalyticInfo{};  // force empirical estimation
    SolverConfig cfg;
    const ProblemConstants c = estimate_constants(p, cfg, 1000);
    CHECK(c.L_grad_f.value >= 1.9);
    CHECK(c.L_grad_f.value <= 2.0 + 1e-9);  // empirical never exceeds the true sup
    CHECK(c.L_tilde_g.value == doctest::Approx(1.0));
}

TEST_CASE("constant-objective problem estimates zero objective modulus") {
    const char* text = R"({
        "name": "flat", "n": 1, "m": 1,
        "f": "0", "g": ["1 - x1"],
        "box_lo": [-2], "box_hi": [2]
    })";
    const ProblemInstance p = problem_from_json_text(text);
    SolverConfig cfg;
    const ProblemConstants c = estimate_constants(p, cfg, 200);
    CHECK(c.L_grad_f.value == doctest::Approx(0.0));
}

TEST_CASE("estimates are monotone in the sample count") {
    ProblemInstance p = registry_get("prob_2d");
    p.analytic = AnalyticInfo{};
    SolverConfig cfg;
    std::vector<int> counts{100, 200, 400};
    double last_lf = 0.0, last_M = 0.0, last_B = 0.0, last_fM = -1e300, last_a = 0.0;
    for (int s : counts) {
        const ProblemConstants c = estimate_constants(p, cfg, s);
        CHECK(c.L_grad_f.value >= last_lf - 1e-15);
        CHECK(c.M.value >= last_M - 1e-15);
        CHECK(c.B.value >= last_B - 1e-15);
        CHECK(c.fM.value >= last_fM - 1e-15);
        CHECK(c.a.value >= last_a - 1e-15);
        last_lf = c.L_grad_f.value;
        last_M = c.M.value;
        last_B = c.B.value;
        last_fM = c.fM.value;
        last_a = c.a.value;
    }
}

TEST_CASE("analytic constants dominate empirical estimates") {
    for (const auto& name : registry_names()) {
        CAPTURE(name);
        const ProblemInstance with = registry_get(name);
        ProblemInstance bare = registry_get(name);
        bare.analytic = AnalyticInfo{};
        SolverConfig cfg;
        const ProblemConstants ca = estimate_constants(with, cfg, 400);
        const ProblemConstants ce = estimate_constants(bare, cfg, 400);
        CHECK(ce.L_grad_f.value <= ca.L_grad_f.value + 1e-9);
        CHECK(ce.L_tilde_g.value <= ca.L_tilde_g.value + 1e-9);
        CHECK(ce.fM.value <= ca.fM.value + 1e-9);
        CHECK(ce.gM_plus.value <= ca.gM_plus.value + 1e-9);
        CHECK(ce.B.value <= ca.B.value + 1e-9);
        CHECK(ce.fm.value >= ca.fm.value - 1e-9);
    }
}

TEST_CASE("config validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    SolverConfig bad = cfg;
    bad.lambda = 1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = cfg;
    bad.rho = cfg.beta;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = cfg;
    bad.delta = 1.5;  // delta <= 1 enforced
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = cfg;
    bad.eta = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    CHECK_THROWS_AS(StepsizeRule::power(1.0, 0.4).validate(), ValidationError);
    CHECK_THROWS_AS(StepsizeRule::power(1.0, 1.2).validate(), ValidationError);
    CHECK_NOTHROW(StepsizeRule::power(1.0, 0.75).validate());
}
