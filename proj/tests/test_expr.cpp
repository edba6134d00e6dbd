#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "gsqp/drivers.hpp"
#include "gsqp/expr.hpp"
#include "gsqp/problem.hpp"

using namespace gsqp;

TEST_CASE("expression parsing and evaluation") {
    auto e = parse_expression("x1^2 + 2*x2 - sin(x1)/2");
    CHECK(e->eval({2.0, 3.0}) == doctest::Approx(4.0 + 6.0 - std::sin(2.0) / 2.0));
    CHECK(e->max_var() == 2);

    CHECK(parse_expression("-x1^2")->eval({3.0}) == doctest::Approx(-9.0));  // unary minus binds outside ^
    CHECK(parse_expression("2^3^2")->eval({}) == doctest::Approx(512.0));    // right associative
    CHECK(parse_expression("exp(log(5))")->eval({}) == doctest::Approx(5.0));

    CHECK_THROWS_AS(parse_expression("x1 +"), ParseError);
    CHECK_THROWS_AS(parse_expression("foo(x1)"), ParseError);
    CHECK_THROWS_AS(parse_expression("x0"), ParseError);
    CHECK_THROWS_AS(parse_expression("(x1"), ParseError);
}

TEST_CASE("symbolic differentiation") {
    auto e = simplify(parse_expression("x1^2 + x2^2"));
    auto d1 = simplify(e->diff(0));
    CHECK(d1->eval({0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(d1->eval({1.5, 0.0}) == doctest::Approx(3.0));

    auto g = simplify(parse_expression("1 - x1 - x2"));
    CHECK(simplify(g->diff(0))->eval({0.0, 0.0}) == doctest::Approx(-1.0));
    CHECK(simplify(g->diff(1))->eval({0.0, 0.0}) == doctest::Approx(-1.0));

    auto trig = parse_expression("sin(x1)*cos(x1)");
    const double x = 0.7;
    const double want = std::cos(x) * std::cos(x) - std::sin(x) * std::sin(x);
    CHECK(trig->diff(0)->eval({x}) == doctest::Approx(want));

    auto pw = parse_expression("x1^x1");  // needs the exp-log rule
    const double xv = 1.3;
    const double dw = std::pow(xv, xv) * (std::log(xv) + 1.0);
    CHECK(pw->diff(0)->eval({xv}) == doctest::Approx(dw));
}

TEST_CASE("problem files: load, validate, differentiate") {
    const char* good = R"json({
        "name": "prob_file_A", "n": 1, "m": 1,
        "f": "x1^2", "g": ["1 - x1"],
        "box_lo": [-2], "box_hi": [2], "grad_mode": "symbolic"
    })json";
    ProblemInstance p = problem_from_json_text(good);
    CHECK(p.name == "prob_file_A");
    CHECK(p.f({2.0}) == doctest::Approx(4.0));
    CHECK(p.g({0.0})[0] == doctest::Approx(1.0));
    CHECK(p.grad_f({1.0})[0] == doctest::Approx(2.0));

    SUBCASE("dimension mismatch in g") {
        const char* bad = R"json({
            "name": "bad", "n": 1, "m": 1,
            "f": "x1^2", "g": ["1 - x1", "x1"],
            "box_lo": [-2], "box_hi": [2]
        })json";
        CHECK_THROWS_AS(problem_from_json_text(bad), ValidationError);
    }
    SUBCASE("expression beyond dimension") {
        const char* bad = R"json({
            "name": "bad", "n": 1, "m": 1,
            "f": "x2^2", "g": ["1 - x1"],
            "box_lo": [-2], "box_hi": [2]
        })json";
        CHECK_THROWS_AS(problem_from_json_text(bad), ValidationError);
    }
    SUBCASE("malformed json") {
        CHECK_THROWS_AS(problem_from_json_text("{oops"), ParseError);
    }
    SUBCASE("non-finite at center") {
        const char* bad = R"json({
            "name": "bad", "n": 1, "m": 1,
            "f": "log(x1)", "g": ["1 - x1"],
            "box_lo": [-2], "box_hi": [2]
        })json";
        CHECK_THROWS_AS(problem_from_json_text(bad), ValidationError);
    }
}

TEST_CASE("symbolic gradients cross-check against finite differences") {
    const char* text = R"json({
        "name": "p2", "n": 2, "m": 1,
        "f": "x1^2 + x2^2", "g": ["1 - x1 - x2"],
        "box_lo": [-2, -2], "box_hi": [2, 2], "grad_mode": "symbolic"
    })json";
    ProblemInstance p = problem_from_json_text(text);
    const Vec gr = p.grad_f({0.0, 0.0});
    CHECK(gr[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(gr[1] == doctest::Approx(0.0).epsilon(1e-12));
    const Mat J = p.jac_g({0.0, 0.0});
    CHECK(J(0, 0) == doctest::Approx(-1.0));
    CHECK(J(1, 0) == doctest::Approx(-1.0));
    CHECK(check_gradients(p).pass);

    // fd mode must agree with the symbolic gradients to checker tolerance
    std::string fd_text = text;
    fd_text.replace(fd_text.find("symbolic"), 8, "fd");
    ProblemInstance pfd = problem_from_json_text(fd_text);
    CHECK(check_gradients(pfd).pass);
    CHECK(pfd.grad_f({0.5, -0.25})[0] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("problems load from disk and solve end to end") {
    const char* text = R"json({
        "name": "disk_prob", "n": 1, "m": 1,
        "f": "(x1 - 1)^2", "g": ["0.5 - x1"],
        "box_lo": [-2], "box_hi": [2], "grad_mode": "symbolic"
    })json";
    const std::string path = "disk_prob.json";
    {
        std::ofstream out(path);
        out << text;
    }
    const ProblemInstance p = load_problem(path);
    CHECK(p.name == "disk_prob");
    SolverConfig cfg;
    cfg.delta = 1e-3;
    const DriverState st = run_algorithm3(p, cfg, {-1.0});
    CHECK((st.termination == Termination::stop_d ||
           st.termination == Termination::stationary_exact));
    CHECK(std::fabs(st.x[0] - 1.0) <= 1e-2);  // interior minimum at 1
    CHECK_THROWS_AS(load_problem("does_not_exist.json"), Error);
    std::remove(path.c_str());
}
