#include "gsqp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gsqp/expr.hpp"
#include "json.hpp"

namespace gsqp {

bool Box::contains(const Vec& x, double slack) const {
    for (size_t i = 0; i < lo.size(); ++i)
        if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
    return true;
}

Vec Box::center() const {
    Vec c(lo.size());
    for (size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
}

Vec Box::map_unit(const Vec& u) const {
    Vec x(lo.size());
    for (size_t i = 0; i < lo.size(); ++i) x[i] = lo[i] + u[i] * (hi[i] - lo[i]);
    return x;
}

double ProblemInstance::max_g_plus(const Vec& x) const {
    const Vec gv = g(x);
    double v = 0.0;
    for (double gi : gv) v = std::max(v, gi);
    return std::max(v, 0.0);
}

double ConstVal::get(const char* what) const {
    if (!has) throw Error(std::string("missing constant: ") + what);
    return value;
}

double ProblemConstants::bound_coef_lagrangian() const {
    return L_grad_tilde_f.get("L_grad_tilde_f") +
           (L_grad_tilde_g.get("L_grad_tilde_g") + 1.0 / beta) * M.get("M");
}

double ProblemConstants::bound_coef_feasibility() const {
    return L_tilde_g.get("L_tilde_g") / lambda + a.get("a");
}

double ProblemConstants::bound_coef_complementarity() const {
    return (L_tilde_g.get("L_tilde_g") * (1.0 + 2.0 * lambda) / lambda + a.get("a")) * M.get("M");
}

bool ProblemConstants::bound_coefs_present() const {
    return L_grad_tilde_f.has && L_grad_tilde_g.has && L_tilde_g.has && M.has && a.has &&
           beta > 0.0 && lambda > 0.0;
}

StepsizeRule StepsizeRule::constant(std::optional<double> gamma) {
    StepsizeRule r;
    r.kind = Kind::constant;
    r.gamma = gamma;
    return r;
}

StepsizeRule StepsizeRule::harmonic(double gamma0) {
    StepsizeRule r;
    r.kind = Kind::harmonic;
    r.gamma0 = gamma0;
    return r;
}

StepsizeRule StepsizeRule::power(double gamma0, double p) {
    StepsizeRule r;
    r.kind = Kind::power;
    r.gamma0 = gamma0;
    r.p = p;
    return r;
}

double StepsizeRule::at(int nu) const {
    switch (kind) {
        case Kind::harmonic: return gamma0 / (nu + 1.0);
        case Kind::power: return gamma0 / std::pow(nu + 1.0, p);
        case Kind::constant: return gamma.value();
        default: throw Error("StepsizeRule::at: not a schedule rule");
    }
}

void StepsizeRule::validate() const {
    if (kind == Kind::constant && gamma && (*gamma <= 0.0 || *gamma > 1.0))
        throw ValidationError("constant stepsize must lie in (0,1]");
    if (kind == Kind::harmonic || kind == Kind::power) {
        if (gamma0 <= 0.0 || gamma0 > 1.0) throw ValidationError("gamma0 must lie in (0,1]");
        if (kind == Kind::power && (p <= 0.5 || p > 1.0))
            throw ValidationError("power rule exponent must lie in (0.5, 1]");
    }
}

ClassifyTolerances ClassifyTolerances::for_delta(double delta) {
    ClassifyTolerances t;
    t.feas = t.stat = t.comp = 10.0 * delta;
    return t;
}

void SolverConfig::validate() const {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ValidationError("lambda must lie in (0,1)");
    if (!(beta > 0.0)) throw ValidationError("beta must be positive");
    if (!(rho > 0.0 && rho < beta)) throw ValidationError("rho must lie in (0, beta)");
    if (!(c > 0.0)) throw ValidationError("c must be positive");
    if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in (0,1]");
    if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in (0,1]");
    if (!(gamma0 > 0.0 && gamma0 <= 1.0)) throw ValidationError("gamma0 must lie in (0,1]");
    if (T_init && !(*T_init > 0.0)) throw ValidationError("T_init must be positive");
    if (max_iters < 1) throw ValidationError("max_iters must be >= 1");
}

ClassifyTolerances SolverConfig::classify_tol() const {
    return classify_set ? classify : ClassifyTolerances::for_delta(delta);
}

namespace {

Vec fd_gradient(const std::function<double(const Vec&)>& fn, const Vec& x) {
    Vec g(x.size());
    Vec xp = x;
    for (size_t j = 0; j < x.size(); ++j) {
        const double h = 1e-6 * (1.0 + std::fabs(x[j]));
        xp[j] = x[j] + h;
        const double fp = fn(xp);
        xp[j] = x[j] - h;
        const double fm = fn(xp);
        xp[j] = x[j];
        g[j] = (fp - fm) / (2.0 * h);
    }
    return g;
}

}  // namespace

ProblemInstance problem_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("problem file is not valid JSON: ") + e.what());
    }

    ProblemInstance p;
    try {
        p.name = j.at("name").get<std::string>();
        p.n = j.at("n").get<int>();
        p.m = j.at("m").get<int>();
    } catch (const std::exception& e) {
        throw ParseError(std::string("problem file missing required field: ") + e.what());
    }
    if (p.n < 1 || p.m < 1) throw ValidationError("problem requires n >= 1 and m >= 1");

    const std::string f_text = j.at("f").get<std::string>();
    std::vector<std::string> g_text;
    for (const auto& it : j.at("g")) g_text.push_back(it.get<std::string>());
    if (static_cast<int>(g_text.size()) != p.m)
        throw ValidationError("g has " + std::to_string(g_text.size()) + " entries but m=" + std::to_string(p.m));

    Vec lo = j.at("box_lo").get<Vec>();
    Vec hi = j.at("box_hi").get<Vec>();
    if (static_cast<int>(lo.size()) != p.n || static_cast<int>(hi.size()) != p.n)
        throw ValidationError("box_lo/box_hi must each have n entries");
    for (int i = 0; i < p.n; ++i)
        if (!(lo[i] < hi[i])) throw ValidationError("box_lo must be strictly below box_hi");
    p.box_K = Box{lo, hi};

    const std::string grad_mode = j.value("grad_mode", std::string("symbolic"));
    if (grad_mode != "symbolic" && grad_mode != "fd")
        throw ValidationError("grad_mode must be 'symbolic' or 'fd'");

    Expr::Ptr f_ast = simplify(parse_expression(f_text));
    std::vector<Expr::Ptr> g_ast;
    for (const auto& t : g_text) g_ast.push_back(simplify(parse_expression(t)));

    int used = f_ast->max_var();
    for (const auto& e : g_ast) used = std::max(used, e->max_var());
    if (used > p.n)
        throw ValidationError("expression references x" + std::to_string(used) + " but n=" + std::to_string(p.n));

    const int n = p.n, m = p.m;
    p.f = [f_ast](const Vec& x) { return f_ast->eval(x); };
    p.g = [g_ast, m](const Vec& x) {
        Vec gv(m);
        for (int i = 0; i < m; ++i) gv[i] = g_ast[i]->eval(x);
        return gv;
    };

    if (grad_mode == "symbolic") {
        std::vector<Expr::Ptr> df(n);
        for (int jx = 0; jx < n; ++jx) df[jx] = simplify(f_ast->diff(jx));
        std::vector<std::vector<Expr::Ptr>> dg(m, std::vector<Expr::Ptr>(n));
        for (int i = 0; i < m; ++i)
            for (int jx = 0; jx < n; ++jx) dg[i][jx] = simplify(g_ast[i]->diff(jx));
        p.grad_f = [df, n](const Vec& x) {
            Vec gr(n);
            for (int jx = 0; jx < n; ++jx) gr[jx] = df[jx]->eval(x);
            return gr;
        };
        p.jac_g = [dg, n, m](const Vec& x) {
            Mat J(n, m);
            for (int i = 0; i < m; ++i)
                for (int jx = 0; jx < n; ++jx) J(jx, i) = dg[i][jx]->eval(x);
            return J;
        };
    } else {
        auto feval = p.f;
        p.grad_f = [feval](const Vec& x) { return fd_gradient(feval, x); };
        auto geval = p.g;
        p.jac_g = [geval, n, m](const Vec& x) {
            Mat J(n, m);
            for (int i = 0; i < m; ++i) {
                auto gi = [&geval, i](const Vec& y) { return geval(y)[i]; };
                Vec col = fd_gradient(gi, x);
                for (int jx = 0; jx < n; ++jx) J(jx, i) = col[jx];
            }
            return J;
        };
    }

    // sanity at the box center: every oracle must return finite values
    const Vec c = p.box_K.center();
    const double fc = p.f(c);
    const Vec gc = p.g(c);
    const Vec gfc = p.grad_f(c);
    const Mat jc = p.jac_g(c);
    auto finite = [](double v) { return std::isfinite(v); };
    bool ok = finite(fc);
    for (double v : gc) ok = ok && finite(v);
    for (double v : gfc) ok = ok && finite(v);
    for (double v : jc.a) ok = ok && finite(v);
    if (!ok) throw ValidationError("oracle returned a non-finite value at the box center");

    return p;
}

ProblemInstance load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open problem file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return problem_from_json_text(ss.str());
}

GradientCheckReport check_gradients(const ProblemInstance& p, int points, double tol,
                                    unsigned long long seed) {
    GradientCheckReport rep;
    for (int k = 0; k < points; ++k) {
        const Vec x = p.box_K.map_unit(halton_point(seed + 1 + k, p.n));
        {
            const Vec ga = p.grad_f(x);
            const Vec gn = fd_gradient(p.f, x);
            Vec diff = add_scaled(ga, -1.0, gn);
            const double rel = nrm2(diff) / (1.0 + nrm2(ga));
            if (rel > rep.worst_rel_err) {
                rep.worst_rel_err = rel;
                rep.worst_point = x;
                rep.worst_field = "grad_f";
            }
        }
        const Mat J = p.jac_g(x);
        for (int i = 0; i < p.m; ++i) {
            auto gi = [&p, i](const Vec& y) { return p.g(y)[i]; };
            const Vec gn = fd_gradient(gi, x);
            const Vec ga = J.col(i);
            Vec diff = add_scaled(ga, -1.0, gn);
            const double rel = nrm2(diff) / (1.0 + nrm2(ga));
            if (rel > rep.worst_rel_err) {
                rep.worst_rel_err = rel;
                rep.worst_point = x;
                rep.worst_field = "grad_g[" + std::to_string(i) + "]";
            }
        }
    }
    rep.pass = rep.worst_rel_err <= tol;
    return rep;
}

}  // namespace gsqp
