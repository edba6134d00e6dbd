#include "gsqp/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gsqp {

namespace {

struct MaxTracker {
    double v = 0.0;
    void feed(double x) { v = std::max(v, x); }
};

}  // namespace

ProblemConstants estimate_constants(const ProblemInstance& p, const SolverConfig& cfg,
                                    int samples, unsigned long long seed) {
    if (samples < 2) throw ValidationError("estimate_constants requires samples >= 2");
    cfg.validate();

    ProblemConstants c;
    c.lambda = cfg.lambda;
    c.beta = cfg.beta;
    c.eta = cfg.eta;
    c.c = cfg.c;
    c.samples = samples;

    const int n = p.n, m = p.m;
    std::vector<Vec> pts(samples);
    for (int k = 0; k < samples; ++k) pts[k] = p.box_K.map_unit(halton_point(seed + 1 + k, n));

    std::vector<Vec> grads(samples);
    std::vector<Mat> jacs(samples);
    Vec fvals(samples), gplus(samples);
    MaxTracker grad_f_norm, l_tilde_g, f_max, g_plus_max, m_bound, a_bound;
    double f_min = std::numeric_limits<double>::infinity();

    for (int k = 0; k < samples; ++k) {
        const Vec& x = pts[k];
        fvals[k] = p.f(x);
        grads[k] = p.grad_f(x);
        jacs[k] = p.jac_g(x);
        gplus[k] = p.max_g_plus(x);
        if (!std::isfinite(fvals[k]) || !std::isfinite(gplus[k]))
            throw Error("estimate_constants: oracle returned non-finite value");
        f_min = std::min(f_min, fvals[k]);
        f_max.feed(fvals[k]);
        g_plus_max.feed(gplus[k]);
        grad_f_norm.feed(nrm2(grads[k]));
        for (int i = 0; i < m; ++i) l_tilde_g.feed(nrm2(jacs[k].col(i)));
    }

    // Lipschitz moduli from difference quotients over disjoint consecutive
    // pairs plus a short local probe per sample (prefix-stable pairing)
    MaxTracker lf;
    std::vector<MaxTracker> lg(m);
    auto feed_pair = [&](const Vec& xa, const Vec& xb, const Vec& ga, const Vec& gb,
                         const Mat& Ja, const Mat& Jb) {
        const Vec dx = add_scaled(xa, -1.0, xb);
        const double nd = nrm2(dx);
        if (nd < 1e-14) return;
        lf.feed(nrm2(add_scaled(ga, -1.0, gb)) / nd);
        for (int i = 0; i < m; ++i)
            lg[i].feed(nrm2(add_scaled(Ja.col(i), -1.0, Jb.col(i))) / nd);
    };
    for (int k = 0; k + 1 < samples; k += 2)
        feed_pair(pts[k], pts[k + 1], grads[k], grads[k + 1], jacs[k], jacs[k + 1]);
    {
        // short probe toward the box center captures local curvature spikes
        const Vec ctr = p.box_K.center();
        double scale = 0.0;
        for (int j = 0; j < n; ++j) scale = std::max(scale, p.box_K.hi[j] - p.box_K.lo[j]);
        for (int k = 0; k < samples; ++k) {
            Vec xb = pts[k];
            for (int j = 0; j < n; ++j) xb[j] += (pts[k][j] > ctr[j] ? -1.0 : 1.0) * 1e-4 * scale;
            feed_pair(pts[k], xb, grads[k], p.grad_f(xb), jacs[k], p.jac_g(xb));
        }
    }

    // subproblem sweep: multiplier bound and the inner min-max ratio
    for (int k = 0; k < samples; ++k) {
        const DirectionResult dr = direction_at(p, pts[k], cfg);
        double xi1 = 0.0;
        for (double v : dr.xi) xi1 += std::fabs(v);
        m_bound.feed(xi1);
        if (dr.d_norm > 1e-12) a_bound.feed(dr.phi / dr.d_norm);
    }

    auto pick = [](const std::optional<double>& analytic, double emp) {
        return analytic ? ConstVal(*analytic, Provenance::analytic)
                        : ConstVal(emp, Provenance::empirical);
    };

    c.L_grad_f = pick(p.analytic.L_grad_f, lf.v);
    c.L_grad_g.resize(m);
    double max_lg = 0.0;
    bool lg_analytic = p.analytic.L_grad_g.has_value();
    for (int i = 0; i < m; ++i) {
        c.L_grad_g[i] = lg_analytic ? ConstVal((*p.analytic.L_grad_g)[i], Provenance::analytic)
                                    : ConstVal(lg[i].v, Provenance::empirical);
        max_lg = std::max(max_lg, c.L_grad_g[i].value);
    }
    c.max_L_grad_g = ConstVal(max_lg, lg_analytic ? Provenance::analytic : Provenance::empirical);
    c.L_tilde_g = pick(p.analytic.L_tilde_g, l_tilde_g.v);
    // moduli of the shipped quadratic/linear model are exact by construction
    c.L_grad_tilde_f = ConstVal(cfg.c, Provenance::analytic);
    c.L_grad_tilde_g = ConstVal(0.0, Provenance::analytic);

    c.fm = pick(p.analytic.f_min, f_min);
    c.fM = pick(p.analytic.f_max, f_max.v);
    c.gM_plus = pick(p.analytic.g_plus_max, g_plus_max.v);
    c.M = ConstVal(m_bound.v, Provenance::empirical);
    c.a = ConstVal(a_bound.v, Provenance::empirical);

    {
        const double gfn = p.analytic.max_grad_f_norm ? *p.analytic.max_grad_f_norm : grad_f_norm.v;
        const Provenance prov =
            p.analytic.max_grad_f_norm ? Provenance::analytic : Provenance::empirical;
        c.B = ConstVal(gfn * cfg.beta + cfg.eta * cfg.c * cfg.beta * cfg.beta, prov);
    }

    // ghost-penalty extrema at the level 1/M over the sampled points
    {
        double wmin = std::numeric_limits<double>::infinity(), wmax = -wmin;
        for (int k = 0; k < samples; ++k) {
            const double w = fvals[k] + c.M.value * gplus[k];
            wmin = std::min(wmin, w);
            wmax = std::max(wmax, w);
        }
        c.Wm = ConstVal(wmin, Provenance::empirical);
        c.WM = ConstVal(wmax, Provenance::empirical);
        c.W0 = c.WM;  // worst case until a start point is supplied
    }

    {
        const double coef1 = c.bound_coef_lagrangian();
        const double coef2 = c.bound_coef_feasibility();
        const double coef3 = c.bound_coef_complementarity();
        const bool analytic = c.M.analytic() && c.a.analytic() && c.L_tilde_g.analytic();
        c.b = ConstVal(std::max({coef1, coef2, coef3}),
                       analytic ? Provenance::analytic : Provenance::empirical);
    }
    {
        const double gamma = constant_step_gamma(c, cfg);
        c.omega = ConstVal(compute_omega(c, cfg, gamma), Provenance::empirical);
    }
    return c;
}

ProblemConstants with_start_point(ProblemConstants c, const ProblemInstance& p, const Vec& x0) {
    const double f0 = p.f(x0);
    c.f_x0 = ConstVal(f0, Provenance::empirical);
    c.W0 = ConstVal(f0 + c.M.get("M") * p.max_g_plus(x0), Provenance::empirical);
    return c;
}

double constant_step_gamma(const ProblemConstants& c, const SolverConfig& cfg) {
    const double denom = c.L_grad_f.get("L_grad_f") + c.M.get("M") * c.max_L_grad_g.get("max_L_grad_g");
    const double raw = 0.99 * 2.0 * cfg.eta * cfg.c / std::max(denom, 1e-300);
    return std::min(raw, 1.0);
}

double compute_omega(const ProblemConstants& c, const SolverConfig& cfg, double gamma) {
    return cfg.eta * cfg.c -
           0.5 * gamma *
               (c.L_grad_f.get("L_grad_f") + c.M.get("M") * c.max_L_grad_g.get("max_L_grad_g"));
}

double holder_quotient_sample(const ProblemInstance& p, const SolverConfig& cfg, int samples,
                              unsigned long long seed) {
    if (samples < 2) throw ValidationError("holder_quotient_sample requires samples >= 2");
    double q = 0.0;
    for (int k = 0; k + 1 < samples; k += 2) {
        const Vec y = p.box_K.map_unit(halton_point(seed + 1 + k, p.n));
        const Vec z = p.box_K.map_unit(halton_point(seed + 2 + k, p.n));
        const double dist = nrm2(add_scaled(y, -1.0, z));
        if (dist < 1e-12) continue;
        const Vec dy = direction_at(p, y, cfg).d;
        const Vec dz = direction_at(p, z, cfg).d;
        q = std::max(q, nrm2(add_scaled(dy, -1.0, dz)) / std::sqrt(dist));
    }
    return q;
}

double gamma_from_threshold(const ProblemConstants& c, const SolverConfig& cfg, double T) {
    const double lg = std::max(c.max_L_grad_g.get("max_L_grad_g"), kLgradGFloor);
    return std::min(1.0, T * cfg.eta * cfg.c / (2.0 * lg));
}

}  // namespace gsqp
