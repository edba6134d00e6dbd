#include "gsqp/drivers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace gsqp {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::stop_d: return "stop_d";
        case Termination::stop_theta: return "stop_theta";
        case Termination::max_iters: return "max_iters";
        case Termination::stationary_exact: return "stationary_exact";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

IterationRecord make_record(int nu, const ProblemInstance& p, const Vec& x,
                            const DirectionResult& dr, double gamma, std::optional<double> T,
                            Clock::time_point t0) {
    IterationRecord r;
    r.nu = nu;
    r.x = x;
    r.f = p.f(x);
    r.max_g_plus = dr.max_g_plus;
    r.kappa = dr.kappa;
    r.theta = dr.theta;
    r.d_norm = dr.d_norm;
    r.gamma = gamma;
    r.T = T;
    if (T) r.W_T = r.f + r.max_g_plus / *T;
    r.xi_inf = nrminf(dr.xi);
    r.kernel_iters = dr.lp_iterations + dr.qp_iterations;
    r.wall_ms = ms_since(t0);
    return r;
}

void check_box(const ProblemInstance& p, const Vec& x, IterationRecord& rec, DriverState& st) {
    if (!p.box_K.contains(x, 1e-12)) {
        rec.events.push_back("left_box");
        st.left_box = true;
    }
}

long effective_cap(const SolverConfig& cfg, const ProblemConstants* constants, BoundMode mode) {
    long cap = cfg.max_iters;
    if (constants) {
        try {
            const PredictedBound b = predict_bound(*constants, cfg, mode);
            const double safeguarded = 10.0 * b.iterations;
            if (std::isfinite(safeguarded) && safeguarded < static_cast<double>(cap))
                cap = std::max<long>(1, static_cast<long>(safeguarded));
        } catch (const Error&) {
            // missing constants: fall back to the configured cap
        }
    }
    return cap;
}

}  // namespace

DriverState run_algorithm1(const ProblemInstance& p, const SolverConfig& cfg,
                           const StepsizeRule& rule, const Vec& x0,
                           const ProblemConstants* constants) {
    cfg.validate();
    rule.validate();
    if (static_cast<int>(x0.size()) != p.n) throw ValidationError("x0 has wrong dimension");
    if (rule.kind != StepsizeRule::Kind::constant && rule.kind != StepsizeRule::Kind::harmonic &&
        rule.kind != StepsizeRule::Kind::power)
        throw ValidationError("algorithm 1 takes constant, harmonic or power rules");

    StepsizeRule r = rule;
    if (r.kind == StepsizeRule::Kind::constant && !r.gamma) {
        if (!constants) throw DriverError("constant rule without gamma needs problem constants");
        r.gamma = constant_step_gamma(*constants, cfg);
    }

    DriverState st;
    st.problem = p.name;
    st.algo = "1";
    st.x = x0;
    const auto t0 = Clock::now();

    for (long nu = 0;; ++nu) {
        const DirectionResult dr = direction_at(p, st.x, cfg);
        const double gamma = r.at(static_cast<int>(nu));
        IterationRecord rec = make_record(static_cast<int>(nu), p, st.x, dr, gamma, std::nullopt, t0);
        check_box(p, st.x, rec, st);

        if (dr.d_norm == 0.0) {
            st.termination = Termination::stationary_exact;
        } else if (dr.d_norm <= cfg.delta) {
            st.termination = Termination::stop_d;
        } else if (nu >= cfg.max_iters) {
            st.termination = Termination::max_iters;
        } else {
            st.trace.push_back(std::move(rec));
            st.x = add_scaled(st.x, gamma, dr.d);
            continue;
        }
        rec.events.push_back("stopped");
        st.trace.push_back(std::move(rec));
        st.final_direction = dr;
        st.iterations = static_cast<int>(nu);
        st.w_evaluations = nu;  // one objective/constraint evaluation per step
        break;
    }
    return st;
}

DriverState run_algorithm2(const ProblemInstance& p, const SolverConfig& cfg, const Vec& x0,
                           bool feasible_start, const ProblemConstants& constants) {
    cfg.validate();
    if (static_cast<int>(x0.size()) != p.n) throw ValidationError("x0 has wrong dimension");

    const double lg_raw = constants.max_L_grad_g.get("max_L_grad_g");
    const double lg_eff = std::max(lg_raw, kLgradGFloor);
    const double interval_hi = 2.0 * lg_eff / std::max(constants.L_grad_f.get("L_grad_f"),
                                                       cfg.eta * cfg.c);

    double T_prev;
    if (feasible_start) {
        if (p.max_g_plus(x0) > 0.0) throw ValidationError("feasible-start mode needs a feasible x0");
        T_prev = std::min(cfg.delta / constants.B.get("B"), interval_hi);
    } else {
        T_prev = cfg.T_init.value_or(interval_hi);
        if (!(T_prev > 0.0)) throw ValidationError("invalid T_init");
        // the admissible interval is meaningful only with nonlinear constraints
        if (lg_raw > 0.0 && T_prev > interval_hi * (1.0 + 1e-12))
            throw ValidationError("T_init outside (0, 2 max L_grad_g / max{L_grad_f, eta c}]");
    }
    double gamma_prev = gamma_from_threshold(constants, cfg, T_prev);

    DriverState st;
    st.problem = p.name;
    st.algo = "2";
    st.x = x0;
    const auto t0 = Clock::now();
    const long cap = effective_cap(cfg, &constants, BoundMode::algo2);

    for (long nu = 0;; ++nu) {
        const DirectionResult dr = direction_at(p, st.x, cfg);

        if (dr.d_norm <= cfg.delta) {  // small-direction stop
            IterationRecord rec =
                make_record(static_cast<int>(nu), p, st.x, dr, gamma_prev, T_prev, t0);
            check_box(p, st.x, rec, st);
            rec.events.push_back("stopped");
            st.trace.push_back(std::move(rec));
            st.termination =
                dr.d_norm == 0.0 ? Termination::stationary_exact : Termination::stop_d;
            st.final_direction = dr;
            st.iterations = static_cast<int>(nu);
            st.w_evaluations = nu;
            return st;
        }

        double T = T_prev, gamma = gamma_prev;
        bool reduced = false;
        const double dird = dr.grad_f_dot_d + cfg.eta * cfg.c * dr.d_norm * dr.d_norm;
        if (dird > 0.0 && T_prev > dr.theta / dird) {  // threshold test
            if (dr.theta <= cfg.delta) {               // violation-measure stop
                IterationRecord rec =
                    make_record(static_cast<int>(nu), p, st.x, dr, gamma_prev, T_prev, t0);
                check_box(p, st.x, rec, st);
                rec.events.push_back("stopped");
                st.trace.push_back(std::move(rec));
                st.termination = Termination::stop_theta;
                st.final_direction = dr;
                st.iterations = static_cast<int>(nu);
                st.w_evaluations = nu;
                return st;
            }
            T = 0.5 * dr.theta / dird;  // reduce the threshold, stepsize follows
            gamma = gamma_from_threshold(constants, cfg, T);
            reduced = true;
        }

        if (nu >= cap) {
            IterationRecord rec = make_record(static_cast<int>(nu), p, st.x, dr, gamma, T, t0);
            check_box(p, st.x, rec, st);
            rec.events.push_back("stopped");
            st.trace.push_back(std::move(rec));
            st.termination = Termination::max_iters;
            st.final_direction = dr;
            st.iterations = static_cast<int>(nu);
            st.w_evaluations = nu;
            return st;
        }

        IterationRecord rec = make_record(static_cast<int>(nu), p, st.x, dr, gamma, T, t0);
        check_box(p, st.x, rec, st);
        if (reduced) rec.events.push_back("T_reduced");
        st.trace.push_back(std::move(rec));

        st.x = add_scaled(st.x, gamma, dr.d);
        T_prev = T;
        gamma_prev = gamma;
    }
}

DriverState run_algorithm3(const ProblemInstance& p, const SolverConfig& cfg, const Vec& x0) {
    cfg.validate();
    if (static_cast<int>(x0.size()) != p.n) throw ValidationError("x0 has wrong dimension");

    double T_prev = cfg.T_init.value_or(1.0);
    double gamma = 1.0;  // persists across iterations

    DriverState st;
    st.problem = p.name;
    st.algo = "3";
    st.x = x0;
    const auto t0 = Clock::now();

    for (long nu = 0;; ++nu) {
        const DirectionResult dr = direction_at(p, st.x, cfg);

        if (dr.d_norm <= cfg.delta) {  // small-direction stop
            IterationRecord rec =
                make_record(static_cast<int>(nu), p, st.x, dr, gamma, T_prev, t0);
            check_box(p, st.x, rec, st);
            rec.events.push_back("stopped");
            st.trace.push_back(std::move(rec));
            st.termination =
                dr.d_norm == 0.0 ? Termination::stationary_exact : Termination::stop_d;
            st.final_direction = dr;
            st.iterations = static_cast<int>(nu);
            return st;
        }

        double T = T_prev;
        bool reduced = false;
        const double dird = dr.grad_f_dot_d + cfg.eta * cfg.c * dr.d_norm * dr.d_norm;
        if (dird > 0.0 && T_prev > dr.theta / dird) {  // threshold test
            if (dr.theta <= cfg.delta) {               // violation-measure stop
                IterationRecord rec =
                    make_record(static_cast<int>(nu), p, st.x, dr, gamma, T_prev, t0);
                check_box(p, st.x, rec, st);
                rec.events.push_back("stopped");
                st.trace.push_back(std::move(rec));
                st.termination = Termination::stop_theta;
                st.final_direction = dr;
                st.iterations = static_cast<int>(nu);
                return st;
            }
            T = 0.5 * dr.theta / dird;  // reduce the threshold only; the line search owns gamma
            reduced = true;
        }

        if (nu >= cfg.max_iters) {
            IterationRecord rec = make_record(static_cast<int>(nu), p, st.x, dr, gamma, T, t0);
            check_box(p, st.x, rec, st);
            rec.events.push_back("stopped");
            st.trace.push_back(std::move(rec));
            st.termination = Termination::max_iters;
            st.final_direction = dr;
            st.iterations = static_cast<int>(nu);
            return st;
        }

        // halve gamma until the penalty decrease test accepts
        const double W_x = ghost_penalty(p, st.x, T);
        const double need = cfg.eta * cfg.c / 4.0 * dr.d_norm * dr.d_norm;
        int halvings = 0;
        Vec cand;
        for (;;) {
            cand = add_scaled(st.x, gamma, dr.d);
            ++st.w_evaluations;
            const double W_c = ghost_penalty(p, cand, T);
            if (W_c - W_x <= -gamma * need) break;
            gamma *= 0.5;
            if (++halvings > 200)
                throw DriverError("line search exceeded 200 halvings; oracle contract violated");
        }
        st.total_halvings += halvings;

        IterationRecord rec = make_record(static_cast<int>(nu), p, st.x, dr, gamma, T, t0);
        check_box(p, st.x, rec, st);
        if (reduced) rec.events.push_back("T_reduced");
        if (halvings > 0) rec.events.push_back("gamma_halved:" + std::to_string(halvings));
        st.trace.push_back(std::move(rec));

        st.x = cand;
        T_prev = T;
    }
}

PredictedBound predict_bound(const ProblemConstants& c, const SolverConfig& cfg, BoundMode mode) {
    PredictedBound out;
    const double delta = cfg.delta;
    const double etac = cfg.eta * cfg.c;
    auto adv = [&](std::initializer_list<const ConstVal*> used) {
        for (const ConstVal* v : used)
            if (!v->analytic()) out.advisory = true;
    };

    switch (mode) {
        case BoundMode::constant_step: {
            const double gamma = constant_step_gamma(c, cfg);
            const double omega = compute_omega(c, cfg, gamma);
            if (!(omega > 0.0)) throw Error("predict_bound: nonpositive omega");
            out.iterations =
                std::ceil((c.W0.get("W0") - c.Wm.get("Wm")) / (gamma * omega * delta * delta));
            out.formula = "ceil((W0 - Wm) / (gamma omega delta^2))";
            adv({&c.W0, &c.Wm, &c.L_grad_f, &c.max_L_grad_g, &c.M});
            break;
        }
        case BoundMode::harmonic: {
            // the window applies when gamma0 already satisfies the constant-step
            // condition; omega is then the decrease coefficient at gamma0
            const double omega = compute_omega(c, cfg, cfg.gamma0);
            if (!(omega > 0.0)) {
                out.iterations = std::numeric_limits<double>::infinity();
                out.advisory = true;
                out.formula = "gamma0 exceeds the admissible constant step; window not applicable";
                break;
            }
            const double x =
                (c.W0.get("W0") - c.Wm.get("Wm")) / (cfg.gamma0 * omega * delta * delta);
            out.iterations = x > 700.0 ? std::numeric_limits<double>::infinity()
                                       : std::ceil(std::exp(x));
            out.lower = x - 1.0 > 700.0 ? std::numeric_limits<double>::infinity()
                                        : std::floor(std::exp(x - 1.0));
            out.formula = "floor(exp(N-1)) < iters < ceil(exp(N)), N = (W0-Wm)/(gamma0 omega delta^2)";
            adv({&c.W0, &c.Wm, &c.L_grad_f, &c.max_L_grad_g, &c.M});
            break;
        }
        case BoundMode::algo2: {
            const double lg_eff = std::max(c.max_L_grad_g.get("max_L_grad_g"), kLgradGFloor);
            const double interval_hi =
                2.0 * lg_eff / std::max(c.L_grad_f.get("L_grad_f"), etac);
            const double Tm1 = cfg.T_init.value_or(interval_hi);
            const double fM = c.fM.get("fM"), fm = c.fm.get("fm"), gM = c.gM_plus.get("gM_plus");
            const double B = c.B.get("B");
            // both cases of the halting argument, evaluated through the
            // stepsize formula (keeps linear-constraint instances finite)
            const double n_rare = std::ceil(4.0 / (etac * gamma_from_threshold(c, cfg, Tm1)) *
                                            (fM - fm + gM / Tm1) / (delta * delta));
            const double T_floor = delta / (2.0 * B);
            const double n_main = std::ceil(4.0 / (etac * gamma_from_threshold(c, cfg, T_floor)) *
                                            (fM - fm + gM * 2.0 * B / delta) / (delta * delta));
            out.iterations = std::max(n_rare, n_main);
            out.formula = "max over the never-reduced / reduced-threshold halting counts";
            adv({&c.L_grad_f, &c.max_L_grad_g, &c.B, &c.fM, &c.fm, &c.gM_plus});
            break;
        }
        case BoundMode::algo2_feasible: {
            const double lg_eff = std::max(c.max_L_grad_g.get("max_L_grad_g"), kLgradGFloor);
            const double interval_hi =
                2.0 * lg_eff / std::max(c.L_grad_f.get("L_grad_f"), etac);
            const double Tm1 = std::min(delta / c.B.get("B"), interval_hi);
            const double f0 = c.f_x0.has ? c.f_x0.value : c.fM.get("fM");
            out.iterations = std::ceil(4.0 / (etac * gamma_from_threshold(c, cfg, Tm1)) *
                                       (f0 - c.fm.get("fm")) / (delta * delta));
            out.formula = "feasible-start count via the accuracy-dependent initial threshold";
            adv({&c.L_grad_f, &c.max_L_grad_g, &c.B, &c.fm});
            break;
        }
        case BoundMode::algo3: {
            const double B = c.B.get("B");
            const double lg = c.max_L_grad_g.get("max_L_grad_g");
            const double G = std::min(
                0.5, 0.75 * etac / (c.L_grad_f.get("L_grad_f") + 2.0 * B * lg / delta));
            const double fM = c.fM.get("fM"), fm = c.fm.get("fm"), gM = c.gM_plus.get("gM_plus");
            const double Tm1 = cfg.T_init.value_or(1.0);
            const double worst_invT = std::max(1.0 / Tm1, 2.0 * B / delta);
            out.iterations =
                std::ceil(4.0 / (etac * G) * (fM - fm + gM * worst_invT) / (delta * delta));
            out.evaluations = out.iterations + std::ceil(std::log2(1.0 / G));
            out.formula = "halting count at the minimum line-search step G, plus the halving budget";
            adv({&c.L_grad_f, &c.max_L_grad_g, &c.B, &c.fM, &c.fm, &c.gM_plus});
            break;
        }
    }
    return out;
}

}  // namespace gsqp
