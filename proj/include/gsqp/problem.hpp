#pragma once

#include <functional>
#include <optional>
#include <string>

#include "gsqp/linalg.hpp"

namespace gsqp {

struct ValidationError : Error {
    explicit ValidationError(const std::string& what) : Error(what) {}
};

/// Axis-aligned compact box that, by convention, contains every iterate the
/// drivers are expected to visit. Constants are estimated over this set;
/// iterates that leave it trigger a trace warning, never an error.
struct Box {
    Vec lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Vec& x, double slack = 1e-12) const;
    Vec center() const;
    Vec map_unit(const Vec& u) const;  // [0,1)^n -> box
};

/// Analytic values a problem author can supply (true suprema over box_K).
/// Anything missing is estimated by sampling.
struct AnalyticInfo {
    std::optional<double> L_grad_f;
    std::optional<Vec> L_grad_g;
    std::optional<double> L_tilde_g;        // max_i sup ||grad g_i||
    std::optional<double> max_grad_f_norm;  // sup ||grad f||
    std::optional<double> f_min, f_max, g_plus_max;
    bool emfcq = false;  // constraint qualification verified on the whole box
};

/// Smooth inequality-constrained instance: minimize f(x) s.t. g(x) <= 0.
/// Oracles must be pure; instances are immutable after construction and safe
/// to share between concurrent solver runs.
struct ProblemInstance {
    std::string name;
    int n = 0;  // variables
    int m = 0;  // inequality constraints
    std::function<double(const Vec&)> f;
    std::function<Vec(const Vec&)> grad_f;
    std::function<Vec(const Vec&)> g;      // m-vector
    std::function<Mat(const Vec&)> jac_g;  // n x m, column i = grad g_i
    Box box_K;
    AnalyticInfo analytic;

    double max_g_plus(const Vec& x) const;
};

enum class Provenance { analytic, empirical };

struct ConstVal {
    double value = 0.0;
    Provenance prov = Provenance::empirical;
    bool has = false;

    ConstVal() = default;
    ConstVal(double v, Provenance p) : value(v), prov(p), has(true) {}
    double get(const char* what) const;
    bool analytic() const { return has && prov == Provenance::analytic; }
};

/// Problem-dependent constants used by stepsize formulas, iteration bounds
/// and the residual audits. Provenance is tracked per field.
struct ProblemConstants {
    ConstVal L_grad_f;
    std::vector<ConstVal> L_grad_g;
    ConstVal max_L_grad_g;
    ConstVal L_tilde_g, L_grad_tilde_g, L_grad_tilde_f;
    ConstVal M;  // bound on ||xi||_1 over the box (dominates every multiplier norm used)
    ConstVal B;  // sup ||grad f|| beta + eta c beta^2
    ConstVal a, b, omega;
    ConstVal W0, Wm, WM, fm, fM, gM_plus;
    ConstVal f_x0;  // f at the start point, set by with_start_point

    // configuration snapshot used when the derived fields were formed
    double lambda = 0.0, beta = 0.0, eta = 0.0, c = 0.0;
    int samples = 0;

    double bound_coef_lagrangian() const;
    double bound_coef_feasibility() const;
    double bound_coef_complementarity() const;
    bool bound_coefs_present() const;
};

struct StepsizeRule {
    enum class Kind { constant, harmonic, power, piecewise_constant, linesearch };
    Kind kind = Kind::harmonic;
    std::optional<double> gamma;  // constant rule; absent -> derived from constants
    double gamma0 = 1.0;
    double p = 1.0;  // power rule exponent, must lie in (0.5, 1]

    static StepsizeRule constant(std::optional<double> gamma = std::nullopt);
    static StepsizeRule harmonic(double gamma0 = 1.0);
    static StepsizeRule power(double gamma0, double p);
    double at(int nu) const;  // diminishing rules only
    void validate() const;
};

struct ClassifyTolerances {
    double feas = 1e-2;
    double stat = 1e-2;
    double comp = 1e-2;
    double act_scale = 1e-6;  // active window: act_scale * (1 + max violation)

    /// Default classification tolerances scale with the stopping threshold.
    static ClassifyTolerances for_delta(double delta);
};

struct SolverConfig {
    double lambda = 0.5;
    double rho = 0.5;
    double beta = 10.0;
    double c = 1.0;
    double eta = 0.9;
    double delta = 1e-3;
    double gamma0 = 1.0;
    std::optional<double> T_init;  // absent: algorithm-specific default
    long max_iters = 200000;
    unsigned long long seed = 0;
    ClassifyTolerances classify;
    bool classify_set = false;  // when false, classify follows delta

    void validate() const;
    ClassifyTolerances classify_tol() const;
};

/// Load an expression-defined problem from a JSON file (see README for the
/// schema). Gradients come from symbolic differentiation or central finite
/// differences, per the file's grad_mode.
ProblemInstance load_problem(const std::string& path);
ProblemInstance problem_from_json_text(const std::string& text);

struct GradientCheckReport {
    bool pass = true;
    double worst_rel_err = 0.0;
    Vec worst_point;
    std::string worst_field;  // "grad_f" or "grad_g[i]"
};

/// Central finite-difference validation of grad_f and jac_g at Halton points.
GradientCheckReport check_gradients(const ProblemInstance& p, int points = 20,
                                    double tol = 1e-5, unsigned long long seed = 0);

}  // namespace gsqp
