#include "gsqp/trace_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gsqp {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void write_trace_csv(const std::string& path, const DriverState& st, int n) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write trace file: " + path);
    out << "nu";
    for (int j = 0; j < n; ++j) out << ",x" << (j + 1);
    out << ",f,max_g_plus,kappa,theta,d_norm,gamma,T,W_T,xi_inf,kernel_iters,wall_ms,events\n";
    for (const auto& r : st.trace) {
        out << r.nu;
        for (int j = 0; j < n; ++j) out << ',' << fmt(r.x[j]);
        out << ',' << fmt(r.f) << ',' << fmt(r.max_g_plus) << ',' << fmt(r.kappa) << ','
            << fmt(r.theta) << ',' << fmt(r.d_norm) << ',' << fmt(r.gamma) << ',';
        if (r.T) out << fmt(*r.T);
        out << ',';
        if (r.W_T) out << fmt(*r.W_T);
        out << ',' << fmt(r.xi_inf) << ',' << r.kernel_iters << ',' << fmt(r.wall_ms) << ',';
        for (size_t i = 0; i < r.events.size(); ++i) out << (i ? "|" : "") << r.events[i];
        out << '\n';
    }
}

std::vector<IterationRecord> read_trace_csv(const std::string& path, int* n_out) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read trace file: " + path);
    std::string header;
    if (!std::getline(in, header)) throw Error("empty trace file: " + path);
    const auto cols = split(header, ',');
    int n = 0;
    for (const auto& c : cols) {
        bool coord = c.size() > 1 && c[0] == 'x';
        for (size_t i = 1; coord && i < c.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(c[i]))) coord = false;
        if (coord) ++n;
    }
    if (n_out) *n_out = n;
    const size_t expected = static_cast<size_t>(n) + 13;
    if (cols.size() != expected) throw Error("unexpected trace header in " + path);

    std::vector<IterationRecord> recs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != expected) throw Error("short trace row in " + path);
        IterationRecord r;
        size_t k = 0;
        r.nu = std::stoi(f[k++]);
        r.x.resize(n);
        for (int j = 0; j < n; ++j) r.x[j] = std::stod(f[k++]);
        r.f = std::stod(f[k++]);
        r.max_g_plus = std::stod(f[k++]);
        r.kappa = std::stod(f[k++]);
        r.theta = std::stod(f[k++]);
        r.d_norm = std::stod(f[k++]);
        r.gamma = std::stod(f[k++]);
        if (!f[k].empty()) r.T = std::stod(f[k]);
        ++k;
        if (!f[k].empty()) r.W_T = std::stod(f[k]);
        ++k;
        r.xi_inf = std::stod(f[k++]);
        r.kernel_iters = std::stoi(f[k++]);
        r.wall_ms = std::stod(f[k++]);
        if (!f[k].empty())
            for (auto& e : split(f[k], '|')) r.events.push_back(e);
        recs.push_back(std::move(r));
    }
    return recs;
}

namespace {

nlohmann::json cfg_to_json(const SolverConfig& cfg) {
    nlohmann::json j;
    j["lambda"] = cfg.lambda;
    j["rho"] = cfg.rho;
    j["beta"] = cfg.beta;
    j["c"] = cfg.c;
    j["eta"] = cfg.eta;
    j["delta"] = cfg.delta;
    j["gamma0"] = cfg.gamma0;
    if (cfg.T_init) j["T_init"] = *cfg.T_init;
    j["max_iters"] = cfg.max_iters;
    j["seed"] = cfg.seed;
    const ClassifyTolerances t = cfg.classify_tol();
    j["classify"] = {{"feas", t.feas}, {"stat", t.stat}, {"comp", t.comp}, {"act_scale", t.act_scale}};
    return j;
}

SolverConfig cfg_from_json(const nlohmann::json& j) {
    SolverConfig cfg;
    cfg.lambda = j.at("lambda").get<double>();
    cfg.rho = j.at("rho").get<double>();
    cfg.beta = j.at("beta").get<double>();
    cfg.c = j.at("c").get<double>();
    cfg.eta = j.at("eta").get<double>();
    cfg.delta = j.at("delta").get<double>();
    cfg.gamma0 = j.at("gamma0").get<double>();
    if (j.contains("T_init")) cfg.T_init = j.at("T_init").get<double>();
    cfg.max_iters = j.at("max_iters").get<long>();
    cfg.seed = j.at("seed").get<unsigned long long>();
    return cfg;
}

nlohmann::json constval_to_json(const ConstVal& v) {
    if (!v.has) return nullptr;
    return {{"value", v.value}, {"provenance", v.prov == Provenance::analytic ? "analytic" : "empirical"}};
}

nlohmann::json constants_json(const ProblemConstants& c) {
    nlohmann::json j;
    j["L_grad_f"] = constval_to_json(c.L_grad_f);
    nlohmann::json lg = nlohmann::json::array();
    for (const auto& v : c.L_grad_g) lg.push_back(constval_to_json(v));
    j["L_grad_g"] = lg;
    j["max_L_grad_g"] = constval_to_json(c.max_L_grad_g);
    j["L_tilde_g"] = constval_to_json(c.L_tilde_g);
    j["L_grad_tilde_g"] = constval_to_json(c.L_grad_tilde_g);
    j["L_grad_tilde_f"] = constval_to_json(c.L_grad_tilde_f);
    j["M"] = constval_to_json(c.M);
    j["B"] = constval_to_json(c.B);
    j["a"] = constval_to_json(c.a);
    j["b"] = constval_to_json(c.b);
    j["omega"] = constval_to_json(c.omega);
    j["W0"] = constval_to_json(c.W0);
    j["Wm"] = constval_to_json(c.Wm);
    j["WM"] = constval_to_json(c.WM);
    j["fm"] = constval_to_json(c.fm);
    j["fM"] = constval_to_json(c.fM);
    j["gM_plus"] = constval_to_json(c.gM_plus);
    j["f_x0"] = constval_to_json(c.f_x0);
    j["lambda"] = c.lambda;
    j["beta"] = c.beta;
    j["eta"] = c.eta;
    j["c"] = c.c;
    j["samples"] = c.samples;
    return j;
}

double json_finite(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? 1e308 : -1e308;
}

}  // namespace

std::string constants_to_json(const ProblemConstants& c) { return constants_json(c).dump(2); }

std::string report_to_json(const RunReport& rep) {
    nlohmann::json j;
    j["schema"] = rep.schema;
    j["problem"] = rep.problem;
    j["algo"] = rep.algo;
    j["config"] = cfg_to_json(rep.cfg);
    j["termination"] = to_string(rep.state.termination);
    j["iterations"] = rep.state.iterations;
    j["w_evaluations"] = rep.state.w_evaluations;
    j["total_halvings"] = rep.state.total_halvings;
    j["left_box"] = rep.state.left_box;
    j["final_x"] = rep.state.x;
    j["classification"] = to_string(rep.stationarity.classification);
    nlohmann::json res;
    res["lagrangian"] = rep.stationarity.lagrangian_residual;
    res["feasibility"] = rep.stationarity.feasibility_residual;
    res["complementarity"] = rep.stationarity.complementarity_residual;
    if (rep.stationarity.feasibility_stationarity)
        res["feasibility_stationarity"] = *rep.stationarity.feasibility_stationarity;
    else
        res["feasibility_stationarity"] = nullptr;
    j["residuals"] = res;
    if (rep.constants) j["constants"] = constants_json(*rep.constants);
    nlohmann::json audits = nlohmann::json::array();
    for (const auto& a : rep.audits) {
        audits.push_back({{"suite", a.suite},
                          {"pass", a.pass},
                          {"advisory", a.advisory},
                          {"worst_margin", json_finite(a.worst_margin)},
                          {"detail", a.detail}});
    }
    j["audits"] = audits;
    nlohmann::json bounds = nlohmann::json::object();
    for (const auto& [name, b] : rep.bounds) {
        nlohmann::json bj;
        bj["iterations"] = json_finite(b.iterations);
        if (b.lower) bj["lower"] = json_finite(*b.lower);
        if (b.evaluations) bj["evaluations"] = json_finite(*b.evaluations);
        bj["advisory"] = b.advisory;
        bj["formula"] = b.formula;
        bounds[name] = bj;
    }
    j["predicted_bounds"] = bounds;
    j["trace_file"] = rep.trace_file;
    j["constant_rule"] = rep.constant_rule;
    return j.dump(2);
}

void write_report_json(const std::string& path, const RunReport& rep) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write report file: " + path);
    out << report_to_json(rep) << '\n';
}

StoredRun read_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read report file: " + path);
    nlohmann::json j;
    in >> j;
    StoredRun r;
    r.problem = j.at("problem").get<std::string>();
    r.algo = j.at("algo").get<std::string>();
    r.cfg = cfg_from_json(j.at("config"));
    r.trace_file = j.at("trace_file").get<std::string>();
    r.constant_rule = j.value("constant_rule", false);
    const std::string t = j.at("termination").get<std::string>();
    if (t == "stop_d") r.termination = Termination::stop_d;
    else if (t == "stop_theta") r.termination = Termination::stop_theta;
    else if (t == "stationary_exact") r.termination = Termination::stationary_exact;
    else r.termination = Termination::max_iters;
    return r;
}

}  // namespace gsqp
