#include <cmath>
#include <filesystem>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gsqp/audit.hpp"
#include "gsqp/registry.hpp"
#include "gsqp/trace_io.hpp"

namespace fs = std::filesystem;
using namespace gsqp;

namespace {

struct CommonOpts {
    std::string problem;
    std::string problem_file;
    std::string algo = "3";
    std::string rule = "harmonic";
    SolverConfig cfg;
    std::string x0_text;
    std::string out_dir = "out";
    bool feasible_start = false;
    int samples = 2048;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--problem", o.problem, "registry problem name");
    cmd->add_option("--problem-file", o.problem_file, "JSON problem file");
    cmd->add_option("--algo", o.algo, "1, 2, 3 or const")->capture_default_str();
    cmd->add_option("--rule", o.rule, "constant|harmonic|power (algorithm 1)")->capture_default_str();
    cmd->add_option("--delta", o.cfg.delta, "target tolerance")->capture_default_str();
    cmd->add_option("--gamma0", o.cfg.gamma0, "initial stepsize scale")->capture_default_str();
    cmd->add_option("--T0", [&o](const std::vector<std::string>& v) {
        o.cfg.T_init = std::stod(v.at(0));
        return true;
    }, "initial threshold");
    cmd->add_option("--eta", o.cfg.eta)->capture_default_str();
    cmd->add_option("--c", o.cfg.c)->capture_default_str();
    cmd->add_option("--lambda", o.cfg.lambda)->capture_default_str();
    cmd->add_option("--rho", o.cfg.rho)->capture_default_str();
    cmd->add_option("--beta", o.cfg.beta)->capture_default_str();
    cmd->add_option("--x0", o.x0_text, "comma-separated start point (default: box center)");
    cmd->add_option("--max-iters", o.cfg.max_iters)->capture_default_str();
    cmd->add_option("--seed", o.cfg.seed)->capture_default_str();
    cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--samples", o.samples, "constant-estimation sample count")->capture_default_str();
    cmd->add_flag("--feasible-start", o.feasible_start, "algorithm 2 feasible-start mode");
}

ProblemInstance resolve_problem(const CommonOpts& o) {
    if (!o.problem_file.empty()) return load_problem(o.problem_file);
    if (!o.problem.empty()) return registry_get(o.problem);
    throw Error("one of --problem or --problem-file is required");
}

Vec resolve_x0(const CommonOpts& o, const ProblemInstance& p) {
    if (o.x0_text.empty()) return p.box_K.center();
    Vec x;
    std::stringstream ss(o.x0_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) x.push_back(std::stod(tok));
    if (static_cast<int>(x.size()) != p.n) throw ValidationError("--x0 has wrong dimension");
    return x;
}

struct RunOutput {
    DriverState state;
    RunReport report;
};

RunOutput execute_run(const ProblemInstance& p, const CommonOpts& o, const SolverConfig& cfg) {
    const Vec x0 = resolve_x0(o, p);
    ProblemConstants constants =
        with_start_point(estimate_constants(p, cfg, o.samples, cfg.seed), p, x0);

    RunOutput out;
    bool constant_rule = false;
    if (o.algo == "1" || o.algo == "const") {
        StepsizeRule rule;
        if (o.algo == "const" || o.rule == "constant") {
            rule = StepsizeRule::constant();
            constant_rule = true;
        } else if (o.rule == "harmonic") {
            rule = StepsizeRule::harmonic(cfg.gamma0);
        } else if (o.rule == "power") {
            rule = StepsizeRule::power(cfg.gamma0, 0.75);
        } else {
            throw Error("unknown rule: " + o.rule);
        }
        out.state = run_algorithm1(p, cfg, rule, x0, &constants);
    } else if (o.algo == "2") {
        out.state = run_algorithm2(p, cfg, x0, o.feasible_start, constants);
    } else if (o.algo == "3") {
        out.state = run_algorithm3(p, cfg, x0);
    } else {
        throw Error("unknown algorithm: " + o.algo);
    }

    RunReport& rep = out.report;
    rep.problem = p.name;
    rep.algo = out.state.algo;
    rep.cfg = cfg;
    rep.state = out.state;
    rep.stationarity = classify_point(p, out.state.x, out.state.final_direction, cfg.classify_tol());
    rep.constants = constants;
    rep.constant_rule = constant_rule;
    rep.audits = run_all_audits(p, cfg, out.state.trace, &constants, out.state.algo,
                                out.state.termination, constant_rule);
    try {
        if (o.algo == "const" || (o.algo == "1" && o.rule == "constant"))
            rep.bounds.emplace_back("constant_step",
                                    predict_bound(constants, cfg, BoundMode::constant_step));
        if (o.algo == "1" && o.rule == "harmonic")
            rep.bounds.emplace_back("harmonic_window",
                                    predict_bound(constants, cfg, BoundMode::harmonic));
        if (o.algo == "2")
            rep.bounds.emplace_back(o.feasible_start ? "algo2_feasible" : "algo2",
                                    predict_bound(constants, cfg,
                                                   o.feasible_start ? BoundMode::algo2_feasible
                                                                    : BoundMode::algo2));
        if (o.algo == "3")
            rep.bounds.emplace_back("algo3", predict_bound(constants, cfg, BoundMode::algo3));
    } catch (const Error&) {
        // bounds are reporting sugar; missing constants should not kill a run
    }
    return out;
}

int cmd_solve(const CommonOpts& o) {
    const ProblemInstance p = resolve_problem(o);
    SolverConfig cfg = o.cfg;
    cfg.validate();
    RunOutput run = execute_run(p, o, cfg);

    fs::create_directories(o.out_dir);
    const std::string trace_path = (fs::path(o.out_dir) / (p.name + "_trace.csv")).string();
    const std::string report_path = (fs::path(o.out_dir) / (p.name + "_report.json")).string();
    write_trace_csv(trace_path, run.state, p.n);
    run.report.trace_file = trace_path;
    write_report_json(report_path, run.report);

    std::cout << p.name << " algo=" << run.state.algo
              << " termination=" << to_string(run.state.termination)
              << " iterations=" << run.state.iterations
              << " classification=" << to_string(run.report.stationarity.classification) << "\n"
              << "trace:  " << trace_path << "\nreport: " << report_path << "\n";
    if (run.state.left_box)
        std::cerr << "warning: iterates left the declared box; constants may not cover the run\n";
    for (const auto& a : run.report.audits) {
        std::cout << "audit " << a.suite << ": " << (a.pass ? "pass" : "FAIL")
                  << (a.advisory ? " (advisory)" : "") << " worst_margin=" << a.worst_margin
                  << "\n";
    }
    switch (run.state.termination) {
        case Termination::stop_d:
        case Termination::stop_theta:
        case Termination::stationary_exact: return 0;
        case Termination::max_iters: return 2;
    }
    return 2;
}

int cmd_constants(const CommonOpts& o) {
    const ProblemInstance p = resolve_problem(o);
    SolverConfig cfg = o.cfg;
    cfg.validate();
    const ProblemConstants c = estimate_constants(p, cfg, o.samples, cfg.seed);
    std::cout << constants_to_json(c) << "\n";
    return 0;
}

int cmd_check(const CommonOpts& o, const std::string& report_path) {
    ProblemInstance p{};
    SolverConfig cfg;
    std::vector<IterationRecord> trace;
    Termination term = Termination::max_iters;
    std::string algo;
    bool constant_rule = false;

    if (!report_path.empty()) {
        const StoredRun sr = read_report_json(report_path);
        p = !o.problem_file.empty() ? load_problem(o.problem_file) : registry_get(sr.problem);
        cfg = sr.cfg;
        trace = read_trace_csv(sr.trace_file);
        term = sr.termination;
        algo = sr.algo;
        constant_rule = sr.constant_rule;
    } else {
        p = resolve_problem(o);
        cfg = o.cfg;
        cfg.validate();
        RunOutput run = execute_run(p, o, cfg);
        trace = run.state.trace;
        term = run.state.termination;
        algo = run.state.algo;
        constant_rule = o.algo == "const" || (o.algo == "1" && o.rule == "constant");
    }

    const ProblemConstants constants =
        with_start_point(estimate_constants(p, cfg, o.samples, cfg.seed), p,
                         trace.empty() ? p.box_K.center() : trace.front().x);
    const auto audits =
        run_all_audits(p, cfg, trace, &constants, algo, term, constant_rule);
    bool all = true;
    for (const auto& a : audits) {
        std::cout << "audit " << a.suite << ": " << (a.pass ? "pass" : "FAIL")
                  << (a.advisory ? " (advisory)" : "") << " worst_margin=" << a.worst_margin
                  << (a.detail.empty() ? "" : "  [" + a.detail + "]") << "\n";
        if (!a.pass && !a.advisory) all = false;
    }
    std::cout << (all ? "all audits pass" : "audit failures present") << "\n";
    return all ? 0 : 1;
}

int cmd_bench(const CommonOpts& base, const std::string& problems_text,
              const std::string& algos_text, const std::string& deltas_text, int jobs) {
    std::vector<std::string> problems, algos;
    std::vector<double> deltas;
    {
        std::stringstream ss(problems_text);
        std::string tok;
        while (std::getline(ss, tok, ',')) problems.push_back(tok);
    }
    {
        std::stringstream ss(algos_text);
        std::string tok;
        while (std::getline(ss, tok, ',')) algos.push_back(tok);
    }
    {
        std::stringstream ss(deltas_text);
        std::string tok;
        while (std::getline(ss, tok, ',')) deltas.push_back(std::stod(tok));
    }
    if (problems.empty() || algos.empty() || deltas.empty())
        throw Error("bench needs --problems, --algos and --deltas");

    struct Cell {
        std::string problem, algo;
        double delta;
        long iterations = 0;
        long w_evals = 0;
        double predicted = 0.0;
        bool predicted_advisory = true;
        bool bound_ok = true;
        std::string termination;
    };

    std::vector<Cell> cells;
    for (const auto& pr : problems)
        for (const auto& al : algos)
            for (double dl : deltas) cells.push_back(Cell{pr, al, dl, 0, 0, 0.0, true, true, ""});

    auto run_cell = [&base](Cell cell) {
        CommonOpts o = base;
        o.problem = cell.problem;
        o.algo = cell.algo;
        o.cfg.delta = cell.delta;
        if (cell.algo == "const") o.rule = "constant";
        const ProblemInstance p = registry_get(cell.problem);
        SolverConfig cfg = o.cfg;
        cfg.validate();
        RunOutput run = execute_run(p, o, cfg);
        cell.iterations = run.state.iterations;
        cell.w_evals = run.state.w_evaluations;
        cell.termination = to_string(run.state.termination);
        if (!run.report.bounds.empty()) {
            cell.predicted = run.report.bounds.front().second.iterations;
            cell.predicted_advisory = run.report.bounds.front().second.advisory;
            cell.bound_ok = cell.iterations <= cell.predicted;
        }
        return cell;
    };

    if (jobs > 1) {
        std::vector<std::future<Cell>> futs;
        for (const auto& c : cells)
            futs.push_back(std::async(std::launch::async, run_cell, c));
        for (size_t i = 0; i < cells.size(); ++i) cells[i] = futs[i].get();
    } else {
        for (auto& c : cells) c = run_cell(c);
    }

    std::cout << "problem,algo,delta,iterations,w_evals,predicted_bound,bound_ok,termination\n";
    for (const auto& c : cells) {
        std::cout << c.problem << ',' << c.algo << ',' << c.delta << ',' << c.iterations << ','
                  << c.w_evals << ',' << c.predicted << ','
                  << (c.bound_ok ? (c.predicted_advisory ? "yes(advisory)" : "yes") : "NO") << ','
                  << c.termination << "\n";
    }

    // log-log slope of iterations against 1/delta per problem x algorithm
    std::cout << "\nproblem,algo,iters_vs_invdelta_slope\n";
    for (const auto& pr : problems) {
        for (const auto& al : algos) {
            std::vector<double> xs, ys;
            for (const auto& c : cells)
                if (c.problem == pr && c.algo == al && c.iterations > 0) {
                    xs.push_back(std::log(1.0 / c.delta));
                    ys.push_back(std::log(static_cast<double>(c.iterations)));
                }
            std::cout << pr << ',' << al << ',';
            if (xs.size() < 2) {
                std::cout << "\n";  // slope needs at least two points
                continue;
            }
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (size_t i = 0; i < xs.size(); ++i) {
                sx += xs[i];
                sy += ys[i];
                sxx += xs[i] * xs[i];
                sxy += xs[i] * ys[i];
            }
            const double nn = static_cast<double>(xs.size());
            const double denom = nn * sxx - sx * sx;
            std::cout << (denom != 0.0 ? (nn * sxy - sx * sy) / denom : 0.0) << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SQP-style solver with relaxed convex direction subproblems and a bound-audit harness"};
    app.require_subcommand(1);

    CommonOpts so, co, ko, bo;
    std::string report_path;
    std::string problems_text, algos_text = "3", deltas_text = "0.001";
    int jobs = 1;

    CLI::App* solve = app.add_subcommand("solve", "run one driver on one problem");
    add_common(solve, so);
    CLI::App* bench = app.add_subcommand("bench", "sweep problems x algorithms x deltas");
    add_common(bench, bo);
    bench->add_option("--problems", problems_text, "comma-separated registry names")->required();
    bench->add_option("--algos", algos_text, "comma-separated: 1,2,3,const")->capture_default_str();
    bench->add_option("--deltas", deltas_text, "comma-separated tolerances")->capture_default_str();
    bench->add_option("--jobs", jobs, "concurrent cells")->capture_default_str();
    CLI::App* check = app.add_subcommand("check", "audit a run (fresh or from disk)");
    add_common(check, ko);
    check->add_option("--report", report_path, "report JSON written by solve");
    CLI::App* consts = app.add_subcommand("constants", "print estimated problem constants");
    add_common(consts, co);

    try {
        app.parse(argc, argv);
        if (solve->parsed()) return cmd_solve(so);
        if (bench->parsed()) return cmd_bench(bo, problems_text, algos_text, deltas_text, jobs);
        if (check->parsed()) return cmd_check(ko, report_path);
        if (consts->parsed()) return cmd_constants(co);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
