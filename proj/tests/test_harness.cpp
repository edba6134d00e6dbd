#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gsqp/audit.hpp"
#include "gsqp/registry.hpp"

using namespace gsqp;

namespace {

std::string tmp_path(const char* stem) {
    return std::string("harness_") + stem + ".csv";
}

std::vector<std::string> csv_lines_without_walltime(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        // wall_ms is the second-to-last column; blank it
        const size_t last = line.rfind(',');
        if (last == std::string::npos) {
            out.push_back(line);
            continue;
        }
        const size_t prev = line.rfind(',', last - 1);
        out.push_back(line.substr(0, prev + 1) + line.substr(last));
    }
    return out;
}

}  // namespace

TEST_CASE("trace round trip preserves every numeric field") {
    const ProblemInstance p = registry_get("prob_A");
    SolverConfig cfg;
    cfg.delta = 1e-3;
    const DriverState st = run_algorithm3(p, cfg, {0.0});
    const std::string path = tmp_path("roundtrip");
    write_trace_csv(path, st, p.n);
    int n = 0;
    const auto recs = read_trace_csv(path, &n);
    CHECK(n == p.n);
    REQUIRE(recs.size() == st.trace.size());
    for (size_t k = 0; k < recs.size(); ++k) {
        CHECK(recs[k].x == st.trace[k].x);  // %.17g round-trips bit-exactly
        CHECK(recs[k].kappa == st.trace[k].kappa);
        CHECK(recs[k].d_norm == st.trace[k].d_norm);
        CHECK(recs[k].gamma == st.trace[k].gamma);
        CHECK(recs[k].T.has_value() == st.trace[k].T.has_value());
        if (recs[k].T) CHECK(*recs[k].T == *st.trace[k].T);
        CHECK(recs[k].events == st.trace[k].events);
    }
    std::remove(path.c_str());
}

TEST_CASE("audits from disk reproduce in-memory verdicts") {
    const ProblemInstance p = registry_get("prob_2d");
    SolverConfig cfg;
    cfg.delta = 1e-2;
    const ProblemConstants c = estimate_constants(p, cfg, 512);
    const DriverState st = run_algorithm2(p, cfg, p.box_K.center(), false, c);
    const std::string path = tmp_path("diskaudit");
    write_trace_csv(path, st, p.n);
    const auto disk_trace = read_trace_csv(path);

    const auto mem = run_all_audits(p, cfg, st.trace, &c, "2", st.termination, false);
    const auto disk = run_all_audits(p, cfg, disk_trace, &c, "2", st.termination, false);
    REQUIRE(mem.size() == disk.size());
    for (size_t i = 0; i < mem.size(); ++i) {
        CHECK(mem[i].suite == disk[i].suite);
        CHECK(mem[i].pass == disk[i].pass);
        CHECK(mem[i].worst_margin == doctest::Approx(disk[i].worst_margin).epsilon(1e-12));
    }
    for (const auto& a : mem) {
        CAPTURE(a.suite);
        CHECK(a.pass);
    }
    std::remove(path.c_str());
}

TEST_CASE("a corrupted iterate trips the update-identity audit") {
    const ProblemInstance p = registry_get("prob_A");
    SolverConfig cfg;
    cfg.delta = 1e-3;
    const DriverState st = run_algorithm1(p, cfg, StepsizeRule::harmonic(1.0), {0.0});
    REQUIRE(st.trace.size() >= 3);
    auto broken = st.trace;
    broken[1].x[0] += 1e-3;  // hand-corrupted iterate
    CHECK(audit_update_identity(p, cfg, st.trace).pass);
    CHECK_FALSE(audit_update_identity(p, cfg, broken).pass);
}

TEST_CASE("identical runs give identical traces modulo the timing column") {
    const ProblemInstance p = registry_get("prob_2d");
    SolverConfig cfg;
    cfg.delta = 1e-2;
    const DriverState a = run_algorithm3(p, cfg, p.box_K.center());
    const DriverState b = run_algorithm3(p, cfg, p.box_K.center());
    const std::string pa = tmp_path("det_a"), pb = tmp_path("det_b");
    write_trace_csv(pa, a, p.n);
    write_trace_csv(pb, b, p.n);
    CHECK(csv_lines_without_walltime(pa) == csv_lines_without_walltime(pb));
    std::remove(pa.c_str());
    std::remove(pb.c_str());
}

TEST_CASE("report JSON round trip carries the run identity") {
    const ProblemInstance p = registry_get("prob_A");
    SolverConfig cfg;
    cfg.delta = 1e-3;
    RunReport rep;
    rep.problem = p.name;
    rep.algo = "3";
    rep.cfg = cfg;
    rep.state = run_algorithm3(p, cfg, {0.0});
    rep.stationarity =
        classify_point(p, rep.state.x, rep.state.final_direction, cfg.classify_tol());
    rep.trace_file = tmp_path("report_trace");
    write_trace_csv(rep.trace_file, rep.state, p.n);
    const std::string jpath = "harness_report.json";
    write_report_json(jpath, rep);

    const StoredRun sr = read_report_json(jpath);
    CHECK(sr.problem == "prob_A");
    CHECK(sr.algo == "3");
    CHECK(sr.cfg.delta == cfg.delta);
    CHECK(sr.termination == rep.state.termination);
    const auto recs = read_trace_csv(sr.trace_file);
    CHECK(recs.size() == rep.state.trace.size());
    std::remove(jpath.c_str());
    std::remove(rep.trace_file.c_str());
}

TEST_CASE("threshold-rule audit flags a tampered stepsize") {
    const ProblemInstance p = registry_get("prob_sf");
    SolverConfig cfg;
    cfg.delta = 1e-2;
    const ProblemConstants c = estimate_constants(p, cfg, 512);
    DriverState st = run_algorithm2(p, cfg, {0.0, 0.0}, false, c);
    CHECK(audit_threshold_rules(p, cfg, st.trace, c).pass);
    bool tampered = false;
    for (auto& r : st.trace) {
        for (const auto& e : r.events)
            if (e == "T_reduced") {
                r.gamma *= 2.0;
                tampered = true;
            }
        if (tampered) break;
    }
    if (tampered) CHECK_FALSE(audit_threshold_rules(p, cfg, st.trace, c).pass);
}
