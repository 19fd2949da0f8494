#pragma once

// Command layer behind the CLI: each cmd_* function runs a configured job,
// writes its CSV outputs plus a manifest.json into the output directory, and
// prints a short summary line per result to the log stream.
//
// Data CSVs are deterministic (fixed float formatting, no wall-clock values);
// timings and the generation timestamp live in manifest.json only, so
// re-running the same configuration reproduces every CSV byte for byte.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hwrd/config.hpp"
#include "hwrd/csv.hpp"
#include "hwrd/fd_reference.hpp"
#include "hwrd/field.hpp"
#include "hwrd/series.hpp"
#include "hwrd/solver.hpp"

namespace hwrd {

namespace bench_detail {

inline std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

inline std::filesystem::path prepare_output_dir(const RunConfig& c) {
    std::filesystem::path dir(c.output_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_manifest(const RunConfig& c, const std::string& command,
                           const nlohmann::json& extra, const std::filesystem::path& dir) {
    nlohmann::json j = manifest_json(c);
    j["command"] = command;
    j["generated_at"] = iso_timestamp();
    for (const auto& [key, value] : extra.items()) j[key] = value;
    write_file(dir / "manifest.json", j.dump(2) + "\n");
}

inline nlohmann::json timings_json(const RunResult& r) {
    nlohmann::json j;
    j["assemble_seconds"] = r.assemble_seconds;
    j["factor_seconds"] = r.factor_seconds;
    j["step_seconds"] = r.step_seconds;
    j["solve_seconds"] = r.solve_seconds;
    j["mean_iterations"] = r.mean_iterations;
    j["max_iterations"] = r.max_iterations;
    j["steps"] = r.steps;
    return j;
}

inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

inline std::string point_label(const Point& p, int dim) {
    std::string s = fmt(p[0]);
    for (int a = 1; a < dim; ++a) s += " " + fmt(p[a]);
    return s;
}

// Multilinear interpolation of a snapshot at an arbitrary point (clamped to
// the snapshot's grid); used to evaluate a reference computed on a different
// grid at this solver's collocation points.
inline double interp_snapshot(const Snapshot& s, const Point& p) {
    std::array<std::size_t, 3> cell = {0, 0, 0};
    std::array<double, 3> frac = {0.0, 0.0, 0.0};
    for (int a = 0; a < s.dim; ++a) {
        const std::vector<double>& xs = s.coords[a];
        if (xs.size() == 1) continue;
        if (p[a] <= xs.front()) { cell[a] = 0; frac[a] = 0.0; continue; }
        if (p[a] >= xs.back()) { cell[a] = xs.size() - 2; frac[a] = 1.0; continue; }
        const auto it = std::upper_bound(xs.begin(), xs.end(), p[a]);
        cell[a] = static_cast<std::size_t>(it - xs.begin()) - 1;
        frac[a] = (p[a] - xs[cell[a]]) / (xs[cell[a] + 1] - xs[cell[a]]);
    }
    double acc = 0.0;
    const int corners = 1 << s.dim;
    for (int corner = 0; corner < corners; ++corner) {
        double weight = 1.0;
        std::array<std::size_t, 3> idx = {0, 0, 0};
        for (int a = 0; a < s.dim; ++a) {
            const bool high = (corner >> a) & 1;
            if (s.coords[a].size() == 1) {
                if (high) weight = 0.0;
                continue;
            }
            idx[a] = cell[a] + (high ? 1 : 0);
            weight *= high ? frac[a] : 1.0 - frac[a];
        }
        if (weight != 0.0) acc += weight * s.v.at(idx[0], idx[1], idx[2]);
    }
    return acc;
}

}  // namespace bench_detail

// -- solve ------------------------------------------------------------------

// Run one configured simulation; write series.csv, one snapshot_<k>.csv per
// requested snapshot time, and manifest.json.
inline RunResult cmd_solve(const RunConfig& c, std::ostream& log = std::cout) {
    validate(c);
    const ProblemSpec spec = to_problem_spec(c);
    CollocationSolver solver(spec);
    RunResult result = solver.run(c.probes, c.snapshot_times);

    const auto dir = bench_detail::prepare_output_dir(c);
    {
        std::ofstream out(dir / "series.csv", std::ios::binary);
        write_series_csv(out, result.probes);
    }
    nlohmann::json snap_files = nlohmann::json::array();
    for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
        char name[48];
        std::snprintf(name, sizeof(name), "snapshot_%03zu.csv", k);
        std::ofstream out(dir / name, std::ios::binary);
        write_snapshot_csv(out, result.snapshots[k]);
        snap_files.push_back({{"file", name}, {"t", result.snapshots[k].t}});
    }

    nlohmann::json extra;
    extra["timings"] = bench_detail::timings_json(result);
    extra["outputs"] = {{"series", "series.csv"}, {"snapshots", snap_files}};
    bench_detail::write_manifest(c, "solve", extra, dir);

    log << "solve: " << to_string(c.scenario) << " dim=" << c.dim << " level=" << c.level[0]
        << " steps=" << result.steps << " probes=" << result.probes.size()
        << " snapshots=" << result.snapshots.size() << " -> " << dir.string() << "\n";
    return result;
}

// -- convergence --------------------------------------------------------------

struct ConvergenceRow {
    std::string location;  // probe label, or "max" for the grid-wide maximum
    double dt = 0.0;
    double abs_error = 0.0;
};

struct ConvergenceOutcome {
    std::vector<ConvergenceRow> rows;
    double fitted_order = 0.0;   // slope of log10(max error) vs log10(dt)
    std::string reference;       // description of the reference solution
};

// Temporal-refinement study: run each dt in `dt_list` (strictly decreasing),
// then a finer reference, and table the final-time errors per probe plus the
// grid-wide maximum.  Coarse runs are written to disk as they finish, so a
// reference failure still leaves their outputs behind.
//
// ref_kind "fine-dt": same discretization at dt = ref_dt.
// ref_kind "fd":      the finite-difference reference at dt = ref_dt with
//                     fd_nodes vertices per axis, interpolated onto this
//                     solver's grid.
inline ConvergenceOutcome cmd_convergence(RunConfig c, std::vector<double> dt_list,
                                          const std::string& ref_kind, double ref_dt,
                                          std::size_t fd_nodes,
                                          std::ostream& log = std::cout) {
    validate(c);
    if (dt_list.empty()) throw std::runtime_error("convergence: dt list is empty");
    for (std::size_t i = 0; i + 1 < dt_list.size(); ++i)
        if (dt_list[i] <= dt_list[i + 1])
            throw std::runtime_error("convergence: dt list must be strictly decreasing");
    if (ref_dt <= 0.0 || ref_dt >= dt_list.back())
        throw std::runtime_error("convergence: reference dt must be finer than every entry");
    if (ref_kind != "fine-dt" && ref_kind != "fd")
        throw std::runtime_error("convergence: reference kind must be fine-dt or fd");

    const auto dir = bench_detail::prepare_output_dir(c);
    const std::vector<double> want_snap = {c.t_end};

    // coarse runs first: their outputs land on disk before the (much more
    // expensive) reference starts
    std::vector<RunResult> runs;
    nlohmann::json run_files = nlohmann::json::array();
    for (std::size_t k = 0; k < dt_list.size(); ++k) {
        RunConfig ck = c;
        ck.dt = dt_list[k];
        const ProblemSpec spec = to_problem_spec(ck);
        CollocationSolver solver(spec);
        runs.push_back(solver.run(c.probes, want_snap));
        char sname[48], pname[48];
        std::snprintf(sname, sizeof(sname), "run_%03zu_snapshot.csv", k);
        std::snprintf(pname, sizeof(pname), "run_%03zu_series.csv", k);
        {
            std::ofstream out(dir / sname, std::ios::binary);
            write_snapshot_csv(out, runs.back().snapshots.at(0));
        }
        {
            std::ofstream out(dir / pname, std::ios::binary);
            write_series_csv(out, runs.back().probes);
        }
        run_files.push_back({{"dt", dt_list[k]}, {"snapshot", sname}, {"series", pname}});
        log << "convergence: dt=" << bench_detail::fmt(dt_list[k]) << " done ("
            << runs.back().steps << " steps)\n";
    }

    // reference run; on failure the coarse outputs above survive
    Snapshot ref_snap;
    std::vector<ProbeSeries> ref_probes;
    bool ref_on_same_grid = false;
    std::string ref_desc;
    try {
        if (ref_kind == "fine-dt") {
            RunConfig cr = c;
            cr.dt = ref_dt;
            const ProblemSpec spec = to_problem_spec(cr);
            CollocationSolver solver(spec);
            RunResult ref = solver.run(c.probes, want_snap);
            ref_snap = std::move(ref.snapshots.at(0));
            ref_probes = std::move(ref.probes);
            ref_on_same_grid = true;
            ref_desc = "same discretization at dt=" + bench_detail::fmt(ref_dt);
        } else {
            if (fd_nodes < 3) throw std::runtime_error("convergence: fd reference needs >= 3 nodes");
            RunConfig cr = c;
            cr.dt = ref_dt;
            const ProblemSpec spec = to_problem_spec(cr);
            std::array<std::size_t, 3> nodes = {1, 1, 1};
            for (int a = 0; a < c.dim; ++a) nodes[a] = fd_nodes;
            FdReference fd(spec, nodes);
            RunResult ref = fd.run(c.probes, want_snap);
            ref_snap = std::move(ref.snapshots.at(0));
            ref_probes = std::move(ref.probes);
            ref_on_same_grid = false;
            ref_desc = "finite-difference reference, " + std::to_string(fd_nodes) +
                       " nodes/axis, dt=" + bench_detail::fmt(ref_dt);
        }
    } catch (const std::exception& e) {
        nlohmann::json extra;
        extra["runs"] = run_files;
        extra["dt_list"] = dt_list;
        extra["reference"] = {{"kind", ref_kind}, {"dt", ref_dt}, {"failed", e.what()}};
        bench_detail::write_manifest(c, "convergence", extra, dir);
        log << "convergence: reference run FAILED (" << e.what()
            << "); per-dt outputs kept in " << dir.string() << "\n";
        throw;
    }
    {
        std::ofstream out(dir / "reference_snapshot.csv", std::ios::binary);
        write_snapshot_csv(out, ref_snap);
    }

    ConvergenceOutcome outcome;
    outcome.reference = ref_desc;
    for (std::size_t k = 0; k < dt_list.size(); ++k) {
        const Snapshot& snap = runs[k].snapshots.at(0);
        double grid_max = 0.0;
        for (std::size_t i3 = 0; i3 < snap.v.n[2]; ++i3)
            for (std::size_t i2 = 0; i2 < snap.v.n[1]; ++i2)
                for (std::size_t i1 = 0; i1 < snap.v.n[0]; ++i1) {
                    double ref_val;
                    if (ref_on_same_grid) {
                        ref_val = ref_snap.v.at(i1, i2, i3);
                    } else {
                        Point p{0.0, 0.0, 0.0};
                        p[0] = snap.coords[0][i1];
                        if (c.dim > 1) p[1] = snap.coords[1][i2];
                        if (c.dim > 2) p[2] = snap.coords[2][i3];
                        ref_val = bench_detail::interp_snapshot(ref_snap, p);
                    }
                    grid_max = std::max(grid_max, std::abs(snap.v.at(i1, i2, i3) - ref_val));
                }
        for (std::size_t p = 0; p < runs[k].probes.size(); ++p) {
            const ProbeSeries& ps = runs[k].probes[p];
            double ref_val;
            if (ref_on_same_grid) {
                ref_val = ref_probes.at(p).v.back();
            } else {
                ref_val = bench_detail::interp_snapshot(ref_snap, ps.snapped);
            }
            outcome.rows.push_back(ConvergenceRow{
                bench_detail::point_label(ps.snapped, c.dim), dt_list[k],
                std::abs(ps.v.back() - ref_val)});
        }
        outcome.rows.push_back(ConvergenceRow{"max", dt_list[k], grid_max});
        log << "convergence: dt=" << bench_detail::fmt(dt_list[k])
            << " max error=" << bench_detail::fmt(grid_max) << "\n";
    }

    if (dt_list.size() >= 2) {
        std::vector<double> xs, ys;
        for (const ConvergenceRow& r : outcome.rows)
            if (r.location == "max" && r.abs_error > 0.0) {
                xs.push_back(std::log10(r.dt));
                ys.push_back(std::log10(r.abs_error));
            }
        if (xs.size() >= 2) outcome.fitted_order = fit_slope(xs, ys);
    }

    {
        std::ostringstream csv;
        csv << "location,dt,abs_error\n";
        for (const ConvergenceRow& r : outcome.rows)
            csv << r.location << "," << csv_num(r.dt) << "," << csv_num(r.abs_error) << "\n";
        bench_detail::write_file(dir / "error_table.csv", csv.str());
    }
    nlohmann::json extra;
    extra["runs"] = run_files;
    extra["dt_list"] = dt_list;
    extra["reference"] = {{"kind", ref_kind}, {"dt", ref_dt}, {"description", ref_desc}};
    if (ref_kind == "fd") extra["reference"]["nodes_per_axis"] = fd_nodes;
    extra["fitted_temporal_order"] = outcome.fitted_order;
    bench_detail::write_manifest(c, "convergence", extra, dir);

    log << "convergence: fitted temporal order " << bench_detail::fmt(outcome.fitted_order)
        << " (reference: " << ref_desc << ") -> " << dir.string() << "\n";
    return outcome;
}

// -- resolution-test ------------------------------------------------------------

struct ResolutionOutcome {
    std::vector<int> levels;
    std::vector<double> gaps;  // gaps[k] = max |probe series(level k) - (level k+1)|
};

// Spatial-refinement study at fixed dt: re-run the scenario at each level and
// report the maximum probe-series gap between successive levels.
inline ResolutionOutcome cmd_resolution_test(RunConfig c, std::vector<int> levels,
                                             std::ostream& log = std::cout) {
    validate(c);
    if (levels.size() < 2) throw std::runtime_error("resolution-test: need at least 2 levels");
    for (std::size_t k = 0; k + 1 < levels.size(); ++k)
        if (levels[k] >= levels[k + 1])
            throw std::runtime_error("resolution-test: levels must be strictly increasing");

    std::vector<RunResult> runs;
    for (int j : levels) {
        RunConfig ck = c;
        ck.level = {j, j, j};
        validate(ck);  // per-level guardrail (3D cap, 0..8)
        const ProblemSpec spec = to_problem_spec(ck);
        CollocationSolver solver(spec);
        runs.push_back(solver.run(c.probes, {}));
        log << "resolution-test: level " << j << " done\n";
    }

    ResolutionOutcome outcome;
    outcome.levels = levels;
    for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
        double gap = 0.0;
        for (std::size_t p = 0; p < runs[k].probes.size(); ++p) {
            const auto& a = runs[k].probes[p];
            const auto& b = runs[k + 1].probes[p];
            for (std::size_t s = 0; s < a.t.size(); ++s)
                gap = std::max(gap, std::abs(a.v[s] - b.v[s]));
        }
        outcome.gaps.push_back(gap);
        log << "resolution-test: gap(level " << levels[k] << ", level " << levels[k + 1]
            << ") = " << bench_detail::fmt(gap) << "\n";
    }

    const auto dir = bench_detail::prepare_output_dir(c);
    {
        // one wide CSV: per probe and time, the trace at every level
        std::ostringstream csv;
        csv << "t,probe_id";
        for (int j : levels) csv << ",v_level" << j;
        csv << "\n";
        const auto& t0 = runs.front().probes.empty() ? std::vector<double>{}
                                                     : runs.front().probes.front().t;
        for (std::size_t s = 0; s < t0.size(); ++s)
            for (std::size_t p = 0; p < runs.front().probes.size(); ++p) {
                csv << csv_num(t0[s]) << ",p" << (p + 1);
                for (const RunResult& r : runs) csv << "," << csv_num(r.probes[p].v[s]);
                csv << "\n";
            }
        bench_detail::write_file(dir / "resolution.csv", csv.str());
    }
    nlohmann::json extra;
    extra["levels"] = levels;
    extra["gaps"] = outcome.gaps;
    bench_detail::write_manifest(c, "resolution-test", extra, dir);

    log << "resolution-test: last gap " << bench_detail::fmt(outcome.gaps.back()) << " -> "
        << dir.string() << "\n";
    return outcome;
}

// -- bench-solvers ---------------------------------------------------------------

struct SolverBenchRow {
    std::string method;
    bool ok = false;
    std::string message;          // failure reason when !ok
    double total_seconds = 0.0;   // assemble + factor + stepping
    double factor_seconds = 0.0;
    double step_seconds = 0.0;
    double mean_iterations = 0.0;
    std::size_t max_iterations = 0;
    double max_diff_vs_direct = 0.0;  // over all probes and times
};

// Re-run the identical scenario once per linear-solve method and compare each
// run against the direct-solve baseline.  A method failure is recorded in its
// row and the sweep continues.
inline std::vector<SolverBenchRow> cmd_bench_solvers(RunConfig c,
                                                     std::vector<std::string> methods,
                                                     std::ostream& log = std::cout) {
    validate(c);
    if (methods.empty()) methods = {"cgs", "bicg", "bicgstab", "gmres"};

    RunConfig cd = c;
    cd.solver.method = SolveMethod::direct;
    RunResult direct;
    {
        const ProblemSpec spec = to_problem_spec(cd);
        CollocationSolver solver(spec);
        direct = solver.run(c.probes, {});
    }
    std::vector<SolverBenchRow> rows;
    {
        SolverBenchRow r;
        r.method = "direct";
        r.ok = true;
        r.total_seconds = direct.assemble_seconds + direct.factor_seconds + direct.step_seconds;
        r.factor_seconds = direct.factor_seconds;
        r.step_seconds = direct.step_seconds;
        rows.push_back(r);
    }

    for (const std::string& name : methods) {
        SolverBenchRow r;
        r.method = name;
        try {
            RunConfig ck = c;
            if (name == "cgs") ck.solver.method = SolveMethod::cgs;
            else if (name == "bicg") ck.solver.method = SolveMethod::bicg;
            else if (name == "bicgstab") ck.solver.method = SolveMethod::bicgstab;
            else if (name == "gmres") ck.solver.method = SolveMethod::gmres;
            else throw std::runtime_error("unknown method `" + name + "`");
            const ProblemSpec spec = to_problem_spec(ck);
            CollocationSolver solver(spec);
            const RunResult run = solver.run(c.probes, {});
            r.ok = true;
            r.total_seconds = run.assemble_seconds + run.factor_seconds + run.step_seconds;
            r.factor_seconds = run.factor_seconds;
            r.step_seconds = run.step_seconds;
            r.mean_iterations = run.mean_iterations;
            r.max_iterations = run.max_iterations;
            for (std::size_t p = 0; p < run.probes.size(); ++p)
                for (std::size_t s = 0; s < run.probes[p].v.size(); ++s)
                    r.max_diff_vs_direct = std::max(
                        r.max_diff_vs_direct,
                        std::abs(run.probes[p].v[s] - direct.probes[p].v[s]));
        } catch (const std::exception& e) {
            r.ok = false;
            r.message = e.what();
        }
        rows.push_back(r);
        if (r.ok)
            log << "bench-solvers: " << r.method << " ok, mean iters "
                << bench_detail::fmt(r.mean_iterations) << ", max diff vs direct "
                << bench_detail::fmt(r.max_diff_vs_direct) << ", "
                << bench_detail::fmt(r.total_seconds) << " s\n";
        else
            log << "bench-solvers: " << r.method << " FAILED: " << r.message << "\n";
    }

    const auto dir = bench_detail::prepare_output_dir(c);
    {
        // timings stay out of the CSV so identical runs produce identical bytes
        std::ostringstream csv;
        csv << "method,status,mean_iterations,max_iterations,max_diff_vs_direct,message\n";
        for (const SolverBenchRow& r : rows)
            csv << r.method << "," << (r.ok ? "ok" : "failed") << ","
                << csv_num(r.mean_iterations) << "," << r.max_iterations << ","
                << csv_num(r.max_diff_vs_direct) << "," << r.message << "\n";
        bench_detail::write_file(dir / "bench.csv", csv.str());
    }
    nlohmann::json timings = nlohmann::json::array();
    for (const SolverBenchRow& r : rows)
        timings.push_back({{"method", r.method},
                           {"ok", r.ok},
                           {"total_seconds", r.total_seconds},
                           {"factor_seconds", r.factor_seconds},
                           {"step_seconds", r.step_seconds},
                           {"mean_iterations", r.mean_iterations},
                           {"max_iterations", r.max_iterations},
                           {"max_diff_vs_direct", r.max_diff_vs_direct}});
    nlohmann::json extra;
    extra["solver_bench"] = timings;
    bench_detail::write_manifest(c, "bench-solvers", extra, dir);
    log << "bench-solvers: " << rows.size() << " rows -> " << dir.string() << "\n";
    return rows;
}

// -- compare-ref -----------------------------------------------------------------

// Run both the wavelet solver and the independent finite-difference reference
// on the same problem and compare the probe series (1D/2D only).
inline std::vector<ProbeComparison> cmd_compare_ref(const RunConfig& c, std::size_t fd_nodes,
                                                    std::ostream& log = std::cout) {
    validate(c);
    if (c.dim > 2)
        throw std::runtime_error("compare-ref: the finite-difference comparison covers 1D/2D");
    if (fd_nodes < 3) throw std::runtime_error("compare-ref: need >= 3 nodes per axis");

    const ProblemSpec spec = to_problem_spec(c);
    RunResult hw;
    {
        CollocationSolver solver(spec);
        hw = solver.run(c.probes, {});
    }
    std::array<std::size_t, 3> nodes = {1, 1, 1};
    for (int a = 0; a < c.dim; ++a) nodes[a] = fd_nodes;
    RunResult fd;
    {
        FdReference ref(spec, nodes);
        fd = ref.run(c.probes, {});
    }
    const std::vector<ProbeComparison> cmp = compare(hw.probes, fd.probes);

    const auto dir = bench_detail::prepare_output_dir(c);
    {
        std::ofstream out(dir / "hw_series.csv", std::ios::binary);
        write_series_csv(out, hw.probes);
    }
    {
        std::ofstream out(dir / "fd_series.csv", std::ios::binary);
        write_series_csv(out, fd.probes);
    }
    {
        std::ofstream out(dir / "comparison.csv", std::ios::binary);
        write_comparison_csv(out, cmp, c.dim);
    }
    nlohmann::json extra;
    extra["fd_nodes_per_axis"] = fd_nodes;
    extra["timings"] = {{"wavelet", bench_detail::timings_json(hw)},
                        {"fd", bench_detail::timings_json(fd)}};
    nlohmann::json cj = nlohmann::json::array();
    for (const ProbeComparison& pc : cmp)
        cj.push_back({{"location", bench_detail::point_label(pc.location, c.dim)},
                      {"max_abs_diff", pc.max_abs_diff},
                      {"mean_abs_diff", pc.mean_abs_diff},
                      {"t_at_max", pc.t_at_max}});
    extra["comparison"] = cj;
    bench_detail::write_manifest(c, "compare-ref", extra, dir);

    for (const ProbeComparison& pc : cmp)
        log << "compare-ref: probe (" << bench_detail::point_label(pc.location, c.dim)
            << ") max |diff| " << bench_detail::fmt(pc.max_abs_diff) << " at t="
            << bench_detail::fmt(pc.t_at_max) << "\n";
    log << "compare-ref: " << cmp.size() << " probes -> " << dir.string() << "\n";
    return cmp;
}

// -- approx ----------------------------------------------------------------------

// Field-approximation demo: expand a catalog function on the wavelet grid,
// report per-level coefficient decay, and write reconstruction samples.
inline DecayReport cmd_approx(const std::string& function_name, int dim, int level,
                              const std::string& output_dir,
                              std::ostream& log = std::cout) {
    if (dim < 1 || dim > 3) throw std::runtime_error("approx: dim must be 1..3");
    if (level < 0 || level > 8) throw std::runtime_error("approx: level must lie in 0..8");

    std::function<double(const Point&)> f;
    if (function_name == "linear") {
        f = [dim](const Point& p) {
            double s = 0.0;
            for (int a = 0; a < dim; ++a) s += p[a];
            return s;
        };
    } else if (function_name == "product") {
        f = [dim](const Point& p) {
            double s = 1.0;
            for (int a = 0; a < dim; ++a) s *= p[a];
            return s;
        };
    } else if (function_name == "cosine") {
        f = [dim](const Point& p) {
            double s = 1.0;
            for (int a = 0; a < dim; ++a) s *= std::cos(M_PI * p[a]);
            return s;
        };
    } else if (function_name == "step") {
        f = [dim](const Point& p) {
            for (int a = 0; a < dim; ++a)
                if (p[a] < 0.42 || p[a] > 0.52) return 1.0;
            return 1.5;
        };
    } else {
        throw std::runtime_error("approx: unknown function `" + function_name +
                                 "` (expected linear, product, cosine, or step)");
    }

    std::array<HaarBasis, 3> bases;
    for (int a = 0; a < dim; ++a) bases[a] = HaarBasis(0.0, 1.0, level);
    const WaveletSeries series = approximate(dim, bases, f);
    const DecayReport decay = coefficient_decay(series);

    std::filesystem::path dir(output_dir);
    std::filesystem::create_directories(dir);
    {
        std::ostringstream csv;
        csv << "level,max_abs_scaled_coefficient\n";
        for (std::size_t k = 0; k < decay.levels.size(); ++k)
            csv << decay.levels[k] << "," << csv_num(decay.max_abs[k]) << "\n";
        bench_detail::write_file(dir / "approx_decay.csv", csv.str());
    }
    {
        // reconstruction along the main diagonal of the box
        std::ostringstream csv;
        csv << (dim == 1 ? "x" : dim == 2 ? "x,y" : "x,y,z") << ",f,reconstruction,abs_err\n";
        const int samples = 101;
        for (int s = 0; s < samples; ++s) {
            const double x = static_cast<double>(s) / (samples - 1);
            Point p{0.0, 0.0, 0.0};
            for (int a = 0; a < dim; ++a) p[a] = x;
            const double exact = f(p), recon = series_eval(series, p);
            for (int a = 0; a < dim; ++a) csv << csv_num(p[a]) << ",";
            csv << csv_num(exact) << "," << csv_num(recon) << ","
                << csv_num(std::abs(exact - recon)) << "\n";
        }
        bench_detail::write_file(dir / "approx_reconstruction.csv", csv.str());
    }
    {
        nlohmann::json j;
        j["command"] = "approx";
        j["generated_at"] = bench_detail::iso_timestamp();
        j["function"] = function_name;
        j["dim"] = dim;
        j["level"] = level;
        j["fitted_slope"] = decay.fitted_slope;
        j["slope_valid"] = decay.slope_valid;
        j["scaling_entry"] = decay.scaling_entry;
        bench_detail::write_file(dir / "manifest.json", j.dump(2) + "\n");
    }

    log << "approx: " << function_name << " dim=" << dim << " level=" << level
        << " fitted per-level decay slope " << bench_detail::fmt(decay.fitted_slope)
        << (decay.slope_valid ? "" : " (too few nonzero levels for a fit)") << " -> "
        << dir.string() << "\n";
    return decay;
}

}  // namespace hwrd
