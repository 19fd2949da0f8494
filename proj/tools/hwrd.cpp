// Command-line front end for the wavelet collocation reaction-diffusion solver.
//
//   hwrd solve            run one scenario, write probe series + snapshots
//   hwrd convergence      temporal-refinement error table against a reference
//   hwrd resolution-test  spatial-refinement gaps across levels
//   hwrd bench-solvers    compare linear-solve methods on one scenario
//   hwrd compare-ref      wavelet solver vs finite-difference reference (1D/2D)
//   hwrd approx           wavelet expansion of a catalog function
//
// Settings resolve in order: scenario preset, then config file, then flags.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hwrd/bench.hpp"
#include "hwrd/config.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream ss(s);
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const std::string& tok : split_commas(s)) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::runtime_error(what + ": `" + tok + "` is not a number");
        }
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
    std::vector<int> out;
    for (const std::string& tok : split_commas(s)) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stoi(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::runtime_error(what + ": `" + tok + "` is not an integer");
        }
    }
    return out;
}

// flags shared by every simulation subcommand
struct CommonOpts {
    std::string config_path;
    std::string scenario;
    int level = -1;
    double dt = 0.0;
    double t_end = 0.0;
    std::string out;
    std::string method;
    double tol = 0.0;
    long long restart = 0;
    long long max_iter = -1;
    std::string precond;
    std::vector<std::string> probes;     // each "x[,y[,z]]"
    std::vector<double> snapshots;
    bool allow_large = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("-c,--config", o.config_path, "configuration file (key = value sections)");
    cmd->add_option("-s,--scenario", o.scenario,
                    "preset: example1_fhn_1d, example2_fhn_2d, example3_ms_2d, example4_hh, "
                    "example5_ms_3d, custom");
    cmd->add_option("-J,--level", o.level, "resolution level for every axis (0..8)");
    cmd->add_option("--dt", o.dt, "time step");
    cmd->add_option("--t-end", o.t_end, "final time");
    cmd->add_option("-o,--out", o.out, "output directory");
    cmd->add_option("--method", o.method, "linear solver: direct, cgs, bicg, bicgstab, gmres");
    cmd->add_option("--tol", o.tol, "Krylov relative residual tolerance");
    cmd->add_option("--restart", o.restart, "GMRES restart length");
    cmd->add_option("--max-iter", o.max_iter, "Krylov iteration cap (0 = automatic)");
    cmd->add_option("--precond", o.precond, "preconditioner: none or ilu0");
    cmd->add_option("--probe", o.probes, "probe location `x[,y[,z]]` (repeatable)");
    cmd->add_option("--snapshot", o.snapshots, "snapshot time (repeatable)");
    cmd->add_flag("--allow-large", o.allow_large, "lift the default 3D resolution cap");
}

hwrd::RunConfig build_config(const CommonOpts& o) {
    std::optional<hwrd::ConfigFile> cf;
    if (!o.config_path.empty()) cf = hwrd::ConfigFile::parse_file(o.config_path);

    std::string sc_name = o.scenario;
    if (cf) {
        const std::string from_file = cf->get_string("run", "scenario", "custom");
        if (sc_name.empty()) sc_name = from_file;
    }
    if (sc_name.empty()) sc_name = "custom";
    hwrd::RunConfig c = hwrd::scenario_defaults(hwrd::scenario_from_string(sc_name));

    if (cf) {
        hwrd::apply_config(c, *cf);
        cf->require_all_used();
    }

    if (o.level >= 0) c.level = {o.level, o.level, o.level};
    if (o.dt > 0.0) c.dt = o.dt;
    if (o.t_end > 0.0) c.t_end = o.t_end;
    if (!o.out.empty()) c.output_dir = o.out;
    if (o.allow_large) c.allow_large = true;

    if (!o.method.empty()) {
        if (o.method == "direct") c.solver.method = hwrd::SolveMethod::direct;
        else if (o.method == "cgs") c.solver.method = hwrd::SolveMethod::cgs;
        else if (o.method == "bicg") c.solver.method = hwrd::SolveMethod::bicg;
        else if (o.method == "bicgstab") c.solver.method = hwrd::SolveMethod::bicgstab;
        else if (o.method == "gmres") c.solver.method = hwrd::SolveMethod::gmres;
        else throw std::runtime_error("--method must be direct, cgs, bicg, bicgstab, or gmres");
    }
    if (o.tol > 0.0) c.solver.tol = o.tol;
    if (o.restart > 0) c.solver.restart = static_cast<std::size_t>(o.restart);
    if (o.max_iter >= 0) c.solver.max_iter = static_cast<std::size_t>(o.max_iter);
    if (!o.precond.empty()) {
        if (o.precond == "none") c.solver.preconditioner = hwrd::PrecondKind::none;
        else if (o.precond == "ilu0") c.solver.preconditioner = hwrd::PrecondKind::ilu0;
        else throw std::runtime_error("--precond must be none or ilu0");
    }

    if (!o.probes.empty()) {
        c.probes.clear();
        for (const std::string& ps : o.probes) {
            const std::vector<double> nums = parse_double_list(ps, "--probe");
            if (static_cast<int>(nums.size()) != c.dim)
                throw std::runtime_error("--probe `" + ps + "`: expected " +
                                         std::to_string(c.dim) + " coordinates");
            hwrd::Point p{0.0, 0.0, 0.0};
            for (int a = 0; a < c.dim; ++a) p[a] = nums[a];
            c.probes.push_back(p);
        }
    }
    if (!o.snapshots.empty()) c.snapshot_times = o.snapshots;

    hwrd::validate(c);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Haar wavelet collocation solver for reaction-diffusion systems"};
    app.require_subcommand(1);

    CommonOpts solve_opts, conv_opts, res_opts, bench_opts, cmp_opts;

    CLI::App* solve = app.add_subcommand("solve", "run one scenario");
    add_common(solve, solve_opts);

    CLI::App* conv = app.add_subcommand("convergence", "temporal-refinement error table");
    add_common(conv, conv_opts);
    std::string dt_list_str, ref_kind = "fine-dt";
    double ref_dt = 0.0;
    std::size_t conv_fd_nodes = 257;
    conv->add_option("--dt-list", dt_list_str, "comma-separated steps, largest first")
        ->required();
    conv->add_option("--ref", ref_kind, "reference kind: fine-dt (default) or fd");
    conv->add_option("--ref-dt", ref_dt, "reference time step (finer than every entry)")
        ->required();
    conv->add_option("--fd-nodes", conv_fd_nodes, "fd reference vertices per axis");

    CLI::App* res = app.add_subcommand("resolution-test", "spatial-refinement gaps");
    add_common(res, res_opts);
    std::string levels_str;
    res->add_option("--levels", levels_str, "comma-separated levels, increasing")->required();

    CLI::App* bench = app.add_subcommand("bench-solvers", "compare linear-solve methods");
    add_common(bench, bench_opts);
    bench_opts.precond = "ilu0";  // benchmark default; --precond none overrides
    std::string methods_str = "cgs,bicg,bicgstab,gmres";
    bench->add_option("--methods", methods_str, "comma-separated methods to benchmark");

    CLI::App* cmp = app.add_subcommand("compare-ref",
                                       "wavelet solver vs finite-difference reference");
    add_common(cmp, cmp_opts);
    std::size_t cmp_fd_nodes = 257;
    cmp->add_option("--fd-nodes", cmp_fd_nodes, "fd reference vertices per axis");

    CLI::App* approx = app.add_subcommand("approx", "wavelet expansion of a catalog function");
    std::string ap_function = "linear", ap_out = "out";
    int ap_dim = 1, ap_level = 5;
    approx->add_option("--function", ap_function, "linear, product, cosine, or step")
        ->required();
    approx->add_option("--dim", ap_dim, "dimension (1..3)");
    approx->add_option("-J,--level", ap_level, "resolution level (0..8)");
    approx->add_option("-o,--out", ap_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            hwrd::cmd_solve(build_config(solve_opts));
        } else if (conv->parsed()) {
            const std::vector<double> dt_list = parse_double_list(dt_list_str, "--dt-list");
            hwrd::cmd_convergence(build_config(conv_opts), dt_list, ref_kind, ref_dt,
                                  conv_fd_nodes);
        } else if (res->parsed()) {
            const std::vector<int> levels = parse_int_list(levels_str, "--levels");
            hwrd::cmd_resolution_test(build_config(res_opts), levels);
        } else if (bench->parsed()) {
            hwrd::cmd_bench_solvers(build_config(bench_opts), split_commas(methods_str));
        } else if (cmp->parsed()) {
            hwrd::cmd_compare_ref(build_config(cmp_opts), cmp_fd_nodes);
        } else if (approx->parsed()) {
            hwrd::cmd_approx(ap_function, ap_dim, ap_level, ap_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
