#include "telegraph/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "telegraph/acceptance.hpp"
#include "telegraph/config.hpp"
#include "telegraph/csv_io.hpp"
#include "telegraph/error.hpp"
#include "telegraph/harness.hpp"
#include "telegraph/pde_solver.hpp"
#include "telegraph/simulator.hpp"
#include "telegraph/spectral.hpp"
#include "telegraph/svg_plot.hpp"
#include "telegraph/transform_solver.hpp"

namespace telegraph {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
    std::string compare_a, compare_b;
    std::optional<double> tol_max, tol_z;
};

struct Context {
    RunConfig cfg;
    fs::path out;
    bool quiet;
    std::uint64_t hash;

    CsvHeader header(const std::string& command) const { return {command, hash, cfg.sim.seed}; }

    void say(const std::string& line) const {
        if (!quiet) std::cout << line << '\n';
    }

    template <class Fn>
    void write(const std::string& name, Fn&& fn) const {
        fs::create_directories(out);
        const fs::path path = out / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error(ErrorCode::IoError, path.string(), "cannot write");
        fn(f);
        if (!f) throw Error(ErrorCode::IoError, path.string(), "write failed");
        say("wrote " + path.string());
    }
};

Context make_context(const Options& o) {
    if (o.config_path.empty()) throw Error(ErrorCode::ConfigError, "--config", "a config file is required");
    Context ctx{load_config(o.config_path), {}, o.quiet, 0};
    if (o.seed) ctx.cfg.sim.seed = *o.seed;
    if (const char* w = std::getenv("TELEGRAPH_WORKERS"); w && *w) {
        char* end = nullptr;
        const long n = std::strtol(w, &end, 10);
        if (*end != '\0' || n < 0) throw Error(ErrorCode::ConfigError, "TELEGRAPH_WORKERS", "not a worker count");
        ctx.cfg.sim.workers = static_cast<unsigned>(n);
    }
    if (!o.out_dir.empty()) ctx.cfg.output.dir = o.out_dir;
    ctx.out = ctx.cfg.output.dir;
    ctx.hash = config_hash(ctx.cfg);
    return ctx;
}

std::vector<double> series_grid(double step, double horizon) {
    const auto n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    std::vector<double> t = linspace(0.0, horizon, std::max<std::size_t>(n, 1) + 1);
    return t;
}

std::vector<double> times_up_to(const std::vector<double>& times, double t_max) {
    std::vector<double> out;
    for (double t : times)
        if (t <= t_max) out.push_back(t);
    if (out.empty()) throw Error(ErrorCode::EmptyGrid, "output.times", "no output time within t_max");
    return out;
}

void plot_field(const Context& ctx, const std::string& name, const FieldGrid& g, const std::string& title) {
    if (!ctx.cfg.output.svg) return;
    std::vector<PlotSeries> s;
    for (std::size_t i = 0; i < g.times.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        PlotSeries f0{"F0 t=" + format_number(g.times[i]), g.positions, {}};
        PlotSeries f1{"F1 t=" + format_number(g.times[i]), g.positions, {}};
        for (std::size_t j = 0; j < g.positions.size(); ++j) {
            f0.y.push_back(g.F0(r, static_cast<Eigen::Index>(j)));
            f1.y.push_back(g.F1(r, static_cast<Eigen::Index>(j)));
        }
        s.push_back(std::move(f0));
        s.push_back(std::move(f1));
    }
    ctx.write(name, [&](std::ostream& o) { o << line_chart(title, "A", "F_s(t, A)", s); });
}

void plot_series(const Context& ctx, const std::string& name, const BoundarySeries& b, const std::string& title) {
    if (!ctx.cfg.output.svg) return;
    std::vector<double> survival(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) survival[i] = b.phi[i] + b.psi[i];
    const std::vector<PlotSeries> s{
        {"phi", b.times, b.phi}, {"psi", b.times, b.psi}, {"omega", b.times, b.omega}, {"survival", b.times, survival}};
    ctx.write(name, [&](std::ostream& o) { o << line_chart(title, "t", "probability", s); });
}

FieldGrid select_rows(const FieldGrid& g, const std::vector<double>& times) {
    FieldGrid out = g;
    out.times.clear();
    out.boundary.clear();
    out.survival.clear();
    std::vector<Eigen::Index> rows;
    for (double t : times) {
        const auto it = std::find_if(g.times.begin(), g.times.end(),
                                     [t](double x) { return std::abs(x - t) <= 1e-12 * (1.0 + t); });
        if (it == g.times.end()) throw Error(ErrorCode::TOutsideGrid, "t", "snapshot missing");
        const auto i = static_cast<std::size_t>(it - g.times.begin());
        rows.push_back(static_cast<Eigen::Index>(i));
        out.times.push_back(g.times[i]);
        out.boundary.push_back(g.boundary[i]);
        out.survival.push_back(g.survival[i]);
    }
    out.F0.resize(static_cast<Eigen::Index>(rows.size()), g.F0.cols());
    out.F1.resize(static_cast<Eigen::Index>(rows.size()), g.F1.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        out.F0.row(static_cast<Eigen::Index>(k)) = g.F0.row(rows[k]);
        out.F1.row(static_cast<Eigen::Index>(k)) = g.F1.row(rows[k]);
    }
    return out;
}

int cmd_validate(const Options& o) {
    const Context ctx = make_context(o);
    std::cout << normalized(ctx.cfg);
    return 0;
}

int cmd_simulate(const Options& o) {
    const Context ctx = make_context(o);
    const RunConfig& c = ctx.cfg;
    const InitialCondition init = c.initial_condition();
    const SimulationOptions opts{c.sim.paths, c.sim.seed, c.sim.workers};
    const auto positions = linspace(0.0, c.params.B, static_cast<std::size_t>(c.output.grid_points));
    const FieldGrid field = estimate_field(c.params, init, times_up_to(c.output.times, c.sim.t_max), positions, opts);
    const BoundarySeries series =
        estimate_boundary_series(c.params, init, series_grid(c.output.series_step, c.sim.t_max), opts);
    ctx.write("field_mc.csv", [&](std::ostream& f) { write_field_csv(f, field, ctx.header("simulate")); });
    ctx.write("boundary_mc.csv", [&](std::ostream& f) { write_boundary_csv(f, series, ctx.header("simulate")); });
    plot_field(ctx, "field_mc.svg", field, "Monte Carlo field");
    plot_series(ctx, "boundary_mc.svg", series, "Monte Carlo boundary series");
    return 0;
}

int cmd_pde(const Options& o) {
    const Context ctx = make_context(o);
    const RunConfig& c = ctx.cfg;
    const InitialCondition init = c.initial_condition();
    const std::vector<double> field_times = times_up_to(c.output.times, c.pde.t_max);
    const std::vector<double> series_times = series_grid(c.output.series_step, c.pde.t_max);
    std::set<double> all(series_times.begin(), series_times.end());
    all.insert(field_times.begin(), field_times.end());
    PdeConfig pc = c.pde_config();
    pc.snapshot_times.assign(all.begin(), all.end());
    const FieldGrid full = solve_pde(c.params, init, pc);
    const auto positions = linspace(0.0, c.params.B, static_cast<std::size_t>(c.output.grid_points));
    const FieldGrid field = resample_positions(select_rows(full, field_times), positions);
    BoundarySeries series = boundary_series_of(select_rows(full, series_times));
    ctx.write("field_pde.csv", [&](std::ostream& f) { write_field_csv(f, field, ctx.header("pde")); });
    ctx.write("boundary_pde.csv", [&](std::ostream& f) { write_boundary_csv(f, series, ctx.header("pde")); });
    plot_field(ctx, "field_pde.svg", field, "PDE field");
    plot_series(ctx, "boundary_pde.svg", series, "PDE boundary series");
    return 0;
}

int cmd_roots(const Options& o) {
    const Context ctx = make_context(o);
    validate_params(ctx.cfg.params, Validation::Strict);
    std::vector<SpectralRoots<double>> rows;
    for (double xi : ctx.cfg.transform.xi_values) rows.push_back(roots<double>(ctx.cfg.params, {xi, 0.0}));
    ctx.write("roots.csv", [&](std::ostream& f) { write_roots_csv(f, rows, ctx.header("roots")); });
    return 0;
}

int cmd_transforms(const Options& o) {
    const Context ctx = make_context(o);
    const InitialCondition init = ctx.cfg.initial_condition();
    std::vector<BoundaryTransforms> rows;
    for (double m : ctx.cfg.transform.m_values)
        rows.push_back(solve_boundary_transforms(ctx.cfg.params, init, {m, 0.0}));
    ctx.write("transforms.csv", [&](std::ostream& f) { write_transforms_csv(f, rows, ctx.header("transforms")); });
    return 0;
}

int cmd_recover(const Options& o) {
    const Context ctx = make_context(o);
    const RunConfig& c = ctx.cfg;
    const InitialCondition init = c.initial_condition();
    const double horizon = c.output.times.back();
    const BoundarySeries series =
        recover_boundary_series(c.params, init, series_grid(c.output.series_step, horizon), c.transform.ilt);
    if (series.clamped > 0)
        ctx.say("note: " + std::to_string(series.clamped) + " time(s) raised to the inversion floor " +
                format_number(inversion_floor(c.params)));
    ctx.write("boundary_transform.csv", [&](std::ostream& f) { write_boundary_csv(f, series, ctx.header("recover")); });
    plot_series(ctx, "boundary_transform.svg", series, "Recovered boundary series");

    // Experimental: fields from the cosine series of the finite transforms.
    const auto positions = linspace(0.0, c.params.B, static_cast<std::size_t>(c.output.grid_points));
    FieldGrid field;
    for (double t : c.output.times) {
        const FieldGrid row = reconstruct_field(c.params, init, t, positions, series, c.transform.reconstruct_terms);
        if (field.times.empty()) {
            field = row;
            continue;
        }
        field.times.push_back(t);
        field.boundary.push_back(row.boundary.front());
        field.survival.push_back(row.survival.front());
        field.F0.conservativeResize(field.F0.rows() + 1, Eigen::NoChange);
        field.F1.conservativeResize(field.F1.rows() + 1, Eigen::NoChange);
        field.F0.row(field.F0.rows() - 1) = row.F0.row(0);
        field.F1.row(field.F1.rows() - 1) = row.F1.row(0);
    }
    ctx.write("field_transform.csv", [&](std::ostream& f) { write_field_csv(f, field, ctx.header("recover")); });
    plot_field(ctx, "field_transform.svg", field, "Reconstructed field (experimental)");
    return 0;
}

FieldGrid read_field_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, path, "cannot open");
    return read_field_csv(in);
}

int cmd_compare(const Options& o) {
    const FieldGrid a = read_field_file(o.compare_a);
    const FieldGrid b = read_field_file(o.compare_b);
    CompareTolerances tol;
    tol.trimmed_max = o.tol_max;
    if (o.tol_z) {
        tol.z_gate = *o.tol_z;
        tol.z_fraction = 0.95;
    }
    const ComparisonReport r = compare_fields(a, b, tol);
    const CsvHeader h{"compare", 0, 0};
    if (o.out_dir.empty()) {
        write_comparison_csv(std::cout, r.metrics, h);
    } else {
        fs::create_directories(o.out_dir);
        const fs::path path = fs::path(o.out_dir) / "comparison.csv";
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error(ErrorCode::IoError, path.string(), "cannot write");
        write_comparison_csv(f, r.metrics, h);
        if (!o.quiet) std::cout << "wrote " << path.string() << '\n';
    }
    if (!o.quiet) std::cout << (r.pass ? "PASS" : "FAIL") << " (" << r.pairs << " pairs)\n";
    return r.pass ? 0 : 2;
}

int cmd_acceptance(const Options& o) {
    const Context ctx = make_context(o);
    const AcceptanceConfig acfg = ctx.cfg.acceptance_config();
    const AcceptanceReport report = run_acceptance(acfg, [&](const CriterionResult& r) {
        if (!ctx.quiet) std::cout << format_line(r) << std::endl;
    });
    std::vector<Metric> metrics;
    for (const CriterionResult& c : report.criteria) {
        metrics.insert(metrics.end(), c.metrics.begin(), c.metrics.end());
        metrics.push_back({"c" + std::to_string(c.id) + ".pass", c.pass ? 1.0 : 0.0, std::nullopt, c.pass || c.warning_only});
    }
    ctx.write("acceptance.csv", [&](std::ostream& f) { write_comparison_csv(f, metrics, ctx.header("acceptance")); });
    if (report.infrastructure_error) std::cerr << "infrastructure error: " << *report.infrastructure_error << '\n';
    const int status = report.exit_status();
    ctx.say(status == 0 ? "acceptance: PASS" : status == 1 ? "acceptance: ERROR" : "acceptance: FAIL");
    return status;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Telegraph process workbench: Monte Carlo, PDE and Laplace-transform engines", "telegraph"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&o](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "configuration file");
        sub->add_option("--out", o.out_dir, "output directory (overrides output.dir)");
        sub->add_option("--seed", o.seed, "random seed (overrides sim.seed)");
        sub->add_flag("--quiet", o.quiet, "suppress progress output");
    };
    struct Command {
        const char* name;
        const char* help;
        int (*fn)(const Options&);
    };
    const Command commands[] = {
        {"validate", "check a config and print its normalized form", cmd_validate},
        {"simulate", "Monte Carlo field and boundary series", cmd_simulate},
        {"pde", "finite-difference field and boundary series", cmd_pde},
        {"roots", "tabulate m, n, q over transform.xi_values", cmd_roots},
        {"transforms", "tabulate boundary transforms over transform.m_values", cmd_transforms},
        {"recover", "boundary series by numerical inversion, plus reconstructed fields", cmd_recover},
        {"acceptance", "run the acceptance suite", cmd_acceptance},
    };
    int (*selected)(const Options&) = nullptr;
    for (const Command& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common(sub);
        sub->callback([&selected, fn = c.fn] { selected = fn; });
    }
    CLI::App* cmp = app.add_subcommand("compare", "compare two field CSV files");
    cmp->add_option("a", o.compare_a, "first field CSV")->required();
    cmp->add_option("b", o.compare_b, "second field CSV")->required();
    cmp->add_option("--tol-max", o.tol_max, "tolerance on the 10%-trimmed max abs difference");
    cmp->add_option("--tol-z", o.tol_z, "z gate; 95% of points must be within it");
    cmp->add_option("--out", o.out_dir, "write comparison.csv here instead of stdout");
    cmp->add_flag("--quiet", o.quiet, "suppress the summary line");
    cmp->callback([&selected] { selected = cmd_compare; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    try {
        return selected(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace telegraph
