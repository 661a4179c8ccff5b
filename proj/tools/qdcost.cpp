// qdcost: weak-measurement discord and disturbance cost for two-qubit states.
//
// Subcommands: compute, sweep, optimize, figure. All numeric output is
// printed with 12 significant digits; repeated runs of the same command
// produce byte-identical files. Set QDCOST_THREADS to override the worker
// count used for sweep grids.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "qdcost/cli.hpp"
#include "qdcost/qdcost.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitGeneric = 1;
constexpr int kExitParse = 2;
constexpr int kExitUnphysical = 3;
constexpr int kExitNumeric = 4;

// Output sink: a file when --out is given, stdout otherwise.
class output_target {
public:
    explicit output_target(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw qdcost::error("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::optional<qdcost::measurement_basis> parse_basis_option(const std::string& text) {
    if (text.empty()) return std::nullopt;
    return qdcost::cli::parse_basis_spec(text);
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Weak-measurement discord, fidelity and the cost C = dF + dD "
                 "for two-qubit states"};
    app.require_subcommand(1);

    std::string state_spec;
    std::string out_path;
    std::string basis_text;
    std::string format = "kv";
    bool literal = false;

    auto* compute = app.add_subcommand("compute", "Report I, J, D, D_w, F and C at one (state, x)");
    double x = 0.0;
    compute->add_option("--state", state_spec, "State family spec, e.g. werner:z=0.25")->required();
    compute->add_option("--x", x, "Measurement strength (>= 0)")->required();
    compute->add_option("--basis", basis_text,
                        "Override the Delta-F channel basis as 'theta,phi' (radians)");
    compute->add_flag("--literal-postmeasure", literal,
                      "Use the non-trace-preserving post-measurement expression and report its trace");
    compute->add_option("--format", format, "Output format: kv or csv")
        ->check(CLI::IsMember({"kv", "csv"}));
    compute->add_option("--out", out_path, "Write to this file instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "Cost-report table over a strength grid");
    double x_min = 0.0, x_max = 6.0;
    int steps = 241;
    std::vector<std::string> columns;
    sweep->add_option("--state", state_spec, "State family spec")->required();
    sweep->add_option("--x-min", x_min, "Grid start (default 0)");
    sweep->add_option("--x-max", x_max, "Grid end (default 6)");
    sweep->add_option("--steps", steps, "Grid points, >= 2 (default 241)");
    sweep->add_option("--columns", columns,
                      "Comma-separated column subset (default: all report columns)")
        ->delimiter(',');
    sweep->add_flag("--literal-postmeasure", literal,
                    "Use the non-trace-preserving post-measurement expression");
    sweep->add_option("--out", out_path, "Write to this file instead of stdout");

    auto* optimize = app.add_subcommand("optimize", "Find the strength x* minimizing C");
    double opt_x_max = 10.0, tol = 1e-6;
    optimize->add_option("--state", state_spec, "State family spec")->required();
    optimize->add_option("--x-max", opt_x_max, "Search interval end (default 10)");
    optimize->add_option("--tol", tol, "Strength tolerance (default 1e-6)");
    optimize->add_option("--out", out_path, "Write to this file instead of stdout");

    auto* figure = app.add_subcommand("figure", "Regenerate plot data files");
    std::string fig_name;
    std::string out_dir = ".";
    figure->add_option("--name", fig_name, "One of fig1, fig2, fig3, fig4")->required();
    figure->add_option("--out-dir", out_dir, "Directory for the emitted files (default .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    const auto mode = literal ? qdcost::post_measurement_mode::literal
                              : qdcost::post_measurement_mode::trace_preserving;

    if (*compute) {
        qdcost::cli::compute_options options;
        options.channel_basis = parse_basis_option(basis_text);
        options.mode = mode;
        const auto family = qdcost::cli::parse_state_spec(state_spec);
        const auto report = qdcost::cli::run_compute(family, x, options);
        output_target out(out_path);
        if (format == "kv") {
            qdcost::cli::write_report_kv(out.stream(), report, options);
        } else {
            qdcost::cli::write_report_csv(out.stream(), {report},
                                          qdcost::cli::resolve_columns({}));
        }
    } else if (*sweep) {
        qdcost::cli::sweep_spec spec;
        spec.family = qdcost::cli::parse_state_spec(state_spec);
        spec.x_min = x_min;
        spec.x_max = x_max;
        spec.steps = steps;
        spec.columns = columns;
        spec.mode = mode;
        const auto cols = qdcost::cli::resolve_columns(spec.columns);
        const auto rows = qdcost::cli::run_sweep(spec);
        output_target out(out_path);
        qdcost::cli::write_report_csv(out.stream(), rows, cols);
    } else if (*optimize) {
        const auto family = qdcost::cli::parse_state_spec(state_spec);
        const auto result = qdcost::optimal_strength(qdcost::make_state(family), opt_x_max, tol);
        output_target out(out_path);
        qdcost::cli::write_optimize_kv(out.stream(), result);
    } else if (*figure) {
        const auto files = qdcost::cli::write_figure(fig_name, out_dir);
        for (const auto& f : files) std::cout << f.string() << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const qdcost::parse_error& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const qdcost::parameter_range_error& e) {
        std::cerr << "unphysical state: " << e.what() << '\n';
        return kExitUnphysical;
    } catch (const qdcost::invalid_state_error& e) {
        std::cerr << "unphysical state: " << e.what() << '\n';
        return kExitUnphysical;
    } catch (const qdcost::not_psd_error& e) {
        std::cerr << "numeric contract violation: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const qdcost::contract_violation_error& e) {
        std::cerr << "numeric contract violation: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const qdcost::degenerate_outcome_error& e) {
        std::cerr << "numeric contract violation: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitGeneric;
    }
}
