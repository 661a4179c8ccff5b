#pragma once

#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qdcost/costfn.hpp"

// Front-end plumbing shared by the qdcost tool and its tests: the state
// family grammar, report serialization, parameter sweeps and the figure
// data files.
//
// Family grammar (shell-safe, no spaces):
//   pure:lambda0=<float>
//   werner:z=<float>
//   general:a=<f>,<f>,<f>;b=<f>,<f>,<f>;c=<f>,<f>,<f>

namespace qdcost::cli {

namespace detail {

class spec_cursor {
public:
    explicit spec_cursor(std::string_view text) : text_(text) {}

    std::size_t position() const noexcept { return pos_; }
    bool done() const noexcept { return pos_ >= text_.size(); }

    [[noreturn]] void fail(const std::string& message) const {
        throw parse_error(pos_, message);
    }

    void expect(char c) {
        if (done() || text_[pos_] != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    bool accept(char c) {
        if (!done() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string_view take_identifier() {
        const std::size_t start = pos_;
        while (!done() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                           text_[pos_] == '_')) {
            ++pos_;
        }
        if (pos_ == start) fail("expected identifier");
        return text_.substr(start, pos_ - start);
    }

    void expect_key(std::string_view key) {
        const std::size_t start = pos_;
        const std::string_view got = take_identifier();
        if (got != key) {
            pos_ = start;
            fail("expected key '" + std::string(key) + "', got '" + std::string(got) + "'");
        }
        expect('=');
    }

    double take_double() {
        double value = 0.0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        const auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr == begin) fail("expected a number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        return value;
    }

    real3 take_triple() {
        real3 v;
        v[0] = take_double();
        expect(',');
        v[1] = take_double();
        expect(',');
        v[2] = take_double();
        return v;
    }

    void expect_end() {
        if (!done()) fail("unexpected trailing input");
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline state_family parse_state_spec(std::string_view spec) {
    detail::spec_cursor cur(spec);
    const std::string_view family = cur.take_identifier();
    cur.expect(':');
    if (family == "pure") {
        cur.expect_key("lambda0");
        const double lambda0 = cur.take_double();
        cur.expect_end();
        return pure_schmidt_params{lambda0};
    }
    if (family == "werner") {
        cur.expect_key("z");
        const double z = cur.take_double();
        cur.expect_end();
        return werner_params{z};
    }
    if (family == "general") {
        general_params p;
        cur.expect_key("a");
        p.a = cur.take_triple();
        cur.expect(';');
        cur.expect_key("b");
        p.b = cur.take_triple();
        cur.expect(';');
        cur.expect_key("c");
        p.c = cur.take_triple();
        cur.expect_end();
        return p;
    }
    throw parse_error(0, "unknown state family '" + std::string(family) +
                             "' (expected pure, werner or general)");
}

// "theta,phi" in radians, for the channel-basis override.
inline measurement_basis parse_basis_spec(std::string_view text) {
    detail::spec_cursor cur(text);
    const double theta = cur.take_double();
    cur.expect(',');
    const double phi = cur.take_double();
    cur.expect_end();
    return measurement_basis(theta, phi);
}

// 12 significant digits: enough to verify the 1e-9 tolerances downstream,
// short enough to keep tables readable. Locale-independent.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline constexpr std::array<std::string_view, 9> report_columns = {
    "x",       "delta_F",      "delta_D",  "cost",      "discord",
    "weak_discord", "fidelity", "theta_opt", "phi_opt"};

inline double report_column(const correlation_report& r, std::string_view name) {
    if (name == "x") return r.x;
    if (name == "delta_F") return r.delta_fidelity;
    if (name == "delta_D") return r.delta_discord;
    if (name == "cost") return r.cost;
    if (name == "discord") return r.discord;
    if (name == "weak_discord") return r.weak_discord;
    if (name == "fidelity") return r.fidelity;
    if (name == "theta_opt") return r.theta_opt;
    if (name == "phi_opt") return r.phi_opt;
    throw parse_error(0, "unknown column '" + std::string(name) + "'");
}

// Validated column selection; empty input means all columns.
inline std::vector<std::string> resolve_columns(const std::vector<std::string>& requested) {
    if (requested.empty()) {
        return {report_columns.begin(), report_columns.end()};
    }
    for (const auto& name : requested) {
        correlation_report probe;
        report_column(probe, name);
    }
    return requested;
}

struct sweep_spec {
    state_family family;
    double x_min = 0.0;
    double x_max = 6.0;
    int steps = 241;
    std::vector<std::string> columns; // empty = all
    post_measurement_mode mode = post_measurement_mode::trace_preserving;
};

inline void validate_sweep_spec(const sweep_spec& spec) {
    if (!(spec.x_min < spec.x_max)) {
        throw parse_error(0, "sweep requires x_min < x_max");
    }
    if (spec.steps < 2) {
        throw parse_error(0, "sweep requires at least 2 steps");
    }
    if (!(spec.x_min >= 0.0)) {
        throw parse_error(0, "sweep requires x_min >= 0 (the cost is even in x)");
    }
}

// One report per grid point, grid order, deterministic for any thread count.
inline std::vector<correlation_report> run_sweep(const sweep_spec& spec) {
    validate_sweep_spec(spec);
    const cost_evaluator eval(make_state(spec.family), spec.mode);
    std::vector<correlation_report> rows(spec.steps);
    parallel_for(rows.size(), [&](std::size_t i) {
        const double x =
            spec.x_min + (spec.x_max - spec.x_min) * static_cast<double>(i) / (spec.steps - 1);
        rows[i] = eval.at(x);
    });
    return rows;
}

inline void write_report_csv(std::ostream& os, const std::vector<correlation_report>& rows,
                             const std::vector<std::string>& columns) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
        os << (c ? "," : "") << columns[c];
    }
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            os << (c ? "," : "") << format_double(report_column(row, columns[c]));
        }
        os << '\n';
    }
}

struct compute_options {
    std::optional<measurement_basis> channel_basis; // override for Delta F
    post_measurement_mode mode = post_measurement_mode::trace_preserving;
};

inline correlation_report run_compute(const state_family& family, double x,
                                      const compute_options& options = {}) {
    const cost_evaluator eval(make_state(family), options.mode);
    return eval.at(x, options.channel_basis);
}

// key: value serialization of a single report.
inline void write_report_kv(std::ostream& os, const correlation_report& r,
                            const compute_options& options = {}) {
    os << "x: " << format_double(r.x) << '\n'
       << "theta_opt: " << format_double(r.theta_opt) << '\n'
       << "phi_opt: " << format_double(r.phi_opt) << '\n'
       << "I: " << format_double(r.mutual_info) << '\n'
       << "J: " << format_double(r.classical_corr) << '\n'
       << "D: " << format_double(r.discord) << '\n'
       << "D_w: " << format_double(r.weak_discord) << '\n'
       << "delta_D: " << format_double(r.delta_discord) << '\n'
       << "F: " << format_double(r.fidelity) << '\n'
       << "delta_F: " << format_double(r.delta_fidelity) << '\n'
       << "C: " << format_double(r.cost) << '\n'
       << "basis_source: " << (options.channel_basis ? "user-override" : "weak-discord-argmax")
       << '\n';
    if (options.channel_basis) {
        os << "channel_theta: " << format_double(options.channel_basis->theta()) << '\n'
           << "channel_phi: " << format_double(options.channel_basis->phi()) << '\n';
    }
    if (options.mode == post_measurement_mode::literal) {
        os << "post_measurement: literal\n"
           << "post_measurement_trace: " << format_double(r.post_measurement_trace) << '\n';
    }
}

inline void write_optimize_kv(std::ostream& os, const optimal_strength_result& result) {
    os << "x_star: " << format_double(result.x_star) << '\n'
       << "C_star: " << format_double(result.report.cost) << '\n'
       << "boundary: " << (result.boundary ? "true" : "false") << '\n';
    write_report_kv(os, result.report);
}

// --- figure data ---------------------------------------------------------

inline const general_params& figure4_state() {
    static const general_params p{{0.01, 0.1, 0.22}, {0.1, 0.03, 0.5}, {0.1, 0.02, 0.2}};
    return p;
}

namespace detail {

inline std::filesystem::path write_sweep_file(const std::filesystem::path& dir,
                                              const std::string& name,
                                              const state_family& family) {
    sweep_spec spec;
    spec.family = family;
    spec.x_min = 0.0;
    spec.x_max = 6.0;
    spec.steps = 241;
    const auto rows = run_sweep(spec);
    const auto path = dir / name;
    std::ofstream os(path);
    if (!os) throw error("cannot open output file " + path.string());
    write_report_csv(os, rows, resolve_columns({}));
    return path;
}

} // namespace detail

// Data behind each of the four plots. fig1/fig3/fig4 are cost sweeps over
// x in [0, 6] (241 points); fig2 is the masked-derivative surface
// C' * Theta(C'') over lambda0 in {0.02, ..., 0.5} x x in [0.05, 6].
inline std::vector<std::filesystem::path> write_figure(std::string_view name,
                                                       const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    if (name == "fig1") {
        for (const double lambda0 : {0.05, 0.1, 0.2, 0.5}) {
            written.push_back(detail::write_sweep_file(
                out_dir, "fig1_lambda0_" + format_double(lambda0) + ".csv",
                pure_schmidt_params{lambda0}));
        }
    } else if (name == "fig2") {
        std::vector<double> x_grid;
        for (int i = 1; i <= 120; ++i) x_grid.push_back(0.05 * i);
        const auto path = out_dir / "fig2_surface.csv";
        std::ofstream os(path);
        if (!os) throw error("cannot open output file " + path.string());
        os << "x,lambda0,C_prime_masked\n";
        for (int k = 1; k <= 25; ++k) {
            const double lambda0 = 0.02 * k;
            const auto scan = derivative_scan(make_pure_schmidt(lambda0), x_grid);
            for (std::size_t i = 0; i < x_grid.size(); ++i) {
                os << format_double(x_grid[i]) << ',' << format_double(lambda0) << ','
                   << format_double(scan.masked_prime(i)) << '\n';
            }
        }
        written.push_back(path);
    } else if (name == "fig3") {
        written.push_back(
            detail::write_sweep_file(out_dir, "fig3_werner_z0.25.csv", werner_params{0.25}));
    } else if (name == "fig4") {
        written.push_back(
            detail::write_sweep_file(out_dir, "fig4_general.csv", figure4_state()));
    } else {
        throw parse_error(0, "unknown figure '" + std::string(name) +
                                 "' (expected fig1, fig2, fig3 or fig4)");
    }
    return written;
}

} // namespace qdcost::cli
