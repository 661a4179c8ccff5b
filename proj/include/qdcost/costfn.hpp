#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "qdcost/correlations.hpp"
#include "qdcost/parallel.hpp"

// Uhlmann fidelity, the disturbance Delta F = 1 - F(rho, rho~), the cost
// function C = Delta F + Delta D, the optimal-strength search over x, and
// finite-difference derivative scans of C.

namespace qdcost {

// Fidelity F = Tr sqrt(sqrt(a) b sqrt(a)) for Hermitian PSD inputs of any
// trace (the literal post-measurement audit feeds a sub-normalized matrix).
// The inner spectrum gets the same clamp as psd_matrix_function: on
// rank-deficient states the junk eigenvalues would otherwise contribute
// sqrt(1e-16) each.
template <int N>
double uhlmann_fidelity_raw(const cmat<N>& a, const cmat<N>& b) {
    const cmat<N> root = psd_matrix_function<N>(a, matrix_fn::sqrt);
    cmat<N> inner = root * b * root;
    inner = 0.5 * (inner + inner.adjoint()).eval();
    const auto eig = hermitian_eigen<N>(inner);
    double f = 0.0;
    for (int i = 0; i < N; ++i) {
        if (eig.eigenvalues(i) > kEigenvalueClamp) f += std::sqrt(eig.eigenvalues(i));
    }
    return f;
}

template <int N>
double uhlmann_fidelity(const density_matrix<N>& rho, const density_matrix<N>& sigma) {
    double f = uhlmann_fidelity_raw<N>(rho.matrix(), sigma.matrix());
    if (f > 1.0 + kPsdTol) {
        throw contract_violation_error("uhlmann_fidelity: value " + std::to_string(f) +
                                       " exceeds 1 beyond 1e-10");
    }
    return std::min(f, 1.0);
}

// Delta F = 1 - F(rho, rho~) for the channel of strength x in the given basis.
inline double delta_fidelity(const density_matrix4& rho, double x,
                             const measurement_basis& basis) {
    const auto after = post_measurement_state(rho, weak_povm(x, basis));
    return 1.0 - uhlmann_fidelity<4>(rho, after);
}

enum class post_measurement_mode { trace_preserving, literal };

// Everything the cost of one (state, x) point decomposes into.
struct correlation_report {
    double x = 0.0;
    double theta_opt = 0.0; // basis maximizing J_w at this x
    double phi_opt = 0.0;
    double mutual_info = 0.0;     // I(A:B)
    double classical_corr = 0.0;  // J = I - D
    double discord = 0.0;         // D
    double weak_discord = 0.0;    // D_w(x)
    double delta_discord = 0.0;   // D_w - D
    double fidelity = 0.0;        // F(rho, rho~)
    double delta_fidelity = 0.0;  // 1 - F
    double cost = 0.0;            // delta_fidelity + delta_discord, assembled once
    double post_measurement_trace = 1.0; // != 1 only in literal mode
};

// Computes cost reports for one state across many strengths, reusing the
// x-independent pieces (I and the discord maximization).
class cost_evaluator {
public:
    explicit cost_evaluator(const density_matrix4& rho,
                            post_measurement_mode mode = post_measurement_mode::trace_preserving)
        : rho_(rho),
          mode_(mode),
          info_(mutual_information(rho)),
          discord_(qdcost::discord(rho)) {}

    const density_matrix4& state() const noexcept { return rho_; }
    double mutual_info() const noexcept { return info_; }
    const discord_result& discord() const noexcept { return discord_; }

    // The channel basis for Delta F defaults to the J_w-maximizing basis at
    // this x; a caller-supplied basis overrides it for sensitivity studies.
    correlation_report at(double x,
                          const std::optional<measurement_basis>& channel_basis = {}) const {
        if (!(std::isfinite(x) && x >= 0.0)) {
            throw parameter_range_error("cost requires finite x >= 0 (C is even in x)");
        }
        const discord_result weak = weak_discord(rho_, x);

        correlation_report r;
        r.x = x;
        r.theta_opt = weak.optimum.basis.theta();
        r.phi_opt = weak.optimum.basis.phi();
        r.mutual_info = info_;
        r.discord = discord_.value;
        r.classical_corr = info_ - discord_.value;
        r.weak_discord = weak.value;
        r.delta_discord = weak.value - discord_.value;

        const measurement_basis& basis =
            channel_basis ? *channel_basis : weak.optimum.basis;
        const weak_povm povm(x, basis);
        if (mode_ == post_measurement_mode::trace_preserving) {
            const auto after = post_measurement_state(rho_, povm);
            r.fidelity = uhlmann_fidelity<4>(rho_, after);
        } else {
            const auto after = post_measurement_state_literal(rho_, povm);
            r.fidelity = uhlmann_fidelity_raw<4>(rho_.matrix(), after.matrix);
            r.post_measurement_trace = after.trace;
        }
        r.delta_fidelity = 1.0 - r.fidelity;
        r.cost = r.delta_fidelity + r.delta_discord;
        return r;
    }

private:
    density_matrix4 rho_;
    post_measurement_mode mode_;
    double info_;
    discord_result discord_;
};

inline correlation_report cost(const density_matrix4& rho, double x) {
    return cost_evaluator(rho).at(x);
}

struct optimal_strength_result {
    double x_star = 0.0;
    correlation_report report;
    bool boundary = false; // x_star hit 0 or x_max within tol
};

// argmin of C over [0, x_max]: 33-point bracketing grid, then golden-section
// down to |dx| < tol. Ties break toward smaller x. A minimum at either end of
// the interval is flagged, not treated as an error.
inline optimal_strength_result optimal_strength(const density_matrix4& rho, double x_max = 10.0,
                                                double tol = 1e-6) {
    if (!(x_max > 0.0)) throw parameter_range_error("optimal_strength requires x_max > 0");
    if (!(tol > 0.0)) throw parameter_range_error("optimal_strength requires tol > 0");

    const cost_evaluator eval(rho);
    const auto cost_at = [&](double x) { return eval.at(x).cost; };

    constexpr int kBracketPoints = 33;
    std::vector<double> grid_x(kBracketPoints), grid_c(kBracketPoints);
    parallel_for(kBracketPoints, [&](std::size_t i) {
        grid_x[i] = x_max * static_cast<double>(i) / (kBracketPoints - 1);
        grid_c[i] = cost_at(grid_x[i]);
    });
    int best = 0;
    for (int i = 1; i < kBracketPoints; ++i) {
        if (grid_c[i] < grid_c[best]) best = i;
    }

    double lo = grid_x[std::max(best - 1, 0)];
    double hi = grid_x[std::min(best + 1, kBracketPoints - 1)];

    // Golden-section: derivative-free, robust to the near-flat Bell case.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = cost_at(c);
    double fd = cost_at(d);
    while (hi - lo > tol) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = cost_at(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = cost_at(d);
        }
    }

    // Final pick among the refined points and the bracketing grid minimum.
    // Cost differences inside this tolerance are numerical ties (for
    // near-product states the minimum is a noise-flat plateau); ties break
    // toward smaller x.
    constexpr double kCostTieTol = 1e-12;
    double x_star = c;
    double c_star = fc;
    for (const auto& [x_cand, c_cand] :
         {std::pair{d, fd}, std::pair{grid_x[best], grid_c[best]}}) {
        if (c_cand < c_star - kCostTieTol ||
            (c_cand <= c_star + kCostTieTol && x_cand < x_star)) {
            x_star = x_cand;
            c_star = c_cand;
        }
    }

    optimal_strength_result out;
    out.boundary = x_star <= tol || x_star >= x_max - tol;
    if (x_star <= tol) x_star = 0.0;
    out.x_star = x_star;
    out.report = eval.at(x_star);
    return out;
}

struct derivative_scan_result {
    struct crossing {
        double x;      // linear interpolation between the bracketing grid points
        int direction; // +1 for a minus-to-plus crossing (minimum), -1 otherwise
    };
    std::vector<double> x_grid;
    std::vector<double> cost_values;
    std::vector<double> cost_prime;
    std::vector<double> cost_double_prime;
    std::vector<crossing> zero_crossings; // only inside C'' > 0 regions
    double step = 0.0;

    // C' masked by the Heaviside of C'': the quantity plotted over (x, l0).
    double masked_prime(std::size_t i) const {
        return cost_double_prime[i] > 0.0 ? cost_prime[i] : 0.0;
    }
};

// Basis-maximization jitter in C is ~1e-10; divided by 2h it shows up in
// C' at the 1e-7 scale. Derivative values inside this floor are treated
// as exact zeros when locating sign changes, so an identically-flat cost
// (product states) reports no crossings.
inline constexpr double kDerivativePrimeFloor = 1e-7;

// Central differences of C with step h at every grid point; C is recomputed,
// inner basis maximization included, at each stencil point. The stencil
// reflects across x = 0 (C is even in x). Crossings of C' are reported only
// where C'' > 0 on both sides.
inline derivative_scan_result derivative_scan(const density_matrix4& rho,
                                              const std::vector<double>& x_grid,
                                              double h = 1e-3) {
    if (!(h > 0.0)) throw parameter_range_error("derivative_scan requires h > 0");
    for (std::size_t i = 1; i < x_grid.size(); ++i) {
        if (!(x_grid[i] > x_grid[i - 1])) {
            throw parameter_range_error("derivative_scan grid must be strictly increasing");
        }
    }

    const cost_evaluator eval(rho);
    derivative_scan_result out;
    out.x_grid = x_grid;
    out.step = h;
    const std::size_t n = x_grid.size();
    out.cost_values.resize(n);
    out.cost_prime.resize(n);
    out.cost_double_prime.resize(n);

    parallel_for(n, [&](std::size_t i) {
        const double x = x_grid[i];
        const double c0 = eval.at(x).cost;
        const double cm = eval.at(std::abs(x - h)).cost;
        const double cp = eval.at(x + h).cost;
        out.cost_values[i] = c0;
        out.cost_prime[i] = (cp - cm) / (2.0 * h);
        out.cost_double_prime[i] = (cp - 2.0 * c0 + cm) / (h * h);
    });

    // Sign changes of the masked derivative; zeros (masked-out or inside
    // the noise floor) carry the last seen sign forward.
    std::size_t last_index = 0;
    int last_sign = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double masked = out.masked_prime(i);
        if (std::abs(masked) <= kDerivativePrimeFloor) continue;
        const int sign = masked > 0.0 ? +1 : -1;
        if (last_sign != 0 && sign != last_sign) {
            const double a = out.cost_prime[last_index];
            const double b = out.cost_prime[i];
            const double t = a / (a - b);
            out.zero_crossings.push_back(
                {x_grid[last_index] + t * (x_grid[i] - x_grid[last_index]), sign});
        }
        last_sign = sign;
        last_index = i;
    }
    return out;
}

} // namespace qdcost
