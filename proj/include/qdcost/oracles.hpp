#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "qdcost/errors.hpp"

// Closed-form scalar references for cross-validation of the matrix
// pipeline: discord, weak discord and post-measurement fidelity of the
// pure Schmidt state, and the Werner-state weak discord with its
// projective limit. Implemented from the printed formulas only, with no
// code shared with the general path, so dual-path tests are independent.

namespace qdcost::oracles {

namespace detail {

inline constexpr double kClamp = 1e-12;

inline double xlog2(double p) {
    return p <= kClamp ? 0.0 : p * std::log2(p);
}

inline double binary_entropy(double p) {
    return -xlog2(p) - xlog2(1.0 - p);
}

inline double clamp01(double v) {
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

inline void require_unit_interval(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw parameter_range_error(std::string(name) + " must lie in [0,1], got " +
                                    std::to_string(v));
    }
}

// Outcome probability for the pure Schmidt state,
//   p_w(+-x) = [1 +- (l1 - l0) cos(theta) tanh(x)] / 2.
inline double pure_outcome_probability(double lambda0, double y, double theta) {
    const double lambda1 = 1.0 - lambda0;
    return 0.5 * (1.0 + (lambda1 - lambda0) * std::cos(theta) * std::tanh(y));
}

// Conditional-state eigenvalue k_+(y); k_-(y) = 1 - k_+(y). The square-root
// argument is clamped to [0,1] against roundoff.
inline double pure_conditional_eigenvalue(double lambda0, double y, double theta) {
    const double lambda1 = 1.0 - lambda0;
    const double p = pure_outcome_probability(lambda0, y, theta);
    const double cosh_y = std::cosh(y);
    double ratio = 0.0;
    if (lambda0 * lambda1 > 0.0) {
        ratio = lambda0 * lambda1 / (p * p * cosh_y * cosh_y);
    }
    return 0.5 * (1.0 + std::sqrt(clamp01(1.0 - ratio)));
}

// The weighted conditional-entropy sum of the weak-discord expression at a
// fixed basis angle.
inline double pure_entropy_sum(double lambda0, double x, double theta) {
    double s = 0.0;
    for (const double y : {x, -x}) {
        const double k = pure_conditional_eigenvalue(lambda0, y, theta);
        s += pure_outcome_probability(lambda0, y, theta) * binary_entropy(k);
    }
    return s;
}

} // namespace detail

// Discord of sqrt(l0)|00> + sqrt(l1)|11>: the binary entropy of l0.
inline double pure_discord(double lambda0) {
    detail::require_unit_interval(lambda0, "lambda0");
    return detail::binary_entropy(lambda0);
}

// Weak discord of the pure Schmidt state at strength x: evaluated at the
// given basis angle theta, or minimized over theta when none is supplied
// (the minimum falls at theta = pi/2).
inline double pure_weak_discord(double lambda0, double x,
                                std::optional<double> theta = std::nullopt) {
    detail::require_unit_interval(lambda0, "lambda0");
    if (theta) {
        return detail::binary_entropy(lambda0) + detail::pure_entropy_sum(lambda0, x, *theta);
    }

    // Grid bracket plus golden-section; the sum is smooth and symmetric
    // about theta = pi/2.
    constexpr int kGrid = 181;
    constexpr double kPi = 3.14159265358979323846;
    int best = 0;
    double best_value = detail::pure_entropy_sum(lambda0, x, 0.0);
    for (int i = 1; i < kGrid; ++i) {
        const double value = detail::pure_entropy_sum(lambda0, x, kPi * i / (kGrid - 1));
        if (value < best_value) {
            best_value = value;
            best = i;
        }
    }
    double lo = kPi * std::max(best - 1, 0) / (kGrid - 1);
    double hi = kPi * std::min(best + 1, kGrid - 1) / (kGrid - 1);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = detail::pure_entropy_sum(lambda0, x, c);
    double fd = detail::pure_entropy_sum(lambda0, x, d);
    while (hi - lo > 1e-10) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = detail::pure_entropy_sum(lambda0, x, c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = detail::pure_entropy_sum(lambda0, x, d);
        }
    }
    return detail::binary_entropy(lambda0) + std::min({best_value, fc, fd});
}

// Fidelity between the pure Schmidt state and its post-measurement state,
//   F = (1/2) sqrt( 2(l0^2+l1^2) - cos(2 theta) (l0-l1)^2 (sech x - 1)
//                   + (4 l0 l1 + 1) sech x + 1 ).
inline double pure_fidelity(double lambda0, double x, double theta) {
    detail::require_unit_interval(lambda0, "lambda0");
    const double lambda1 = 1.0 - lambda0;
    const double sech_x = 1.0 / std::cosh(x);
    const double gap_sq = (lambda0 - lambda1) * (lambda0 - lambda1);
    const double bracket = 2.0 * (lambda0 * lambda0 + lambda1 * lambda1) -
                           std::cos(2.0 * theta) * gap_sq * (sech_x - 1.0) +
                           (4.0 * lambda0 * lambda1 + 1.0) * sech_x + 1.0;
    return 0.5 * std::sqrt(bracket);
}

// Weak discord of the Werner state (basis-independent by symmetry):
//   D_w = 1 + 3 a log2 a + b log2 b
//         - [(1 - z tanh(-x))/2] log2[(1 - z tanh(-x))/2]
//         - [(1 - z tanh(x))/2]  log2[(1 - z tanh(x))/2],
// with a = (1-z)/4, b = (1+3z)/4.
inline double werner_weak_discord(double z, double x) {
    detail::require_unit_interval(z, "z");
    const double a = (1.0 - z) / 4.0;
    const double b = (1.0 + 3.0 * z) / 4.0;
    const double w_minus = (1.0 - z * std::tanh(-x)) / 2.0;
    const double w_plus = (1.0 - z * std::tanh(x)) / 2.0;
    return 1.0 + 3.0 * detail::xlog2(a) + detail::xlog2(b) - detail::xlog2(w_minus) -
           detail::xlog2(w_plus);
}

// x -> infinity limit of the Werner weak discord: the ordinary discord.
inline double werner_discord_limit(double z) {
    detail::require_unit_interval(z, "z");
    const double a = (1.0 - z) / 4.0;
    const double b = (1.0 + 3.0 * z) / 4.0;
    return 1.0 + 3.0 * detail::xlog2(a) + detail::xlog2(b) -
           detail::xlog2((1.0 - z) / 2.0) - detail::xlog2((1.0 + z) / 2.0);
}

} // namespace qdcost::oracles
