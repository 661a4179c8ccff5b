#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "qdcost/measure.hpp"

// Entropic correlation measures in bits: von Neumann entropy, mutual
// information I = S_A + S_B - S_AB, classical correlation J = S_A - S(A|B),
// discord D = I - max_basis J, the weak-measurement analogues at fixed
// strength x, and the maximization over projective bases on qubit B.

namespace qdcost {

namespace detail {

inline double entropy_term(double lambda) {
    return lambda <= kEigenvalueClamp ? 0.0 : -lambda * std::log2(lambda);
}

// Unnormalized conditional A-state and its weight for one POVM outcome.
struct outcome_data {
    double probability;
    cmat2 conditional; // not normalized; divide by probability
};

inline outcome_data project_outcome(const density_matrix4& rho, const cmat2& element) {
    const cmat4 op = embed_on_b(element);
    const cmat4 sandwiched = op * rho.matrix() * op;
    return {sandwiched.trace().real(), partial_trace(sandwiched, subsystem::A)};
}

inline double entropy_2x2(const cmat2& m) {
    const auto ev = hermitian_eigenvalues_2x2(m);
    return entropy_term(ev[0]) + entropy_term(ev[1]);
}

} // namespace detail

inline double vn_entropy(const density_matrix2& rho) {
    return detail::entropy_2x2(rho.matrix());
}

inline double vn_entropy(const density_matrix4& rho) {
    const auto eig = hermitian_eigen<4>(rho.matrix());
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += detail::entropy_term(eig.eigenvalues(i));
    return s;
}

inline double mutual_information(const density_matrix4& rho) {
    const double s_a = detail::entropy_2x2(partial_trace(rho.matrix(), subsystem::A));
    const double s_b = detail::entropy_2x2(partial_trace(rho.matrix(), subsystem::B));
    return s_a + s_b - vn_entropy(rho);
}

// S(A|B) = sum_j p_j S(rho_{A|Pi_j}) for the projective basis.
// Outcomes below the probability floor contribute 0 (limit of p*S).
inline double strong_conditional_entropy(const density_matrix4& rho,
                                         const measurement_basis& basis) {
    double s = 0.0;
    for (const cmat2* proj : {&basis.pi0(), &basis.pi1()}) {
        const auto out = detail::project_outcome(rho, *proj);
        if (out.probability < kOutcomeProbFloor) continue;
        s += out.probability * detail::entropy_2x2(out.conditional / out.probability);
    }
    return s;
}

// S_w(A|B) = p_w(x) S(rho_{A|P_x}) + p_w(-x) S(rho_{A|P_-x}).
inline double weak_conditional_entropy(const density_matrix4& rho, const weak_povm& povm) {
    double s = 0.0;
    for (const outcome_sign sign : {outcome_sign::plus, outcome_sign::minus}) {
        const auto out = detail::project_outcome(rho, povm.element(sign));
        if (out.probability < kOutcomeProbFloor) continue;
        s += out.probability * detail::entropy_2x2(out.conditional / out.probability);
    }
    return s;
}

inline double classical_j(const density_matrix4& rho, const measurement_basis& basis) {
    const double s_a = detail::entropy_2x2(partial_trace(rho.matrix(), subsystem::A));
    return s_a - strong_conditional_entropy(rho, basis);
}

inline double weak_classical_j(const density_matrix4& rho, const weak_povm& povm) {
    const double s_a = detail::entropy_2x2(partial_trace(rho.matrix(), subsystem::A));
    return s_a - weak_conditional_entropy(rho, povm);
}

// Result of the maximization over projective bases.
struct basis_optimum {
    measurement_basis basis{0.0, 0.0};
    double value = 0.0;   // objective re-evaluated at `basis`
    long evaluations = 0; // total objective evaluations spent
    bool converged = true;
};

namespace detail {

inline constexpr int kGridTheta = 37;
inline constexpr int kGridPhi = 19;
// The contract asks for 1e-9 in the objective; the simplex is driven two
// orders tighter so that finite-difference scans of the cost stay clean.
inline constexpr double kObjectiveTol = 1e-11;
inline constexpr double kTieTol = 1e-12;
inline constexpr int kSimplexMaxIter = 400;
inline constexpr int kSimplexRestarts = 4;

struct angle_candidate {
    double theta, phi, value;
};

// Equal-value ties resolve toward smaller theta, then smaller phi, so
// reported bases are deterministic even on flat objectives.
inline bool candidate_better(const angle_candidate& a, const angle_candidate& b) {
    if (a.value > b.value + kTieTol) return true;
    if (b.value > a.value + kTieTol) return false;
    if (a.theta != b.theta) return a.theta < b.theta;
    return a.phi < b.phi;
}

// One Nelder-Mead descent (maximizing) from the given start with the given
// simplex edge lengths. Returns the best vertex found.
template <typename Eval>
angle_candidate simplex_descent(Eval& eval, angle_candidate start, double dtheta, double dphi,
                                bool& converged) {
    std::array<angle_candidate, 3> simplex{
        start, angle_candidate{start.theta + dtheta, start.phi, 0.0},
        angle_candidate{start.theta, start.phi + dphi, 0.0}};
    simplex[1].value = eval(simplex[1].theta, simplex[1].phi);
    simplex[2].value = eval(simplex[2].theta, simplex[2].phi);

    converged = false;
    for (int iter = 0; iter < kSimplexMaxIter; ++iter) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const angle_candidate& a, const angle_candidate& b) {
                      return a.value > b.value;
                  });
        if (std::abs(simplex[0].value - simplex[2].value) <= kObjectiveTol) {
            converged = true;
            break;
        }
        const double ct = 0.5 * (simplex[0].theta + simplex[1].theta);
        const double cp = 0.5 * (simplex[0].phi + simplex[1].phi);

        const auto point_at = [&](double scale) {
            angle_candidate c{ct + scale * (simplex[2].theta - ct),
                              cp + scale * (simplex[2].phi - cp), 0.0};
            c.value = eval(c.theta, c.phi);
            return c;
        };

        const angle_candidate reflected = point_at(-1.0);
        if (reflected.value > simplex[0].value) {
            const angle_candidate expanded = point_at(-2.0);
            simplex[2] = expanded.value > reflected.value ? expanded : reflected;
        } else if (reflected.value > simplex[1].value) {
            simplex[2] = reflected;
        } else {
            const bool outside = reflected.value > simplex[2].value;
            const angle_candidate contracted = point_at(outside ? -0.5 : 0.5);
            if (contracted.value > (outside ? reflected.value : simplex[2].value)) {
                simplex[2] = contracted;
            } else {
                for (int k = 1; k < 3; ++k) {
                    simplex[k].theta = 0.5 * (simplex[k].theta + simplex[0].theta);
                    simplex[k].phi = 0.5 * (simplex[k].phi + simplex[0].phi);
                    simplex[k].value = eval(simplex[k].theta, simplex[k].phi);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(),
              [](const angle_candidate& a, const angle_candidate& b) {
                  return a.value > b.value;
              });
    return simplex[0];
}

// Coarse (theta, phi) grid followed by Nelder-Mead refinement from the
// best three grid points. The objective is smooth but can have symmetric
// multiple maxima; the multi-start avoids capture by a secondary peak.
// Each descent is restarted with a shrunken simplex until it stops
// improving: a collapsed simplex otherwise stalls short of the maximum on
// near-degenerate ridges, which would leak noise into derivative scans of
// the cost function.
template <typename F>
basis_optimum maximize_over_bases(F&& objective) {
    long evaluations = 0;
    const auto eval = [&](double theta, double phi) {
        ++evaluations;
        return objective(measurement_basis(theta, phi));
    };

    std::vector<angle_candidate> grid;
    grid.reserve(kGridTheta * kGridPhi);
    for (int i = 0; i < kGridTheta; ++i) {
        const double theta = pi * i / (kGridTheta - 1);
        for (int j = 0; j < kGridPhi; ++j) {
            const double phi = 2.0 * pi * j / kGridPhi;
            grid.push_back({theta, phi, eval(theta, phi)});
        }
    }
    std::sort(grid.begin(), grid.end(), candidate_better);

    const double dtheta0 = 0.5 * pi / (kGridTheta - 1);
    const double dphi0 = 0.5 * 2.0 * pi / kGridPhi;

    angle_candidate best = grid.front();
    bool best_converged = true;

    const int starts = std::min<int>(3, static_cast<int>(grid.size()));
    for (int s = 0; s < starts; ++s) {
        angle_candidate current = grid[s];
        bool converged = false;
        double dtheta = dtheta0;
        double dphi = dphi0;
        for (int round = 0; round <= kSimplexRestarts; ++round) {
            const angle_candidate refined =
                simplex_descent(eval, current, dtheta, dphi, converged);
            const bool improved = refined.value > current.value + kTieTol;
            current = refined;
            if (round > 0 && !improved) break;
            dtheta *= 0.15;
            dphi *= 0.15;
        }

        // Canonicalize before comparing so the tie-break sees wrapped angles.
        const measurement_basis wrapped(current.theta, current.phi);
        current.theta = wrapped.theta();
        current.phi = wrapped.phi();
        if (candidate_better(current, best)) {
            best = current;
            best_converged = converged;
        }
    }

    basis_optimum result;
    result.basis = measurement_basis(best.theta, best.phi);
    result.value = objective(result.basis);
    ++evaluations;
    result.evaluations = evaluations;
    result.converged = best_converged;
    return result;
}

} // namespace detail

struct discord_result {
    double value = 0.0;
    basis_optimum optimum;
};

// D = I(A:B) - max_{(theta,phi)} J(A:B). Non-convergence of the refinement
// is reported through optimum.converged with the best value found.
inline discord_result discord(const density_matrix4& rho) {
    const double info = mutual_information(rho);
    const double s_a = detail::entropy_2x2(partial_trace(rho.matrix(), subsystem::A));
    auto opt = detail::maximize_over_bases([&](const measurement_basis& basis) {
        return s_a - strong_conditional_entropy(rho, basis);
    });
    return {info - opt.value, opt};
}

// D_w = I(A:B) - max_{(theta,phi)} J_w(A:B) at fixed strength x; the
// maximization never varies x.
inline discord_result weak_discord(const density_matrix4& rho, double x) {
    if (!std::isfinite(x)) {
        throw parameter_range_error("weak_discord requires finite x");
    }
    const double info = mutual_information(rho);
    const double s_a = detail::entropy_2x2(partial_trace(rho.matrix(), subsystem::A));
    auto opt = detail::maximize_over_bases([&](const measurement_basis& basis) {
        return s_a - weak_conditional_entropy(rho, weak_povm(x, basis));
    });
    return {info - opt.value, opt};
}

inline double delta_discord(const density_matrix4& rho, double x) {
    return weak_discord(rho, x).value - discord(rho).value;
}

} // namespace qdcost
