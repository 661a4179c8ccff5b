#pragma once

#include <cmath>
#include <numbers>
#include <utility>

#include "qdcost/states.hpp"

// Projective bases on qubit B, the two-outcome weak POVM
//   P_{+x} = sqrt((1-tanh x)/2) Pi0 + sqrt((1+tanh x)/2) Pi1,
//   P_{-x} = sqrt((1+tanh x)/2) Pi0 + sqrt((1-tanh x)/2) Pi1,
// conditional states and outcome probabilities, and the non-selective
// post-measurement channel.

namespace qdcost {

inline constexpr double pi = std::numbers::pi;

// Vanishing-probability guard for conditional states.
inline constexpr double kOutcomeProbFloor = 1e-14;

// Orthogonal projector pair on qubit B defined by the Bloch direction
// (theta, phi): Pi0 projects onto cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
class measurement_basis {
public:
    measurement_basis(double theta, double phi) {
        canonicalize(theta, phi);
        theta_ = theta;
        phi_ = phi;
        const double c = std::cos(theta / 2.0);
        const complexd s = std::polar(std::sin(theta / 2.0), phi);
        Eigen::Matrix<complexd, 2, 1> psi;
        psi << c, s;
        pi0_ = psi * psi.adjoint();
        pi1_ = cmat2::Identity() - pi0_;
    }

    double theta() const noexcept { return theta_; }
    double phi() const noexcept { return phi_; }
    const cmat2& pi0() const noexcept { return pi0_; }
    const cmat2& pi1() const noexcept { return pi1_; }

private:
    // Wrap into theta in [0, pi], phi in [0, 2*pi). In-range inputs are
    // preserved exactly.
    static void canonicalize(double& theta, double& phi) {
        theta = std::fmod(theta, 2.0 * pi);
        if (theta < 0.0) theta += 2.0 * pi;
        if (theta > pi) {
            theta = 2.0 * pi - theta;
            phi += pi;
        }
        if (phi < 0.0 || phi >= 2.0 * pi) {
            phi = std::fmod(phi, 2.0 * pi);
            if (phi < 0.0) phi += 2.0 * pi;
        }
        // A polar basis state has no azimuth.
        if (theta == 0.0 || theta == pi) phi = 0.0;
    }

    double theta_ = 0.0;
    double phi_ = 0.0;
    cmat2 pi0_, pi1_;
};

inline measurement_basis make_basis(double theta, double phi) {
    return measurement_basis(theta, phi);
}

enum class outcome_sign { plus, minus };

// Weak POVM of strength x in a given basis. The "+" outcome carries the
// element that weights Pi1 with the larger coefficient.
class weak_povm {
public:
    weak_povm(double x, measurement_basis basis) : x_(x), basis_(std::move(basis)) {
        if (!std::isfinite(x)) {
            throw parameter_range_error("weak POVM strength must be finite");
        }
        const double t = std::tanh(x);
        const double lo = std::sqrt((1.0 - t) / 2.0);
        const double hi = std::sqrt((1.0 + t) / 2.0);
        p_plus_ = lo * basis_.pi0() + hi * basis_.pi1();
        p_minus_ = hi * basis_.pi0() + lo * basis_.pi1();
    }

    double x() const noexcept { return x_; }
    const measurement_basis& basis() const noexcept { return basis_; }
    const cmat2& element(outcome_sign s) const noexcept {
        return s == outcome_sign::plus ? p_plus_ : p_minus_;
    }

private:
    double x_;
    measurement_basis basis_;
    cmat2 p_plus_, p_minus_;
};

inline weak_povm weak_elements(double x, const measurement_basis& basis) {
    return weak_povm(x, basis);
}

inline cmat4 embed_on_b(const cmat2& p) {
    return tensor_product(pauli(0), p);
}

// p_w(+-x) = Tr[(I (x) P_{+-x}) rho (I (x) P_{+-x})].
inline double outcome_probability(const density_matrix4& rho, const weak_povm& povm,
                                  outcome_sign sign) {
    const cmat4 op = embed_on_b(povm.element(sign));
    return (op * rho.matrix() * op).trace().real();
}

// Normalised post-measurement state of subsystem A for one outcome.
inline density_matrix2 conditional_state(const density_matrix4& rho, const weak_povm& povm,
                                         outcome_sign sign) {
    const cmat4 op = embed_on_b(povm.element(sign));
    const cmat4 sandwiched = op * rho.matrix() * op;
    const double p = sandwiched.trace().real();
    if (p < kOutcomeProbFloor) {
        throw degenerate_outcome_error("conditional_state: outcome probability " +
                                       std::to_string(p) + " below 1e-14");
    }
    return density_matrix2(partial_trace(sandwiched, subsystem::A) / p,
                           density_matrix2::unchecked);
}

// Non-selective, trace-preserving update
//   rho~ = sum_{+-} (I (x) P_{+-x}) rho (I (x) P_{+-x}).
// On the B marginal this is the phase damping channel: in the measurement
// eigenframe (r_x, r_y, r_z) -> (r_x sech x, r_y sech x, r_z).
inline density_matrix4 post_measurement_state(const density_matrix4& rho,
                                              const weak_povm& povm) {
    const cmat4 op_plus = embed_on_b(povm.element(outcome_sign::plus));
    const cmat4 op_minus = embed_on_b(povm.element(outcome_sign::minus));
    const cmat4 m = op_plus * rho.matrix() * op_plus + op_minus * rho.matrix() * op_minus;
    return density_matrix4(m, density_matrix4::unchecked);
}

// The published update multiplies each term by its outcome probability,
//   rho~ = sum_{+-} p_w(+-x) (I (x) P) rho (I (x) P),
// which is not trace-preserving (at x = 0 it yields rho/2). Kept available
// for comparison; the trace is reported alongside the raw matrix.
struct literal_post_measurement {
    cmat4 matrix;
    double trace;
};

inline literal_post_measurement post_measurement_state_literal(const density_matrix4& rho,
                                                               const weak_povm& povm) {
    const cmat4 op_plus = embed_on_b(povm.element(outcome_sign::plus));
    const cmat4 op_minus = embed_on_b(povm.element(outcome_sign::minus));
    const cmat4 term_plus = op_plus * rho.matrix() * op_plus;
    const cmat4 term_minus = op_minus * rho.matrix() * op_minus;
    const cmat4 m = term_plus.trace().real() * term_plus + term_minus.trace().real() * term_minus;
    return {m, m.trace().real()};
}

} // namespace qdcost
