#pragma once

#include <array>
#include <string>
#include <variant>

#include "qdcost/matcore.hpp"

// Constructors and validators for the two-qubit state families: the pure
// Schmidt state sqrt(l0)|00> + sqrt(1-l0)|11>, the Werner mixture of the
// singlet with white noise, and the general Bloch/correlation-vector
// parameterization (1/4)[I + a.sigma(x)I + I(x)b.sigma + sum_i c_i s_i(x)s_i].

namespace qdcost {

inline const cmat2& pauli(int i) {
    static const std::array<cmat2, 4> sigma = [] {
        std::array<cmat2, 4> s;
        s[0] = cmat2::Identity();
        s[1] << 0, 1, 1, 0;
        s[2] << 0, complexd(0, -1), complexd(0, 1), 0;
        s[3] << 1, 0, 0, -1;
        return s;
    }();
    return sigma[i];
}

// A validated Hermitian, trace-one, PSD matrix of dimension N (2 or 4).
template <int N>
class density_matrix {
    static_assert(N == 2 || N == 4, "only qubit and two-qubit states are supported");

public:
    // Validates Hermiticity, unit trace and positivity; throws
    // invalid_state_error naming the violated property.
    explicit density_matrix(const cmat<N>& m) : m_(m) { check(m_); }

    // Tag for constructors whose output is PSD/trace-one by construction.
    struct unchecked_t {};
    static constexpr unchecked_t unchecked{};
    density_matrix(const cmat<N>& m, unchecked_t) : m_(m) {}

    const cmat<N>& matrix() const noexcept { return m_; }
    static constexpr int dim() noexcept { return N; }

private:
    static void check(const cmat<N>& m) {
        if (!is_hermitian<N>(m)) {
            throw invalid_state_error(state_violation::non_hermitian,
                                      "density matrix is not Hermitian within 1e-10");
        }
        const double tr = m.trace().real();
        if (std::abs(tr - 1.0) > kHermitianTol) {
            throw invalid_state_error(state_violation::trace,
                                      "density matrix trace " + std::to_string(tr) +
                                          " differs from 1 beyond 1e-10");
        }
        const auto eig = hermitian_eigen<N>(m);
        if (eig.eigenvalues(0) < -kPsdTol) {
            throw invalid_state_error(state_violation::negativity,
                                      "density matrix has eigenvalue " +
                                          std::to_string(eig.eigenvalues(0)) +
                                          " below -1e-10");
        }
    }

    cmat<N> m_;
};

using density_matrix2 = density_matrix<2>;
using density_matrix4 = density_matrix<4>;

// Wrap a raw matrix as a state, reporting the first violated property.
template <int N>
density_matrix<N> validate(const cmat<N>& m) {
    return density_matrix<N>(m);
}

inline density_matrix4 make_pure_schmidt(double lambda0) {
    if (!(lambda0 >= 0.0 && lambda0 <= 1.0)) {
        throw parameter_range_error("pure Schmidt state requires lambda0 in [0,1], got " +
                                    std::to_string(lambda0));
    }
    Eigen::Matrix<complexd, 4, 1> psi = Eigen::Matrix<complexd, 4, 1>::Zero();
    psi(0) = std::sqrt(lambda0);
    psi(3) = std::sqrt(1.0 - lambda0);
    return density_matrix4(psi * psi.adjoint(), density_matrix4::unchecked);
}

inline density_matrix4 make_werner(double z) {
    if (!(z >= 0.0 && z <= 1.0)) {
        throw parameter_range_error("Werner state requires z in [0,1], got " +
                                    std::to_string(z));
    }
    Eigen::Matrix<complexd, 4, 1> singlet = Eigen::Matrix<complexd, 4, 1>::Zero();
    singlet(1) = 1.0 / std::sqrt(2.0);
    singlet(2) = -1.0 / std::sqrt(2.0);
    const cmat4 m = z * (singlet * singlet.adjoint()) +
                    (1.0 - z) / 4.0 * cmat4::Identity();
    return density_matrix4(m, density_matrix4::unchecked);
}

using real3 = std::array<double, 3>;

// Assembles the general two-qubit form and validates it; parameter
// triples that do not describe a physical state are rejected rather
// than projected onto the PSD cone.
inline density_matrix4 make_general(const real3& a, const real3& b, const real3& c) {
    cmat4 m = cmat4::Identity();
    for (int i = 0; i < 3; ++i) {
        m += a[i] * tensor_product(pauli(i + 1), pauli(0));
        m += b[i] * tensor_product(pauli(0), pauli(i + 1));
        m += c[i] * tensor_product(pauli(i + 1), pauli(i + 1));
    }
    m *= 0.25;
    return density_matrix4(m);
}

inline real3 bloch_vector(const density_matrix2& rho) {
    real3 r;
    for (int i = 0; i < 3; ++i) {
        r[i] = (rho.matrix() * pauli(i + 1)).trace().real();
    }
    return r;
}

// Tagged description of a state family, as accepted by the CLI.
struct pure_schmidt_params {
    double lambda0;
};
struct werner_params {
    double z;
};
struct general_params {
    real3 a, b, c;
};

using state_family = std::variant<pure_schmidt_params, werner_params, general_params>;

inline density_matrix4 make_state(const state_family& family) {
    return std::visit(
        [](const auto& p) -> density_matrix4 {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, pure_schmidt_params>) {
                return make_pure_schmidt(p.lambda0);
            } else if constexpr (std::is_same_v<T, werner_params>) {
                return make_werner(p.z);
            } else {
                return make_general(p.a, p.b, p.c);
            }
        },
        family);
}

} // namespace qdcost
