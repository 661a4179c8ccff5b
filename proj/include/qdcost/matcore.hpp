#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <complex>

#include "qdcost/errors.hpp"

// Dense complex linear algebra for 2x2 and 4x4 Hermitian matrices:
// eigendecomposition, PSD matrix functions, tensor product, partial trace.
// Basis ordering is (|00>, |01>, |10>, |11>) with subsystem A as the slow
// index throughout.

namespace qdcost {

using complexd = std::complex<double>;

template <int N>
using cmat = Eigen::Matrix<complexd, N, N>;

using cmat2 = cmat<2>;
using cmat4 = cmat<4>;

// Eigenvalues below this magnitude are treated as exact zeros when
// applying sqrt/log to a PSD spectrum; rank-deficient states (pure
// states, Werner z=1) otherwise produce tiny negative eigenvalues.
inline constexpr double kEigenvalueClamp = 1e-12;

// Max-abs tolerance for Hermiticity checks.
inline constexpr double kHermitianTol = 1e-10;

// Eigenvalues above -kPsdTol are accepted as nonnegative up to roundoff.
inline constexpr double kPsdTol = 1e-10;

template <int N>
double max_abs(const cmat<N>& m) {
    return m.cwiseAbs().maxCoeff();
}

template <int N>
bool is_hermitian(const cmat<N>& m, double tol = kHermitianTol) {
    return max_abs<N>(m - m.adjoint()) <= tol;
}

enum class subsystem { A, B };

// Kronecker product a (x) b with a the slow index.
inline cmat4 tensor_product(const cmat2& a, const cmat2& b) {
    cmat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

// Trace out the complementary subsystem of a two-qubit operator.
inline cmat2 partial_trace(const cmat4& rho, subsystem keep) {
    cmat2 out = cmat2::Zero();
    if (keep == subsystem::A) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    out(i, j) += rho(2 * i + k, 2 * j + k);
    } else {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    out(i, j) += rho(2 * k + i, 2 * k + j);
    }
    return out;
}

template <int N>
struct hermitian_eigen_result {
    // Ascending eigenvalues and the matching unitary of column eigenvectors.
    Eigen::Matrix<double, N, 1> eigenvalues;
    cmat<N> eigenvectors;
};

// Eigendecomposition of a Hermitian matrix. Eigen's self-adjoint solver
// is a fixed deterministic algorithm, so identical inputs give identical
// outputs across runs.
template <int N>
hermitian_eigen_result<N> hermitian_eigen(const cmat<N>& m) {
    if (!is_hermitian<N>(m)) {
        throw contract_violation_error("hermitian_eigen: input is not Hermitian within 1e-10");
    }
    Eigen::SelfAdjointEigenSolver<cmat<N>> solver(m);
    if (solver.info() != Eigen::Success) {
        throw contract_violation_error("hermitian_eigen: eigensolver failed to converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// Eigenvalues of a 2x2 Hermitian matrix in closed form, ascending.
inline std::array<double, 2> hermitian_eigenvalues_2x2(const cmat2& m) {
    const double mean = 0.5 * (m(0, 0).real() + m(1, 1).real());
    const double half_gap = 0.5 * (m(0, 0).real() - m(1, 1).real());
    const double disc = std::sqrt(half_gap * half_gap + std::norm(m(0, 1)));
    return {mean - disc, mean + disc};
}

enum class matrix_fn { sqrt, log2 };

// Apply a scalar function to the spectrum of a Hermitian PSD matrix.
// Eigenvalues at or below the clamp threshold (roundoff junk on
// rank-deficient inputs, either sign) map to exact zeros: sqrt would
// otherwise inflate 1e-16 noise to 1e-8, and for log2 the zeroing
// realises the 0*log0 = 0 convention in tr[rho log2 rho].
template <int N>
cmat<N> psd_matrix_function(const cmat<N>& m, matrix_fn f) {
    const auto eig = hermitian_eigen<N>(m);
    Eigen::Matrix<double, N, 1> mapped;
    for (int i = 0; i < N; ++i) {
        const double v = eig.eigenvalues(i);
        if (v < -kPsdTol) {
            throw not_psd_error("psd_matrix_function: eigenvalue " + std::to_string(v) +
                                " below -1e-10; matrix is not PSD");
        }
        if (v <= kEigenvalueClamp) {
            mapped(i) = 0.0;
            continue;
        }
        mapped(i) = f == matrix_fn::sqrt ? std::sqrt(v) : std::log2(v);
    }
    return eig.eigenvectors * mapped.template cast<complexd>().asDiagonal() *
           eig.eigenvectors.adjoint();
}

} // namespace qdcost
