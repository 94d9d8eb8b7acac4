#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtomo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Default tolerances used across the library.  Callers may override per call.
inline constexpr double kHermTol = 1e-9;     // hermiticity / positivity checks
inline constexpr double kAlgebraTol = 1e-10; // algebraic identity residuals
inline constexpr double kRankTolRel = 1e-10; // relative pseudo-inverse cutoff

// ------------------------------ basic checks ------------------------------

inline bool is_hermitian(const Matrix& a, double tol = kHermTol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Positive semidefinite within tolerance (hermitian part eigenvalues >= -tol).
inline bool is_positive_semidefinite(const Matrix& a, double tol = kHermTol) {
    if (!is_hermitian(a, tol)) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es((a + a.adjoint()) / 2.0,
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

inline bool is_density_matrix(const Matrix& rho, double tol = kHermTol) {
    return is_positive_semidefinite(rho, tol) &&
           std::abs(rho.trace().real() - 1.0) <= tol &&
           std::abs(rho.trace().imag()) <= tol;
}

inline bool is_unitary(const Matrix& u, double tol = kHermTol) {
    if (u.rows() != u.cols()) return false;
    Matrix g = u.adjoint() * u;
    g -= Matrix::Identity(u.cols(), u.cols());
    return g.cwiseAbs().maxCoeff() <= tol;
}

// ------------------------------ fixed operators ---------------------------

inline Matrix pauli(int i) {
    Matrix s(2, 2);
    switch (i) {
        case 0: s << 1, 0, 0, 1; break;
        case 1: s << 0, 1, 1, 0; break;
        case 2: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 3: s << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("pauli: index must be 0..3");
    }
    return s;
}

// |i><j| in a d-dimensional space.
inline Matrix unit_matrix(int d, int i, int j) {
    Matrix e = Matrix::Zero(d, d);
    e(i, j) = 1.0;
    return e;
}

// Orthonormal hermitian basis of L(C^d) under <A,B> = Tr[A^dag B]:
// diagonal units, and (E_ij + E_ji)/sqrt(2), i(E_ij - E_ji)/sqrt(2) for i<j.
inline std::vector<Matrix> hermitian_basis(int d) {
    if (d < 1) throw std::invalid_argument("hermitian_basis: d must be >= 1");
    std::vector<Matrix> basis;
    basis.reserve(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i) basis.push_back(unit_matrix(d, i, i));
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            basis.push_back(s * (unit_matrix(d, i, j) + unit_matrix(d, j, i)));
            basis.push_back(Complex(0, 1) * s *
                            (unit_matrix(d, i, j) - unit_matrix(d, j, i)));
        }
    return basis;
}

}  // namespace qtomo
