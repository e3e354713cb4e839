#pragma once

#include <Eigen/Dense>
#include <complex>

namespace bdris {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Storage is Eigen's default column-major; vec() stacks columns, and every
// Kronecker identity in the model relies on that pairing.

// Kronecker product a ⊗ b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Column-stacking vectorization and its inverse.
ComplexVector vec(const ComplexMatrix& a);
ComplexMatrix unvec(const ComplexVector& v, Index rows, Index cols);

// Half-vectorization of a square matrix: lower triangle including the
// diagonal, read column by column ([a11, a21, ..., an1, a22, a32, ...]).
ComplexVector vech(const ComplexMatrix& a);

Index vech_length(Index n);
// Inverse of vech_length; throws if len is not a triangular number.
Index side_from_vech_length(Index len);

// Duplication matrix D_n (n^2 x n(n+1)/2, entries 0/1): for symmetric A,
// vec(A) = D_n * vech(A). Exact, no rounding involved.
RealMatrix duplication_matrix(Index n);

// Rebuild the symmetric matrix with vech(A) = v. Equals unvec(D_n * v, n, n)
// but places each entry directly, so symmetry is exact by construction.
ComplexMatrix symmetric_from_vech(const ComplexVector& v);

// Largest eigenvalue of a Hermitian matrix, returned with a tiny safety
// margin so it upper-bounds the true value. Input must be Hermitian within
// 1e-10 (relative); a failed eigensolve falls back to the certified bound
// sum|a_ii| + ||offdiag||_F.
double max_eigenvalue_hermitian(const ComplexMatrix& a);

struct SvdResult {
    ComplexMatrix u;        // m x m unitary
    RealVector singular_values; // descending, length min(m, n)
    ComplexMatrix v;        // n x n unitary; a = u * diag(s) * v^H
};
SvdResult svd(const ComplexMatrix& a);

// Frobenius-nearest unitary matrix: u * v^H from the SVD of x.
// Throws NumericalError if x is (numerically) rank deficient.
ComplexMatrix nearest_unitary(const ComplexMatrix& x);

// Guards: reject NaN/Inf inputs early with the offending name in the message.
bool all_finite(const ComplexMatrix& a);
void require_finite(const ComplexMatrix& a, const char* what);

// Real part of a value that is real up to rounding. Imaginary residue above
// 1e-9 * max(1, |z|) raises NumericalError naming `what`.
double real_checked(Complex z, const char* what);

} // namespace bdris
