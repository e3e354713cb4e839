#include "bdris/linalg.hpp"

#include "bdris/errors.hpp"

#include <cmath>
#include <string>

namespace bdris {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexVector vec(const ComplexMatrix& a) {
    return ComplexVector{a.reshaped()};
}

ComplexMatrix unvec(const ComplexVector& v, Index rows, Index cols) {
    if (v.size() != rows * cols)
        throw std::invalid_argument("unvec: length " + std::to_string(v.size()) +
                                    " does not factor as " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    return ComplexMatrix{v.reshaped(rows, cols)};
}

ComplexVector vech(const ComplexMatrix& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("vech: matrix must be square");
    const Index n = a.rows();
    ComplexVector out(vech_length(n));
    Index k = 0;
    for (Index j = 0; j < n; ++j)
        for (Index i = j; i < n; ++i)
            out(k++) = a(i, j);
    return out;
}

Index vech_length(Index n) {
    return n * (n + 1) / 2;
}

Index side_from_vech_length(Index len) {
    const Index n = static_cast<Index>((std::sqrt(8.0 * static_cast<double>(len) + 1.0) - 1.0) / 2.0 + 0.5);
    if (vech_length(n) != len)
        throw std::invalid_argument("side_from_vech_length: " + std::to_string(len) +
                                    " is not a triangular number");
    return n;
}

RealMatrix duplication_matrix(Index n) {
    RealMatrix d = RealMatrix::Zero(n * n, vech_length(n));
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            const Index lo = std::min(i, j), hi = std::max(i, j);
            const Index col = lo * n - lo * (lo - 1) / 2 + (hi - lo);
            d(j * n + i, col) = 1.0;
        }
    }
    return d;
}

ComplexMatrix symmetric_from_vech(const ComplexVector& v) {
    const Index n = side_from_vech_length(v.size());
    ComplexMatrix a(n, n);
    Index k = 0;
    for (Index j = 0; j < n; ++j) {
        for (Index i = j; i < n; ++i) {
            a(i, j) = v(k);
            a(j, i) = v(k);
            ++k;
        }
    }
    return a;
}

double max_eigenvalue_hermitian(const ComplexMatrix& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("max_eigenvalue_hermitian: matrix must be square");
    require_finite(a, "max_eigenvalue_hermitian input");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale)
        throw std::invalid_argument("max_eigenvalue_hermitian: input not Hermitian (asymmetry " +
                                    std::to_string(asym) + ")");

    const ComplexMatrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    if (es.info() == Eigen::Success) {
        const double lam = es.eigenvalues().maxCoeff();
        return lam + 1e-12 * (1.0 + h.norm());
    }
    // Certified upper bound: lam_max <= max_i a_ii + ||offdiag||_2
    //                                <= sum_i |a_ii| + ||offdiag||_F  (when some a_ii >= 0,
    // and trivially when all are negative).
    const double diag_sum = h.diagonal().real().cwiseAbs().sum();
    ComplexMatrix off = h;
    off.diagonal().setZero();
    return diag_sum + off.norm();
}

SvdResult svd(const ComplexMatrix& a) {
    require_finite(a, "svd input");
    Eigen::JacobiSVD<ComplexMatrix> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return SvdResult{solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

ComplexMatrix nearest_unitary(const ComplexMatrix& x) {
    if (x.rows() != x.cols())
        throw std::invalid_argument("nearest_unitary: matrix must be square");
    const SvdResult s = svd(x);
    const double smax = s.singular_values.size() ? s.singular_values(0) : 0.0;
    const double smin = s.singular_values.size() ? s.singular_values(s.singular_values.size() - 1) : 0.0;
    if (smax <= 0.0 || smin <= 1e-12 * smax)
        throw NumericalError("nearest_unitary: rank-deficient input (smallest singular value " +
                             std::to_string(smin) + ", largest " + std::to_string(smax) + ")");
    return s.u * s.v.adjoint();
}

bool all_finite(const ComplexMatrix& a) {
    return a.allFinite();
}

void require_finite(const ComplexMatrix& a, const char* what) {
    if (!a.allFinite())
        throw NumericalError(std::string(what) + ": contains NaN or Inf");
}

double real_checked(Complex z, const char* what) {
    const double tol = 1e-9 * std::max(1.0, std::abs(z));
    if (std::abs(z.imag()) > tol)
        throw NumericalError(std::string(what) + ": non-real value, imaginary part " +
                             std::to_string(z.imag()));
    return z.real();
}

} // namespace bdris
