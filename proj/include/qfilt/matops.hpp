#ifndef QFILT_MATOPS_HPP
#define QFILT_MATOPS_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qfilt/errors.hpp"

namespace qfilt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Square complex matrix that is Hermitian within a strict tolerance.
/// Construction symmetrizes A <- (A + A*)/2 after checking that the
/// asymmetry does not exceed 1e-12 * (1 + max entry magnitude).
class HermitianMatrix {
public:
    explicit HermitianMatrix(const ComplexMatrix& a);

    const ComplexMatrix& matrix() const { return mat_; }
    Eigen::Index dim() const { return mat_.rows(); }

private:
    ComplexMatrix mat_;
};

/// Column-stacked coordinates of a square p x p matrix: column j of the
/// matrix occupies coords [p*j, p*j + p).
struct VectorizedMatrix {
    Eigen::Index dim_p = 0;
    ComplexVector coords;
};

/// Column-stacking vectorization. Throws NonSquareError for rectangular
/// input. With this convention vec(A X B) = (B^T (x) A) vec(X).
VectorizedMatrix vectorize(const ComplexMatrix& x);

/// Inverse of vectorize.
ComplexMatrix devectorize(const VectorizedMatrix& v);

/// Hilbert-Schmidt inner product Tr[A* B]; conjugate-linear in A.
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hilbert-Schmidt norm sqrt(Tr[A* A]).
double hs_norm(const ComplexMatrix& a);

/// Kronecker product A (x) B.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct HermitianEig {
    RealVector eigenvalues;      // ascending
    ComplexMatrix eigenvectors;  // orthonormal columns, same order
};

/// Spectral decomposition of a Hermitian matrix.
HermitianEig hermitian_eig(const HermitianMatrix& a);

/// Variant for matrices the caller guarantees to be Hermitian; only the
/// lower triangle is read.
HermitianEig hermitian_eig(const ComplexMatrix& a);

struct RankBasis {
    int rank = 0;
    std::vector<VectorizedMatrix> basis;  // orthonormal, spans the input
    double smallest_kept_ratio = 0.0;     // smallest kept singular value / threshold
    double largest_discarded_ratio = 0.0; // largest discarded singular value / threshold
};

/// Numerical rank of the span of the given vectors: the number of singular
/// values exceeding tol_rel times the largest one. Also returns an
/// orthonormal basis of the span. Throws EmptyInputError.
RankBasis numerical_rank(const std::vector<VectorizedMatrix>& vectors,
                         double tol_rel = 1e-9);

/// Matrix exponential by scaling and squaring with a Pade core.
ComplexMatrix matrix_exp(const ComplexMatrix& m);

} // namespace qfilt

#endif // QFILT_MATOPS_HPP
