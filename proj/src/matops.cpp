#include "qfilt/matops.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace qfilt {

namespace {

void require_square(const ComplexMatrix& x, const char* who) {
    if (x.rows() != x.cols()) {
        throw NonSquareError(std::string(who) + ": matrix is " +
                             std::to_string(x.rows()) + "x" +
                             std::to_string(x.cols()));
    }
}

void require_finite(const ComplexMatrix& x, const char* who) {
    if (!x.allFinite()) {
        throw OverflowError(std::string(who) + ": non-finite entries");
    }
}

} // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a) {
    require_square(a, "HermitianMatrix");
    require_finite(a, "HermitianMatrix");
    const double scale = 1.0 + a.cwiseAbs().maxCoeff();
    const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
        throw NotHermitianError("HermitianMatrix: asymmetry " +
                                std::to_string(asym) + " exceeds tolerance");
    }
    mat_ = 0.5 * (a + a.adjoint());
}

VectorizedMatrix vectorize(const ComplexMatrix& x) {
    require_square(x, "vectorize");
    VectorizedMatrix v;
    v.dim_p = x.rows();
    v.coords = Eigen::Map<const ComplexVector>(x.data(), x.size());
    return v;
}

ComplexMatrix devectorize(const VectorizedMatrix& v) {
    const Eigen::Index p = v.dim_p;
    if (v.coords.size() != p * p) {
        throw ShapeMismatchError("devectorize: " + std::to_string(v.coords.size()) +
                                 " coords for dim " + std::to_string(p));
    }
    return Eigen::Map<const ComplexMatrix>(v.coords.data(), p, p);
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw ShapeMismatchError("hs_inner: shapes " + std::to_string(a.rows()) +
                                 "x" + std::to_string(a.cols()) + " and " +
                                 std::to_string(b.rows()) + "x" +
                                 std::to_string(b.cols()));
    }
    return (a.adjoint() * b).trace();
}

double hs_norm(const ComplexMatrix& a) {
    return a.norm();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    return Eigen::kroneckerProduct(a, b);
}

HermitianEig hermitian_eig(const ComplexMatrix& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("hermitian_eig: eigensolver did not converge");
    }
    return HermitianEig{solver.eigenvalues(), solver.eigenvectors()};
}

HermitianEig hermitian_eig(const HermitianMatrix& a) {
    return hermitian_eig(a.matrix());
}

RankBasis numerical_rank(const std::vector<VectorizedMatrix>& vectors,
                         double tol_rel) {
    if (vectors.empty()) {
        throw EmptyInputError("numerical_rank: no vectors");
    }
    const Eigen::Index p = vectors.front().dim_p;
    const Eigen::Index n = p * p;
    ComplexMatrix stacked(n, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        if (vectors[j].dim_p != p || vectors[j].coords.size() != n) {
            throw ShapeMismatchError("numerical_rank: inconsistent dimensions");
        }
        stacked.col(static_cast<Eigen::Index>(j)) = vectors[j].coords;
    }

    Eigen::JacobiSVD<ComplexMatrix> svd(stacked, Eigen::ComputeThinU);
    const RealVector& sv = svd.singularValues();
    const double threshold = tol_rel * (sv.size() > 0 ? sv(0) : 0.0);

    RankBasis result;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        const double ratio =
            threshold > 0.0 ? sv(i) / threshold : std::numeric_limits<double>::infinity();
        if (sv(i) > threshold) {
            result.rank += 1;
            result.basis.push_back(VectorizedMatrix{p, svd.matrixU().col(i)});
            result.smallest_kept_ratio = ratio;
        } else if (result.largest_discarded_ratio == 0.0) {
            result.largest_discarded_ratio = ratio;
        }
    }
    return result;
}

ComplexMatrix matrix_exp(const ComplexMatrix& m) {
    require_square(m, "matrix_exp");
    require_finite(m, "matrix_exp");
    ComplexMatrix result = m.exp();
    if (!result.allFinite()) {
        throw OverflowError("matrix_exp: result overflowed");
    }
    return result;
}

} // namespace qfilt
