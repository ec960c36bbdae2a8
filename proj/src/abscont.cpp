#include "qfilt/abscont.hpp"

#include <string>

namespace qfilt {

SubspaceBasis kernel(const DensityMatrix& rho, double tol_abs) {
    const HermitianEig eig = hermitian_eig(rho.matrix());
    Eigen::Index count = 0;
    while (count < eig.eigenvalues.size() && eig.eigenvalues(count) <= tol_abs) {
        ++count;
    }
    SubspaceBasis basis;
    basis.dim_p = rho.dim();
    basis.vectors = eig.eigenvectors.leftCols(count);
    return basis;
}

bool is_absolutely_continuous(const DensityMatrix& rho1,
                              const DensityMatrix& rho2,
                              double tol_abs) {
    if (rho1.dim() != rho2.dim()) {
        throw ShapeMismatchError("is_absolutely_continuous: dimensions " +
                                 std::to_string(rho1.dim()) + " and " +
                                 std::to_string(rho2.dim()));
    }
    const SubspaceBasis ker2 = kernel(rho2, tol_abs);
    for (Eigen::Index j = 0; j < ker2.vectors.cols(); ++j) {
        if ((rho1.matrix() * ker2.vectors.col(j)).norm() > tol_abs) {
            return false;
        }
    }
    return true;
}

} // namespace qfilt
