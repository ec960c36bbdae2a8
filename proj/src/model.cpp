#include "qfilt/model.hpp"

#include <cmath>
#include <string>

namespace qfilt {

DensityMatrix::DensityMatrix(const ComplexMatrix& m) {
    HermitianMatrix herm(m);
    ComplexMatrix a = herm.matrix();

    HermitianEig eig = hermitian_eig(a);
    const double lambda_min = eig.eigenvalues.minCoeff();
    if (lambda_min < -1e-7) {
        throw NotDensityError("DensityMatrix: eigenvalue " +
                              std::to_string(lambda_min) +
                              " is not positive semidefinite");
    }
    if (lambda_min < 0.0) {
        RealVector clipped = eig.eigenvalues.cwiseMax(0.0);
        a = eig.eigenvectors * clipped.asDiagonal() * eig.eigenvectors.adjoint();
        a = 0.5 * (a + a.adjoint().eval());
    }

    const double tr = a.trace().real();
    if (!(tr > 1e-12)) {
        throw NotDensityError("DensityMatrix: trace " + std::to_string(tr) +
                              " is not positive");
    }
    if (std::abs(tr - 1.0) > 1e-12) {
        a /= tr;
    }
    mat_ = std::move(a);
}

DensityMatrix DensityMatrix::trusted(ComplexMatrix m) {
    DensityMatrix rho;
    rho.mat_ = std::move(m);
    return rho;
}

QsdeModel validate_model(QsdeModel m) {
    if (m.p <= 0) {
        throw ShapeMismatchError("validate_model: dimension must be positive");
    }
    if (m.hamiltonian.rows() != m.p || m.hamiltonian.cols() != m.p) {
        throw ShapeMismatchError("validate_model: Hamiltonian is " +
                                 std::to_string(m.hamiltonian.rows()) + "x" +
                                 std::to_string(m.hamiltonian.cols()) +
                                 ", expected " + std::to_string(m.p) + "x" +
                                 std::to_string(m.p));
    }
    if (m.lindblads.empty()) {
        throw EmptyInputError("validate_model: at least one Lindblad operator required");
    }
    for (std::size_t k = 0; k < m.lindblads.size(); ++k) {
        const ComplexMatrix& l = m.lindblads[k];
        if (l.rows() != m.p || l.cols() != m.p) {
            throw ShapeMismatchError("validate_model: L_" + std::to_string(k + 1) +
                                     " is " + std::to_string(l.rows()) + "x" +
                                     std::to_string(l.cols()));
        }
        if (!l.allFinite()) {
            throw OverflowError("validate_model: L_" + std::to_string(k + 1) +
                                " has non-finite entries");
        }
    }
    if (!(m.eta > 0.0) || m.eta > 1.0) {
        throw BadEtaError("validate_model: eta = " + std::to_string(m.eta) +
                          " outside (0, 1]");
    }

    const double scale = 1.0 + m.hamiltonian.cwiseAbs().maxCoeff();
    const double asym = (m.hamiltonian - m.hamiltonian.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * scale) {
        throw NotHermitianError("validate_model: Hamiltonian asymmetry " +
                                std::to_string(asym) + " exceeds tolerance");
    }
    m.hamiltonian = 0.5 * (m.hamiltonian + m.hamiltonian.adjoint().eval());
    return m;
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& x) const {
    if (x.rows() != dim_p || x.cols() != dim_p) {
        throw ShapeMismatchError("Superoperator::apply: operand is " +
                                 std::to_string(x.rows()) + "x" +
                                 std::to_string(x.cols()) + ", expected " +
                                 std::to_string(dim_p) + "x" +
                                 std::to_string(dim_p));
    }
    VectorizedMatrix v = vectorize(x);
    v.coords = matrix * v.coords;
    return devectorize(v);
}

Superoperator generator(const QsdeModel& m) {
    const Eigen::Index p = m.p;
    const ComplexMatrix eye = ComplexMatrix::Identity(p, p);
    const Complex i_unit(0.0, 1.0);

    ComplexMatrix mat = i_unit * (kron(eye, m.hamiltonian) -
                                  kron(m.hamiltonian.transpose(), eye));
    for (const ComplexMatrix& l : m.lindblads) {
        const ComplexMatrix ldl = l.adjoint() * l;
        mat += kron(l.transpose(), l.adjoint());
        mat -= 0.5 * kron(eye, ldl);
        mat -= 0.5 * kron(ldl.transpose(), eye);
    }
    return Superoperator{p, std::move(mat)};
}

Superoperator measurement_superop(const QsdeModel& m) {
    const Eigen::Index p = m.p;
    const ComplexMatrix eye = ComplexMatrix::Identity(p, p);
    const ComplexMatrix& l1 = m.lindblads.front();

    ComplexMatrix mat;
    if (m.detection == Detection::Homodyne) {
        mat = kron(eye, l1.adjoint()) + kron(l1.transpose(), eye);
    } else {
        mat = kron(l1.transpose(), l1.adjoint());
    }
    return Superoperator{p, std::move(mat)};
}

Superoperator predual(const Superoperator& s) {
    const Eigen::Index p = s.dim_p;
    const Eigen::Index n = p * p;
    // With tau(r + p*c) = c + p*r the predual matrix is entrywise
    // M*(i, j) = M(tau(j), tau(i)), an exact permutation of entries.
    auto tau = [p](Eigen::Index idx) {
        return (idx / p) + p * (idx % p);
    };
    ComplexMatrix mat(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            mat(i, j) = s.matrix(tau(j), tau(i));
        }
    }
    return Superoperator{p, std::move(mat)};
}

} // namespace qfilt
