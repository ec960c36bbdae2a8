#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "qfilt/matops.hpp"
#include "support/oracles.hpp"

using namespace qfilt;
using qfilt_tests::random_hermitian;
using qfilt_tests::random_matrix;

namespace {

const Complex kI(0.0, 1.0);

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

} // namespace

TEST_CASE("vectorize stacks columns") {
    const ComplexMatrix x = mat2(1.0, 2.0, 3.0, 4.0);
    const VectorizedMatrix v = vectorize(x);
    REQUIRE(v.dim_p == 2);
    REQUIRE(v.coords.size() == 4);
    CHECK(v.coords(0) == Complex(1.0));
    CHECK(v.coords(1) == Complex(3.0));
    CHECK(v.coords(2) == Complex(2.0));
    CHECK(v.coords(3) == Complex(4.0));
}

TEST_CASE("vectorize rejects rectangular input") {
    CHECK_THROWS_AS(vectorize(ComplexMatrix::Zero(2, 3)), NonSquareError);
    CHECK_THROWS_AS(vectorize(ComplexMatrix::Zero(3, 1)), NonSquareError);
}

TEST_CASE("devectorize inverts vectorize bitwise") {
    std::mt19937_64 gen(11);
    for (int rep = 0; rep < 20; ++rep) {
        const ComplexMatrix x = random_matrix(4, 4, gen);
        const ComplexMatrix back = devectorize(vectorize(x));
        CHECK(back == x);
    }
}

TEST_CASE("devectorize rejects coordinate count mismatch") {
    VectorizedMatrix v;
    v.dim_p = 2;
    v.coords = ComplexVector::Zero(3);
    CHECK_THROWS_AS(devectorize(v), ShapeMismatchError);
}

TEST_CASE("vectorization intertwines sandwich products with Kronecker matrices") {
    std::mt19937_64 gen(12);
    for (int rep = 0; rep < 20; ++rep) {
        const ComplexMatrix a = random_matrix(3, 3, gen);
        const ComplexMatrix x = random_matrix(3, 3, gen);
        const ComplexMatrix b = random_matrix(3, 3, gen);
        const ComplexVector lhs = vectorize(a * x * b).coords;
        const ComplexVector rhs = kron(b.transpose(), a) * vectorize(x).coords;
        CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }
}

TEST_CASE("vectorization preserves the Hilbert-Schmidt norm") {
    std::mt19937_64 gen(13);
    for (int rep = 0; rep < 100; ++rep) {
        const ComplexMatrix x = random_matrix(5, 5, gen);
        const double direct = hs_norm(x);
        const double via_coords = vectorize(x).coords.norm();
        CHECK(std::abs(direct - via_coords) <= 1e-12 * (1.0 + direct));
    }
}

TEST_CASE("hs_inner on a hand-checked pair") {
    const ComplexMatrix a = mat2(1.0, kI, 0.0, 2.0);
    const ComplexMatrix b = mat2(3.0, 1.0, 1.0, 0.0);
    // Tr[a* b] with a* = [[1, 0], [-i, 2]]: (1*3 + 0*1) + (-i*1 + 2*0) = 3 - i.
    const Complex value = hs_inner(a, b);
    CHECK(value.real() == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(value.imag() == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("hs_inner matches the conjugated coordinate dot product") {
    std::mt19937_64 gen(14);
    for (int rep = 0; rep < 50; ++rep) {
        const ComplexMatrix a = random_matrix(3, 3, gen);
        const ComplexMatrix b = random_matrix(3, 3, gen);
        const Complex direct = hs_inner(a, b);
        const Complex via_coords = vectorize(a).coords.dot(vectorize(b).coords);
        CHECK(std::abs(direct - via_coords) <= 1e-12 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("hs_inner is conjugate-linear in the first argument") {
    std::mt19937_64 gen(15);
    const ComplexMatrix a = random_matrix(3, 3, gen);
    const ComplexMatrix b = random_matrix(3, 3, gen);
    const Complex c(0.7, -1.3);
    const Complex lhs = hs_inner(c * a, b);
    const Complex rhs = std::conj(c) * hs_inner(a, b);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
}

TEST_CASE("hs_inner rejects shape mismatches") {
    CHECK_THROWS_AS(hs_inner(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(3, 3)),
                    ShapeMismatchError);
    CHECK_THROWS_AS(hs_inner(ComplexMatrix::Zero(2, 3), ComplexMatrix::Zero(2, 3)),
                    ShapeMismatchError);
}

TEST_CASE("hs_norm of scaled identity") {
    CHECK(hs_norm(2.0 * ComplexMatrix::Identity(3, 3)) ==
          doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("kron on a hand-checked pair") {
    const ComplexMatrix a = mat2(1.0, 2.0, 3.0, 4.0);
    const ComplexMatrix b = mat2(0.0, 1.0, 1.0, 0.0);
    const ComplexMatrix k = kron(a, b);
    REQUIRE(k.rows() == 4);
    REQUIRE(k.cols() == 4);
    CHECK(k(0, 1) == Complex(1.0));
    CHECK(k(1, 0) == Complex(1.0));
    CHECK(k(0, 3) == Complex(2.0));
    CHECK(k(2, 1) == Complex(3.0));
    CHECK(k(3, 2) == Complex(4.0));
    CHECK(k(0, 0) == Complex(0.0));
}

TEST_CASE("kron satisfies the mixed-product rule") {
    std::mt19937_64 gen(16);
    const ComplexMatrix a = random_matrix(2, 2, gen);
    const ComplexMatrix b = random_matrix(3, 3, gen);
    const ComplexMatrix c = random_matrix(2, 2, gen);
    const ComplexMatrix d = random_matrix(3, 3, gen);
    const ComplexMatrix lhs = kron(a, b) * kron(c, d);
    const ComplexMatrix rhs = kron(a * c, b * d);
    CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
}

TEST_CASE("HermitianMatrix accepts Hermitian input and symmetrizes exactly") {
    const ComplexMatrix a = mat2(1.0, Complex(0.5, 0.25), Complex(0.5, -0.25), -2.0);
    const HermitianMatrix h(a);
    CHECK(h.matrix() == h.matrix().adjoint().eval());
    CHECK(h.dim() == 2);
}

TEST_CASE("HermitianMatrix tolerates asymmetry below the threshold") {
    ComplexMatrix a = mat2(1.0, 0.5, 0.5, 2.0);
    a(0, 1) += Complex(0.0, 5e-13);
    const HermitianMatrix h(a);
    CHECK((h.matrix() - h.matrix().adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("HermitianMatrix rejects visible asymmetry") {
    CHECK_THROWS_AS(HermitianMatrix{mat2(0.0, 1.0, 0.0, 0.0)}, NotHermitianError);
    CHECK_THROWS_AS(HermitianMatrix{mat2(1.0, kI, kI, 1.0)}, NotHermitianError);
}

TEST_CASE("HermitianMatrix rejects rectangular and non-finite input") {
    CHECK_THROWS_AS(HermitianMatrix{ComplexMatrix::Zero(2, 3)}, NonSquareError);
    ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(HermitianMatrix{bad}, OverflowError);
}

TEST_CASE("hermitian_eig on diagonal and Pauli-x examples") {
    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = -1.0;
    d(2, 2) = 0.5;
    const HermitianEig eig_d = hermitian_eig(d);
    CHECK(eig_d.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(eig_d.eigenvalues(1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(eig_d.eigenvalues(2) == doctest::Approx(3.0).epsilon(1e-14));

    const ComplexMatrix sx = mat2(0.0, 1.0, 1.0, 0.0);
    const HermitianEig eig_x = hermitian_eig(sx);
    CHECK(eig_x.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(eig_x.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eig reconstructs the input with orthonormal eigenvectors") {
    std::mt19937_64 gen(17);
    for (int rep = 0; rep < 20; ++rep) {
        const ComplexMatrix a = random_hermitian(6, gen);
        const HermitianEig eig = hermitian_eig(a);
        const ComplexMatrix recon = eig.eigenvectors *
                                    eig.eigenvalues.cast<Complex>().asDiagonal() *
                                    eig.eigenvectors.adjoint();
        CHECK((recon - a).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + a.cwiseAbs().maxCoeff()));
        const ComplexMatrix gram = eig.eigenvectors.adjoint() * eig.eigenvectors;
        CHECK((gram - ComplexMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-10);
        for (Eigen::Index i = 1; i < eig.eigenvalues.size(); ++i) {
            CHECK(eig.eigenvalues(i - 1) <= eig.eigenvalues(i));
        }
    }
}

TEST_CASE("hermitian_eig agrees with characteristic-polynomial roots") {
    std::mt19937_64 gen(18);
    for (int rep = 0; rep < 10; ++rep) {
        const ComplexMatrix a = random_hermitian(5, gen);
        const HermitianEig eig = hermitian_eig(a);
        const std::vector<double> roots = qfilt_tests::charpoly_real_roots_sorted(a);
        REQUIRE(roots.size() == 5);
        for (Eigen::Index i = 0; i < 5; ++i) {
            CHECK(std::abs(eig.eigenvalues(i) - roots[static_cast<std::size_t>(i)]) <=
                  1e-8 * (1.0 + std::abs(roots[static_cast<std::size_t>(i)])));
        }
    }
}

TEST_CASE("hermitian_eig keeps positive semidefinite spectra above a dust floor") {
    std::mt19937_64 gen(19);
    for (int rep = 0; rep < 20; ++rep) {
        const ComplexMatrix g = random_matrix(4, 4, gen);
        const ComplexMatrix psd = g * g.adjoint();
        const HermitianEig eig = hermitian_eig(psd);
        CHECK(eig.eigenvalues.minCoeff() >= -1e-10 * (1.0 + psd.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("numerical_rank counts independent directions") {
    const VectorizedMatrix e11 = vectorize(mat2(1.0, 0.0, 0.0, 0.0));
    const VectorizedMatrix e22 = vectorize(mat2(0.0, 0.0, 0.0, 1.0));

    SUBCASE("duplicates collapse") {
        VectorizedMatrix doubled = e11;
        doubled.coords *= 2.0;
        const RankBasis rb = numerical_rank({e11, doubled});
        CHECK(rb.rank == 1);
        REQUIRE(rb.basis.size() == 1);
    }

    SUBCASE("orthogonal directions both count") {
        const RankBasis rb = numerical_rank({e11, e22});
        CHECK(rb.rank == 2);
    }

    SUBCASE("tiny perturbations are absorbed") {
        VectorizedMatrix nudged = e11;
        nudged.coords += 1e-15 * e22.coords;
        const RankBasis rb = numerical_rank({e11, nudged});
        CHECK(rb.rank == 1);
    }
}

TEST_CASE("numerical_rank reports cutoff ratios") {
    const VectorizedMatrix big = vectorize(mat2(1.0, 0.0, 0.0, 0.0));
    VectorizedMatrix small = vectorize(mat2(0.0, 0.0, 0.0, 1.0));
    small.coords *= 1e-5;

    SUBCASE("both kept under a loose cutoff") {
        const RankBasis rb = numerical_rank({big, small}, 1e-9);
        CHECK(rb.rank == 2);
        CHECK(rb.smallest_kept_ratio == doctest::Approx(1e4).epsilon(1e-9));
        CHECK(rb.largest_discarded_ratio == 0.0);
    }

    SUBCASE("small direction discarded under a tight cutoff") {
        const RankBasis rb = numerical_rank({big, small}, 1e-3);
        CHECK(rb.rank == 1);
        CHECK(rb.smallest_kept_ratio == doctest::Approx(1e3).epsilon(1e-9));
        CHECK(rb.largest_discarded_ratio == doctest::Approx(1e-2).epsilon(1e-9));
    }
}

TEST_CASE("numerical_rank basis is orthonormal and spans the input") {
    std::mt19937_64 gen(20);
    std::vector<VectorizedMatrix> vectors;
    for (int j = 0; j < 6; ++j) {
        vectors.push_back(vectorize(random_matrix(3, 3, gen)));
    }
    // Add a dependent vector so rank < count.
    VectorizedMatrix dependent = vectors[0];
    dependent.coords += vectors[1].coords;
    vectors.push_back(dependent);

    const RankBasis rb = numerical_rank(vectors);
    CHECK(rb.rank == 6);
    for (std::size_t i = 0; i < rb.basis.size(); ++i) {
        for (std::size_t j = 0; j < rb.basis.size(); ++j) {
            const Complex g = rb.basis[i].coords.dot(rb.basis[j].coords);
            const Complex expected = i == j ? Complex(1.0) : Complex(0.0);
            CHECK(std::abs(g - expected) <= 1e-12);
        }
    }
    for (const VectorizedMatrix& v : vectors) {
        ComplexVector residual = v.coords;
        for (const VectorizedMatrix& b : rb.basis) {
            residual -= b.coords.dot(v.coords) * b.coords;
        }
        CHECK(residual.norm() <= 1e-10 * (1.0 + v.coords.norm()));
    }
}

TEST_CASE("numerical_rank rejects empty and inconsistent input") {
    CHECK_THROWS_AS(numerical_rank({}), EmptyInputError);
    const VectorizedMatrix a = vectorize(ComplexMatrix::Identity(2, 2));
    const VectorizedMatrix b = vectorize(ComplexMatrix::Identity(3, 3));
    CHECK_THROWS_AS(numerical_rank({a, b}), ShapeMismatchError);
}

TEST_CASE("matrix_exp on nilpotent and diagonal examples") {
    const ComplexMatrix n = mat2(0.0, 1.0, 0.0, 0.0);
    const ComplexMatrix en = matrix_exp(n);
    CHECK((en - (ComplexMatrix::Identity(2, 2) + n)).cwiseAbs().maxCoeff() <= 1e-15);

    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -2.0;
    const ComplexMatrix ed = matrix_exp(d);
    CHECK(ed(0, 0).real() == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    CHECK(ed(1, 1).real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(std::abs(ed(0, 1)) == 0.0);
}

TEST_CASE("matrix_exp matches a truncated Taylor series") {
    std::mt19937_64 gen(21);
    for (int rep = 0; rep < 10; ++rep) {
        const ComplexMatrix m = 0.5 * random_matrix(4, 4, gen);
        const ComplexMatrix fast = matrix_exp(m);
        const ComplexMatrix slow = qfilt_tests::taylor_expm(m);
        CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + slow.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("matrix_exp satisfies the semigroup identity") {
    std::mt19937_64 gen(22);
    const ComplexMatrix m = random_matrix(4, 4, gen);
    const ComplexMatrix whole = matrix_exp(m);
    const ComplexMatrix halves = matrix_exp(0.5 * m) * matrix_exp(0.5 * m);
    CHECK((whole - halves).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + whole.cwiseAbs().maxCoeff()));
}

TEST_CASE("matrix_exp rejects rectangular, non-finite and overflowing input") {
    CHECK_THROWS_AS(matrix_exp(ComplexMatrix::Zero(2, 3)), NonSquareError);
    ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
    bad(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(matrix_exp(bad), OverflowError);
    ComplexMatrix huge = ComplexMatrix::Zero(2, 2);
    huge(0, 0) = 1e4;
    CHECK_THROWS_AS(matrix_exp(huge), OverflowError);
}
