#include "qfilt/observability.hpp"

#include <string>

namespace qfilt {

ObservableSpace observable_space(const QsdeModel& m, double tol_rel) {
    const Eigen::Index p = m.p;
    const Superoperator gen = generator(m);
    const Superoperator meas = measurement_superop(m);

    std::vector<VectorizedMatrix> span;
    span.push_back(vectorize(ComplexMatrix::Identity(p, p)));
    RankBasis current = numerical_rank(span, tol_rel);

    ObservableSpace space;
    space.dim_p = p;

    for (int iter = 1; iter <= static_cast<int>(p * p) + 1; ++iter) {
        std::vector<VectorizedMatrix> candidates = current.basis;
        for (const VectorizedMatrix& b : current.basis) {
            candidates.push_back(VectorizedMatrix{p, gen.matrix * b.coords});
            candidates.push_back(VectorizedMatrix{p, meas.matrix * b.coords});
        }
        RankBasis next = numerical_rank(candidates, tol_rel);
        space.iterations_used = iter;
        space.borderline = space.borderline ||
                           next.smallest_kept_ratio < 10.0 ||
                           next.largest_discarded_ratio > 0.1;
        if (next.rank == current.rank) {
            current = std::move(next);
            break;
        }
        current = std::move(next);
    }

    space.dimension = current.rank;
    space.basis.reserve(current.basis.size());
    for (const VectorizedMatrix& b : current.basis) {
        space.basis.push_back(devectorize(b));
    }
    return space;
}

bool is_observable(const QsdeModel& m, double tol_rel) {
    const ObservableSpace space = observable_space(m, tol_rel);
    return space.dimension == static_cast<int>(m.p * m.p);
}

ObservableProjection project_observable(const ObservableSpace& space,
                                        const ComplexMatrix& x) {
    if (x.rows() != space.dim_p || x.cols() != space.dim_p) {
        throw ShapeMismatchError("project_observable: operand is " +
                                 std::to_string(x.rows()) + "x" +
                                 std::to_string(x.cols()) + ", expected " +
                                 std::to_string(space.dim_p) + "x" +
                                 std::to_string(space.dim_p));
    }
    ComplexMatrix projection = ComplexMatrix::Zero(space.dim_p, space.dim_p);
    for (const ComplexMatrix& b : space.basis) {
        projection += hs_inner(b, x) * b;
    }
    const double residual = hs_norm(x - projection);
    return ObservableProjection{std::move(projection), residual};
}

} // namespace qfilt
