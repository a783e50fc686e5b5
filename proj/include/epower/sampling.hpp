#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>

#include "epower/rng.hpp"
#include "epower/shape.hpp"
#include "epower/state.hpp"

namespace epower {

/// Haar-distributed n x n unitary: QR of a complex Ginibre matrix with the
/// R-diagonal phase normalization (Mezzadri's recipe).
inline Matrix haar_unitary(int n, Seed seed) {
    if (n < 1) throw InvalidDimension("haar_unitary: n must be >= 1");
    Rng rng(seed);
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.complex_gaussian();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a == 0.0 ? Complex(1, 0) : d / a);
    }
    return q;
}

inline Gate haar_gate(const Shape& shape, Seed seed) {
    return Gate(haar_unitary(static_cast<int>(shape.ambient_dim()), seed), shape);
}

/// Normalized complex Gaussian vector: the unitarily invariant measure on
/// pure states.
inline PureState haar_state(const Shape& shape, Seed seed) {
    Rng rng(seed);
    Vector v(shape.ambient_dim());
    for (long long i = 0; i < v.size(); ++i) v(i) = rng.complex_gaussian();
    return PureState::normalized(std::move(v), shape);
}

/// A k-dimensional subspace, stored as an isometry with orthonormal columns.
struct Subspace {
    Matrix isometry;
    Shape shape;

    Subspace(Matrix iso, Shape shp) : isometry(std::move(iso)), shape(std::move(shp)) {
        if (isometry.rows() != shape.ambient_dim())
            throw InvalidDimension("subspace ambient dimension mismatch");
        const long long k = isometry.cols();
        if (k < 1 || k > isometry.rows())
            throw InvalidDimension("subspace dimension out of range");
        const double resid =
            (isometry.adjoint() * isometry - Matrix::Identity(k, k)).norm();
        if (resid > 1e-10)
            throw InvalidDimension("subspace columns not orthonormal, residual " +
                                   std::to_string(resid));
    }

    long long dimension() const { return isometry.cols(); }
};

/// First k columns of a Haar unitary: a Haar-random k-dimensional subspace.
inline Subspace random_subspace(const Shape& shape, int k, Seed seed) {
    const long long n = shape.ambient_dim();
    if (k < 1 || k > n)
        throw InvalidDimension("random_subspace: k=" + std::to_string(k) +
                               " out of range for ambient dimension " + std::to_string(n));
    const Matrix u = haar_unitary(static_cast<int>(n), seed);
    return Subspace(u.leftCols(k), shape);
}

/// Both halves at once: span of the first k columns and its orthogonal
/// complement from the same Haar unitary.
inline std::pair<Subspace, Subspace> random_subspace_with_complement(const Shape& shape, int k,
                                                                     Seed seed) {
    const long long n = shape.ambient_dim();
    if (k < 1 || k >= n)
        throw InvalidDimension("random_subspace_with_complement: k out of range");
    const Matrix u = haar_unitary(static_cast<int>(n), seed);
    return {Subspace(u.leftCols(k), shape), Subspace(u.rightCols(n - k), shape)};
}

} // namespace epower
