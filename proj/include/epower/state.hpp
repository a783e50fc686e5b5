#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <vector>

#include "epower/errors.hpp"
#include "epower/shape.hpp"

namespace epower {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
constexpr double state_norm = 1e-12;
constexpr double gate_unitary = 1e-10;
constexpr double schmidt_rank_rel = 1e-8;
constexpr double entropy_eig_clamp = 1e-15;
constexpr double negativity_consistency = 1e-6;
} // namespace tol

/// A normalized pure state with its factor-dimension shape attached.
/// Construction checks the norm; use PureState::normalized to normalize
/// explicitly.
class PureState {
  public:
    PureState(Vector amplitudes, Shape shape)
        : amp_(std::move(amplitudes)), shape_(std::move(shape)) {
        if (amp_.size() != shape_.ambient_dim())
            throw InvalidShape("amplitude length " + std::to_string(amp_.size()) +
                               " does not match shape " + shape_.str());
        if (std::abs(amp_.norm() - 1.0) > tol::state_norm)
            throw InvalidShape("state is not normalized (norm deviates by " +
                               std::to_string(std::abs(amp_.norm() - 1.0)) + ")");
    }

    static PureState normalized(Vector amplitudes, Shape shape) {
        const double n = amplitudes.norm();
        if (n == 0.0) throw InvalidShape("cannot normalize the zero vector");
        return PureState(amplitudes / n, std::move(shape));
    }

    const Vector& amplitudes() const { return amp_; }
    const Shape& shape() const { return shape_; }

  private:
    Vector amp_;
    Shape shape_;
};

/// A unitary on the whole system, with shape metadata.
class Gate {
  public:
    Gate(Matrix matrix, Shape shape, double unitarity_tol = tol::gate_unitary)
        : mat_(std::move(matrix)), shape_(std::move(shape)) {
        const long long n = shape_.ambient_dim();
        if (mat_.rows() != n || mat_.cols() != n)
            throw InvalidShape("matrix size does not match shape " + shape_.str());
        const double resid =
            (mat_.adjoint() * mat_ - Matrix::Identity(n, n)).norm();
        if (resid > unitarity_tol)
            throw NotUnitary("unitarity residual " + std::to_string(resid));
    }

    const Matrix& matrix() const { return mat_; }
    const Shape& shape() const { return shape_; }

    PureState apply(const PureState& in) const {
        if (in.shape().ambient_dim() != shape_.ambient_dim())
            throw InvalidShape("state/gate dimension mismatch");
        return PureState::normalized(mat_ * in.amplitudes(), in.shape());
    }

  private:
    Matrix mat_;
    Shape shape_;
};

/// Index maps for one bipartition: flat ambient index -> (row, col) of the
/// matricized state.  Party 0 is slowest, so contiguous cuts reduce to a
/// reshape and everything else is an explicit permutation.
struct CutView {
    long long rows = 0, cols = 0;
    std::vector<long long> row_of, col_of;

    CutView(const Shape& shape, const Cut& cut) {
        const int n = shape.num_parties();
        const auto& g = cut.gamma();
        const auto c = cut.complement(shape);
        rows = cut.row_dim(shape);
        cols = cut.col_dim(shape);
        const long long total = shape.ambient_dim();
        row_of.resize(static_cast<size_t>(total));
        col_of.resize(static_cast<size_t>(total));

        std::vector<long long> stride(static_cast<size_t>(n), 1);
        for (int p = n - 2; p >= 0; --p)
            stride[static_cast<size_t>(p)] =
                stride[static_cast<size_t>(p + 1)] * shape.dim(p + 1);

        std::vector<int> idx(static_cast<size_t>(n), 0);
        for (long long flat = 0; flat < total; ++flat) {
            long long rest = flat;
            for (int p = 0; p < n; ++p) {
                idx[static_cast<size_t>(p)] = static_cast<int>(rest / stride[static_cast<size_t>(p)]);
                rest %= stride[static_cast<size_t>(p)];
            }
            long long r = 0;
            for (int p : g) r = r * shape.dim(p) + idx[static_cast<size_t>(p)];
            long long k = 0;
            for (int p : c) k = k * shape.dim(p) + idx[static_cast<size_t>(p)];
            row_of[static_cast<size_t>(flat)] = r;
            col_of[static_cast<size_t>(flat)] = k;
        }
    }

    Matrix gather(const Vector& amp) const {
        Matrix m(rows, cols);
        for (long long flat = 0; flat < amp.size(); ++flat)
            m(row_of[static_cast<size_t>(flat)], col_of[static_cast<size_t>(flat)]) = amp(flat);
        return m;
    }

    Vector scatter(const Matrix& m) const {
        Vector v(static_cast<long long>(row_of.size()));
        for (long long flat = 0; flat < v.size(); ++flat)
            v(flat) = m(row_of[static_cast<size_t>(flat)], col_of[static_cast<size_t>(flat)]);
        return v;
    }
};

/// State written as a (prod_Gamma d_i) x (prod_Gammac d_j) matrix.
inline Matrix matricize(const PureState& state, const Cut& cut) {
    return CutView(state.shape(), cut).gather(state.amplitudes());
}

/// Schmidt coefficients (nonincreasing) and the local orthonormal bases.
struct SchmidtData {
    RealVector coefficients;
    Matrix left_basis;
    Matrix right_basis;
};

inline SchmidtData schmidt(const PureState& state, const Cut& cut) {
    const Matrix m = matricize(state, cut);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return SchmidtData{svd.singularValues(), svd.matrixU(), svd.matrixV()};
}

namespace detail {

inline double entropy_from_probs(const RealVector& p) {
    double s = 0.0;
    for (long long i = 0; i < p.size(); ++i) {
        const double q = std::min(p(i), 1.0);
        if (q >= tol::entropy_eig_clamp) s -= q * std::log2(q);
    }
    return s < 0.0 ? 0.0 : s;
}

} // namespace detail

/// Von Neumann entropy of the reduced state across the cut, in bits.
inline double entropy_of_entanglement(const PureState& state, const Cut& cut) {
    const RealVector lam = schmidt(state, cut).coefficients;
    RealVector p = lam.array().square();
    return detail::entropy_from_probs(p);
}

/// Number of Schmidt coefficients above tol_rel * lambda_1.
inline int schmidt_rank(const PureState& state, const Cut& cut,
                        double tol_rel = tol::schmidt_rank_rel) {
    if (!(tol_rel > 0.0 && tol_rel < 1.0))
        throw DomainError("schmidt_rank: tol_rel must lie in (0,1)");
    const RealVector lam = schmidt(state, cut).coefficients;
    const double cutoff = tol_rel * lam(0);
    int r = 0;
    for (long long i = 0; i < lam.size(); ++i)
        if (lam(i) > cutoff) ++r;
    return r < 1 ? 1 : r;
}

/// Negativity, computed from the trace norm of the partial transpose and
/// cross-checked against the Schmidt form ((sum lambda)^2 - 1)/2.
inline double negativity(const PureState& state, const Cut& cut) {
    const CutView view(state.shape(), cut);
    const Matrix m = view.gather(state.amplitudes());
    const long long a = view.rows, b = view.cols;

    // rho^{T_B} as an (a*b) x (a*b) Hermitian matrix; rho = |psi><psi|.
    Matrix pt(a * b, a * b);
    for (long long i = 0; i < a; ++i)
        for (long long j = 0; j < b; ++j)
            for (long long k = 0; k < a; ++k)
                for (long long l = 0; l < b; ++l)
                    pt(i * b + j, k * b + l) = m(i, l) * std::conj(m(k, j));

    Eigen::SelfAdjointEigenSolver<Matrix> es(pt, Eigen::EigenvaluesOnly);
    const double trace_norm = es.eigenvalues().array().abs().sum();
    const double via_pt = 0.5 * (trace_norm - 1.0);

    const RealVector lam = schmidt(state, cut).coefficients;
    const double s = lam.sum();
    const double via_schmidt = 0.5 * (s * s - 1.0);

    if (std::abs(via_pt - via_schmidt) > tol::negativity_consistency)
        throw InternalInconsistency(
            "negativity routes disagree: partial transpose gives " + std::to_string(via_pt) +
            ", Schmidt form gives " + std::to_string(via_schmidt));
    return via_pt;
}

/// Sum of squared Schmidt coefficients past the k-th; zero exactly when the
/// Schmidt rank is at most k.
inline double tail_energy(const PureState& state, const Cut& cut, int k) {
    if (k < 1) throw InvalidRank("tail_energy: k must be >= 1");
    const RealVector lam = schmidt(state, cut).coefficients;
    double t = 0.0;
    for (long long i = k; i < lam.size(); ++i) t += lam(i) * lam(i);
    return t;
}

} // namespace epower
