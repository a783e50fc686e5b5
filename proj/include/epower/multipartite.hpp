#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <vector>

#include "epower/minimize.hpp"
#include "epower/state.hpp"
#include "epower/varieties.hpp"

namespace epower {

struct CutEstimate {
    Cut cut;
    EstimateReport report;
};

struct MultipartiteReport {
    std::vector<CutEstimate> per_cut;
    double overall = 0.0;
};

/// Per-cut minimum entangling power over fully product inputs; the overall
/// value is the exact minimum of the per-cut reports.
inline MultipartiteReport multipartite_pmin(const Gate& gate, ObjectiveKind kind, int k,
                                            int restarts, Seed seed, int threads = 0,
                                            const detail::OptimOptions& opt = {}) {
    if (gate.shape().num_parties() < 3)
        throw InvalidShape("multipartite_pmin needs at least 3 parties");
    MultipartiteReport out;
    const auto cuts = enumerate_cuts(gate.shape());
    out.per_cut.reserve(cuts.size());
    for (size_t c = 0; c < cuts.size(); ++c) {
        Objective obj{kind, k, cuts[c]};
        auto rep = detail::multistart_product(gate, obj, restarts,
                                              derive_seed(seed, static_cast<std::uint64_t>(c)),
                                              false, threads, opt);
        out.per_cut.push_back(CutEstimate{cuts[c], std::move(rep)});
    }
    out.overall = out.per_cut.front().report.value;
    for (const auto& ce : out.per_cut) out.overall = std::min(out.overall, ce.report.value);
    return out;
}

/// Generic multipartite minimum Schmidt rank: the bipartite value at the
/// smallest cut, r0(d_1, prod_{i>=2} d_i) for ascending dims.
inline int generic_multipartite_sr(std::vector<int> dims) {
    if (dims.size() < 3) throw InvalidDimension("generic_multipartite_sr: need N >= 3");
    std::sort(dims.begin(), dims.end());
    long long rest = 1;
    for (size_t i = 1; i < dims.size(); ++i) rest *= dims[i];
    if (rest > (1 << 30)) throw InvalidDimension("dimension product too large");
    return generic_min_sr(BipartiteDims(dims[0], static_cast<int>(rest)));
}

struct GenuineEntanglement {
    bool value = false;
    std::vector<std::pair<Cut, double>> margins; // second Schmidt coefficient per cut
};

/// True iff the state is entangled across every bipartite cut: each cut's
/// second Schmidt coefficient exceeds tol.
inline GenuineEntanglement genuinely_entangled(const PureState& state, double tol = 1e-8) {
    if (state.shape().num_parties() < 3)
        throw InvalidShape("genuinely_entangled needs at least 3 parties");
    GenuineEntanglement out;
    out.value = true;
    for (const Cut& cut : enumerate_cuts(state.shape())) {
        const RealVector lam = schmidt(state, cut).coefficients;
        const double second = lam.size() > 1 ? lam(1) : 0.0;
        out.margins.emplace_back(cut, second);
        if (second <= tol) out.value = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// CP decomposition by alternating least squares, and border-rank estimation.

struct CPModel {
    int rank = 0;
    std::vector<Matrix> factors; // one d_i x r matrix per party
    double residual = 0.0;       // \| state - sum_q (x)_i factors[i].col(q) \|_2
    double max_col_norm = 0.0;
    bool regularized = false; // some update needed a ridge
    int sweeps = 0;
};

namespace detail {

inline Vector cp_model_vector(const Shape& shape, const std::vector<std::vector<int>>& tab,
                              const std::vector<Matrix>& factors) {
    const long long total = shape.ambient_dim();
    const int rank = static_cast<int>(factors[0].cols());
    Vector v = Vector::Zero(total);
    for (long long f = 0; f < total; ++f) {
        Complex acc(0, 0);
        for (int q = 0; q < rank; ++q) {
            Complex prod(1, 0);
            for (size_t p = 0; p < factors.size(); ++p)
                prod *= factors[p](tab[p][static_cast<size_t>(f)], q);
            acc += prod;
        }
        v(f) = acc;
    }
    return v;
}

// One least-squares update of factor `mode`, holding the others fixed:
// A = X_(mode) conj(Z) (Z^T conj(Z))^{-1} with Z the Khatri-Rao product of
// the other factors.
inline bool cp_update_mode(const Shape& shape, const std::vector<std::vector<int>>& tab,
                           const Vector& target, std::vector<Matrix>& factors, int mode) {
    const int n = shape.num_parties();
    const int rank = static_cast<int>(factors[0].cols());
    const int dm = shape.dim(mode);
    const long long total = shape.ambient_dim();

    // Gram of conj(Z): Hadamard product of conj(A_p^dag A_p) over p != mode.
    Matrix gram = Matrix::Ones(rank, rank);
    for (int p = 0; p < n; ++p)
        if (p != mode)
            gram = gram.cwiseProduct(
                (factors[static_cast<size_t>(p)].adjoint() * factors[static_cast<size_t>(p)])
                    .conjugate());

    // RHS: X_(mode) conj(Z), accumulated without materializing Z.
    Matrix rhs = Matrix::Zero(dm, rank);
    for (long long f = 0; f < total; ++f) {
        const Complex x = target(f);
        if (x == Complex(0, 0)) continue;
        const int row = tab[static_cast<size_t>(mode)][static_cast<size_t>(f)];
        for (int q = 0; q < rank; ++q) {
            Complex prod(1, 0);
            for (int p = 0; p < n; ++p)
                if (p != mode)
                    prod *= std::conj(
                        factors[static_cast<size_t>(p)](tab[static_cast<size_t>(p)][static_cast<size_t>(f)], q));
            rhs(row, q) += x * prod;
        }
    }

    Eigen::LDLT<Matrix> ldlt(gram);
    bool regularized = false;
    if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-14) {
        const double ridge = 1e-10 * std::max(1.0, std::abs(gram.trace()) / rank);
        ldlt.compute(gram + ridge * Matrix::Identity(rank, rank));
        regularized = true;
    }
    factors[static_cast<size_t>(mode)] = ldlt.solve(rhs.transpose()).transpose();
    return regularized;
}

} // namespace detail

/// Best rank-r CP fit of the state by alternating least squares over
/// `restarts` random initializations.  Factors are kept unnormalized so a
/// border-rank-deficient target shows up as diverging column norms.
inline CPModel cp_fit(const PureState& state, int r, int restarts, int iterations, Seed seed,
                      double improve_tol = 1e-12) {
    if (r < 1) throw InvalidRank("cp_fit: rank must be >= 1");
    if (restarts < 1 || iterations < 1)
        throw DomainError("cp_fit: restarts and iterations must be >= 1");
    const Shape& shape = state.shape();
    const int n = shape.num_parties();
    const auto tab = detail::index_table(shape);
    const Vector& target = state.amplitudes();

    CPModel best;
    best.residual = std::numeric_limits<double>::infinity();
    for (int run = 0; run < restarts; ++run) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(run)));
        std::vector<Matrix> factors(static_cast<size_t>(n));
        for (int p = 0; p < n; ++p) {
            Matrix f(shape.dim(p), r);
            for (int i = 0; i < shape.dim(p); ++i)
                for (int q = 0; q < r; ++q) f(i, q) = rng.complex_gaussian() / std::sqrt(2.0);
            factors[static_cast<size_t>(p)] = std::move(f);
        }
        bool regularized = false;
        double prev = std::numeric_limits<double>::infinity();
        int sweeps = 0;
        for (int it = 0; it < iterations; ++it) {
            ++sweeps;
            for (int mode = 0; mode < n; ++mode)
                regularized |= detail::cp_update_mode(shape, tab, target, factors, mode);
            const double res =
                (target - detail::cp_model_vector(shape, tab, factors)).norm();
            if (prev - res < improve_tol && it > 0) {
                prev = res;
                break;
            }
            prev = res;
        }
        const double res = (target - detail::cp_model_vector(shape, tab, factors)).norm();
        if (res < best.residual) {
            best.rank = r;
            best.factors = std::move(factors);
            best.residual = res;
            best.regularized = regularized;
            best.sweeps = sweeps;
        }
    }
    best.max_col_norm = 0.0;
    for (const auto& f : best.factors)
        for (int q = 0; q < r; ++q)
            best.max_col_norm = std::max(best.max_col_norm, f.col(q).norm());
    return best;
}

struct BorderRankEstimate {
    int rank = 0; // smallest r with residual < tol, r_max + 1 if none
    std::vector<double> residuals; // residual at r = 1..r_max
};

/// Residual-vs-rank curve of CP fits; the border-rank estimate is the first
/// rank fitting below tol.
inline BorderRankEstimate estimate_border_rank(const PureState& state, int r_max, double tol,
                                               Seed seed, int restarts = 8,
                                               int iterations = 2000) {
    if (r_max < 1) throw InvalidRank("estimate_border_rank: r_max must be >= 1");
    BorderRankEstimate out;
    out.rank = r_max + 1;
    for (int r = 1; r <= r_max; ++r) {
        const CPModel m = cp_fit(state, r, restarts, iterations,
                                 derive_seed(seed, static_cast<std::uint64_t>(r)));
        out.residuals.push_back(m.residual);
        if (out.rank == r_max + 1 && m.residual < tol) out.rank = r;
    }
    return out;
}

} // namespace epower
