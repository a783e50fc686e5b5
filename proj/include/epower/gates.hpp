#pragma once

#include <array>
#include <string>
#include <vector>

#include "epower/minimize.hpp"
#include "epower/sampling.hpp"
#include "epower/state.hpp"
#include "epower/varieties.hpp"

namespace epower {

namespace detail {
// Sign pattern of the order-12 Hadamard gate on 3 (x) 4, row by row.
inline const std::array<const char*, 12>& hadamard12_signs() {
    static const std::array<const char*, 12> rows = {
        "+-----------",
        "++-+---+++-+",
        "+++-+---+++-",
        "+-++-+---+++",
        "++-++-+---++",
        "+++-++-+---+",
        "++++-++-+---",
        "+-+++-++-+--",
        "+--+++-++-+-",
        "+---+++-++-+",
        "++---+++-++-",
        "+-+---+++-++",
    };
    return rows;
}
} // namespace detail

/// The order-12 Hadamard gate on 3 (x) 4, scaled by 1/sqrt(12).  The smallest
/// dimension where gates with positive minimum Schmidt-rank entangling power
/// exist; this one attains the maximum value 2.
inline Gate hadamard12() {
    const auto& rows = detail::hadamard12_signs();
    Matrix m(12, 12);
    const double s = 1.0 / std::sqrt(12.0);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) m(i, j) = rows[static_cast<size_t>(i)][j] == '+' ? s : -s;
    return Gate(std::move(m), Shape{3, 4}, 1e-12);
}

/// Existence condition for Householder-type gates with minimum entangling
/// power at least r:  d_A d_B - (d_A-r)(d_B-r) <= (d_A-1)(d_B-1).
inline bool householder_exists(const BipartiteDims& d, int r) {
    if (r < 1 || r > d.a) throw InvalidRank("householder_exists: r out of range");
    return 1ll * d.a * d.b - 1ll * (d.a - r) * (d.b - r) <= 1ll * (d.a - 1) * (d.b - 1);
}

struct HouseholderReport {
    Gate gate;
    Subspace subspace; // H_P, the -1 eigenspace
    int seeds_tried = 0;
    double margin_high_rank = 0.0; // min tail_energy(r) over H_P
    double margin_no_product = 0.0; // min tail_energy(1) over the complement
};

/// Builds U = I - 2P for a random subspace H_P of dimension
/// d_A d_B - (d_A-1)(d_B-1), retrying seeds until numerical verification
/// shows H_P void of Schmidt rank <= r states and its complement void of
/// product states.
inline HouseholderReport build_householder(const BipartiteDims& d, int r, Seed seed,
                                           int verify_restarts = 64, int max_seeds = 16,
                                           double margin = 1e-6, int threads = 0) {
    if (r < 2)
        throw InvalidRank("build_householder: r must be >= 2 (at r = 1 the reflection "
                          "conclusion is vacuous)");
    if (!householder_exists(d, r))
        throw DomainError("no Householder gate of power " + std::to_string(r) + " on " +
                          std::to_string(d.a) + "x" + std::to_string(d.b));
    const Shape shape{d.a, d.b};
    const Cut cut(shape, {0});
    const int k = static_cast<int>(1ll * d.a * d.b - 1ll * (d.a - 1) * (d.b - 1));

    double best_hp = -1.0, best_perp = -1.0;
    for (int attempt = 0; attempt < max_seeds; ++attempt) {
        auto [hp, perp] =
            random_subspace_with_complement(shape, k, derive_seed(seed, attempt));
        const double m_hp =
            min_over_subspace(hp, cut, r, verify_restarts, derive_seed(seed, 1000 + attempt),
                              threads)
                .value;
        const double m_perp =
            min_over_subspace(perp, cut, 1, verify_restarts, derive_seed(seed, 2000 + attempt),
                              threads)
                .value;
        best_hp = std::max(best_hp, m_hp);
        best_perp = std::max(best_perp, m_perp);
        if (m_hp > margin && m_perp > margin) {
            const long long n = shape.ambient_dim();
            Matrix u = Matrix::Identity(n, n);
            u.noalias() -= 2.0 * hp.isometry * hp.isometry.adjoint();
            HouseholderReport rep{Gate(std::move(u), shape), std::move(hp), attempt + 1, m_hp,
                                  m_perp};
            return rep;
        }
    }
    throw ConstructionFailed("householder construction failed after " +
                             std::to_string(max_seeds) + " seeds; best margins " +
                             std::to_string(best_hp) + " / " + std::to_string(best_perp));
}

/// I_{A'} (x) U (x) I_{B'} on (A', A, B, B'); unit ancilla dimensions are
/// dropped, so (1,1) returns the original gate.
inline Gate extend_with_ancilla(const Gate& gate, int d_a_prime, int d_b_prime) {
    if (gate.shape().num_parties() != 2)
        throw InvalidShape("extend_with_ancilla needs a bipartite gate");
    if (d_a_prime < 1 || d_b_prime < 1)
        throw InvalidDimension("ancilla dimensions must be >= 1");
    if (d_a_prime == 1 && d_b_prime == 1) return gate;

    const int da = gate.shape().dim(0), db = gate.shape().dim(1);
    std::vector<int> dims;
    if (d_a_prime > 1) dims.push_back(d_a_prime);
    dims.push_back(da);
    dims.push_back(db);
    if (d_b_prime > 1) dims.push_back(d_b_prime);
    Shape shape(dims);

    const long long n = shape.ambient_dim();
    Matrix big = Matrix::Zero(n, n);
    const long long inner = 1ll * da * db;
    // index layout: a' slowest, then (a,b), then b'
    for (long long ap = 0; ap < d_a_prime; ++ap)
        for (long long bp = 0; bp < d_b_prime; ++bp)
            for (long long i = 0; i < inner; ++i)
                for (long long j = 0; j < inner; ++j) {
                    const long long row = (ap * inner + i) * d_b_prime + bp;
                    const long long col = (ap * inner + j) * d_b_prime + bp;
                    big(row, col) = gate.matrix()(i, j);
                }
    return Gate(std::move(big), shape);
}

struct SliceResult {
    PureState state; // normalized slice on A (x) B
    double norm;     // norm of the unnormalized contraction
};

/// Contraction <i' j'| psi on a state over (A', A, B, B'): the ancilla slice
/// identity behind the rank monotonicity under local extension.
inline SliceResult ancilla_slice(const PureState& state, int i_prime, int j_prime) {
    const Shape& s = state.shape();
    if (s.num_parties() != 4)
        throw InvalidShape("ancilla_slice expects a 4-party (A',A,B,B') state");
    const int dap = s.dim(0), da = s.dim(1), db = s.dim(2), dbp = s.dim(3);
    if (i_prime < 0 || i_prime >= dap || j_prime < 0 || j_prime >= dbp)
        throw InvalidDimension("ancilla slice index out of range");
    Vector v(1ll * da * db);
    for (long long a = 0; a < da; ++a)
        for (long long b = 0; b < db; ++b) {
            const long long flat = ((i_prime * da + a) * db + b) * dbp + j_prime;
            v(a * db + b) = state.amplitudes()(flat);
        }
    const double n = v.norm();
    if (n < 1e-14) throw ZeroSlice("slice amplitude vanishes at (" + std::to_string(i_prime) +
                                   "," + std::to_string(j_prime) + ")");
    return SliceResult{PureState(v / n, Shape{da, db}), n};
}

} // namespace epower
