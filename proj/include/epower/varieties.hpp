#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "epower/errors.hpp"

namespace epower {

/// Bipartite dimensions, stored with d_A <= d_B.
struct BipartiteDims {
    int a, b;
    BipartiteDims(int da, int db) : a(std::min(da, db)), b(std::max(da, db)) {
        if (a < 2) throw InvalidDimension("bipartite dimensions must be >= 2");
    }
};

namespace detail {

// Smallest integer r >= lo with 2r >= p - sqrt(q), i.e. ceil((p - sqrt(q))/2),
// decided purely by integer comparisons so near-integer square roots cannot
// misround.
inline int ceil_half_p_minus_sqrt(long long p, long long q, int lo = 1) {
    for (int r = lo;; ++r) {
        const long long m = p - 2ll * r;
        if (m <= 0 || m * m <= q) return r;
    }
}

} // namespace detail

/// Projective dimension of the determinantal variety of Schmidt rank <= r:
/// d_A d_B - (d_A - r)(d_B - r) - 1.
inline long long det_variety_dim(const BipartiteDims& d, int r) {
    if (r < 1 || r > d.a) throw InvalidRank("det_variety_dim: r out of range");
    return 1ll * d.a * d.b - 1ll * (d.a - r) * (d.b - r) - 1;
}

/// Oracle behind the generic minimum Schmidt rank: the intersection-dimension
/// step reduces to the smallest r with (d_A-r)(d_B-r) <= d_A+d_B-2.
inline int generic_min_sr_oracle(const BipartiteDims& d) {
    for (int r = 1;; ++r)
        if (1ll * (d.a - r) * (d.b - r) <= 1ll * d.a + d.b - 2) return r;
}

/// Generic minimum entangling power w.r.t. Schmidt rank:
/// r0 = ceil((d_A + d_B - sqrt((d_A-d_B)^2 + 4(d_A+d_B) - 8)) / 2).
/// A rank of 1 means the power vanishes (some product maps to a product).
inline int generic_min_sr(const BipartiteDims& d) {
    const long long p = d.a + d.b;
    const long long q = 1ll * (d.a - d.b) * (d.a - d.b) + 4ll * (d.a + d.b) - 8;
    return detail::ceil_half_p_minus_sqrt(p, q);
}

inline bool vanishing_min_sr(const BipartiteDims& d) { return generic_min_sr(d) <= 1; }

/// Oracle for s(r): smallest s with
/// (d_A-r)(d_B-r) + (d_A-s)(d_B-s) <= d_A d_B - 1.
inline int generic_min_sr_from_rank_oracle(const BipartiteDims& d, int r) {
    if (r < 1 || r > d.a) throw InvalidRank("generic_min_sr_from_rank: r out of range");
    const long long lhs0 = 1ll * (d.a - r) * (d.b - r);
    for (int s = 1;; ++s)
        if (lhs0 + 1ll * (d.a - s) * (d.b - s) <= 1ll * d.a * d.b - 1) return s;
}

/// Guaranteed output rank when inputs of Schmidt rank <= r are allowed:
/// s(r) = ceil((d_A + d_B - sqrt((d_A-d_B)^2 + 4r(d_A+d_B) - 4(r^2+1)))/2).
inline int generic_min_sr_from_rank(const BipartiteDims& d, int r) {
    if (r < 1 || r > d.a) throw InvalidRank("generic_min_sr_from_rank: r out of range");
    const long long p = d.a + d.b;
    const long long q = 1ll * (d.a - d.b) * (d.a - d.b) + 4ll * r * (d.a + d.b) -
                        4ll * (1ll * r * r + 1);
    return detail::ceil_half_p_minus_sqrt(p, q);
}

/// Dimension of the Segre variety of product states: sum (d_i - 1).
inline long long segre_dim(const std::vector<int>& dims) {
    if (dims.size() < 2) throw InvalidDimension("segre_dim: need N >= 2 parties");
    long long s = 0;
    for (int d : dims) {
        if (d < 2) throw InvalidDimension("segre_dim: dimensions must be >= 2");
        s += d - 1;
    }
    return s;
}

enum class DimFormula { Expected, AmbientCap, Determinantal };

struct DimReport {
    long long value = -1;
    bool defective = false;
    DimFormula formula_used = DimFormula::Expected;
};

namespace detail {

// Defective Segre secants (cases a-e).  Dims are examined sorted ascending;
// case e compares the largest factor against all the others.
inline bool secant_defective_shape(std::vector<int> dims) {
    std::sort(dims.begin(), dims.end());
    const size_t n = dims.size();
    if (n < 3) return false;
    if (n == 3 && dims[0] == 3 && dims[1] == 3 && dims[2] == 3) return true;          // a
    if (n == 4 && dims[0] == 2 && dims[1] == 2 && dims[2] == dims[3]) return true;    // b
    if (n == 3 && dims[0] == 3 && dims[1] == dims[2] && dims[1] % 2 == 1) return true; // c
    if (n == 3 && dims[0] == 3 && dims[1] == 4 && dims[2] == 4) return true;          // d
    long long prod = 1, sum = 0;                                                      // e
    for (size_t i = 0; i + 1 < n; ++i) {
        prod *= dims[i];
        sum += dims[i] - 1;
    }
    return prod + 1 - sum < dims[n - 1];
}

} // namespace detail

/// Expected dimension of the r-th secant of the Segre variety:
/// min(prod d_i - 1, r(sum(d_i-1)+1) + sum(d_i-1)), with the defective cases
/// flagged.  For N = 2 secants are determinantal and the true dimension is
/// returned instead.
inline DimReport secant_expected_dim(const std::vector<int>& dims, int r) {
    if (r < 0) throw InvalidRank("secant_expected_dim: r must be >= 0");
    const long long s = segre_dim(dims);
    long long prod = 1;
    for (int d : dims) prod *= d;

    if (dims.size() == 2) {
        BipartiteDims d(dims[0], dims[1]);
        const int rank = std::min(r + 1, d.a);
        return DimReport{det_variety_dim(d, rank), false, DimFormula::Determinantal};
    }

    const long long expected = 1ll * r * (s + 1) + s;
    DimReport rep;
    rep.defective = detail::secant_defective_shape(dims);
    if (expected >= prod - 1) {
        rep.value = prod - 1;
        rep.formula_used = DimFormula::AmbientCap;
    } else {
        rep.value = expected;
        rep.formula_used = DimFormula::Expected;
    }
    return rep;
}

struct BorderRankPower {
    bool defective = false;
    int value = 0; // meaningful only when !defective
};

/// Oracle: largest r with expected secant dimension strictly below
/// prod d_i - 1 - sum(d_i - 1), then r + 2.
inline int generic_border_rank_power_oracle(const std::vector<int>& dims) {
    const long long s = segre_dim(dims);
    long long prod = 1;
    for (int d : dims) prod *= d;
    const long long target = prod - 1 - s;
    int best = -1;
    for (int r = 0;; ++r) {
        const long long expected = std::min(prod - 1, 1ll * r * (s + 1) + s);
        if (expected < target)
            best = r;
        else
            break;
    }
    return best + 2;
}

/// Generic minimum entangling power w.r.t. border rank:
/// ceil((prod d_i - sum d_i + N) / (sum d_i - N + 1)) outside the defective
/// cases.
inline BorderRankPower generic_border_rank_power(const std::vector<int>& dims) {
    if (dims.size() < 3) throw InvalidDimension("generic_border_rank_power: need N >= 3");
    for (int d : dims)
        if (d < 2) throw InvalidDimension("dimensions must be >= 2");
    if (detail::secant_defective_shape(dims)) return BorderRankPower{true, 0};

    long long prod = 1, sum = 0;
    for (int d : dims) {
        prod *= d;
        sum += d;
    }
    const long long n = static_cast<long long>(dims.size());
    const long long num = prod - sum + n;
    const long long den = sum - n + 1;
    const long long value = (num + den - 1) / den; // ceil, num >= 0 here
    return BorderRankPower{false, static_cast<int>(value)};
}

struct WalgateCount {
    enum class Kind { Zero, Finite, Infinite } kind = Kind::Zero;
    long long value = 0;      // set when kind == Finite
    bool suspect_typo = false; // the printed product formula disagrees with
                               // the pencil oracle already at (2,2,r=1,s=2)
};

/// Number of Schmidt-rank <= r states in a generic s-dimensional subspace,
/// as printed: 0 for s <= (d_A-r)(d_B-r), the product formula at
/// s = (d_A-r)(d_B-r)+1 (flagged, see WalgateCount::suspect_typo), infinite
/// beyond.
inline WalgateCount walgate_count(const BipartiteDims& d, int r, int s) {
    if (r < 1 || r >= d.a) throw InvalidRank("walgate_count: need 1 <= r < d_A");
    if (s < 1) throw InvalidDimension("walgate_count: need s >= 1");
    const long long s_max = 1ll * (d.a - r) * (d.b - r);
    WalgateCount out;
    if (s <= s_max) {
        out.kind = WalgateCount::Kind::Zero;
        return out;
    }
    if (s > s_max + 1) {
        out.kind = WalgateCount::Kind::Infinite;
        return out;
    }
    using boost::multiprecision::cpp_int;
    auto fact = [](int n) {
        cpp_int f = 1;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    cpp_int num = 1, den = 1;
    for (int j = 0; j <= d.a - r - 1; ++j) {
        num *= fact(d.b + r) * fact(r);
        den *= fact(r + j) * fact(d.b - r + j);
    }
    const cpp_int q = num / den;
    if (num != q * den)
        throw InternalInconsistency("walgate_count: printed formula is not an integer here");
    out.kind = WalgateCount::Kind::Finite;
    out.value = static_cast<long long>(q);
    out.suspect_typo = true;
    return out;
}

/// Dimension bound for the closure of the bad gate set,
/// d_A^2 d_B^2 - (d_A-r)(d_B-r) + 2r - 3; exposed as a formula evaluator.
inline long long bad_gate_closure_dim_bound(const BipartiteDims& d, int r) {
    if (r < 1 || r > d.a) throw InvalidRank("bad_gate_closure_dim_bound: r out of range");
    return 1ll * d.a * d.a * d.b * d.b - 1ll * (d.a - r) * (d.b - r) + 2ll * r - 3;
}

} // namespace epower
