#pragma once

#include <cmath>
#include <limits>

#include "epower/errors.hpp"

namespace epower {

/// A positive quantity carried as its natural logarithm, for expressions like
/// net sizes that overflow doubles at modest dimensions.
struct LogValue {
    double ln = 0.0;
    double value() const { return std::exp(ln); }
    bool overflows() const { return ln > 709.0; }
};

namespace bc {
constexpr double pi = 3.14159265358979323846264338327950288;
constexpr double ln2 = 0.69314718055994530941723212145817657;
// Levy's Lemma absolute constants.
constexpr double levy_c1 = 1.0 / (9.0 * pi * pi * pi * ln2);
constexpr double levy_c2 = 1.0 / (2.0 * pi * pi * ln2);
} // namespace bc

inline double log2d(double x) { return std::log2(x); }

namespace detail {
inline void require_bipartite_bound(int d_a, int d_b) {
    if (!(d_b >= d_a && d_a >= 3))
        throw DomainError("bound requires d_B >= d_A >= 3");
}
} // namespace detail

/// Entropy concentration tail for a random state:
/// exp(-(d_A d_B - 1) alpha^2 / (8 pi^2 ln2 (log2 d_A)^2)).
inline double hayden_entropy_tail(int d_a, int d_b, double alpha) {
    detail::require_bipartite_bound(d_a, d_b);
    if (!(alpha > 0)) throw DomainError("alpha must be positive");
    const double l = log2d(d_a);
    const double expo =
        -(static_cast<double>(d_a) * d_b - 1.0) * alpha * alpha /
        (8.0 * bc::pi * bc::pi * bc::ln2 * l * l);
    return std::exp(expo);
}

/// Product-state net size bound (10/eps)^(2(d_A+d_B)).
inline LogValue net_size_product(int d_a, int d_b, double eps) {
    if (!(eps > 0 && eps < 1)) throw DomainError("eps must lie in (0,1)");
    if (d_a < 2 || d_b < 2) throw DomainError("dimensions must be >= 2");
    return LogValue{2.0 * (d_a + d_b) * std::log(10.0 / eps)};
}

/// Single-system net size bound (5/eps)^(2d).
inline LogValue net_size_single(int d, double eps) {
    if (!(eps > 0 && eps < 1)) throw DomainError("eps must lie in (0,1)");
    if (d < 2) throw DomainError("dimension must be >= 2");
    return LogValue{2.0 * d * std::log(5.0 / eps)};
}

/// Gate-level tail from the net argument:
/// (20 sqrt2 log2 d_A / alpha)^(2(d_A+d_B)) *
/// exp(-(d_A d_B - 1) alpha^2 / (32 pi^2 ln2 (log2 d_A)^2)).
inline LogValue pmin_entropy_tail(int d_a, int d_b, double alpha) {
    detail::require_bipartite_bound(d_a, d_b);
    if (!(alpha > 0)) throw DomainError("alpha must be positive");
    const double l = log2d(d_a);
    const double ln_net = 2.0 * (d_a + d_b) * std::log(20.0 * std::sqrt(2.0) * l / alpha);
    const double expo =
        -(static_cast<double>(d_a) * d_b - 1.0) * alpha * alpha /
        (32.0 * bc::pi * bc::pi * bc::ln2 * l * l);
    return LogValue{ln_net + expo};
}

/// Largest entropy target still allowed by the tail statement at d_A = d_B = d.
inline double pmin_tail_alpha_sup(int d) { return log2d(d) - 1.0 / bc::ln2; }

/// Smallest d_A (= d_B) admitting a nontrivial alpha: one with
/// log2 d_A - d_A/(d_B ln2) - alpha > 0 and pmin_entropy_tail < 1.
///
/// The tail is strictly decreasing in alpha, so feasibility on the interval is
/// decided arbitrarily close to the supremum; the alpha grid is therefore
/// graded toward it (a uniform grid of the same size stops 1e-4 short of the
/// endpoint and misreports the threshold by one).
inline int min_dim_for_nontrivial_alpha(int grid_points = 10000, int d_max = 100000) {
    for (int d = 3; d <= d_max; ++d) {
        const double upper = pmin_tail_alpha_sup(d);
        if (upper <= 0) continue;
        bool feasible = false;
        for (int i = grid_points; i >= 1; --i) {
            const double alpha =
                upper * (1.0 - std::exp2(-52.0 * static_cast<double>(i) / grid_points));
            if (!(alpha > 0) || !(alpha < upper)) continue;
            if (pmin_entropy_tail(d, d, alpha).ln < 0.0) {
                feasible = true;
                break;
            }
            break; // decreasing in alpha: the top grid point decides
        }
        if (feasible) return d;
    }
    return -1;
}

/// Concentration over SU(n) for an |f|_L-Lipschitz function:
/// 2 exp(-n delta^2 / (8 |f|_L^2)).
inline double su_concentration_tail(long long n, double delta, double lipschitz) {
    if (n < 2) throw DomainError("su_concentration_tail: n must be >= 2");
    if (!(delta > 0)) throw DomainError("delta must be positive");
    if (!(lipschitz > 0)) throw DomainError("lipschitz constant must be positive");
    return 2.0 * std::exp(-static_cast<double>(n) * delta * delta /
                          (8.0 * lipschitz * lipschitz));
}

// Lipschitz constants used to instantiate the concentration statements.
inline double entropy_state_lipschitz(int d_a) { return std::sqrt(8.0) * log2d(d_a); }
inline double pmin_entropy_gate_lipschitz(int d_a) { return std::sqrt(8.0) * log2d(d_a); }
inline double negativity_lipschitz() { return 1.0; }
inline double complete_pmin_entropy_lipschitz(int d_a, int d_b) {
    return 4.0 * std::sqrt(2.0 * d_a * d_b) * log2d(d_a);
}

struct MeanLowerBound {
    double value = 0.0;
    bool vacuous = false; // the unclamped expression was negative
};

/// Mean minimum entangling power lower bound log2 d_A - d_A/(d_B ln2) - 1,
/// clamped at zero.
inline MeanLowerBound mean_pmin_lower_bound(int d_a, int d_b) {
    detail::require_bipartite_bound(d_a, d_b);
    const double raw = log2d(d_a) - static_cast<double>(d_a) / (d_b * bc::ln2) - 1.0;
    if (raw < 0.0) return MeanLowerBound{0.0, true};
    return MeanLowerBound{raw, false};
}

/// Levy tail on the sphere S^k: mean form 2 exp(-C1 (k+1) a^2 / L^2) or
/// median form exp(-C2 (k-1) a^2 / L^2).
inline double levy_tail(long long k, double alpha, double lipschitz, bool use_median) {
    if (k < 2) throw DomainError("levy_tail: k must be >= 2");
    if (!(alpha > 0)) throw DomainError("alpha must be positive");
    if (!(lipschitz > 0)) throw DomainError("lipschitz constant must be positive");
    const double l2 = lipschitz * lipschitz;
    if (use_median)
        return std::exp(-bc::levy_c2 * static_cast<double>(k - 1) * alpha * alpha / l2);
    return 2.0 * std::exp(-bc::levy_c1 * static_cast<double>(k + 1) * alpha * alpha / l2);
}

struct OptimalEpsilon {
    double epsilon = 0.0;
    bool exists = false;
};

/// Informational: the eps minimizing the net-argument bound solves
/// eps^2 ln(10/eps) = 8 pi^2 ln2 (d_A+d_B)/(d_A d_B - 1).  The left side is
/// increasing on (0,1) with range (0, ln 10), so small systems have no
/// interior solution.
inline OptimalEpsilon optimal_net_epsilon(int d_a, int d_b) {
    detail::require_bipartite_bound(d_a, d_b);
    const double target = 8.0 * bc::pi * bc::pi * bc::ln2 * (d_a + d_b) /
                          (static_cast<double>(d_a) * d_b - 1.0);
    auto g = [](double e) { return e * e * std::log(10.0 / e); };
    if (target >= g(1.0)) return OptimalEpsilon{1.0, false};
    double lo = 1e-300, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < target ? lo : hi) = mid;
    }
    return OptimalEpsilon{0.5 * (lo + hi), true};
}

} // namespace epower
