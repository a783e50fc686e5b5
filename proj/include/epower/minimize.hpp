#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "epower/bounds.hpp"
#include "epower/parallel.hpp"
#include "epower/rng.hpp"
#include "epower/sampling.hpp"
#include "epower/state.hpp"

namespace epower {

enum class ObjectiveKind { Entropy, TailEnergy, Negativity };

/// What to minimize (or maximize) on the gate output, across which cut.
struct Objective {
    ObjectiveKind kind = ObjectiveKind::Entropy;
    int k = 1; // tail index, used by TailEnergy
    std::optional<Cut> cut;

    static Objective entropy(std::optional<Cut> c = std::nullopt) {
        return Objective{ObjectiveKind::Entropy, 1, std::move(c)};
    }
    static Objective tail(int k, std::optional<Cut> c = std::nullopt) {
        if (k < 1) throw InvalidRank("tail objective needs k >= 1");
        return Objective{ObjectiveKind::TailEnergy, k, std::move(c)};
    }
    static Objective negativity(std::optional<Cut> c = std::nullopt) {
        return Objective{ObjectiveKind::Negativity, 1, std::move(c)};
    }
};

struct EstimateReport {
    double value = 0.0;
    std::vector<Vector> witness; // one unit vector per party (or one subspace coefficient vector)
    int restarts = 0;
    double converged_fraction = 0.0;
    long long iterations_total = 0;
    double std_error = 0.0; // populated by estimate_pavg only
};

namespace detail {

// Value and the complex gradient g of the objective at an output state psi,
// in the convention  df = 2 Re<g, dpsi>.
struct ObjectiveEval {
    double value = 0.0;
    Vector grad;
};

class ObjectiveEngine {
  public:
    ObjectiveEngine(const Shape& shape, const Objective& obj)
        : kind_(obj.kind), k_(obj.k),
          view_(shape, obj.cut ? *obj.cut : Cut(shape, {0})) {
        if (kind_ == ObjectiveKind::TailEnergy && k_ < 1)
            throw InvalidRank("tail objective needs k >= 1");
    }

    const CutView& view() const { return view_; }

    double value(const Vector& psi) const { return evaluate(psi, false).value; }

    ObjectiveEval evaluate(const Vector& psi, bool want_grad) const {
        const Matrix m = view_.gather(psi);
        Eigen::JacobiSVD<Matrix> svd(
            m, want_grad ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0);
        const RealVector sv = svd.singularValues();

        ObjectiveEval out;
        switch (kind_) {
            case ObjectiveKind::TailEnergy: {
                double t = 0.0;
                for (long long i = k_; i < sv.size(); ++i) t += sv(i) * sv(i);
                out.value = t;
                if (want_grad) {
                    const long long kk = std::min<long long>(k_, sv.size());
                    Matrix g = m;
                    g.noalias() -= svd.matrixU().leftCols(kk) *
                                   sv.head(kk).asDiagonal() *
                                   svd.matrixV().leftCols(kk).adjoint();
                    out.grad = view_.scatter(g);
                }
                break;
            }
            case ObjectiveKind::Entropy: {
                RealVector p = sv.array().square();
                out.value = entropy_from_probs(p);
                if (want_grad) {
                    // d(-Tr rho log2 rho) = -2 Re Tr(M^dag A dM) with
                    // A = log2(rho) + I/ln2; clamped eigenvalues contribute 0.
                    RealVector diag(sv.size());
                    for (long long i = 0; i < sv.size(); ++i) {
                        const double pi = p(i);
                        diag(i) = pi >= tol::entropy_eig_clamp
                                      ? -(std::log2(pi) + 1.0 / bc::ln2) * sv(i)
                                      : 0.0;
                    }
                    const Matrix g =
                        svd.matrixU() * diag.asDiagonal() * svd.matrixV().adjoint();
                    out.grad = view_.scatter(g);
                }
                break;
            }
            case ObjectiveKind::Negativity: {
                const double s = sv.sum();
                out.value = 0.5 * (s * s - 1.0);
                if (want_grad) {
                    RealVector diag = RealVector::Constant(sv.size(), 0.5 * s);
                    for (long long i = 0; i < sv.size(); ++i)
                        if (sv(i) < 1e-14) diag(i) = 0.0;
                    const Matrix g =
                        svd.matrixU() * diag.asDiagonal() * svd.matrixV().adjoint();
                    out.grad = view_.scatter(g);
                }
                break;
            }
        }
        return out;
    }

  private:
    ObjectiveKind kind_;
    int k_;
    CutView view_;
};

// Multi-index decomposition table: party_index[p][flat].
inline std::vector<std::vector<int>> index_table(const Shape& shape) {
    const int n = shape.num_parties();
    const long long total = shape.ambient_dim();
    std::vector<long long> stride(static_cast<size_t>(n), 1);
    for (int p = n - 2; p >= 0; --p)
        stride[static_cast<size_t>(p)] = stride[static_cast<size_t>(p + 1)] * shape.dim(p + 1);
    std::vector<std::vector<int>> tab(static_cast<size_t>(n),
                                      std::vector<int>(static_cast<size_t>(total)));
    for (long long f = 0; f < total; ++f)
        for (int p = 0; p < n; ++p)
            tab[static_cast<size_t>(p)][static_cast<size_t>(f)] =
                static_cast<int>((f / stride[static_cast<size_t>(p)]) % shape.dim(p));
    return tab;
}

inline Vector kron_parties(const Shape& shape, const std::vector<std::vector<int>>& tab,
                           const std::vector<Vector>& parties) {
    const long long total = shape.ambient_dim();
    Vector v(total);
    for (long long f = 0; f < total; ++f) {
        Complex prod(1.0, 0.0);
        for (size_t p = 0; p < parties.size(); ++p)
            prod *= parties[p](tab[p][static_cast<size_t>(f)]);
        v(f) = prod;
    }
    return v;
}

// Euclidean gradients per party for f(U(x_1 (x) ... (x) x_N)), given the
// complex gradient g of f at psi: grad_m = 2 * contract(U^dag g, conj x_j, j != m).
inline std::vector<Vector> party_gradients(const Shape& shape,
                                           const std::vector<std::vector<int>>& tab,
                                           const std::vector<Vector>& parties,
                                           const Vector& t_vec) {
    const int n = shape.num_parties();
    const long long total = shape.ambient_dim();
    std::vector<Vector> grads(static_cast<size_t>(n));
    for (int p = 0; p < n; ++p) grads[static_cast<size_t>(p)] = Vector::Zero(shape.dim(p));
    std::vector<Complex> conj_entries(static_cast<size_t>(n));
    for (long long f = 0; f < total; ++f) {
        for (int p = 0; p < n; ++p)
            conj_entries[static_cast<size_t>(p)] =
                std::conj(parties[static_cast<size_t>(p)](tab[static_cast<size_t>(p)][static_cast<size_t>(f)]));
        for (int m = 0; m < n; ++m) {
            Complex prod = t_vec(f);
            for (int p = 0; p < n; ++p)
                if (p != m) prod *= conj_entries[static_cast<size_t>(p)];
            grads[static_cast<size_t>(m)](tab[static_cast<size_t>(m)][static_cast<size_t>(f)]) +=
                2.0 * prod;
        }
    }
    return grads;
}

struct OptimOptions {
    int max_iterations = 500;
    double grad_tol = 1e-9;
    double armijo_c = 1e-4;
    double armijo_shrink = 0.5;
    double armijo_t0 = 1.0;
    double stall_step = 1e-14;
};

struct RestartResult {
    double value = 0.0;
    std::vector<Vector> blocks;
    bool converged = false;
    long long iterations = 0;
};

// Projected gradient descent over a product of unit spheres.  `eval` maps
// block vectors to the objective value and, when asked, per-block Euclidean
// gradients; `maximize` flips the direction through a sign on the objective.
// Armijo backtracking from step 1.0 with shrink 0.5 and slope 1e-4; a stalled
// line search counts as convergence (the iterate sits at a function-value
// floor, e.g. the clamped entropy at a product output).
template <class EvalFn>
RestartResult sphere_descent(std::vector<Vector> blocks, EvalFn&& eval, bool maximize,
                             const OptimOptions& opt, int restart_index) {
    const double sgn = maximize ? -1.0 : 1.0;
    auto project = [](const Vector& x, Vector g) {
        const double radial = g.dot(x).real();
        g -= radial * x;
        return g;
    };
    auto check = [&](double v) {
        if (!std::isfinite(v))
            throw NumericalFailure("non-finite objective at restart " +
                                   std::to_string(restart_index));
    };

    std::vector<Vector> grads;
    double f = eval(blocks, &grads);
    check(f);
    f *= sgn;

    RestartResult res;
    for (int it = 0; it < opt.max_iterations; ++it) {
        ++res.iterations;
        double grad_sq = 0.0;
        std::vector<Vector> dir(blocks.size());
        for (size_t b = 0; b < blocks.size(); ++b) {
            dir[b] = project(blocks[b], sgn * grads[b]);
            grad_sq += dir[b].squaredNorm();
        }
        if (std::sqrt(grad_sq) <= opt.grad_tol) {
            res.converged = true;
            break;
        }

        double t = opt.armijo_t0;
        bool accepted = false;
        std::vector<Vector> trial(blocks.size());
        while (t >= opt.stall_step) {
            for (size_t b = 0; b < blocks.size(); ++b)
                trial[b] = (blocks[b] - t * dir[b]).normalized();
            double ft = eval(trial, nullptr);
            check(ft);
            ft *= sgn;
            if (ft <= f - opt.armijo_c * t * grad_sq) {
                blocks.swap(trial);
                f = ft;
                accepted = true;
                break;
            }
            t *= opt.armijo_shrink;
        }
        if (!accepted) {
            res.converged = true; // line-search stall: decided by function value
            break;
        }
        check(eval(blocks, &grads));
    }
    res.value = sgn * f;
    res.blocks = std::move(blocks);
    return res;
}

// Deterministic multistart reduction: strict minimum, ties below 1e-12 going
// to the lowest restart index.
inline int pick_winner(const std::vector<RestartResult>& runs, bool maximize) {
    double best = maximize ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    for (const auto& r : runs) best = maximize ? std::max(best, r.value) : std::min(best, r.value);
    for (size_t i = 0; i < runs.size(); ++i)
        if (std::abs(runs[i].value - best) <= 1e-12) return static_cast<int>(i);
    return 0;
}

inline Vector random_unit(Rng& rng, int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.complex_gaussian();
    return v.normalized();
}

inline EstimateReport multistart_product(const Gate& gate, const Objective& objective,
                                         int restarts, Seed seed, bool maximize, int threads,
                                         const OptimOptions& opt) {
    if (gate.shape().num_parties() < 2)
        throw InvalidShape("estimate needs a gate with at least 2 parties");
    if (restarts < 1) throw DomainError("restarts must be >= 1");
    const Shape& shape = gate.shape();
    const auto tab = index_table(shape);
    const ObjectiveEngine engine(shape, objective);
    const Matrix& u = gate.matrix();

    std::vector<RestartResult> runs(static_cast<size_t>(restarts));
    parallel_for(
        restarts,
        [&](long long r) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
            std::vector<Vector> start(static_cast<size_t>(shape.num_parties()));
            for (int p = 0; p < shape.num_parties(); ++p)
                start[static_cast<size_t>(p)] = random_unit(rng, shape.dim(p));
            auto eval = [&](const std::vector<Vector>& blocks, std::vector<Vector>* grads) {
                const Vector psi = u * kron_parties(shape, tab, blocks);
                const ObjectiveEval oe = engine.evaluate(psi, grads != nullptr);
                if (grads) {
                    const Vector t_vec = u.adjoint() * oe.grad;
                    *grads = party_gradients(shape, tab, blocks, t_vec);
                }
                return oe.value;
            };
            runs[static_cast<size_t>(r)] =
                sphere_descent(std::move(start), eval, maximize, opt, static_cast<int>(r));
        },
        threads);

    const int w = pick_winner(runs, maximize);
    EstimateReport rep;
    rep.value = runs[static_cast<size_t>(w)].value;
    rep.witness = runs[static_cast<size_t>(w)].blocks;
    rep.restarts = restarts;
    long long conv = 0;
    for (const auto& r : runs) {
        rep.iterations_total += r.iterations;
        conv += r.converged ? 1 : 0;
    }
    rep.converged_fraction = static_cast<double>(conv) / restarts;
    return rep;
}

} // namespace detail

/// Objective value at an explicit product input; the public evaluation path
/// used by reports and tests.
inline double product_objective_value(const Gate& gate, const Objective& objective,
                                      const std::vector<Vector>& parties) {
    const auto tab = detail::index_table(gate.shape());
    const detail::ObjectiveEngine engine(gate.shape(), objective);
    return engine.value(gate.matrix() * detail::kron_parties(gate.shape(), tab, parties));
}

/// Per-party Euclidean gradients of the same objective, for gradient checks.
inline std::vector<Vector> product_objective_gradient(const Gate& gate,
                                                      const Objective& objective,
                                                      const std::vector<Vector>& parties) {
    const auto tab = detail::index_table(gate.shape());
    const detail::ObjectiveEngine engine(gate.shape(), objective);
    const Vector psi = gate.matrix() * detail::kron_parties(gate.shape(), tab, parties);
    const auto oe = engine.evaluate(psi, true);
    const Vector t_vec = gate.matrix().adjoint() * oe.grad;
    return detail::party_gradients(gate.shape(), tab, parties, t_vec);
}

/// Upper estimate of the minimum entangling power: best of `restarts`
/// projected-gradient descents from random product starts.
inline EstimateReport estimate_pmin(const Gate& gate, const Objective& objective, int restarts,
                                    Seed seed, int threads = 0,
                                    const detail::OptimOptions& opt = {}) {
    return detail::multistart_product(gate, objective, restarts, seed, false, threads, opt);
}

/// Lower estimate of the maximum entangling power: multistart ascent.
inline EstimateReport estimate_pmax(const Gate& gate, const Objective& objective, int restarts,
                                    Seed seed, int threads = 0,
                                    const detail::OptimOptions& opt = {}) {
    return detail::multistart_product(gate, objective, restarts, seed, true, threads, opt);
}

/// Mean of the objective over Haar product inputs, with its standard error.
inline EstimateReport estimate_pavg(const Gate& gate, const Objective& objective, int samples,
                                    Seed seed, int threads = 0) {
    if (samples < 1) throw DomainError("samples must be >= 1");
    const Shape& shape = gate.shape();
    const auto tab = detail::index_table(shape);
    const detail::ObjectiveEngine engine(shape, objective);
    std::vector<double> vals(static_cast<size_t>(samples));
    parallel_for(
        samples,
        [&](long long i) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
            std::vector<Vector> parties(static_cast<size_t>(shape.num_parties()));
            for (int p = 0; p < shape.num_parties(); ++p)
                parties[static_cast<size_t>(p)] = detail::random_unit(rng, shape.dim(p));
            const double v =
                engine.value(gate.matrix() * detail::kron_parties(shape, tab, parties));
            if (!std::isfinite(v))
                throw NumericalFailure("non-finite objective at sample " + std::to_string(i));
            vals[static_cast<size_t>(i)] = v;
        },
        threads);
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= samples;
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var = samples > 1 ? var / (samples - 1) : 0.0;

    EstimateReport rep;
    rep.value = mean;
    rep.restarts = samples;
    rep.converged_fraction = 1.0;
    rep.iterations_total = samples;
    rep.std_error = std::sqrt(var / samples);
    return rep;
}

/// Minimum of tail_energy(k) over unit vectors of a subspace, across `cut`.
inline EstimateReport min_over_subspace(const Subspace& subspace, const Cut& cut, int k,
                                        int restarts, Seed seed, int threads = 0,
                                        const detail::OptimOptions& opt = {}) {
    if (k < 1) throw InvalidRank("min_over_subspace: k must be >= 1");
    if (restarts < 1) throw DomainError("restarts must be >= 1");
    const detail::ObjectiveEngine engine(subspace.shape, Objective::tail(k, cut));
    const Matrix& v = subspace.isometry;
    const int m = static_cast<int>(subspace.dimension());

    std::vector<detail::RestartResult> runs(static_cast<size_t>(restarts));
    parallel_for(
        restarts,
        [&](long long r) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
            std::vector<Vector> start{detail::random_unit(rng, m)};
            auto eval = [&](const std::vector<Vector>& blocks, std::vector<Vector>* grads) {
                const Vector psi = v * blocks[0];
                const auto oe = engine.evaluate(psi, grads != nullptr);
                if (grads) grads->assign(1, 2.0 * (v.adjoint() * oe.grad));
                return oe.value;
            };
            runs[static_cast<size_t>(r)] =
                detail::sphere_descent(std::move(start), eval, false, opt, static_cast<int>(r));
        },
        threads);

    const int w = detail::pick_winner(runs, false);
    EstimateReport rep;
    rep.value = runs[static_cast<size_t>(w)].value;
    rep.witness = runs[static_cast<size_t>(w)].blocks;
    rep.restarts = restarts;
    long long conv = 0;
    for (const auto& r : runs) {
        rep.iterations_total += r.iterations;
        conv += r.converged ? 1 : 0;
    }
    rep.converged_fraction = static_cast<double>(conv) / restarts;
    return rep;
}

// ---------------------------------------------------------------------------
// Certified lower bound via an explicit product-state net.

/// Deterministic net over the pure states of one party, covering at the given
/// phase-minimized Euclidean radius (validated by random probes).
struct PartyNet {
    int dim = 0;
    double radius = 0.0;
    std::vector<Vector> points;
};

struct NetSpec {
    double epsilon = 0.0;
    std::vector<long long> party_counts;
};

namespace detail {

inline double phase_min_distance(const Vector& x, const Vector& y) {
    const double ov = std::abs(x.dot(y));
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * ov));
}

inline std::vector<Vector> fibonacci_bloch_states(long long n) {
    std::vector<Vector> pts;
    pts.reserve(static_cast<size_t>(n));
    const double golden = 2.399963229728653; // 2*pi*(1 - 1/phi)
    for (long long i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(n);
        const double theta = std::acos(std::clamp(z, -1.0, 1.0));
        const double phi = golden * static_cast<double>(i);
        Vector v(2);
        v(0) = Complex(std::cos(theta / 2.0), 0.0);
        v(1) = std::polar(std::sin(theta / 2.0), phi);
        pts.push_back(std::move(v));
    }
    return pts;
}

// Van der Corput radical inverse; bases cycle through small primes.
inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

inline std::vector<Vector> halton_states(int dim, long long n) {
    static const std::uint64_t primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                           31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
    std::vector<Vector> pts;
    pts.reserve(static_cast<size_t>(n));
    for (long long i = 0; i < n; ++i) {
        Vector v(dim);
        for (int c = 0; c < dim; ++c) {
            const double u1 =
                std::min(1.0 - 1e-16, std::max(1e-16, radical_inverse(i + 1, primes[2 * c])));
            const double u2 = radical_inverse(i + 1, primes[2 * c + 1]);
            const double rad = std::sqrt(-2.0 * std::log(u1));
            v(c) = std::polar(rad, 2.0 * bc::pi * u2);
        }
        pts.push_back(v.normalized());
    }
    return pts;
}

inline bool validate_covering(const std::vector<Vector>& pts, int dim, double radius,
                              Seed probe_seed, int probes) {
    Rng rng(probe_seed);
    for (int q = 0; q < probes; ++q) {
        const Vector probe = random_unit(rng, dim);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : pts) {
            best = std::min(best, phase_min_distance(probe, p));
            if (best <= radius) break;
        }
        if (best > radius) return false;
    }
    return true;
}

} // namespace detail

/// Builds a party net and validates it by probing; grows the point count
/// until the declared radius holds or the budget is hit.
inline PartyNet build_party_net(int dim, double radius, Seed probe_seed, int probes = 10000,
                                long long max_points = 2000000) {
    if (dim < 2) throw InvalidDimension("build_party_net: dim must be >= 2");
    if (!(radius > 0 && radius < 1)) throw DomainError("net radius must lie in (0,1)");
    long long n = dim == 2
                      ? static_cast<long long>(std::ceil(10.0 / (radius * radius)))
                      : static_cast<long long>(std::ceil(std::pow(3.0 / radius, 2 * dim - 2)));
    n = std::max<long long>(n, 8);
    while (n <= max_points) {
        auto pts = dim == 2 ? detail::fibonacci_bloch_states(n) : detail::halton_states(dim, n);
        if (detail::validate_covering(pts, dim, radius, probe_seed, probes))
            return PartyNet{dim, radius, std::move(pts)};
        n = static_cast<long long>(std::ceil(n * 1.4));
    }
    throw BudgetExceeded("party net for dim " + std::to_string(dim) + " exceeds " +
                         std::to_string(max_points) + " points at radius " +
                         std::to_string(radius));
}

struct CertifiedBound {
    double value = 0.0;            // the certified lower bound, clamped at 0
    double net_min_entropy = 0.0;  // min entropy over net images
    double correction = 0.0;       // sqrt2 * eps * log2 d_A
    NetSpec net;
};

struct CertifiedBoundOptions {
    double theoretical_budget = 1e26; // refusal budget on (10/eps)^(2(dA+dB))
    long long max_pairs = 50000000;   // cap on constructed net pairs
    int probes = 10000;
};

/// Guaranteed lower bound on P_min w.r.t. entropy: minimum entropy over an
/// eps-net of product states minus sqrt2 * eps * log2 d_A, clamped at zero.
/// Each party is covered at radius eps/4, so every product state sits within
/// eps/2 of a net point and the Lipschitz correction applies.
inline CertifiedBound certified_lower_bound(const Gate& gate, double epsilon, Seed seed,
                                            const CertifiedBoundOptions& opts = {}) {
    const Shape& shape = gate.shape();
    if (shape.num_parties() != 2)
        throw InvalidCut("certified_lower_bound needs a bipartite gate");
    if (!(epsilon > 0 && epsilon < 1)) throw DomainError("epsilon must lie in (0,1)");
    const int da = std::min(shape.dim(0), shape.dim(1));
    const int db = std::max(shape.dim(0), shape.dim(1));

    const LogValue theo = net_size_product(da, db, epsilon);
    if (theo.ln > std::log(opts.theoretical_budget))
        throw BudgetExceeded("theoretical net size exp(" + std::to_string(theo.ln) +
                             ") exceeds budget " + std::to_string(opts.theoretical_budget));

    const double radius = epsilon / 4.0;
    const PartyNet net_a =
        build_party_net(shape.dim(0), radius, derive_seed(seed, 1), opts.probes);
    const PartyNet net_b =
        shape.dim(1) == shape.dim(0)
            ? net_a
            : build_party_net(shape.dim(1), radius, derive_seed(seed, 2), opts.probes);

    const long long na = static_cast<long long>(net_a.points.size());
    const long long nb = static_cast<long long>(net_b.points.size());
    if (na * nb > opts.max_pairs)
        throw BudgetExceeded("constructed net has " + std::to_string(na * nb) +
                             " pairs, cap is " + std::to_string(opts.max_pairs));

    const detail::ObjectiveEngine engine(shape, Objective::entropy());
    const auto tab = detail::index_table(shape);
    std::vector<double> row_min(static_cast<size_t>(na),
                                std::numeric_limits<double>::infinity());
    parallel_for(na, [&](long long i) {
        double best = std::numeric_limits<double>::infinity();
        std::vector<Vector> parties{net_a.points[static_cast<size_t>(i)], Vector()};
        for (long long j = 0; j < nb; ++j) {
            parties[1] = net_b.points[static_cast<size_t>(j)];
            best = std::min(best, engine.value(gate.matrix() *
                                               detail::kron_parties(shape, tab, parties)));
        }
        row_min[static_cast<size_t>(i)] = best;
    });
    double min_entropy = std::numeric_limits<double>::infinity();
    for (double v : row_min) min_entropy = std::min(min_entropy, v);

    CertifiedBound out;
    out.net_min_entropy = min_entropy;
    out.correction = std::sqrt(2.0) * epsilon * std::log2(static_cast<double>(da));
    out.value = std::max(0.0, min_entropy - out.correction);
    out.net = NetSpec{epsilon, {na, nb}};
    return out;
}

// ---------------------------------------------------------------------------
// Exact product count for a 2-dimensional pencil on d (x) d.

struct PencilCount {
    bool infinite = false;
    long long value = 0;
};

/// Roots of det(mat(psi1) + t mat(psi2)) plus the point at infinity when
/// mat(psi2) is singular.  For d = 2 this counts exactly the product states
/// in the pencil (the Segre quadric has degree 2); the determinant polynomial
/// identically zero means infinitely many singular members.
inline PencilCount pencil_product_count(const Subspace& subspace) {
    const Shape& shape = subspace.shape;
    if (shape.num_parties() != 2 || shape.dim(0) != shape.dim(1))
        throw InvalidDimension("pencil_product_count needs a d (x) d bipartite shape");
    if (subspace.dimension() != 2)
        throw InvalidDimension("pencil_product_count needs a 2-dimensional subspace");
    const int d = shape.dim(0);
    const CutView view(shape, Cut(shape, {0}));
    const Matrix m1 = view.gather(subspace.isometry.col(0));
    const Matrix m2 = view.gather(subspace.isometry.col(1));

    // Sample det(M1 + t M2) at d+1 roots of unity, recover coefficients by
    // inverse DFT.
    const int np = d + 1;
    std::vector<Complex> samples(static_cast<size_t>(np));
    double max_abs = 0.0;
    for (int j = 0; j < np; ++j) {
        const Complex t = std::polar(1.0, 2.0 * bc::pi * j / np);
        samples[static_cast<size_t>(j)] = (m1 + t * m2).determinant();
        max_abs = std::max(max_abs, std::abs(samples[static_cast<size_t>(j)]));
    }
    const double mat_scale = std::max(m1.norm(), m2.norm());
    if (max_abs <= 1e-10 * std::max(std::pow(mat_scale, d), 1e-30))
        return PencilCount{true, 0};

    std::vector<Complex> coeff(static_cast<size_t>(np), Complex(0, 0));
    for (int k = 0; k < np; ++k) {
        Complex c(0, 0);
        for (int j = 0; j < np; ++j)
            c += samples[static_cast<size_t>(j)] * std::polar(1.0, -2.0 * bc::pi * j * k / np);
        coeff[static_cast<size_t>(k)] = c / static_cast<double>(np);
    }

    double max_c = 0.0;
    for (const auto& c : coeff) max_c = std::max(max_c, std::abs(c));
    const double thresh = 1e-10 * max_c;
    int deg = 0;
    for (int k = np - 1; k >= 1; --k)
        if (std::abs(coeff[static_cast<size_t>(k)]) > thresh) {
            deg = k;
            break;
        }

    long long distinct = 0;
    if (deg >= 1) {
        Matrix companion = Matrix::Zero(deg, deg);
        for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < deg; ++i)
            companion(i, deg - 1) =
                -coeff[static_cast<size_t>(i)] / coeff[static_cast<size_t>(deg)];
        Eigen::ComplexEigenSolver<Matrix> es(companion, false);
        std::vector<Complex> roots(es.eigenvalues().data(),
                                   es.eigenvalues().data() + deg);
        std::sort(roots.begin(), roots.end(), [](const Complex& x, const Complex& y) {
            return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
        });
        for (size_t i = 0; i < roots.size(); ++i) {
            bool dup = false;
            for (size_t j = 0; j < i; ++j)
                if (std::abs(roots[i] - roots[j]) <= 1e-7 * (1.0 + std::abs(roots[i]))) {
                    dup = true;
                    break;
                }
            if (!dup) ++distinct;
        }
    }
    const bool psi2_singular = std::abs(coeff[static_cast<size_t>(d)]) <= thresh;
    return PencilCount{false, distinct + (psi2_singular ? 1 : 0)};
}

} // namespace epower
