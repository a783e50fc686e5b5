#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "epower/errors.hpp"

namespace epower {

/// Factor dimensions (d_1,...,d_N) of a multipartite Hilbert space.
/// Party 0 is the slowest-varying index in the flat row-major layout.
class Shape {
  public:
    explicit Shape(std::vector<int> dims) : dims_(std::move(dims)) {
        if (dims_.size() < 2)
            throw InvalidShape("shape needs at least 2 parties, got " +
                               std::to_string(dims_.size()));
        for (int d : dims_)
            if (d < 2)
                throw InvalidShape("party dimension must be >= 2, got " + std::to_string(d));
    }
    Shape(std::initializer_list<int> dims) : Shape(std::vector<int>(dims)) {}

    int num_parties() const { return static_cast<int>(dims_.size()); }
    int dim(int party) const { return dims_.at(static_cast<size_t>(party)); }
    const std::vector<int>& dims() const { return dims_; }

    long long ambient_dim() const {
        long long p = 1;
        for (int d : dims_) p *= d;
        return p;
    }

    bool operator==(const Shape& o) const { return dims_ == o.dims_; }
    bool operator!=(const Shape& o) const { return !(*this == o); }

    std::string str() const {
        std::string s;
        for (size_t i = 0; i < dims_.size(); ++i) {
            if (i) s += "x";
            s += std::to_string(dims_[i]);
        }
        return s;
    }

  private:
    std::vector<int> dims_;
};

/// A bipartition Gamma | Gamma^c of party indices (0-based).
/// Canonical orientation: Gamma is the side with the smaller dimension
/// product, ties broken by the lexicographically smallest index set.
class Cut {
  public:
    Cut(const Shape& shape, std::vector<int> gamma) {
        const int n = shape.num_parties();
        std::sort(gamma.begin(), gamma.end());
        gamma.erase(std::unique(gamma.begin(), gamma.end()), gamma.end());
        if (gamma.empty() || static_cast<int>(gamma.size()) >= n)
            throw InvalidCut("cut must be a nonempty proper subset of parties");
        for (int p : gamma)
            if (p < 0 || p >= n) throw InvalidCut("party index out of range: " + std::to_string(p));

        std::vector<int> comp;
        for (int p = 0; p < n; ++p)
            if (!std::binary_search(gamma.begin(), gamma.end(), p)) comp.push_back(p);

        long long pg = 1, pc = 1;
        for (int p : gamma) pg *= shape.dim(p);
        for (int p : comp) pc *= shape.dim(p);
        if (pc < pg || (pc == pg && comp < gamma)) std::swap(gamma, comp);
        gamma_ = std::move(gamma);
    }

    const std::vector<int>& gamma() const { return gamma_; }

    std::vector<int> complement(const Shape& shape) const {
        std::vector<int> comp;
        for (int p = 0; p < shape.num_parties(); ++p)
            if (!std::binary_search(gamma_.begin(), gamma_.end(), p)) comp.push_back(p);
        return comp;
    }

    long long row_dim(const Shape& shape) const {
        long long d = 1;
        for (int p : gamma_) d *= shape.dim(p);
        return d;
    }
    long long col_dim(const Shape& shape) const { return shape.ambient_dim() / row_dim(shape); }

    bool operator==(const Cut& o) const { return gamma_ == o.gamma_; }

    std::string str() const {
        std::string s = "{";
        for (size_t i = 0; i < gamma_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(gamma_[i]);
        }
        return s + "}";
    }

  private:
    std::vector<int> gamma_;
};

/// All 2^{N-1}-1 canonical bipartitions, in a fixed deterministic order
/// (ascending subset bitmask of the canonical side).
inline std::vector<Cut> enumerate_cuts(const Shape& shape) {
    const int n = shape.num_parties();
    std::vector<Cut> cuts;
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
        std::vector<int> g;
        for (int p = 0; p < n; ++p)
            if (mask & (1u << p)) g.push_back(p);
        Cut c(shape, g);
        if (c.gamma() == g) cuts.push_back(c);
    }
    return cuts;
}

} // namespace epower
