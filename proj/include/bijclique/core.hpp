#pragma once

// Functions Z_k -> Z_k stored as residue vectors, and the adjacency relation
// of the graph G_k: f ~ g iff (f - g) mod k is a bijection.

#include "bijclique/error.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <vector>

namespace bijclique {

using residue = std::uint32_t;

/// The order k of the cyclic group Z_k. Always k >= 2.
class Modulus {
public:
    static constexpr std::uint64_t max_value = std::numeric_limits<residue>::max();

    explicit constexpr Modulus(std::uint64_t k) : k_(static_cast<residue>(k)) {
        if (k < 2) throw invalid_argument("modulus must be at least 2, got " + std::to_string(k));
        if (k > max_value) throw invalid_argument("modulus " + std::to_string(k) + " exceeds the word size");
    }

    constexpr residue value() const noexcept { return k_; }
    constexpr operator residue() const noexcept { return k_; }

    constexpr residue reduce(std::int64_t x) const noexcept {
        const auto k = static_cast<std::int64_t>(k_);
        const auto r = x % k;
        return static_cast<residue>(r < 0 ? r + k : r);
    }
    constexpr residue add(residue a, residue b) const noexcept {
        const std::uint64_t s = std::uint64_t{a} + b;
        return static_cast<residue>(s >= k_ ? s - k_ : s);
    }
    constexpr residue sub(residue a, residue b) const noexcept {
        return a >= b ? a - b : static_cast<residue>(std::uint64_t{a} + k_ - b);
    }
    constexpr residue mul(residue a, residue b) const noexcept {
        return static_cast<residue>((std::uint64_t{a} * b) % k_);
    }

    friend constexpr bool operator==(Modulus, Modulus) = default;

private:
    residue k_;
};

/// O(k) permutation test with a reusable, epoch-stamped seen buffer.
/// After the first call for a given k the test performs no allocation.
class BijectionTester {
public:
    bool operator()(std::span<const residue> values, residue k) {
        if (values.size() != k) return false;
        if (seen_.size() < k) seen_.assign(k, 0);
        if (++epoch_ == 0) {
            std::fill(seen_.begin(), seen_.end(), 0);
            epoch_ = 1;
        }
        for (const residue v : values) {
            if (v >= k || seen_[v] == epoch_) return false;
            seen_[v] = epoch_;
        }
        return true;
    }

private:
    std::vector<std::uint32_t> seen_;
    std::uint32_t epoch_ = 0;
};

/// A vertex of G_k: a function Z_k -> Z_k with canonical residues in [0, k).
class ModFunction {
public:
    ModFunction(Modulus k, std::vector<residue> values) : k_(k), values_(std::move(values)) {
        if (values_.size() != k_.value())
            throw invalid_argument("function over Z_" + std::to_string(k_.value()) + " needs " +
                                   std::to_string(k_.value()) + " values, got " +
                                   std::to_string(values_.size()));
        for (std::size_t j = 0; j < values_.size(); ++j)
            if (values_[j] >= k_.value())
                throw invalid_argument("value " + std::to_string(values_[j]) + " at position " +
                                       std::to_string(j) + " is outside [0, " +
                                       std::to_string(k_.value()) + ")");
    }

    /// Reduces arbitrary integers mod k.
    static ModFunction from_integers(Modulus k, std::span<const std::int64_t> raw) {
        std::vector<residue> v(raw.size());
        std::transform(raw.begin(), raw.end(), v.begin(), [&](std::int64_t x) { return k.reduce(x); });
        return ModFunction(k, std::move(v));
    }

    static ModFunction constant(Modulus k, residue c) {
        return ModFunction(k, std::vector<residue>(k.value(), k.reduce(c)));
    }
    static ModFunction zero(Modulus k) { return constant(k, 0); }

    /// j -> a*j mod k.
    static ModFunction linear(Modulus k, residue a) {
        std::vector<residue> v(k.value());
        for (residue j = 0; j < k.value(); ++j) v[j] = k.mul(a % k.value(), j);
        return ModFunction(k, std::move(v));
    }
    static ModFunction identity(Modulus k) { return linear(k, 1); }

    Modulus modulus() const noexcept { return k_; }
    std::size_t size() const noexcept { return values_.size(); }
    residue operator[](std::size_t j) const { return values_[j]; }
    residue operator()(residue x) const { return values_[x]; }
    std::span<const residue> values() const noexcept { return values_; }

    friend bool operator==(const ModFunction& a, const ModFunction& b) {
        return a.k_ == b.k_ && a.values_ == b.values_;
    }
    /// Lexicographic on value sequences; functions over different moduli order by modulus.
    friend std::strong_ordering operator<=>(const ModFunction& a, const ModFunction& b) {
        if (auto c = a.k_.value() <=> b.k_.value(); c != 0) return c;
        return a.values_ <=> b.values_;
    }

private:
    Modulus k_;
    std::vector<residue> values_;
};

inline std::ostream& operator<<(std::ostream& os, const ModFunction& f) {
    for (std::size_t j = 0; j < f.size(); ++j) os << (j ? " " : "") << f[j];
    return os;
}

namespace detail {
inline void require_same_modulus(const ModFunction& f, const ModFunction& g) {
    if (f.modulus() != g.modulus()) throw modulus_mismatch(f.modulus().value(), g.modulus().value());
}
inline BijectionTester& thread_tester() {
    thread_local BijectionTester tester;
    return tester;
}
} // namespace detail

inline bool is_bijection(std::span<const residue> values, residue k) {
    return detail::thread_tester()(values, k);
}

inline bool is_bijection(const ModFunction& f) {
    return is_bijection(f.values(), f.modulus().value());
}

/// Pointwise (f - g) mod k.
inline ModFunction difference(const ModFunction& f, const ModFunction& g) {
    detail::require_same_modulus(f, g);
    const Modulus k = f.modulus();
    std::vector<residue> v(k.value());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = k.sub(f[j], g[j]);
    return ModFunction(k, std::move(v));
}

/// Pointwise (f + g) mod k.
inline ModFunction sum(const ModFunction& f, const ModFunction& g) {
    detail::require_same_modulus(f, g);
    const Modulus k = f.modulus();
    std::vector<residue> v(k.value());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = k.add(f[j], g[j]);
    return ModFunction(k, std::move(v));
}

inline ModFunction shift(const ModFunction& f, residue c) {
    return sum(f, ModFunction::constant(f.modulus(), c));
}

/// x -> f(sigma(x)).
inline ModFunction precompose(const ModFunction& f, const ModFunction& sigma) {
    detail::require_same_modulus(f, sigma);
    std::vector<residue> v(f.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f[sigma[j]];
    return ModFunction(f.modulus(), std::move(v));
}

/// Inverse of a bijection.
inline ModFunction inverse(const ModFunction& sigma) {
    if (!is_bijection(sigma)) throw invalid_argument("inverse of a non-bijective function");
    std::vector<residue> v(sigma.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[sigma[j]] = static_cast<residue>(j);
    return ModFunction(sigma.modulus(), std::move(v));
}

/// Adjacency in G_k. Allocation-free once the thread's seen buffer is warm.
inline bool is_edge(const ModFunction& f, const ModFunction& g) {
    detail::require_same_modulus(f, g);
    const Modulus k = f.modulus();
    thread_local std::vector<residue> diff;
    diff.resize(k.value());
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = k.sub(f[j], g[j]);
    return is_bijection(diff, k.value());
}

} // namespace bijclique
