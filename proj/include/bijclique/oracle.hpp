#pragma once

// Brute-force reference computations on G_k for 2 <= k <= 5.
//
// Nothing here is shared with the search module: cliques are grown by plain
// expansion over explicit adjacency, and counts come from direct enumeration.

#include "bijclique/core.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

namespace bijclique::oracle {

/// A modulus inside the oracle's hard cap, 2 <= k <= 5.
class SmallModulus {
public:
    static constexpr residue cap = 5;

    explicit SmallModulus(std::uint64_t k) : k_(k) {
        if (k > cap) throw invalid_argument("oracle is capped at k <= 5, got " + std::to_string(k));
    }
    Modulus modulus() const noexcept { return k_; }
    residue value() const noexcept { return k_.value(); }

private:
    Modulus k_;
};

inline std::uint64_t vertex_count(SmallModulus k) {
    std::uint64_t n = 1;
    for (residue i = 0; i < k.value(); ++i) n *= k.value();
    return n;
}

inline std::uint64_t factorial(residue k) {
    std::uint64_t f = 1;
    for (residue i = 2; i <= k; ++i) f *= i;
    return f;
}

/// All k! bijections of Z_k, in lexicographic order.
inline std::vector<ModFunction> bijections(SmallModulus k) {
    std::vector<residue> p(k.value());
    std::iota(p.begin(), p.end(), 0);
    std::vector<ModFunction> out;
    do out.emplace_back(k.modulus(), p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// All k^k functions, in lexicographic order.
inline std::vector<ModFunction> all_functions(SmallModulus k) {
    const residue n = k.value();
    std::vector<ModFunction> out;
    out.reserve(vertex_count(k));
    std::vector<residue> v(n, 0);
    for (;;) {
        out.emplace_back(k.modulus(), v);
        std::size_t i = n;
        while (i > 0 && ++v[i - 1] == n) v[--i] = 0;
        if (i == 0) break;
    }
    return out;
}

namespace detail {

inline void grow(const std::vector<std::vector<std::uint8_t>>& adj, std::vector<std::size_t>& clique,
                 const std::vector<std::size_t>& cands, std::size_t& best) {
    best = std::max(best, clique.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
        std::vector<std::size_t> next;
        for (std::size_t j = i + 1; j < cands.size(); ++j)
            if (adj[cands[i]][cands[j]]) next.push_back(cands[j]);
        clique.push_back(cands[i]);
        grow(adj, clique, next, best);
        clique.pop_back();
    }
}

} // namespace detail

/// Exact omega(k). G_k is vertex-transitive (translation by any h is an automorphism), so some
/// maximum clique contains the zero function; the rest of it lies among the k! bijections.
inline std::size_t brute_force_omega(SmallModulus k) {
    const auto p = bijections(k);
    std::vector<std::vector<std::uint8_t>> adj(p.size(), std::vector<std::uint8_t>(p.size(), 0));
    for (std::size_t a = 0; a < p.size(); ++a)
        for (std::size_t b = 0; b < p.size(); ++b)
            adj[a][b] = a != b && is_bijection(difference(p[a], p[b]));
    std::vector<std::size_t> all(p.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::size_t> clique;
    std::size_t best = 0;
    detail::grow(adj, clique, all, best);
    return best + 1;
}

/// Ordered pairs (u, v) of bijections with u - v a bijection.
inline std::uint64_t bijection_pair_count(SmallModulus k) {
    const auto p = bijections(k);
    std::uint64_t n = 0;
    for (const auto& u : p)
        for (const auto& v : p)
            if (is_bijection(difference(u, v))) ++n;
    return n;
}

/// Triangles by direct enumeration of vertex triples; only for k <= 3.
inline std::uint64_t triangle_count_by_triples(SmallModulus k) {
    if (k.value() > 3) throw invalid_argument("triple enumeration is capped at k <= 3");
    const auto v = all_functions(k);
    std::uint64_t n = 0;
    for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = a + 1; b < v.size(); ++b) {
            if (!is_edge(v[a], v[b])) continue;
            for (std::size_t c = b + 1; c < v.size(); ++c)
                if (is_edge(v[a], v[c]) && is_edge(v[b], v[c])) ++n;
        }
    return n;
}

struct TriangleCount {
    std::uint64_t value;
    std::uint64_t pair_count;            // N(k)
    std::optional<std::uint64_t> direct; // triple enumeration, k <= 3
};

/// Each triangle {f, g, h} corresponds to 6 triples (f, g - f, h - f) with f free, so the
/// count is k^k * N(k) / 6. Cross-checked against triple enumeration whenever k <= 3.
inline TriangleCount triangle_count(SmallModulus k) {
    TriangleCount r{};
    r.pair_count = bijection_pair_count(k);
    const std::uint64_t scaled = vertex_count(k) * r.pair_count;
    if (scaled % 6 != 0) throw error("k^k * N(k) is not divisible by 6");
    r.value = scaled / 6;
    if (k.value() <= 3) {
        r.direct = triangle_count_by_triples(k);
        if (*r.direct != r.value)
            throw error("triangle counts disagree: " + std::to_string(r.value) + " vs " + std::to_string(*r.direct));
    }
    return r;
}

/// Degree of f, by direct enumeration of all k^k candidates (k <= 4) or, for k = 5, by
/// counting the distinct neighbours f - b over all bijections b.
inline std::uint64_t degree(SmallModulus k, const ModFunction& f) {
    if (f.modulus() != k.modulus()) throw modulus_mismatch(k.value(), f.modulus().value());
    std::uint64_t n = 0;
    if (k.value() <= 4) {
        for (const auto& g : all_functions(k))
            if (is_edge(f, g)) ++n;
        return n;
    }
    std::vector<ModFunction> neighbours;
    for (const auto& b : bijections(k)) {
        ModFunction g = difference(f, b);
        if (is_edge(f, g)) neighbours.push_back(std::move(g));
    }
    std::sort(neighbours.begin(), neighbours.end());
    n = static_cast<std::uint64_t>(std::unique(neighbours.begin(), neighbours.end()) - neighbours.begin());
    return n;
}

/// True iff every sampled vertex has exactly k! neighbours.
inline bool degree_check(SmallModulus k, std::span<const ModFunction> sample) {
    const std::uint64_t expected = factorial(k.value());
    return std::all_of(sample.begin(), sample.end(), [&](const ModFunction& f) { return degree(k, f) == expected; });
}

struct CensusReport {
    residue k;
    std::uint64_t vertex_count;
    std::optional<std::uint64_t> degree;
    std::optional<std::uint64_t> triangle_count;
    std::optional<std::size_t> omega;
};

} // namespace bijclique::oracle
