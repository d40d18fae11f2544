#pragma once

// Explicit clique constructions and the lower-bound calculator for omega(k).
//
//  * prime_construction:  j -> i*j mod k for i < p(k), the smallest prime factor.
//  * compose:             cliques over Z_n and Z_m give one over Z_nm via
//                         q_t(i*m + j) = f_t(i)*m + g_t(j).
//  * lower_bound:         best bound obtainable from the two constructions plus a
//                         registry of stored certificates, by DP over divisors.

#include "bijclique/certificate.hpp"
#include "bijclique/known_certificates.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

namespace bijclique {

inline residue smallest_prime_factor(std::uint64_t k) {
    if (k < 2) throw invalid_argument("smallest_prime_factor needs k >= 2, got " + std::to_string(k));
    if (k % 2 == 0) return 2;
    for (std::uint64_t p = 3; p * p <= k; p += 2)
        if (k % p == 0) return static_cast<residue>(p);
    return static_cast<residue>(k);
}

inline bool is_prime(std::uint64_t k) { return k >= 2 && smallest_prime_factor(k) == k; }

inline Certificate prime_construction(Modulus k) {
    const residue p = smallest_prime_factor(k.value());
    std::vector<ModFunction> rows;
    rows.reserve(p);
    for (residue i = 0; i < p; ++i) rows.push_back(ModFunction::linear(k, i));
    return Certificate::check(UncheckedCertificate(k, std::move(rows)));
}

/// Product clique over Z_{n*m} with min(|cn|, |cm|) rows.
inline Certificate compose(const Certificate& cn, const Certificate& cm) {
    const std::uint64_t n = cn.modulus().value();
    const std::uint64_t m = cm.modulus().value();
    if (n * m > Modulus::max_value)
        throw invalid_argument("product modulus " + std::to_string(n) + " * " + std::to_string(m) +
                               " overflows the word size");
    const Modulus nm(n * m);
    const std::size_t s = std::min(cn.size(), cm.size());
    std::vector<ModFunction> rows;
    rows.reserve(s);
    for (std::size_t t = 0; t < s; ++t) {
        std::vector<residue> q(nm.value());
        for (std::uint64_t i = 0; i < n; ++i)
            for (std::uint64_t j = 0; j < m; ++j)
                q[i * m + j] = static_cast<residue>(std::uint64_t{cn[t][i]} * m + cm[t][j]);
        rows.emplace_back(nm, std::move(q));
    }
    return Certificate::check(UncheckedCertificate(nm, std::move(rows)));
}

/// Verified certificates keyed by exact modulus; only the largest clique per modulus is kept.
class Registry {
public:
    Registry() = default;

    /// The three shipped four-cliques (k = 15, 21, 27).
    static Registry defaults() {
        Registry r;
        for (auto& c : known::all()) r.add(std::move(c));
        return r;
    }

    /// Every *.cert file in dir; each must verify.
    static Registry load_directory(const std::filesystem::path& dir) {
        Registry r;
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(dir))
            if (entry.is_regular_file() && entry.path().extension() == ".cert") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) r.add(Certificate::check(load_certificate(f)));
        return r;
    }

    /// Returns true if the registry changed.
    bool add(Certificate c) {
        const residue k = c.modulus().value();
        auto it = by_modulus_.find(k);
        if (it != by_modulus_.end() && it->second.size() >= c.size()) return false;
        by_modulus_.insert_or_assign(k, std::move(c));
        return true;
    }

    const Certificate* find(residue k) const {
        auto it = by_modulus_.find(k);
        return it == by_modulus_.end() ? nullptr : &it->second;
    }

    const std::map<residue, Certificate>& entries() const noexcept { return by_modulus_; }

    /// FNV-1a over the canonical serialization of every entry, in modulus order.
    std::uint64_t fingerprint() const {
        std::uint64_t h = 14695981039346656037ull;
        for (const auto& [k, c] : by_modulus_)
            for (const unsigned char ch : serialize(c)) {
                h ^= ch;
                h *= 1099511628211ull;
            }
        return h;
    }

private:
    std::map<residue, Certificate> by_modulus_;
};

enum class DerivationKind { prime_construction, stored_certificate, product };

struct Derivation;
using DerivationPtr = std::shared_ptr<const Derivation>;

/// One node of a bound's provenance tree.
struct Derivation {
    DerivationKind kind = DerivationKind::prime_construction;
    residue k = 0;
    residue bound = 0;
    residue n = 0; // product only: k = n * m, n <= m
    residue m = 0;
    DerivationPtr left;  // over Z_n
    DerivationPtr right; // over Z_m
    std::size_t product_nodes = 0;
};

struct BoundReport {
    Modulus k;
    residue lower_bound;
    DerivationPtr provenance;
    /// Set only for even k (omega = 2) and prime k (omega = k).
    bool exact;
    std::uint64_t registry_fingerprint;
};

namespace detail {

// Strict preference: larger bound, then fewer Product nodes, then prime < stored < product,
// then smallest (n, m).
inline bool better(const Derivation& a, const Derivation& b) {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.product_nodes != b.product_nodes) return a.product_nodes < b.product_nodes;
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    return std::pair(a.n, a.m) < std::pair(b.n, b.m);
}

} // namespace detail

/// Memoizing DP over divisors. Holds a reference to the registry; confine each instance to one thread.
class BoundCalculator {
public:
    explicit BoundCalculator(const Registry& registry)
        : registry_(&registry), fingerprint_(registry.fingerprint()) {}
    explicit BoundCalculator(const Registry&&) = delete;

    BoundReport operator()(std::uint64_t k_raw) {
        const Modulus k(k_raw);
        auto d = derive(k.value());
        const bool exact = k.value() % 2 == 0 || is_prime(k.value());
        return BoundReport{k, d->bound, d, exact, fingerprint_};
    }

private:
    DerivationPtr derive(residue k) {
        if (auto it = memo_.find(k); it != memo_.end()) return it->second;

        auto leaf = [k](DerivationKind kind, residue bound) {
            auto d = std::make_shared<Derivation>();
            d->kind = kind;
            d->k = k;
            d->bound = bound;
            return d;
        };
        auto best = leaf(DerivationKind::prime_construction, smallest_prime_factor(k));
        auto consider = [&](std::shared_ptr<Derivation> cand) {
            if (detail::better(*cand, *best)) best = std::move(cand);
        };
        if (const Certificate* c = registry_->find(k))
            consider(leaf(DerivationKind::stored_certificate, static_cast<residue>(c->size())));
        for (residue n = 2; std::uint64_t{n} * n <= k; ++n) {
            if (k % n != 0) continue;
            const residue m = k / n;
            auto left = derive(n);
            auto right = derive(m);
            auto d = leaf(DerivationKind::product, std::min(left->bound, right->bound));
            d->n = n;
            d->m = m;
            d->product_nodes = 1 + left->product_nodes + right->product_nodes;
            d->left = std::move(left);
            d->right = std::move(right);
            consider(std::move(d));
        }
        memo_.emplace(k, best);
        return best;
    }

    const Registry* registry_;
    std::uint64_t fingerprint_;
    std::unordered_map<residue, DerivationPtr> memo_;
};

inline BoundReport lower_bound(std::uint64_t k, const Registry& registry) {
    return BoundCalculator(registry)(k);
}

inline BoundReport lower_bound(std::uint64_t k) { return lower_bound(k, Registry::defaults()); }

namespace detail {

inline Certificate replay(const Derivation& d, const Registry& registry) {
    switch (d.kind) {
    case DerivationKind::prime_construction:
        return prime_construction(Modulus(d.k));
    case DerivationKind::stored_certificate: {
        const Certificate* c = registry.find(d.k);
        if (!c || c->size() != d.bound) throw error("registry has no " + std::to_string(d.bound) +
                                                    "-clique over Z_" + std::to_string(d.k));
        return *c;
    }
    case DerivationKind::product:
        return compose(replay(*d.left, registry), replay(*d.right, registry));
    }
    throw error("corrupt derivation");
}

} // namespace detail

/// Builds the clique a bound report describes.
inline Certificate materialize_bound(const BoundReport& report, const Registry& registry) {
    if (registry.fingerprint() != report.registry_fingerprint)
        throw error("registry changed since the bound report was computed");
    Certificate c = detail::replay(*report.provenance, registry);
    if (c.modulus() != report.k || c.size() != report.lower_bound)
        throw error("replayed certificate does not match the bound report");
    return c;
}

/// One-line form, e.g. Product(n=5, m=21, PrimeConstruction(k=5, p=5), StoredCertificate(k=21, m=4)).
inline std::string to_string(const Derivation& d) {
    switch (d.kind) {
    case DerivationKind::prime_construction:
        return "PrimeConstruction(k=" + std::to_string(d.k) + ", p=" + std::to_string(d.bound) + ")";
    case DerivationKind::stored_certificate:
        return "StoredCertificate(k=" + std::to_string(d.k) + ", m=" + std::to_string(d.bound) + ")";
    case DerivationKind::product:
        return "Product(n=" + std::to_string(d.n) + ", m=" + std::to_string(d.m) + ", " + to_string(*d.left) +
               ", " + to_string(*d.right) + ")";
    }
    return "?";
}

inline std::string_view kind_name(DerivationKind kind) {
    switch (kind) {
    case DerivationKind::prime_construction: return "PrimeConstruction";
    case DerivationKind::stored_certificate: return "StoredCertificate";
    case DerivationKind::product: return "Product";
    }
    return "?";
}

/// Indented provenance tree, one node per line.
inline void render_tree(std::ostream& os, const Derivation& d, int depth = 0) {
    os << std::string(static_cast<std::size_t>(depth) * 2, ' ');
    switch (d.kind) {
    case DerivationKind::prime_construction:
        os << "PrimeConstruction p=" << d.bound << " over Z_" << d.k;
        break;
    case DerivationKind::stored_certificate:
        os << "StoredCertificate " << d.bound << "-clique over Z_" << d.k;
        break;
    case DerivationKind::product:
        os << "Product " << d.n << " x " << d.m << " = " << d.k;
        break;
    }
    os << "  -> " << d.bound << '\n';
    if (d.kind == DerivationKind::product) {
        render_tree(os, *d.left, depth + 1);
        render_tree(os, *d.right, depth + 1);
    }
}

} // namespace bijclique
