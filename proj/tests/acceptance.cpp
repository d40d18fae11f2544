// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Time limits are part of each criterion.

#include "support/test_support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

namespace bc = bijclique;
using bc::testing::Rng;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream note;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) note << "failed: " << what << "; ";
        ok = ok && cond;
    }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_seconds, const std::function<void(Check&)>& body) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > limit_seconds) {
        std::ostringstream s;
        s << "took " << secs << " s, limit " << limit_seconds << " s";
        c.require(false, s.str());
    }
    if (!c.ok) ++failures;
    std::printf("[%s] AC%-2d %s (%.3f s / %.0f s) %s\n", c.ok ? "PASS" : "FAIL", id, title.c_str(), secs,
                limit_seconds, c.note.str().c_str());
    std::fflush(stdout);
}

bool all_pair_differences_are_permutations(const bc::UncheckedCertificate& c) {
    for (std::size_t s = 0; s < c.size(); ++s)
        for (std::size_t t = s + 1; t < c.size(); ++t) {
            const auto d = bc::difference(c[t], c[s]);
            if (!bc::testing::sorted_is_permutation({d.values().begin(), d.values().end()})) return false;
        }
    return true;
}

bc::SearchConfig exhaustive(std::uint64_t k, std::size_t size) {
    bc::SearchConfig c;
    c.k = k;
    c.target_size = size;
    return c;
}

// Node budget for the unseeded k = 15 run: 50 attempts of 1,000,000 nodes each.
constexpr std::uint64_t k15_rand_seed = 2018;
constexpr std::uint64_t k15_node_budget = 50'000'000;
constexpr std::uint64_t k15_restarts = 50;

constexpr int property_cases = 1000;

} // namespace

int main() {
    const auto dir = bc::testing::cert_dir();

    criterion(1, "k=15 certificate is a 4-clique, all 6 differences are permutations", 1, [&](Check& c) {
        const auto cert = bc::load_certificate(dir / "k15.cert");
        c.require(cert.modulus().value() == 15 && cert.size() == 4, "shape 15 x 4");
        c.require(bc::verify(cert).ok, "verify");
        c.require(all_pair_differences_are_permutations(cert), "pairwise permutations");
    });

    criterion(2, "k=21 and k=27 certificates are 4-cliques", 1, [&](Check& c) {
        for (const auto* name : {"k21.cert", "k27.cert"}) {
            const auto cert = bc::load_certificate(dir / name);
            c.require(cert.size() == 4, std::string(name) + " has 4 rows");
            c.require(bc::verify(cert).ok, std::string(name) + " verifies");
            c.require(all_pair_differences_are_permutations(cert), std::string(name) + " pairwise permutations");
        }
        c.require(bc::load_certificate(dir / "k21.cert").modulus().value() == 21, "k21 modulus");
        c.require(bc::load_certificate(dir / "k27.cert").modulus().value() == 27, "k27 modulus");
    });

    criterion(3, "prime construction verifies with spf(k) rows for 2 <= k <= 200", 5, [&](Check& c) {
        for (bc::residue k = 2; k <= 200; ++k) {
            const auto cert = bc::prime_construction(bc::Modulus(k));
            c.require(cert.size() == bc::smallest_prime_factor(k), "row count at k=" + std::to_string(k));
            c.require(bc::verify(cert.unchecked()).ok, "verify at k=" + std::to_string(k));
        }
    });

    const auto k15 = bc::Certificate::check(bc::load_certificate(dir / "k15.cert"));
    criterion(4, "compose(k15, prime(7)) is a 4-clique over 105", 1, [&](Check& c) {
        const auto q = bc::compose(k15, bc::prime_construction(bc::Modulus(7)));
        c.require(q.modulus().value() == 105 && q.size() == 4, "shape 105 x 4");
        c.require(bc::verify(q.unchecked()).ok, "verify");
        c.require(bc::testing::reference_is_clique(bc::testing::raw_rows(q.unchecked()), 105), "reference check");
    });
    criterion(4, "compose(k15, k15) is a 4-clique over 225", 1, [&](Check& c) {
        const auto q = bc::compose(k15, k15);
        c.require(q.modulus().value() == 225 && q.size() == 4, "shape 225 x 4");
        c.require(bc::verify(q.unchecked()).ok, "verify");
        c.require(bc::testing::reference_is_clique(bc::testing::raw_rows(q.unchecked()), 225), "reference check");
    });

    criterion(5, "lower_bound sweep 2..500 and materialization", 30, [&](Check& c) {
        const auto reg = bc::Registry::load_directory(dir);
        bc::BoundCalculator calc(reg);
        for (bc::residue k = 2; k <= 500; ++k) {
            const auto r = calc(k);
            const auto ks = std::to_string(k);
            if (bc::is_prime(k)) c.require(r.lower_bound == k, "prime k=" + ks);
            if (k % 2 == 0) c.require(r.lower_bound == 2, "even k=" + ks);
            c.require(r.lower_bound >= bc::smallest_prime_factor(k), "spf bound k=" + ks);
            for (bc::residue base : {15u, 21u, 27u})
                if (k % base == 0 && (k / base) % 2 != 0 && (k / base) % 3 != 0)
                    c.require(r.lower_bound >= 4, "corollary k=" + ks);
            const auto cert = bc::materialize_bound(r, reg);
            c.require(cert.modulus().value() == k && cert.size() == r.lower_bound, "materialized shape k=" + ks);
            c.require(bc::verify(cert.unchecked()).ok, "materialized verifies k=" + ks);
        }
    });

    for (std::uint64_t k : {2, 4, 6, 8, 10})
        criterion(6, "no triangle in G_" + std::to_string(k) + " (exhaustive)", 60, [&](Check& c) {
            const auto o = bc::search(exhaustive(k, 3));
            c.require(o.status == bc::SearchStatus::exhausted_none, "exhausted_none");
            c.note << "nodes=" << o.stats.nodes;
        });

    criterion(7, "no 4-clique in G_9 (exhaustive)", 600, [&](Check& c) {
        const auto o = bc::search(exhaustive(9, 4));
        c.require(o.status == bc::SearchStatus::exhausted_none, "exhausted_none");
        c.note << "nodes=" << o.stats.nodes;
    });

    criterion(8, "k=15 4-clique from the normalized paper row as seed", 60, [&](Check& c) {
        auto cfg = exhaustive(15, 4);
        cfg.seed_rows = {bc::normalize(k15)[2]};
        const auto o = bc::search(cfg);
        c.require(o.status == bc::SearchStatus::found, "found");
        c.require(o.certificate && o.certificate->size() == 4, "4 rows");
        c.require(o.certificate && bc::verify(o.certificate->unchecked()).ok, "witness verifies");
        c.note << "nodes=" << o.stats.nodes;
    });

    criterion(9, "k=15 4-clique unseeded, first-found with restarts, reproducible", 3600, [&](Check& c) {
        bc::SearchConfig cfg = exhaustive(15, 4);
        cfg.mode = bc::SearchMode::first_found;
        cfg.rng_seed = k15_rand_seed;
        cfg.node_limit = k15_node_budget;
        cfg.restarts = k15_restarts;
        const auto a = bc::search(cfg);
        const auto b = bc::search(cfg);
        c.require(a.status == bc::SearchStatus::found, "found within budget");
        c.require(a.certificate && bc::verify(a.certificate->unchecked()).ok, "witness verifies");
        c.require(a.certificate && a.certificate->size() == 4, "4 rows");
        c.require(a.certificate && b.certificate && bc::serialize(*a.certificate) == bc::serialize(*b.certificate),
                  "same seed gives the same witness");
        c.note << "nodes=" << a.stats.nodes << " attempts=" << a.stats.attempts << " budget=" << k15_node_budget;
    });

    criterion(10, "oracle omega {2:2, 3:3, 4:2, 5:5} agrees with exhaustive search", 300, [&](Check& c) {
        const std::size_t expected[] = {0, 0, 2, 3, 2, 5};
        for (bc::residue k = 2; k <= 5; ++k) {
            const auto omega = bc::oracle::brute_force_omega(bc::oracle::SmallModulus(k));
            c.require(omega == expected[k], "omega(" + std::to_string(k) + ")");
            for (std::size_t s = 2; s <= omega + 1; ++s) {
                const auto o = bc::search(exhaustive(k, s));
                const auto want = s <= omega ? bc::SearchStatus::found : bc::SearchStatus::exhausted_none;
                c.require(o.status == want, "search k=" + std::to_string(k) + " s=" + std::to_string(s));
            }
        }
    });

    criterion(11, "triangle counts: methods agree at k=3, zero at k=2,4, positive at k=5", 300, [&](Check& c) {
        namespace o = bc::oracle;
        const auto t3 = o::triangle_count(o::SmallModulus(3));
        c.require(t3.direct.has_value() && *t3.direct == t3.value, "A == B at k=3");
        c.require(o::triangle_count(o::SmallModulus(2)).value == 0, "k=2 is 0");
        c.require(o::triangle_count(o::SmallModulus(4)).value == 0, "k=4 is 0");
        const auto t5 = o::triangle_count(o::SmallModulus(5));
        c.require(t5.value > 0, "k=5 positive");
        c.note << "k3=" << t3.value << " k5=" << t5.value;
    });

    criterion(12, "randomized property suite", 300, [&](Check& c) {
        Rng rng(12);
        auto random_pair = [&] {
            const bc::Modulus k(2 + rng() % 13);
            const auto f = bc::testing::random_function(rng, k);
            if (rng() % 2) return std::pair{f, bc::difference(f, bc::testing::random_permutation(rng, k))};
            return std::pair{f, bc::testing::random_function(rng, k)};
        };
        int edges = 0;
        for (int i = 0; i < property_cases; ++i) {
            const auto [f, g] = random_pair();
            const bool e = bc::is_edge(f, g);
            edges += e;
            const bc::Modulus k = f.modulus();
            c.require(bc::is_edge(g, f) == e, "symmetry");
            const auto h = bc::testing::random_function(rng, k);
            c.require(bc::is_edge(bc::sum(f, h), bc::sum(g, h)) == e, "translation invariance");
            c.require(bc::is_edge(bc::shift(f, static_cast<bc::residue>(rng() % k.value())), g) == e,
                      "constant-shift invariance");
            const auto sigma = bc::testing::random_permutation(rng, k);
            c.require(bc::is_edge(bc::precompose(f, sigma), bc::precompose(g, sigma)) == e, "relabeling invariance");
        }
        c.require(edges > property_cases / 4 && edges < property_cases, "edge cases are mixed");

        for (int i = 0; i < property_cases; ++i) {
            const auto cert = bc::testing::random_clique(rng);
            const auto n = bc::normalize(cert);
            c.require(bc::verify(n.unchecked()).ok, "normalize preserves validity");
            c.require(bc::is_normalized(n), "normalize output is normal");
            c.require(bc::normalize(n) == n, "normalize idempotent");
            c.require(n.size() == cert.size() && n.modulus() == cert.modulus(), "normalize keeps shape");
        }

        int composed = 0;
        while (composed < property_cases) {
            const auto f = bc::testing::random_clique(rng);
            const auto g = bc::testing::random_clique(rng);
            const std::uint64_t n = f.modulus().value(), m = g.modulus().value();
            if (n * m > 1500) continue;
            const auto q = bc::compose(f, g);
            c.require(bc::verify(q.unchecked()).ok, "compose verifies");
            for (std::size_t t = 0; t < q.size(); ++t)
                for (std::uint64_t i = 0; i < n; ++i)
                    for (std::uint64_t j = 0; j < m; ++j) {
                        const bc::residue v = q[t][i * m + j];
                        c.require(v % m == g[t][j], "q_t mod m = g_t");
                        c.require((v - g[t][j]) / m == f[t][i], "(q_t - g_t) / m = f_t");
                    }
            ++composed;
        }

        for (int i = 0; i < property_cases; ++i) {
            const bc::Modulus k(2 + rng() % 40);
            std::vector<bc::ModFunction> rows;
            for (std::size_t t = 0, m = 1 + rng() % 6; t < m; ++t) rows.push_back(bc::testing::random_function(rng, k));
            const bc::UncheckedCertificate u(k, rows);
            const auto text = bc::serialize(u);
            c.require(bc::parse_certificate(text) == u, "parse(serialize(c)) == c");
            c.require(bc::serialize(bc::parse_certificate(text)) == text, "serialize is canonical");
        }
        c.note << "cases per property=" << property_cases;
    });

    std::printf("%s: %d criterion line(s) failed\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
