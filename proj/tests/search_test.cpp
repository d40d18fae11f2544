#include "support/test_support.hpp"

#include <gtest/gtest.h>

#include <set>

namespace bijclique {
namespace {

using testing::Rng;

SearchConfig exhaustive(std::uint64_t k, std::size_t size, unsigned workers = 1) {
    SearchConfig c;
    c.k = k;
    c.target_size = size;
    c.worker_count = workers;
    return c;
}

TEST(ColumnCandidates, ColumnZeroIsForced) {
    const PartialClique s(Modulus(7), 4);
    EXPECT_EQ(column_candidates(s, 2, 0), std::vector<residue>{0});
}

TEST(ColumnCandidates, HandEnumeratedK3) {
    // v = 0 repeats difference 0 with the zero row, v = 1 repeats difference 0 with the identity.
    PartialClique s(Modulus(3), 3);
    s.assign(2, 0, 0);
    EXPECT_EQ(column_candidates(s, 2, 1), std::vector<residue>{2});
}

TEST(ColumnCandidates, EmptyWhenDifferencesRunOut) {
    PartialClique k2(Modulus(2), 3);
    k2.assign(2, 0, 0);
    EXPECT_TRUE(column_candidates(k2, 2, 1).empty());

    // k = 4: the zero row leaves only 3 at column 3, and 3 - 3 = 0 is used against the identity.
    PartialClique s(Modulus(4), 3);
    s.assign(2, 0, 0);
    EXPECT_EQ(column_candidates(s, 2, 1), (std::vector<residue>{2, 3}));
    s.assign(2, 1, 2);
    EXPECT_EQ(column_candidates(s, 2, 2), std::vector<residue>{1});
    s.assign(2, 2, 1);
    EXPECT_TRUE(column_candidates(s, 2, 3).empty());
    s.unassign(2, 2);
    EXPECT_EQ(column_candidates(s, 2, 2), std::vector<residue>{1});
}

// Definition-level recomputation: v is admissible iff, for every earlier row s assigned at
// column j, v - rows[s](j) differs from rows[t](j') - rows[s](j') at every other column j'
// where both rows are assigned.
std::vector<residue> reference_candidates(const PartialClique& st, std::size_t t, residue j) {
    const residue k = st.modulus().value();
    std::vector<residue> out;
    for (residue v = 0; v < k; ++v) {
        if (t >= 2 && j == 0 && v != 0) continue;
        bool ok = true;
        for (std::size_t s = 0; s < t && ok; ++s) {
            if (!st.assigned(s, j)) continue;
            const residue d = (v + k - st.value(s, j)) % k;
            for (residue jj = 0; jj < k && ok; ++jj)
                if (jj != j && st.assigned(s, jj) && st.assigned(t, jj))
                    ok = (st.value(t, jj) + k - st.value(s, jj)) % k != d;
        }
        if (ok) out.push_back(v);
    }
    return out;
}

void check_random_states(Rng& rng, int trials, residue k_min, residue k_span) {
    for (int trial = 0; trial < trials; ++trial) {
        const residue k = k_min + rng() % k_span;
        const std::size_t rows = 3 + rng() % 3;
        PartialClique st{Modulus(k), rows};
        // Column-major random fill, stopping at a random cell or a dead end.
        const std::size_t stop = rng() % ((rows - 2) * k);
        std::size_t d = 0;
        bool dead = false;
        for (residue j = 0; j < k && !dead; ++j)
            for (std::size_t t = 2; t < rows && !dead; ++t, ++d) {
                const auto cands = column_candidates(st, t, j);
                ASSERT_EQ(cands, reference_candidates(st, t, j)) << "k=" << k << " t=" << t << " j=" << j;
                if (d == stop || cands.empty()) {
                    dead = true;
                    break;
                }
                st.assign(t, j, cands[rng() % cands.size()]);
            }
    }
}

TEST(ColumnCandidates, MatchesDefinitionOnRandomStates) {
    Rng rng(31);
    check_random_states(rng, 1000, 3, 12);
}

// k > 64 takes the membership-array path instead of the bitmask one.
TEST(ColumnCandidates, MatchesDefinitionBeyondBitmaskWidth) {
    Rng rng(32);
    check_random_states(rng, 30, 60, 12);
}

TEST(Search, EvenModuliHaveNoTriangles) {
    for (std::uint64_t k : {2, 4, 6, 8, 10}) {
        const auto o = search(exhaustive(k, 3));
        EXPECT_EQ(o.status, SearchStatus::exhausted_none) << k;
        EXPECT_FALSE(o.certificate);
    }
}

TEST(Search, NineHasNoFourClique) {
    const auto o = search(exhaustive(9, 4));
    EXPECT_EQ(o.status, SearchStatus::exhausted_none);
    EXPECT_GT(o.stats.nodes, 0u);
    const auto three = search(exhaustive(9, 3));
    ASSERT_EQ(three.status, SearchStatus::found);
    EXPECT_EQ(three.certificate->size(), 3u);
}

TEST(Search, SeededK15) {
    SearchConfig c = exhaustive(15, 4);
    c.seed_rows = {normalize(known::k15())[2]};
    const auto o = search(c);
    ASSERT_EQ(o.status, SearchStatus::found);
    ASSERT_EQ(o.certificate->size(), 4u);
    EXPECT_TRUE(verify(o.certificate->unchecked()).ok);
    EXPECT_TRUE(is_normalized(*o.certificate));
    EXPECT_TRUE(testing::reference_is_clique(testing::raw_rows(o.certificate->unchecked()), 15));
}

TEST(Search, SeedWithoutCompletion) {
    SearchConfig c = exhaustive(9, 4);
    c.seed_rows = {ModFunction::linear(Modulus(9), 2)};
    EXPECT_EQ(search(c).status, SearchStatus::none_under_seed);
}

TEST(Search, FirstFoundPrime) {
    SearchConfig c = exhaustive(7, 7);
    c.mode = SearchMode::first_found;
    c.rng_seed = 42;
    const auto o = search(c);
    ASSERT_EQ(o.status, SearchStatus::found);
    EXPECT_EQ(o.certificate->size(), 7u);
    EXPECT_TRUE(verify(o.certificate->unchecked()).ok);
}

TEST(Search, WideModulus) {
    SearchConfig c = exhaustive(67, 3);
    c.mode = SearchMode::first_found;
    const auto o = search(c);
    ASSERT_EQ(o.status, SearchStatus::found);
    EXPECT_TRUE(testing::reference_is_clique(testing::raw_rows(o.certificate->unchecked()), 67));

    // k = 64 fills the whole mask word; even, so only the budget can end the run.
    SearchConfig w = exhaustive(64, 3);
    w.node_limit = 100'000;
    EXPECT_EQ(search(w).status, SearchStatus::limit_reached);
    SearchConfig p = exhaustive(61, 3);
    p.mode = SearchMode::first_found;
    EXPECT_EQ(search(p).status, SearchStatus::found);
}

TEST(Search, TargetTwoIsImmediate) {
    const auto o = search(exhaustive(6, 2));
    ASSERT_EQ(o.status, SearchStatus::found);
    EXPECT_EQ(serialize(*o.certificate), "6 2\n0 0 0 0 0 0\n0 1 2 3 4 5\n");
}

TEST(Search, AgreesWithOracle) {
    for (residue k = 2; k <= 5; ++k) {
        const std::size_t omega = oracle::brute_force_omega(oracle::SmallModulus(k));
        for (std::size_t s = 2; s <= k + 1; ++s) {
            const auto o = search(exhaustive(k, s));
            EXPECT_EQ(o.status, s <= omega ? SearchStatus::found : SearchStatus::exhausted_none)
                << "k=" << k << " s=" << s;
        }
    }
}

TEST(Search, NonexistenceIsMonotone) {
    for (residue k = 2; k <= 10; ++k) {
        bool none = false;
        for (std::size_t s = 2; s <= 5; ++s) {
            const auto o = search(exhaustive(k, s));
            if (none) {
                EXPECT_EQ(o.status, SearchStatus::exhausted_none) << k << " " << s;
            }
            none = o.status == SearchStatus::exhausted_none;
        }
    }
}

TEST(Search, WitnessesAreNormalized) {
    for (residue k : {5u, 7u, 9u, 11u, 15u}) {
        const auto o = search(exhaustive(k, 3 + (k >= 15)));
        ASSERT_EQ(o.status, SearchStatus::found) << k;
        EXPECT_TRUE(is_normalized(*o.certificate));
        EXPECT_EQ(normalize(*o.certificate), *o.certificate);
    }
}

TEST(Search, DeterministicSingleWorker) {
    const auto a = search(exhaustive(10, 3));
    const auto b = search(exhaustive(10, 3));
    EXPECT_EQ(a.stats.nodes, b.stats.nodes);

    SearchConfig c = exhaustive(15, 4);
    c.mode = SearchMode::first_found;
    c.rng_seed = 5;
    c.node_limit = 10'000'000;
    c.restarts = 10;
    const auto x = search(c);
    const auto y = search(c);
    ASSERT_EQ(x.status, SearchStatus::found);
    EXPECT_EQ(*x.certificate, *y.certificate);
    EXPECT_EQ(x.stats.nodes, y.stats.nodes);
}

TEST(Search, VerdictIndependentOfWorkers) {
    for (const auto& [k, s] : std::vector<std::pair<residue, std::size_t>>{{9, 4}, {10, 3}, {5, 5}, {7, 4}, {15, 4}}) {
        const auto base = search(exhaustive(k, s, 1)).status;
        for (unsigned w : {2u, 3u, 8u}) EXPECT_EQ(search(exhaustive(k, s, w)).status, base) << k << " " << s << " " << w;
    }
}

TEST(Search, MultiWorkerFirstFound) {
    SearchConfig c = exhaustive(15, 4, 4);
    c.mode = SearchMode::first_found;
    c.node_limit = 40'000'000;
    c.restarts = 40;
    const auto o = search(c);
    ASSERT_EQ(o.status, SearchStatus::found);
    EXPECT_TRUE(verify(o.certificate->unchecked()).ok);
}

TEST(Search, NodeLimit) {
    SearchConfig c = exhaustive(10, 3);
    c.node_limit = 1000;
    const auto o = search(c);
    EXPECT_EQ(o.status, SearchStatus::limit_reached);
    EXPECT_LE(o.stats.nodes, 1000u);

    c.worker_count = 3;
    EXPECT_EQ(search(c).status, SearchStatus::limit_reached);
}

TEST(Search, FirstFoundNeverClaimsNonexistence) {
    SearchConfig c = exhaustive(8, 3);
    c.mode = SearchMode::first_found;
    const auto o = search(c);
    EXPECT_EQ(o.status, SearchStatus::limit_reached);
    EXPECT_TRUE(o.stats.complete_traversal);
}

TEST(Search, ProgressReports) {
    SearchConfig c = exhaustive(9, 4);
    c.progress_interval = 5000;
    std::vector<std::uint64_t> seen;
    c.on_progress = [&](const SearchProgress& p) { seen.push_back(p.nodes); };
    search(c);
    EXPECT_GE(seen.size(), 10u);
    EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
}

TEST(Search, InvalidConfigs) {
    EXPECT_THROW(search(exhaustive(1, 3)), invalid_argument);
    EXPECT_THROW(search(exhaustive(5, 1)), invalid_argument);
    EXPECT_THROW(search(exhaustive(5, 3, 0)), invalid_argument);

    SearchConfig c = exhaustive(5, 3);
    c.seed_rows = {ModFunction::constant(Modulus(5), 1)};
    EXPECT_THROW(search(c), invalid_argument); // nonzero at 0
    c.seed_rows = {ModFunction::linear(Modulus(5), 1)};
    EXPECT_THROW(search(c), invalid_argument); // duplicates the identity
    c.seed_rows = {ModFunction::linear(Modulus(5), 2), ModFunction::linear(Modulus(5), 3)};
    EXPECT_THROW(search(c), invalid_argument); // too many
    c.seed_rows = {ModFunction::linear(Modulus(7), 2)};
    EXPECT_THROW(search(c), modulus_mismatch);
}

} // namespace
} // namespace bijclique
