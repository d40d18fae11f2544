#pragma once

// Backtracking search for cliques in G_k.
//
// Every clique can be brought to normal form (see normalize): rows[0] = 0,
// rows[1] = identity, rows[t](0) = 0 and rows 2.. strictly increasing. The
// search therefore fixes the first two rows and fills the remaining ones
// cell by cell in column-major order, keeping for every pair of rows the set
// of differences already realized. A value is a candidate for cell (t, j) iff
// its difference with every earlier row at column j is still unused for that
// pair.

#include "bijclique/certificate.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <vector>

namespace bijclique {

/// Rows 0 and 1 fixed to zero and identity; every other cell starts unassigned.
class PartialClique {
public:
    PartialClique(Modulus k, std::size_t rows)
        : k_(k), rows_(rows), values_(rows * k.value(), 0), assigned_(rows * k.value(), 0),
          used_(rows * (rows ? rows - 1 : 0) / 2 * k.value(), 0),
          used_bits_(k.value() <= 64 ? rows * (rows ? rows - 1 : 0) / 2 : 0, 0) {
        if (rows < 2) throw invalid_argument("a partial clique needs at least two rows");
        for (residue j = 0; j < k.value(); ++j) {
            assign(0, j, 0);
            assign(1, j, j);
        }
    }

    Modulus modulus() const noexcept { return k_; }
    std::size_t rows() const noexcept { return rows_; }

    bool assigned(std::size_t t, residue j) const { return assigned_[t * k_.value() + j] != 0; }
    residue value(std::size_t t, residue j) const { return values_[t * k_.value() + j]; }

    /// Whether difference d = rows[t] - rows[s] already occurs in some column, s < t.
    bool is_used(std::size_t s, std::size_t t, residue d) const { return used_[pair_offset(s, t) + d] != 0; }

    void assign(std::size_t t, residue j, residue v) {
        const std::size_t k = k_.value();
        values_[t * k + j] = v;
        assigned_[t * k + j] = 1;
        for (std::size_t s = 0; s < rows_; ++s) {
            if (s == t || !assigned(s, j)) continue;
            if (s < t) bump(s, t, k_.sub(v, value(s, j)), +1);
            else bump(t, s, k_.sub(value(s, j), v), +1);
        }
    }

    void unassign(std::size_t t, residue j) {
        const std::size_t k = k_.value();
        const residue v = values_[t * k + j];
        assigned_[t * k + j] = 0;
        for (std::size_t s = 0; s < rows_; ++s) {
            if (s == t || !assigned(s, j)) continue;
            if (s < t) bump(s, t, k_.sub(v, value(s, j)), -1);
            else bump(t, s, k_.sub(value(s, j), v), -1);
        }
    }

    /// Residues admissible at (t, j): no repeat of a used difference with any earlier row
    /// assigned at column j, and 0 only at column 0 for t >= 2. Appends to out.
    void candidates(std::size_t t, residue j, std::vector<residue>& out) const {
        const std::size_t k = k_.value();
        std::size_t earlier[64];
        std::vector<std::size_t> spill;
        std::size_t* ss = earlier;
        if (t > 64) {
            spill.resize(t);
            ss = spill.data();
        }
        std::size_t n = 0;
        for (std::size_t s = 0; s < t; ++s)
            if (assigned(s, j)) ss[n++] = s;

        const residue hi = (t >= 2 && j == 0) ? 1 : k_.value();
        if (!used_bits_.empty()) {
            // v is blocked by row s iff v - rows[s](j) is used, i.e. v lies in the used set
            // rotated up by rows[s](j).
            const std::uint64_t full = k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
            std::uint64_t blocked = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t s = ss[i];
                const std::uint64_t m = used_bits_[pair_index(s, t)];
                const residue c = values_[s * k + j];
                blocked |= c == 0 ? m : ((m << c) | (m >> (k - c))) & full;
            }
            std::uint64_t free = ~blocked & (hi == 64 ? full : (std::uint64_t{1} << hi) - 1);
            while (free) {
                out.push_back(static_cast<residue>(std::countr_zero(free)));
                free &= free - 1;
            }
            return;
        }
        const residue lo = 0;
        for (residue v = lo; v < hi; ++v) {
            bool ok = true;
            for (std::size_t i = 0; ok && i < n; ++i) {
                const std::size_t s = ss[i];
                ok = used_[pair_offset(s, t) + k_.sub(v, values_[s * k + j])] == 0;
            }
            if (ok) out.push_back(v);
        }
    }

    /// Requires every cell assigned.
    UncheckedCertificate to_certificate() const {
        std::vector<ModFunction> rows;
        rows.reserve(rows_);
        const std::size_t k = k_.value();
        for (std::size_t t = 0; t < rows_; ++t)
            rows.emplace_back(k_, std::vector<residue>(values_.begin() + static_cast<std::ptrdiff_t>(t * k),
                                                       values_.begin() + static_cast<std::ptrdiff_t>((t + 1) * k)));
        return UncheckedCertificate(k_, std::move(rows));
    }

private:
    static std::size_t pair_index(std::size_t s, std::size_t t) { return t * (t - 1) / 2 + s; }
    std::size_t pair_offset(std::size_t s, std::size_t t) const { return pair_index(s, t) * k_.value(); }

    void bump(std::size_t s, std::size_t t, residue d, int delta) {
        auto& count = used_[pair_offset(s, t) + d];
        count = static_cast<std::uint16_t>(count + delta);
        if (!used_bits_.empty()) {
            const std::uint64_t bit = std::uint64_t{1} << d;
            if (count) used_bits_[pair_index(s, t)] |= bit;
            else used_bits_[pair_index(s, t)] &= ~bit;
        }
    }

    Modulus k_;
    std::size_t rows_;
    std::vector<residue> values_;
    std::vector<std::uint8_t> assigned_;
    std::vector<std::uint16_t> used_;
    std::vector<std::uint64_t> used_bits_; // mirror of used_ > 0, only for k <= 64
};

/// The pruning kernel. Preconditions: row t is assigned before column j, rows < t are
/// assigned at column j, rows > t are not.
inline std::vector<residue> column_candidates(const PartialClique& state, std::size_t t, residue j) {
    std::vector<residue> out;
    state.candidates(t, j, out);
    return out;
}

enum class SearchMode { exhaustive, first_found };

struct SearchProgress {
    std::uint64_t nodes;
    std::size_t max_depth;
    double elapsed_seconds;
};

struct SearchConfig {
    std::uint64_t k = 2;
    std::size_t target_size = 2;
    SearchMode mode = SearchMode::exhaustive;
    std::optional<std::uint64_t> node_limit;
    /// first_found: number of randomized attempts, each with node_limit / restarts nodes.
    std::uint64_t restarts = 1;
    std::uint64_t rng_seed = 0;
    /// Fixed rows 2, 3, ...; each must vanish at 0 and be adjacent to zero, identity and each other.
    std::vector<ModFunction> seed_rows;
    unsigned worker_count = 1;
    /// Report roughly every progress_interval nodes (0 disables).
    std::uint64_t progress_interval = 0;
    std::function<void(const SearchProgress&)> on_progress;
};

enum class SearchStatus {
    found,
    /// Exhaustive, unseeded, no limit hit: no clique of target_size exists in G_k.
    exhausted_none,
    /// Exhaustive with seed rows: no completion of the given seed rows exists.
    none_under_seed,
    limit_reached,
};

struct SearchStatistics {
    std::uint64_t nodes = 0;
    std::size_t max_depth = 0;
    double wall_seconds = 0;
    std::uint64_t attempts = 0;
    std::size_t subtrees = 0;
    /// first_found only: some attempt finished its whole tree without a witness.
    bool complete_traversal = false;
};

struct SearchOutcome {
    SearchStatus status;
    std::optional<Certificate> certificate;
    SearchStatistics stats;
};

inline std::string_view status_name(SearchStatus s) {
    switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::exhausted_none: return "exhausted_none";
    case SearchStatus::none_under_seed: return "none_under_seed";
    case SearchStatus::limit_reached: return "limit_reached";
    }
    return "?";
}

namespace detail {

struct Cell {
    std::uint32_t row;
    residue column;
};

struct SearchPlan {
    Modulus k;
    std::size_t rows;
    std::size_t first_free;
    std::vector<ModFunction> seeds;
    std::vector<Cell> cells;
};

inline SearchPlan make_plan(const SearchConfig& cfg) {
    const Modulus k(cfg.k);
    if (cfg.target_size < 2) throw invalid_argument("target size must be at least 2");
    if (cfg.worker_count < 1) throw invalid_argument("worker count must be at least 1");
    if (cfg.seed_rows.size() + 2 > cfg.target_size)
        throw invalid_argument("more seed rows than the target size leaves room for");
    std::vector<ModFunction> fixed{ModFunction::zero(k), ModFunction::identity(k)};
    for (const auto& r : cfg.seed_rows) {
        if (r.modulus() != k) throw modulus_mismatch(k.value(), r.modulus().value());
        if (r[0] != 0) throw invalid_argument("seed rows must vanish at 0 (normal form)");
        fixed.push_back(r);
    }
    if (!verify(UncheckedCertificate(k, fixed)).ok)
        throw invalid_argument("seed rows together with zero and identity are not a clique");

    SearchPlan plan{k, cfg.target_size, 2 + cfg.seed_rows.size(), cfg.seed_rows, {}};
    for (residue j = 0; j < k.value(); ++j)
        for (std::size_t t = plan.first_free; t < plan.rows; ++t)
            plan.cells.push_back({static_cast<std::uint32_t>(t), j});
    return plan;
}

struct SharedControl {
    std::atomic<bool> stop{false};
    std::atomic<std::uint64_t> nodes{0};
    std::optional<std::uint64_t> global_limit;
    std::atomic<bool> limit_hit{false};
    const SearchConfig* cfg = nullptr;
    std::chrono::steady_clock::time_point start;
    std::mutex progress_mutex;
    std::atomic<std::size_t> max_depth{0};
};

enum class RunResult { found, exhausted, budget, stopped };

/// Depth-first engine over the plan's cell sequence. One per worker / attempt.
class Searcher {
public:
    static constexpr std::uint64_t flush_every = 1024;

    Searcher(const SearchPlan& plan, SharedControl& ctl)
        : plan_(plan), ctl_(ctl), state_(plan.k, plan.rows), tied_(plan.rows, 1),
          candidates_(plan.cells.size()), pos_(plan.cells.size(), 0), placed_(plan.cells.size(), 0),
          untied_(plan.cells.size(), 0) {
        for (std::size_t i = 0; i < plan.seeds.size(); ++i)
            for (residue j = 0; j < plan.k.value(); ++j) state_.assign(2 + i, j, plan.seeds[i][j]);
        for (auto& c : candidates_) c.reserve(plan.k.value());
    }

    void set_rng(std::uint64_t seed) { rng_.emplace(seed); }
    void set_budget(std::uint64_t budget) { budget_ = budget; }

    /// Assigns cell d to v without counting a node (prefix replay).
    void place(std::size_t d, residue v) {
        const Cell c = plan_.cells[d];
        untied_[d] = 0;
        if (c.row > plan_.first_free && tied_[c.row] && v != state_.value(c.row - 1, c.column)) {
            tied_[c.row] = 0;
            untied_[d] = 1;
        }
        state_.assign(c.row, c.column, v);
    }

    void retract(std::size_t d) {
        const Cell c = plan_.cells[d];
        state_.unassign(c.row, c.column);
        if (untied_[d]) tied_[c.row] = 1;
    }

    /// Candidates for cell d given cells < d assigned, with the lexicographic bound applied.
    void fill_candidates(std::size_t d, std::vector<residue>& out) const {
        out.clear();
        const Cell c = plan_.cells[d];
        state_.candidates(c.row, c.column, out);
        if (c.row > plan_.first_free && tied_[c.row]) {
            const residue lower = state_.value(c.row - 1, c.column);
            out.erase(out.begin(), std::lower_bound(out.begin(), out.end(), lower));
        }
    }

    /// Explores the subtree below cells [0, start).
    RunResult run(std::size_t start) {
        const std::size_t depth_count = plan_.cells.size();
        if (start == depth_count) return RunResult::found;
        std::size_t depth = start;
        enter(depth);
        for (;;) {
            if (placed_[depth]) {
                retract(depth);
                placed_[depth] = 0;
            }
            if (pos_[depth] == candidates_[depth].size()) {
                if (depth == start) return RunResult::exhausted;
                --depth;
                continue;
            }
            place(depth, candidates_[depth][pos_[depth]++]);
            placed_[depth] = 1;
            ++nodes_;
            if (depth + 1 > max_depth_) max_depth_ = depth + 1;
            if (budget_ && nodes_ >= *budget_ && depth + 1 < depth_count) return RunResult::budget;
            if (nodes_ - flushed_ >= flush_every && !flush()) return RunResult::stopped;
            if (depth + 1 == depth_count) return RunResult::found;
            enter(++depth);
        }
    }

    /// Publishes pending node counts; false if the search should stop.
    bool flush() {
        const std::uint64_t delta = nodes_ - flushed_;
        flushed_ = nodes_;
        const std::uint64_t before = ctl_.nodes.fetch_add(delta);
        const std::uint64_t total = before + delta;
        std::size_t seen = ctl_.max_depth.load();
        while (max_depth_ > seen && !ctl_.max_depth.compare_exchange_weak(seen, max_depth_)) {}
        const SearchConfig& cfg = *ctl_.cfg;
        if (cfg.progress_interval && cfg.on_progress &&
            before / cfg.progress_interval != total / cfg.progress_interval) {
            std::lock_guard lock(ctl_.progress_mutex);
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - ctl_.start).count();
            cfg.on_progress(SearchProgress{total, ctl_.max_depth.load(), elapsed});
        }
        if (ctl_.global_limit && total >= *ctl_.global_limit) {
            ctl_.limit_hit = true;
            ctl_.stop = true;
        }
        return !ctl_.stop.load(std::memory_order_relaxed);
    }

    const PartialClique& state() const { return state_; }
    std::uint64_t nodes() const { return nodes_; }

private:
    void enter(std::size_t d) {
        fill_candidates(d, candidates_[d]);
        if (rng_) {
            auto& c = candidates_[d];
            for (std::size_t i = c.size(); i > 1; --i) std::swap(c[i - 1], c[(*rng_)() % i]);
        }
        pos_[d] = 0;
    }

    const SearchPlan& plan_;
    SharedControl& ctl_;
    PartialClique state_;
    std::vector<std::uint8_t> tied_;
    std::vector<std::vector<residue>> candidates_;
    std::vector<std::size_t> pos_;
    std::vector<std::uint8_t> placed_;
    std::vector<std::uint8_t> untied_;
    std::optional<std::mt19937_64> rng_;
    std::optional<std::uint64_t> budget_;
    std::uint64_t nodes_ = 0;
    std::uint64_t flushed_ = 0;
    std::size_t max_depth_ = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline Certificate witness(const Searcher& s) {
    // Re-verified through the certificate module; the searcher does not certify itself.
    return normalize(Certificate::check(s.state().to_certificate()));
}

struct WitnessSlot {
    std::mutex mutex;
    std::optional<Certificate> certificate;

    void offer(const Searcher& s) {
        Certificate c = witness(s);
        std::lock_guard lock(mutex);
        if (!certificate) certificate = std::move(c);
    }
};

inline std::vector<std::vector<residue>> split_frontier(const SearchPlan& plan, SharedControl& ctl,
                                                        std::size_t wanted, WitnessSlot& slot,
                                                        std::uint64_t& nodes) {
    std::vector<std::vector<residue>> frontier{{}};
    std::vector<residue> buf;
    while (frontier.size() < wanted && frontier.front().size() < plan.cells.size()) {
        std::vector<std::vector<residue>> next;
        for (const auto& prefix : frontier) {
            Searcher s(plan, ctl);
            for (std::size_t d = 0; d < prefix.size(); ++d) s.place(d, prefix[d]);
            s.fill_candidates(prefix.size(), buf);
            for (const residue v : buf) {
                auto child = prefix;
                child.push_back(v);
                ++nodes;
                if (child.size() == plan.cells.size()) {
                    s.place(prefix.size(), v);
                    slot.offer(s);
                    return {};
                }
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    return frontier;
}

} // namespace detail

/// Searches for a target_size-clique in G_k. Found witnesses are verified and normalized.
inline SearchOutcome search(const SearchConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const detail::SearchPlan plan = detail::make_plan(cfg);
    detail::SharedControl ctl;
    ctl.cfg = &cfg;
    ctl.start = start;
    detail::WitnessSlot slot;
    SearchStatistics stats;
    bool exhausted_all = false;

    const unsigned workers = cfg.worker_count;

    if (plan.cells.empty()) {
        detail::Searcher s(plan, ctl);
        slot.offer(s);
    } else if (cfg.mode == SearchMode::exhaustive) {
        stats.attempts = 1;
        if (workers == 1) {
            detail::Searcher s(plan, ctl);
            if (cfg.node_limit) s.set_budget(*cfg.node_limit);
            const auto r = s.run(0);
            s.flush();
            if (r == detail::RunResult::found) slot.offer(s);
            exhausted_all = r == detail::RunResult::exhausted;
            stats.subtrees = 1;
        } else {
            ctl.global_limit = cfg.node_limit;
            std::uint64_t split_nodes = 0;
            const auto frontier = detail::split_frontier(plan, ctl, std::size_t{workers} * 8, slot, split_nodes);
            ctl.nodes += split_nodes;
            stats.subtrees = frontier.size();
            std::atomic<std::size_t> next{0};
            std::atomic<std::size_t> completed{0};
            auto work = [&] {
                while (!ctl.stop) {
                    const std::size_t i = next++;
                    if (i >= frontier.size()) return;
                    detail::Searcher s(plan, ctl);
                    const auto& prefix = frontier[i];
                    for (std::size_t d = 0; d < prefix.size(); ++d) s.place(d, prefix[d]);
                    const auto r = s.run(prefix.size());
                    s.flush();
                    if (r == detail::RunResult::found) {
                        slot.offer(s);
                        ctl.stop = true;
                    } else if (r == detail::RunResult::exhausted) {
                        ++completed;
                    }
                }
            };
            if (!slot.certificate) {
                std::vector<std::thread> pool;
                for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
                for (auto& t : pool) t.join();
            }
            exhausted_all = !slot.certificate && completed == frontier.size() && !ctl.limit_hit;
        }
    } else {
        const std::uint64_t attempts = std::max<std::uint64_t>(1, cfg.restarts);
        const std::optional<std::uint64_t> per_attempt =
            cfg.node_limit ? std::optional(std::max<std::uint64_t>(1, *cfg.node_limit / attempts)) : std::nullopt;
        std::atomic<std::uint64_t> attempts_run{0};
        std::atomic<bool> complete{false};
        auto work = [&](unsigned w) {
            for (std::uint64_t a = w; a < attempts && !ctl.stop; a += workers) {
                ++attempts_run;
                detail::Searcher s(plan, ctl);
                s.set_rng(detail::splitmix64(cfg.rng_seed + a));
                if (per_attempt) s.set_budget(*per_attempt);
                const auto r = s.run(0);
                s.flush();
                if (r == detail::RunResult::found) {
                    slot.offer(s);
                    ctl.stop = true;
                } else if (r == detail::RunResult::exhausted) {
                    complete = true;
                    ctl.stop = true;
                }
            }
        };
        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
            for (auto& t : pool) t.join();
        }
        stats.attempts = attempts_run;
        stats.complete_traversal = complete;
    }

    stats.nodes = ctl.nodes;
    stats.max_depth = ctl.max_depth;
    stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (slot.certificate) return {SearchStatus::found, std::move(slot.certificate), stats};
    if (exhausted_all)
        return {cfg.seed_rows.empty() ? SearchStatus::exhausted_none : SearchStatus::none_under_seed, std::nullopt,
                stats};
    return {SearchStatus::limit_reached, std::nullopt, stats};
}

} // namespace bijclique
