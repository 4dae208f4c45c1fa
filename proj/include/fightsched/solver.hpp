#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "fightsched/model.hpp"

namespace fightsched {

enum class SolveStatus { satisfiable, infeasible, timeout };

inline const char* solve_status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::satisfiable: return "satisfiable";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::timeout: return "timeout";
    }
    return "?";
}

struct SolveStats {
    std::uint64_t nodes = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
    double wall_seconds = 0.0;
};

struct SolveOutcome {
    SolveStatus status;
    std::optional<Schedule> schedule;  // present iff satisfiable
    SolveStats stats;
};

namespace detail {

enum class RunResult { satisfiable, infeasible, timeout, budget_exhausted };

/// Bound-consistency propagation over integer linear constraints plus
/// depth-first search with chronological backtracking. Branching follows a
/// fixed variable order (x in (round, room, team, position) order, the team
/// order given by the caller), value 1 first; y variables are never branched
/// on since propagation pins them once the x part is fixed.
class SearchEngine {
public:
    SearchEngine(const ConstraintModel& model, const std::vector<int>& team_order) : model_(model) {
        const int vars = model.var_count();
        lo_.assign(vars, 0);
        hi_.assign(vars, 1);

        cons_.reserve(model.constraints.size());
        occ_.assign(vars, {});
        for (const auto& src : model.constraints) {
            Cons c;
            c.begin = static_cast<int>(term_var_.size());
            int act_lo = 0, act_hi = 0, max_abs = 0;
            for (auto [v, coef] : src.terms) {
                term_var_.push_back(v);
                term_coef_.push_back(coef);
                occ_[v].emplace_back(static_cast<int>(cons_.size()), coef);
                if (coef > 0) act_hi += coef;   // lo contribution is 0
                else act_lo += coef;
                max_abs = std::max(max_abs, coef < 0 ? -coef : coef);
            }
            c.end = static_cast<int>(term_var_.size());
            c.sense = src.sense;
            c.rhs = src.rhs;
            c.act_lo = act_lo;
            c.act_hi = act_hi;
            c.max_abs = max_abs;
            cons_.push_back(c);
        }

        // branch order: (round, room, team, position)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < model.room_count; ++k)
                for (int i : team_order)
                    for (int q = 0; q < 3; ++q) order_.push_back(model.x_index(i, j, k, q));
    }

    std::uint64_t nodes() const { return nodes_; }
    std::uint64_t propagations() const { return propagations_; }

    /// Satisfying assignment after a satisfiable run.
    std::vector<int> assignment() const { return {lo_.begin(), lo_.end()}; }

    RunResult run(std::chrono::steady_clock::time_point deadline, const std::atomic<bool>* stop,
                  std::uint64_t node_budget) {
        auto out_of_time = [&] {
            if (stop && stop->load(std::memory_order_relaxed)) return true;
            return std::chrono::steady_clock::now() >= deadline;
        };

        // root propagation
        for (int c = 0; c < static_cast<int>(cons_.size()); ++c) enqueue(c);
        if (!propagate()) return RunResult::infeasible;

        struct Frame {
            int var;
            int order_pos;
            std::size_t trail_mark;
            bool flipped;  // second value already tried
        };
        std::vector<Frame> frames;
        int pos = 0;

        while (true) {
            if ((nodes_ & 0x3ff) == 0 && out_of_time()) return RunResult::timeout;
            while (pos < static_cast<int>(order_.size()) && lo_[order_[pos]] == hi_[order_[pos]]) ++pos;
            if (pos == static_cast<int>(order_.size())) return RunResult::satisfiable;
            if (nodes_ >= node_budget) return RunResult::budget_exhausted;

            int var = order_[pos];
            ++nodes_;
            frames.push_back({var, pos, trail_.size(), false});
            bool ok = assign(var, 1) && propagate();
            while (!ok) {
                if (frames.empty()) return RunResult::infeasible;
                Frame& f = frames.back();
                undo_to(f.trail_mark);
                if (!f.flipped) {
                    f.flipped = true;
                    pos = f.order_pos;
                    ++nodes_;
                    ok = assign(f.var, 0) && propagate();
                } else {
                    frames.pop_back();
                }
            }
        }
    }

private:
    struct Cons {
        int begin, end;
        Sense sense;
        int rhs;
        int act_lo, act_hi;  // activity bounds under current domains
        int max_abs;
        bool queued = false;
    };

    struct TrailEntry {
        int var;
        int old_lo, old_hi;
    };

    void apply_delta(int var, int d_lo, int d_hi) {
        // activity updates for all constraints watching var
        for (auto [ci, coef] : occ_[var]) {
            Cons& c = cons_[ci];
            if (coef > 0) {
                c.act_lo += coef * d_lo;
                c.act_hi += coef * d_hi;
            } else {
                c.act_lo += coef * d_hi;
                c.act_hi += coef * d_lo;
            }
        }
    }

    bool set_lo(int var, int value) {
        if (value <= lo_[var]) return true;
        if (value > hi_[var]) return false;
        trail_.push_back({var, lo_[var], hi_[var]});
        int d = value - lo_[var];
        lo_[var] = value;
        apply_delta(var, d, 0);
        for (const auto& oc : occ_[var]) enqueue(oc.first);
        return true;
    }

    bool set_hi(int var, int value) {
        if (value >= hi_[var]) return true;
        if (value < lo_[var]) return false;
        trail_.push_back({var, lo_[var], hi_[var]});
        int d = value - hi_[var];
        hi_[var] = value;
        apply_delta(var, 0, d);
        for (const auto& oc : occ_[var]) enqueue(oc.first);
        return true;
    }

    bool assign(int var, int value) { return set_lo(var, value) && set_hi(var, value); }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            TrailEntry e = trail_.back();
            trail_.pop_back();
            apply_delta(e.var, e.old_lo - lo_[e.var], e.old_hi - hi_[e.var]);
            lo_[e.var] = e.old_lo;
            hi_[e.var] = e.old_hi;
        }
        for (int ci : queue_) cons_[ci].queued = false;
        queue_.clear();
    }

    void enqueue(int ci) {
        if (!cons_[ci].queued) {
            cons_[ci].queued = true;
            queue_.push_back(ci);
        }
    }

    bool propagate() {
        while (!queue_.empty()) {
            int ci = queue_.back();
            queue_.pop_back();
            cons_[ci].queued = false;
            ++propagations_;
            Cons& c = cons_[ci];
            if (c.sense != Sense::ge) {
                if (c.act_lo > c.rhs) {
                    fail_cleanup();
                    return false;
                }
                int slack = c.rhs - c.act_lo;
                if (slack < c.max_abs) {
                    for (int t = c.begin; t < c.end; ++t) {
                        int v = term_var_[t], coef = term_coef_[t];
                        if (lo_[v] == hi_[v]) continue;
                        if (coef > 0 && coef * (hi_[v] - lo_[v]) > slack) {
                            if (!set_hi(v, lo_[v] + slack / coef)) { fail_cleanup(); return false; }
                        } else if (coef < 0 && -coef * (hi_[v] - lo_[v]) > slack) {
                            if (!set_lo(v, hi_[v] - slack / -coef)) { fail_cleanup(); return false; }
                        }
                    }
                }
            }
            if (c.sense != Sense::le) {
                if (c.act_hi < c.rhs) {
                    fail_cleanup();
                    return false;
                }
                int surplus = c.act_hi - c.rhs;
                if (surplus < c.max_abs) {
                    for (int t = c.begin; t < c.end; ++t) {
                        int v = term_var_[t], coef = term_coef_[t];
                        if (lo_[v] == hi_[v]) continue;
                        if (coef > 0 && coef * (hi_[v] - lo_[v]) > surplus) {
                            if (!set_lo(v, hi_[v] - surplus / coef)) { fail_cleanup(); return false; }
                        } else if (coef < 0 && -coef * (hi_[v] - lo_[v]) > surplus) {
                            if (!set_hi(v, lo_[v] + surplus / -coef)) { fail_cleanup(); return false; }
                        }
                    }
                }
            }
        }
        return true;
    }

    void fail_cleanup() {
        for (int ci : queue_) cons_[ci].queued = false;
        queue_.clear();
    }

    const ConstraintModel& model_;
    std::vector<int> lo_, hi_;
    std::vector<Cons> cons_;
    std::vector<int> term_var_, term_coef_;
    std::vector<std::vector<std::pair<int, int>>> occ_;  // var -> (constraint, coef)
    std::vector<TrailEntry> trail_;
    std::vector<int> queue_;
    std::uint64_t nodes_ = 0, propagations_ = 0;
    std::vector<int> order_;
};

}  // namespace detail

/// Complete search for a satisfying assignment. Returns satisfiable with the
/// decoded schedule, infeasible only after exhausting the search space, or
/// timeout once the wall-clock limit passes.
///
/// Runtimes of the plain depth-first search are heavily tailed in the team
/// order, so the search restarts with a doubled node budget and a reshuffled
/// team order whenever the budget runs out; budgets grow without bound, which
/// keeps the search complete. Deterministic for a fixed (model, seed); the
/// seed only selects the team orders used for branching.
inline SolveOutcome solve(const ConstraintModel& model, double time_limit_seconds = 300.0,
                          std::uint64_t seed = 0, const std::atomic<bool>* stop = nullptr) {
    const auto start = std::chrono::steady_clock::now();
    const auto deadline =
        start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(time_limit_seconds));

    SolveOutcome result;
    std::uint64_t budget = 1 << 14;
    std::vector<int> team_order(model.team_count);

    for (std::uint64_t restart = 0;; ++restart) {
        std::iota(team_order.begin(), team_order.end(), 0);
        std::uint64_t order_seed = restart == 0 ? seed : splitmix64(seed + restart);
        if (order_seed != 0) {
            std::mt19937_64 rng(order_seed);
            std::shuffle(team_order.begin(), team_order.end(), rng);
        }
        detail::SearchEngine engine(model, team_order);
        auto run = engine.run(deadline, stop, budget);
        result.stats.nodes += engine.nodes();
        result.stats.propagations += engine.propagations();
        result.stats.restarts = restart;
        result.stats.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        switch (run) {
            case detail::RunResult::satisfiable:
                result.status = SolveStatus::satisfiable;
                result.schedule = decode(model, engine.assignment());
                return result;
            case detail::RunResult::infeasible:
                result.status = SolveStatus::infeasible;
                return result;
            case detail::RunResult::timeout:
                result.status = SolveStatus::timeout;
                return result;
            case detail::RunResult::budget_exhausted:
                budget *= 2;
                break;
        }
    }
}

/// Runs one search per seed concurrently and returns the first conclusive
/// (non-timeout) outcome; statistics then depend on thread timing.
inline SolveOutcome solve_portfolio(const ConstraintModel& model, double time_limit_seconds,
                                    std::span<const std::uint64_t> seeds) {
    std::atomic<bool> stop{false};
    std::mutex mu;
    std::optional<SolveOutcome> winner;
    std::vector<std::thread> workers;
    for (std::uint64_t seed : seeds)
        workers.emplace_back([&, seed] {
            SolveOutcome outcome = solve(model, time_limit_seconds, seed, &stop);
            if (outcome.status == SolveStatus::timeout) return;
            std::lock_guard<std::mutex> lock(mu);
            if (!winner) {
                winner = std::move(outcome);
                stop.store(true, std::memory_order_relaxed);
            }
        });
    for (auto& w : workers) w.join();
    if (winner) return *winner;
    SolveOutcome out;
    out.status = SolveStatus::timeout;
    out.stats.wall_seconds = time_limit_seconds;
    return out;
}

}  // namespace fightsched
