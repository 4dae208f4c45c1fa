#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "fightsched/bipartite.hpp"
#include "fightsched/schedule.hpp"

namespace fightsched {

/// The team-problem graph G(S): left vertices are the teams of `subset` (in
/// the given order), right vertices the problems appearing in their
/// portfolios (ascending by id), with an edge whenever a team announces a
/// problem. Every team vertex has degree exactly 3.
struct PortfolioGraph {
    BipartiteGraph graph{0, 0};
    std::vector<int> team_at;     // left index -> team index
    std::vector<int> problem_at;  // right index -> problem id

    int right_of_problem(int problem) const {
        auto it = std::lower_bound(problem_at.begin(), problem_at.end(), problem);
        if (it == problem_at.end() || *it != problem) return -1;
        return static_cast<int>(it - problem_at.begin());
    }

    int problem_degree(int problem) const {
        int r = right_of_problem(problem);
        return r < 0 ? 0 : graph.degree_right(r);
    }
};

inline PortfolioGraph portfolio_graph(const Instance& inst, std::span<const int> subset) {
    PortfolioGraph pg;
    pg.team_at.assign(subset.begin(), subset.end());
    for (int t : subset)
        for (int p : inst.portfolios[t]) pg.problem_at.push_back(p);
    std::sort(pg.problem_at.begin(), pg.problem_at.end());
    pg.problem_at.erase(std::unique(pg.problem_at.begin(), pg.problem_at.end()), pg.problem_at.end());
    pg.graph = BipartiteGraph(static_cast<int>(subset.size()), static_cast<int>(pg.problem_at.size()));
    for (size_t i = 0; i < subset.size(); ++i)
        for (int p : inst.portfolios[subset[i]])
            pg.graph.add_edge(static_cast<int>(i), pg.right_of_problem(p));
    return pg;
}

inline PortfolioGraph portfolio_graph(const Instance& inst) {
    std::vector<int> all(inst.team_count());
    std::iota(all.begin(), all.end(), 0);
    return portfolio_graph(inst, all);
}

namespace detail {

/// A fine quadruple among `candidates`: 4 teams whose portfolio graph has
/// maximum degree 3, i.e. no problem common to all four. One exists if and
/// only if no problem lies in every candidate's portfolio, and the
/// constructive case split below finds one exactly in that case. Choices are
/// always the lowest-index eligible team, so the result is deterministic.
inline std::optional<std::array<int, 4>> find_fine_quadruple_in(const Instance& inst,
                                                                std::span<const int> candidates) {
    if (candidates.size() < 4) return std::nullopt;
    auto avoids = [&](int team, int problem) { return !inst.has_problem(team, problem); };
    auto first_avoider = [&](int problem, std::initializer_list<int> taken) -> int {
        for (int t : candidates) {
            if (std::find(taken.begin(), taken.end(), t) != taken.end()) continue;
            if (avoids(t, problem)) return t;
        }
        return -1;
    };
    auto first_other = [&](std::initializer_list<int> taken) -> int {
        for (int t : candidates)
            if (std::find(taken.begin(), taken.end(), t) == taken.end()) return t;
        return -1;
    };

    const int t1 = candidates[0];
    const int p1 = inst.portfolios[t1][0];
    const int t2 = first_avoider(p1, {t1});
    if (t2 < 0) return std::nullopt;

    std::vector<int> shared;
    for (int p : inst.portfolios[t1])
        if (inst.has_problem(t2, p)) shared.push_back(p);

    std::array<int, 4> quad{t1, t2, -1, -1};
    if (shared.empty()) {
        quad[2] = first_other({t1, t2});
        quad[3] = first_other({t1, t2, quad[2]});
    } else if (shared.size() == 1) {
        quad[2] = first_avoider(shared[0], {t1, t2});
        if (quad[2] < 0) return std::nullopt;
        quad[3] = first_other({t1, t2, quad[2]});
    } else {
        quad[2] = first_avoider(shared[0], {t1, t2});
        if (quad[2] < 0) return std::nullopt;
        if (avoids(quad[2], shared[1])) {
            quad[3] = first_other({t1, t2, quad[2]});
        } else {
            quad[3] = first_avoider(shared[1], {t1, t2, quad[2]});
            if (quad[3] < 0) return std::nullopt;
        }
    }
    if (quad[2] < 0 || quad[3] < 0) return std::nullopt;
    std::sort(quad.begin(), quad.end());
    return quad;
}

}  // namespace detail

/// Searches a fine quadruple over all teams; empty when none exists (some
/// problem is in every portfolio).
inline std::optional<std::array<int, 4>> find_fine_quadruple(const Instance& inst) {
    std::vector<int> all(inst.team_count());
    std::iota(all.begin(), all.end(), 0);
    return detail::find_fine_quadruple_in(inst, all);
}

/// Witness for a special profile: the common core triple and the three
/// exceptional teams carrying one core problem each.
struct SpecialProfileWitness {
    std::array<int, 3> core_problems;
    std::array<int, 3> exceptional_teams;
};

/// Detects the obstruction structure for two disjoint fine quadruples:
/// n-3 portfolios equal to a common triple {p_i,p_j,p_k} and 3 exceptional
/// portfolios {p_i,q1,q2}, {p_j,q3,q4}, {p_k,q5,q6} with every q outside the
/// core triple.
inline std::optional<SpecialProfileWitness> is_special_profile(const Instance& inst) {
    const int n = inst.team_count();
    if (n < 4) return std::nullopt;
    auto sorted_portfolio = [&](int t) {
        auto p = inst.portfolios[t];
        std::sort(p.begin(), p.end());
        return p;
    };
    // candidate core = any portfolio shared by exactly n-3 teams
    for (int t = 0; t < n; ++t) {
        auto core = sorted_portfolio(t);
        std::vector<int> rest;
        int copies = 0;
        for (int u = 0; u < n; ++u) {
            if (sorted_portfolio(u) == core) ++copies;
            else rest.push_back(u);
        }
        if (copies != n - 3 || rest.size() != 3) continue;
        // each exceptional team holds exactly one core problem, all three
        // distinct, and its other problems avoid the core entirely
        std::array<int, 3> carrier{-1, -1, -1};
        bool ok = true;
        for (int u : rest) {
            int held = -1;
            for (int p : inst.portfolios[u]) {
                bool in_core = std::find(core.begin(), core.end(), p) != core.end();
                if (!in_core) continue;
                if (held >= 0) { ok = false; break; }
                held = static_cast<int>(std::find(core.begin(), core.end(), p) - core.begin());
            }
            if (!ok || held < 0 || carrier[held] >= 0) { ok = false; break; }
            carrier[held] = u;
        }
        if (!ok) continue;
        return SpecialProfileWitness{{core[0], core[1], core[2]},
                                     {carrier[0], carrier[1], carrier[2]}};
    }
    return std::nullopt;
}

/// Why simple_schedule returned no schedule.
enum class SimpleScheduleReason {
    none,              // a schedule was produced
    avoidance,         // the problem-avoidance condition for the 4-rooms fails
    special_profile,   // two 4-rooms requested and the profile is special
    unsupported_plan,  // 3 or more 4-rooms: no known criterion, use the solver
    search_exhausted,  // defensive; not reachable when the theory holds
};

struct SimpleScheduleResult {
    std::optional<Schedule> schedule;
    SimpleScheduleReason reason = SimpleScheduleReason::none;
};

inline const char* simple_schedule_reason_name(SimpleScheduleReason r) {
    switch (r) {
        case SimpleScheduleReason::none: return "ok";
        case SimpleScheduleReason::avoidance: return "problem-avoidance condition violated";
        case SimpleScheduleReason::special_profile: return "special profile";
        case SimpleScheduleReason::unsupported_plan: return "3 or more 4-rooms: not constructible, use the solver";
        case SimpleScheduleReason::search_exhausted: return "room search exhausted";
    }
    return "?";
}

namespace detail {

/// Fills problem/round assignments for one room whose composition is fixed
/// across all three rounds: a proper 3-edge-coloring of the room's portfolio
/// graph assigns each team one problem per round with no within-Fight repeat.
inline void schedule_room(const Instance& inst, std::span<const int> teams, int room, Schedule& sched) {
    auto pg = portfolio_graph(inst, teams);
    if (pg.graph.max_degree() > 3)
        throw std::logic_error("room portfolio graph has degree > 3; room composition is invalid");
    auto coloring = konig_edge_coloring(pg.graph);
    for (int e = 0; e < pg.graph.edge_count(); ++e) {
        auto [left, right] = pg.graph.edge(e);
        int round = coloring.color[e];
        int team = pg.team_at[left];
        sched.at(round, team).problem = pg.problem_at[right];
        sched.at(round, team).room = room;
    }
    for (int j = 0; j < 3; ++j)
        for (size_t i = 0; i < teams.size(); ++i)
            sched.at(j, teams[i]).stage = static_cast<Stage>(i);
}

}  // namespace detail

/// Constructs a schedule whose room composition is identical in all three
/// rounds, when one exists for the instance's room plan:
///   - no 4-rooms: always constructible;
///   - one 4-room: constructible iff every problem is avoided by >= 1 team;
///   - two 4-rooms: constructible iff every problem is avoided by >= 2 teams
///     and the profile is not special.
/// The 4-rooms are filled with fine quadruples, remaining teams go to
/// 3-rooms in input order, and stages follow the within-room team order.
inline SimpleScheduleResult simple_schedule(const Instance& inst) {
    const int n = inst.team_count();
    std::vector<int> four_rooms, three_rooms;
    for (int k = 0; k < inst.room_count(); ++k)
        (inst.room_plan[k] == 4 ? four_rooms : three_rooms).push_back(k);
    if (four_rooms.size() >= 3) return {std::nullopt, SimpleScheduleReason::unsupported_plan};

    auto avoiders = inst.avoider_counts();
    std::vector<std::array<int, 4>> quads;

    if (four_rooms.size() == 1) {
        for (int l = 1; l <= inst.problem_count; ++l)
            if (avoiders[l] < 1) return {std::nullopt, SimpleScheduleReason::avoidance};
        auto quad = find_fine_quadruple(inst);
        if (!quad) return {std::nullopt, SimpleScheduleReason::search_exhausted};
        quads.push_back(*quad);
    } else if (four_rooms.size() == 2) {
        for (int l = 1; l <= inst.problem_count; ++l)
            if (avoiders[l] < 2) return {std::nullopt, SimpleScheduleReason::avoidance};
        if (is_special_profile(inst)) return {std::nullopt, SimpleScheduleReason::special_profile};
        // try the constructive first quadruple, then fall back to every
        // 4-subset in lexicographic order; the second quadruple is always
        // rebuilt constructively from the remaining teams
        auto try_first = [&](const std::array<int, 4>& s1) -> bool {
            // s1 must itself be fine
            std::vector<int> sub(s1.begin(), s1.end());
            if (portfolio_graph(inst, sub).graph.max_degree() > 3) return false;
            std::vector<int> rest;
            for (int t = 0; t < n; ++t)
                if (std::find(s1.begin(), s1.end(), t) == s1.end()) rest.push_back(t);
            auto s2 = detail::find_fine_quadruple_in(inst, rest);
            if (!s2) return false;
            quads.push_back(s1);
            quads.push_back(*s2);
            return true;
        };
        bool found = false;
        if (auto q = find_fine_quadruple(inst)) found = try_first(*q);
        for (int a = 0; a < n && !found; ++a)
            for (int b = a + 1; b < n && !found; ++b)
                for (int c = b + 1; c < n && !found; ++c)
                    for (int d = c + 1; d < n && !found; ++d)
                        found = try_first({a, b, c, d});
        if (!found) return {std::nullopt, SimpleScheduleReason::search_exhausted};
    }

    Schedule sched(n);
    std::vector<bool> used(n, false);
    for (size_t i = 0; i < quads.size(); ++i) {
        detail::schedule_room(inst, quads[i], four_rooms[i], sched);
        for (int t : quads[i]) used[t] = true;
    }
    std::vector<int> remaining;
    for (int t = 0; t < n; ++t)
        if (!used[t]) remaining.push_back(t);
    for (size_t i = 0; i < three_rooms.size(); ++i) {
        std::array<int, 3> trio{remaining[3 * i], remaining[3 * i + 1], remaining[3 * i + 2]};
        detail::schedule_room(inst, trio, three_rooms[i], sched);
    }
    return {sched, SimpleScheduleReason::none};
}

/// Rewrites the stage assignment of a feasible schedule so that every team
/// takes three distinct stages, leaving problems and rooms untouched. Builds
/// the team-Fight incidence graph, matches one team to each 4-Fight for stage
/// D (such a matching always exists), and 3-edge-colors the rest as stages
/// A, B, C. Throws std::invalid_argument when the input occupancy is not
/// feasible.
inline Schedule assign_order_fair(const Instance& inst, const Schedule& input) {
    const int n = inst.team_count();
    const int s = inst.room_count();
    BipartiteGraph h(n, 3 * s);  // right = Fight (round, room) = round*s + room
    for (int j = 0; j < 3; ++j)
        for (int t = 0; t < n; ++t) {
            int room = input.room_of(j, t);
            if (room < 0 || room >= s) throw std::invalid_argument("schedule references an unknown room");
            h.add_edge(t, j * s + room);
        }
    std::vector<int> four_fights;
    for (int f = 0; f < 3 * s; ++f) {
        int expected = inst.room_plan[f % s];
        if (h.degree_right(f) != expected)
            throw std::invalid_argument("Fight occupancy does not match the room plan");
        if (expected == 4) four_fights.push_back(f);
    }

    // matching M_D covering every 4-Fight
    std::vector<int> stage_d_team(3 * s, -1);
    std::vector<std::pair<int, int>> removed;  // (team, fight)
    if (!four_fights.empty()) {
        BipartiteGraph h4(n, static_cast<int>(four_fights.size()));
        for (size_t i = 0; i < four_fights.size(); ++i)
            for (int e : h.edges_at_right(four_fights[i]))
                h4.add_edge(h.edge(e).first, static_cast<int>(i));
        auto md = max_matching(h4);
        for (size_t i = 0; i < four_fights.size(); ++i) {
            if (md.right_match[i] < 0)
                throw std::logic_error("no matching covers all 4-Fights; input schedule is not feasible");
            int team = h4.edge(md.right_match[i]).first;
            stage_d_team[four_fights[i]] = team;
            removed.emplace_back(team, four_fights[i]);
        }
    }

    // remaining incidences have degree exactly 3 on every Fight: 3-color them
    BipartiteGraph h3(n, 3 * s);
    for (int e = 0; e < h.edge_count(); ++e) {
        auto [t, f] = h.edge(e);
        if (stage_d_team[f] == t) continue;
        h3.add_edge(t, f);
    }
    auto coloring = konig_edge_coloring(h3);

    Schedule out = input;
    for (int e = 0; e < h3.edge_count(); ++e) {
        auto [t, f] = h3.edge(e);
        out.at(f / s, t).stage = static_cast<Stage>(coloring.color[e]);
    }
    for (auto [t, f] : removed) out.at(f / s, t).stage = Stage::D;
    return out;
}

}  // namespace fightsched
