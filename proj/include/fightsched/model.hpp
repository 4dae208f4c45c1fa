#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fightsched/schedule.hpp"

namespace fightsched {

enum class ConstraintTag { feas_2, feas_3, feas_4, feas_6, fair_7, sfair_8, sfair_9, noncoop_10 };

inline const char* constraint_tag_name(ConstraintTag t) {
    switch (t) {
        case ConstraintTag::feas_2: return "feas-2";
        case ConstraintTag::feas_3: return "feas-3";
        case ConstraintTag::feas_4: return "feas-4";
        case ConstraintTag::feas_6: return "feas-6";
        case ConstraintTag::fair_7: return "fair-7";
        case ConstraintTag::sfair_8: return "sfair-8";
        case ConstraintTag::sfair_9: return "sfair-9";
        case ConstraintTag::noncoop_10: return "noncoop-10";
    }
    return "?";
}

enum class Sense { le, ge, eq };

struct LinearConstraint {
    ConstraintTag tag;
    std::string name;                         // tag plus 1-based indices
    std::vector<std::pair<int, int>> terms;   // (variable, coefficient)
    Sense sense;
    int rhs;
};

/// Satisfiability model over binary variables x[i,j,k,q] ("team i presents
/// its q-th portfolio problem in round j in room k") plus, under strong
/// fairness, counters y[i,j,k,l] ("team i meets problem l in round j in room
/// k"). Constant fairness-matrix entries are folded into the right-hand
/// sides, and fairness rows whose matrix entry is 0 are never emitted
/// because they cannot bind.
struct ConstraintModel {
    int team_count = 0;
    int room_count = 0;
    int problem_count = 0;
    std::vector<int> room_sizes;
    std::vector<std::array<int, 3>> portfolios;
    std::vector<std::string> team_names;
    FairnessCriteria criteria;

    int x_count = 0;
    int y_count = 0;
    std::vector<LinearConstraint> constraints;

    int var_count() const { return x_count + y_count; }

    int x_index(int team, int round, int room, int pos) const {
        return ((team * 3 + round) * room_count + room) * 3 + pos;
    }
    int y_index(int team, int round, int room, int problem) const {
        return x_count + ((team * 3 + round) * room_count + room) * problem_count + (problem - 1);
    }

    bool is_x(int var) const { return var < x_count; }

    std::string var_name(int var) const {
        std::ostringstream out;
        if (is_x(var)) {
            int pos = var % 3;
            int room = var / 3 % room_count;
            int round = var / (3 * room_count) % 3;
            int team = var / (9 * room_count);
            out << "x[" << team + 1 << ',' << round + 1 << ',' << room + 1 << ',' << pos + 1 << ']';
        } else {
            int r = var - x_count;
            int problem = r % problem_count + 1;
            int room = r / problem_count % room_count;
            int round = r / (problem_count * room_count) % 3;
            int team = r / (3 * problem_count * room_count);
            out << "y[" << team + 1 << ',' << round + 1 << ',' << room + 1 << ',' << problem << ']';
        }
        return out.str();
    }
};

/// Emits the model for `inst` under `criteria`:
///   feas-2  per (team, position): the problem is presented exactly once;
///   feas-3  per (team, round): exactly one presentation per round;
///   feas-4  per (round, room): occupancy equals the room size;
///   feas-6  per (round, room, problem in use): presented at most once;
///   fair-7  per (round, room, position, presenter, witness team whose
///           portfolio holds that problem): presenting it excludes the
///           witness from the room (rounds 1-2 for weak, 1-3 for fair);
///   sfair-8/sfair-9 (strong): meet counters and the at-most-once cap;
///   noncoop-10 per (round, room, school with >= 2 teams).
inline ConstraintModel build_model(const Instance& inst, const FairnessCriteria& criteria) {
    inst.check();
    if (inst.room_plan.empty())
        throw std::invalid_argument("instance has no room plan; pick one before building a model");

    ConstraintModel m;
    m.team_count = inst.team_count();
    m.room_count = inst.room_count();
    m.problem_count = inst.problem_count;
    m.room_sizes = inst.room_plan;
    m.portfolios = inst.portfolios;
    m.team_names = inst.teams;
    m.criteria = criteria;
    m.x_count = 9 * m.team_count * m.room_count;
    m.y_count = criteria.level == FairnessLevel::strong
                    ? 3 * m.team_count * m.room_count * m.problem_count
                    : 0;

    const int n = m.team_count, s = m.room_count, mm = m.problem_count;
    auto name = [](ConstraintTag tag, std::initializer_list<int> idx) {
        std::string out = constraint_tag_name(tag);
        out += '[';
        bool first = true;
        for (int v : idx) {
            if (!first) out += ',';
            out += std::to_string(v);
            first = false;
        }
        out += ']';
        return out;
    };

    for (int i = 0; i < n; ++i)
        for (int q = 0; q < 3; ++q) {
            LinearConstraint c{ConstraintTag::feas_2, name(ConstraintTag::feas_2, {i + 1, q + 1}),
                               {}, Sense::eq, 1};
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < s; ++k) c.terms.emplace_back(m.x_index(i, j, k, q), 1);
            m.constraints.push_back(std::move(c));
        }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 3; ++j) {
            LinearConstraint c{ConstraintTag::feas_3, name(ConstraintTag::feas_3, {i + 1, j + 1}),
                               {}, Sense::eq, 1};
            for (int k = 0; k < s; ++k)
                for (int q = 0; q < 3; ++q) c.terms.emplace_back(m.x_index(i, j, k, q), 1);
            m.constraints.push_back(std::move(c));
        }

    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < s; ++k) {
            LinearConstraint c{ConstraintTag::feas_4, name(ConstraintTag::feas_4, {j + 1, k + 1}),
                               {}, Sense::eq, inst.room_plan[k]};
            for (int i = 0; i < n; ++i)
                for (int q = 0; q < 3; ++q) c.terms.emplace_back(m.x_index(i, j, k, q), 1);
            m.constraints.push_back(std::move(c));
        }

    std::vector<std::vector<std::pair<int, int>>> announcers(mm + 1);  // T(l)
    for (int l = 1; l <= mm; ++l) announcers[l] = inst.teams_with_problem(l);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < s; ++k)
            for (int l = 1; l <= mm; ++l) {
                if (announcers[l].empty()) continue;
                LinearConstraint c{ConstraintTag::feas_6, name(ConstraintTag::feas_6, {j + 1, k + 1, l}),
                                   {}, Sense::le, 1};
                for (auto [i, q] : announcers[l]) c.terms.emplace_back(m.x_index(i, j, k, q), 1);
                m.constraints.push_back(std::move(c));
            }

    if (criteria.level == FairnessLevel::weak || criteria.level == FairnessLevel::fair) {
        const int rounds = criteria.level == FairnessLevel::weak ? 2 : 3;
        for (int j = 0; j < rounds; ++j)
            for (int k = 0; k < s; ++k)
                for (int q = 0; q < 3; ++q)
                    for (int i = 0; i < n; ++i) {
                        const int problem = inst.portfolios[i][q];
                        for (int a = 0; a < n; ++a) {
                            if (a == i || !inst.has_problem(a, problem)) continue;
                            LinearConstraint c{ConstraintTag::fair_7,
                                               name(ConstraintTag::fair_7,
                                                    {j + 1, k + 1, q + 1, i + 1, a + 1}),
                                               {}, Sense::le, 1};
                            c.terms.emplace_back(m.x_index(i, j, k, q), 1);
                            for (int w = 0; w < 3; ++w) c.terms.emplace_back(m.x_index(a, j, k, w), 1);
                            m.constraints.push_back(std::move(c));
                        }
                    }
    }

    if (criteria.level == FairnessLevel::strong) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < s; ++k)
                    for (int l = 1; l <= mm; ++l) {
                        // y >= sum_w x[i,j,k,w] + sum_{(a,q) in T(l)} x[a,j,k,q] - 1
                        LinearConstraint c{ConstraintTag::sfair_8,
                                           name(ConstraintTag::sfair_8, {i + 1, j + 1, k + 1, l}),
                                           {}, Sense::ge, -1};
                        std::map<int, int> coef;
                        coef[m.y_index(i, j, k, l)] += 1;
                        for (int w = 0; w < 3; ++w) coef[m.x_index(i, j, k, w)] -= 1;
                        for (auto [a, q] : announcers[l]) coef[m.x_index(a, j, k, q)] -= 1;
                        c.terms.assign(coef.begin(), coef.end());
                        m.constraints.push_back(std::move(c));
                    }
        for (int i = 0; i < n; ++i)
            for (int l = 1; l <= mm; ++l) {
                LinearConstraint c{ConstraintTag::sfair_9, name(ConstraintTag::sfair_9, {i + 1, l}),
                                   {}, Sense::le, 1};
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < s; ++k) c.terms.emplace_back(m.y_index(i, j, k, l), 1);
                m.constraints.push_back(std::move(c));
            }
    }

    if (criteria.non_cooperative) {
        auto groups = inst.school_groups();
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < s; ++k)
                for (size_t g = 0; g < groups.size(); ++g) {
                    if (groups[g].size() < 2) continue;
                    LinearConstraint c{ConstraintTag::noncoop_10,
                                       name(ConstraintTag::noncoop_10,
                                            {j + 1, k + 1, static_cast<int>(g) + 1}),
                                       {}, Sense::le, 1};
                    for (int i : groups[g])
                        for (int q = 0; q < 3; ++q) c.terms.emplace_back(m.x_index(i, j, k, q), 1);
                    m.constraints.push_back(std::move(c));
                }
    }

    return m;
}

/// Count of emitted constraints per tag, for reporting and tests.
inline std::map<ConstraintTag, int> constraint_counts(const ConstraintModel& m) {
    std::map<ConstraintTag, int> out;
    for (const auto& c : m.constraints) ++out[c.tag];
    return out;
}

/// Decodes a satisfying assignment into a Schedule: for the unique (room,
/// position) pair with x[i,j,k,q] = 1, team i presents its q-th problem in
/// room k during round j. Stages go to the occupants of each Fight in
/// increasing team order. Throws std::invalid_argument when the assignment
/// violates the feasibility rows.
inline Schedule decode(const ConstraintModel& m, const std::vector<int>& assignment) {
    if (static_cast<int>(assignment.size()) < m.x_count)
        throw std::invalid_argument("assignment does not cover the x variables");
    for (int v = 0; v < m.x_count; ++v)
        if (assignment[v] != 0 && assignment[v] != 1)
            throw std::invalid_argument("malformed assignment: " + m.var_name(v) + " is not binary");
    for (const auto& c : m.constraints) {
        if (c.tag == ConstraintTag::fair_7 || c.tag == ConstraintTag::sfair_8 ||
            c.tag == ConstraintTag::sfair_9 || c.tag == ConstraintTag::noncoop_10)
            continue;
        long value = 0;
        for (auto [v, coef] : c.terms) value += static_cast<long>(coef) * assignment[v];
        bool ok = c.sense == Sense::le ? value <= c.rhs
                : c.sense == Sense::ge ? value >= c.rhs
                                       : value == c.rhs;
        if (!ok)
            throw std::invalid_argument("malformed assignment: constraint " + c.name + " violated");
    }

    Schedule sched(m.team_count);
    for (int i = 0; i < m.team_count; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < m.room_count; ++k)
                for (int q = 0; q < 3; ++q)
                    if (assignment[m.x_index(i, j, k, q)] == 1) {
                        sched.at(j, i).problem = m.portfolios[i][q];
                        sched.at(j, i).room = k;
                    }
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < m.room_count; ++k) {
            int stage = 0;
            for (int i = 0; i < m.team_count; ++i)
                if (sched.room_of(j, i) == k) sched.at(j, i).stage = static_cast<Stage>(stage++);
        }
    return sched;
}

/// Writes the model in LP text format: a constant objective, one named row
/// per constraint, a Binary section for x, and General + Bounds sections for
/// y. Output is byte-stable for a fixed model. Grammar in docs/formats.md.
inline std::string export_lp(const ConstraintModel& m) {
    std::ostringstream out;
    out << "Minimize\n obj: 0\nSubject To\n";
    for (const auto& c : m.constraints) {
        std::string line = " " + c.name + ":";
        bool first = true;
        for (auto [v, coef] : c.terms) {
            std::string term;
            if (coef >= 0)
                term = first ? (coef == 1 ? "" : std::to_string(coef) + " ")
                             : (coef == 1 ? "+ " : "+ " + std::to_string(coef) + " ");
            else
                term = coef == -1 ? "- " : "- " + std::to_string(-coef) + " ";
            term += m.var_name(v);
            if (line.size() + term.size() + 1 > 200) {
                out << line << "\n";
                line = "   ";
            }
            line += " " + term;
            first = false;
        }
        const char* rel = c.sense == Sense::le ? "<=" : c.sense == Sense::ge ? ">=" : "=";
        out << line << ' ' << rel << ' ' << c.rhs << "\n";
    }
    if (m.y_count > 0) {
        out << "Bounds\n";
        for (int v = m.x_count; v < m.var_count(); ++v)
            out << " 0 <= " << m.var_name(v) << " <= 1\n";
    }
    out << "Binary\n";
    for (int v = 0; v < m.x_count; ++v) out << ' ' << m.var_name(v) << "\n";
    if (m.y_count > 0) {
        out << "General\n";
        for (int v = m.x_count; v < m.var_count(); ++v) out << ' ' << m.var_name(v) << "\n";
    }
    out << "End\n";
    return out.str();
}

}  // namespace fightsched
