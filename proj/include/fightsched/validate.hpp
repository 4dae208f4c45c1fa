#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fightsched/schedule.hpp"

namespace fightsched {

enum class Criterion { feasible, non_cooperative, order_fair, weakly_fair, fair, strongly_fair };

inline std::string criterion_name(Criterion c) {
    switch (c) {
        case Criterion::feasible: return "feasible";
        case Criterion::non_cooperative: return "non-cooperative";
        case Criterion::order_fair: return "order-fair";
        case Criterion::weakly_fair: return "weakly-fair";
        case Criterion::fair: return "fair";
        case Criterion::strongly_fair: return "strongly-fair";
    }
    return "?";
}

/// One concrete rule violation. Round/room are 0-based indices (-1 when the
/// violation is not tied to one); `problem` is a problem id or 0; `other_team`
/// names the presenter (fairness), the same-school partner (non-cooperativity)
/// or the earlier presenter (clashes). `other_round` marks the earlier round
/// of a cross-round repeat and `stage` the repeated stage label.
struct Violation {
    Criterion rule = Criterion::feasible;
    int round = -1;
    int room = -1;
    int team = -1;
    int problem = 0;
    int other_team = -1;
    int other_round = -1;
    std::optional<Stage> stage;
    std::string detail;

    std::string describe(const Instance& inst) const {
        std::ostringstream out;
        out << criterion_name(rule) << ": ";
        if (team >= 0) out << "team " << inst.teams[team] << ", ";
        if (round >= 0) out << "round " << round + 1 << ", ";
        if (room >= 0) out << "room " << room + 1 << ", ";
        if (problem > 0) out << "problem " << problem << ", ";
        std::string text = out.str();
        if (text.size() >= 2 && text.compare(text.size() - 2, 2, ", ") == 0) text.resize(text.size() - 2);
        if (!detail.empty()) text += " (" + detail + ")";
        return text;
    }
};

/// Full audit result. All six criteria are always evaluated; `requested`
/// records which of them the caller asked to enforce.
struct ValidationReport {
    FairnessCriteria requested;
    std::map<Criterion, bool> verdicts;
    std::vector<Violation> violations;

    bool verdict(Criterion c) const { return verdicts.at(c); }

    std::vector<const Violation*> violations_of(Criterion c) const {
        std::vector<const Violation*> out;
        for (const auto& v : violations)
            if (v.rule == c) out.push_back(&v);
        return out;
    }

    bool passes(const FairnessCriteria& c) const {
        if (!verdict(Criterion::feasible)) return false;
        if (c.non_cooperative && !verdict(Criterion::non_cooperative)) return false;
        if (c.order_fair && !verdict(Criterion::order_fair)) return false;
        switch (c.level) {
            case FairnessLevel::none: return true;
            case FairnessLevel::weak: return verdict(Criterion::weakly_fair);
            case FairnessLevel::fair: return verdict(Criterion::fair);
            case FairnessLevel::strong: return verdict(Criterion::strongly_fair);
        }
        return true;
    }

    bool requested_pass() const { return passes(requested); }
};

/// Audits `sched` against `inst`. Checks feasibility conditions (portfolio
/// coverage, per-Fight problem uniqueness, occupancy, stage sets) and then
/// every fairness criterion independently; nothing short-circuits, so audits
/// of real-world schedules always produce the complete witness list.
/// Throws std::invalid_argument when the schedule's dimensions or value
/// ranges do not match the instance at all.
inline ValidationReport validate(const Instance& inst, const Schedule& sched,
                                 const FairnessCriteria& requested = {}) {
    const int n = inst.team_count();
    const int s = inst.room_count();
    if (sched.team_count() != n)
        throw std::invalid_argument("schedule covers " + std::to_string(sched.team_count()) +
                                    " teams, instance has " + std::to_string(n));
    for (int j = 0; j < 3; ++j)
        for (int t = 0; t < n; ++t) {
            const auto& slot = sched.at(j, t);
            if (slot.room < 0 || slot.room >= s)
                throw std::invalid_argument("team " + inst.teams[t] + " sits in unknown room index " +
                                            std::to_string(slot.room));
            if (slot.problem < 1 || slot.problem > inst.problem_count)
                throw std::invalid_argument("team " + inst.teams[t] + " presents unknown problem " +
                                            std::to_string(slot.problem));
        }

    ValidationReport report;
    report.requested = requested;
    auto& out = report.violations;

    // (i) each team presents exactly its portfolio
    for (int t = 0; t < n; ++t) {
        std::array<int, 3> presented{sched.problem_of(0, t), sched.problem_of(1, t), sched.problem_of(2, t)};
        std::array<int, 3> portfolio = inst.portfolios[t];
        std::sort(presented.begin(), presented.end());
        std::sort(portfolio.begin(), portfolio.end());
        if (presented != portfolio) {
            std::ostringstream d;
            d << "presents {" << sched.problem_of(0, t) << "," << sched.problem_of(1, t) << ","
              << sched.problem_of(2, t) << "} but announced {" << inst.portfolios[t][0] << ","
              << inst.portfolios[t][1] << "," << inst.portfolios[t][2] << "}";
            out.push_back({Criterion::feasible, -1, -1, t, 0, -1, -1, std::nullopt, d.str()});
        }
    }

    // (ii)-(iv) per Fight
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < s; ++k) {
            auto occ = occupants(sched, j, k);
            for (size_t a = 0; a < occ.size(); ++a)
                for (size_t b = a + 1; b < occ.size(); ++b)
                    if (sched.problem_of(j, occ[a]) == sched.problem_of(j, occ[b]))
                        out.push_back({Criterion::feasible, j, k, occ[b], sched.problem_of(j, occ[b]),
                                       occ[a], -1, std::nullopt, "problem presented twice in one Fight"});
            if (static_cast<int>(occ.size()) != inst.room_plan[k])
                out.push_back({Criterion::feasible, j, k, -1, 0, -1, -1, std::nullopt,
                               "room holds " + std::to_string(occ.size()) + " teams, size is " +
                                   std::to_string(inst.room_plan[k])});
            std::multiset<Stage> stages;
            for (int t : occ) stages.insert(sched.stage_of(j, t));
            std::multiset<Stage> expected{Stage::A, Stage::B, Stage::C};
            if (inst.room_plan[k] == 4) expected.insert(Stage::D);
            if (stages != expected) {
                std::string got;
                for (Stage st : stages) got += stage_char(st);
                out.push_back({Criterion::feasible, j, k, -1, 0, -1, -1, std::nullopt,
                               "stage labels {" + got + "} are not the full stage set"});
            }
        }
    }

    // non-cooperativity: no two same-school teams in one Fight
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < s; ++k) {
            auto occ = occupants(sched, j, k);
            for (size_t a = 0; a < occ.size(); ++a)
                for (size_t b = a + 1; b < occ.size(); ++b)
                    if (inst.schools[occ[a]] == inst.schools[occ[b]])
                        out.push_back({Criterion::non_cooperative, j, k, occ[a], 0, occ[b], -1,
                                       std::nullopt, "both teams are from school " + inst.schools[occ[a]]});
        }

    // order fairness: three distinct stages per team
    for (int t = 0; t < n; ++t)
        for (int st = 0; st < 4; ++st) {
            std::vector<int> rounds;
            for (int j = 0; j < 3; ++j)
                if (sched.stage_of(j, t) == static_cast<Stage>(st)) rounds.push_back(j);
            if (rounds.size() >= 2) {
                std::string d = "stage ";
                d += stage_char(static_cast<Stage>(st));
                d += " in rounds";
                for (int j : rounds) d += " " + std::to_string(j + 1);
                out.push_back({Criterion::order_fair, rounds.back(), sched.room_of(rounds.back(), t), t, 0,
                               -1, rounds.front(), static_cast<Stage>(st), d});
            }
        }

    // fairness: a team never co-rooms with a presentation of its own problem;
    // the weak variant restricts the condition to rounds 1 and 2
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < s; ++k) {
            auto occ = occupants(sched, j, k);
            for (int presenter : occ) {
                int p = sched.problem_of(j, presenter);
                for (int other : occ) {
                    if (other == presenter || !inst.has_problem(other, p)) continue;
                    std::string d = "problem " + std::to_string(p) + " presented by " +
                                    inst.teams[presenter] + " is in the portfolio of " + inst.teams[other];
                    out.push_back({Criterion::fair, j, k, other, p, presenter, -1, std::nullopt, d});
                    if (j < 2)
                        out.push_back({Criterion::weakly_fair, j, k, other, p, presenter, -1, std::nullopt, d});
                }
            }
        }

    // strong fairness: the problems a team meets in its three Fights, in any
    // role and counting its own presentations, are pairwise distinct
    for (int t = 0; t < n; ++t) {
        std::map<int, std::vector<std::pair<int, int>>> meets;  // problem -> (round, presenter)
        for (int j = 0; j < 3; ++j)
            for (int o : occupants(sched, j, sched.room_of(j, t)))
                meets[sched.problem_of(j, o)].emplace_back(j, o);
        for (const auto& [p, hits] : meets)
            for (size_t i = 1; i < hits.size(); ++i) {
                std::string d = "meets problem " + std::to_string(p) + " in round " +
                                std::to_string(hits[0].first + 1) + " and round " +
                                std::to_string(hits[i].first + 1);
                out.push_back({Criterion::strongly_fair, hits[i].first,
                               sched.room_of(hits[i].first, t), t, p, hits[i].second, hits[0].first,
                               std::nullopt, d});
            }
    }

    for (Criterion c : {Criterion::feasible, Criterion::non_cooperative, Criterion::order_fair,
                        Criterion::weakly_fair, Criterion::fair, Criterion::strongly_fair})
        report.verdicts[c] = true;
    for (const auto& v : out) report.verdicts[v.rule] = false;
    return report;
}

/// Human-readable report lines, suitable as a schedule-file footer.
inline std::vector<std::string> report_lines(const Instance& inst, const ValidationReport& report) {
    std::vector<std::string> lines;
    std::string verdicts;
    for (const auto& [c, ok] : report.verdicts)
        verdicts += criterion_name(c) + std::string("=") + (ok ? "yes" : "no") + " ";
    if (!verdicts.empty()) verdicts.pop_back();
    lines.push_back("criteria: " + verdicts);
    for (const auto& v : report.violations) lines.push_back(v.describe(inst));
    return lines;
}

inline nlohmann::json report_json(const Instance& inst, const ValidationReport& report) {
    nlohmann::json j;
    for (const auto& [c, ok] : report.verdicts) j["verdicts"][criterion_name(c)] = ok;
    j["requested_pass"] = report.requested_pass();
    auto& arr = j["violations"] = nlohmann::json::array();
    for (const auto& v : report.violations) {
        nlohmann::json w;
        w["rule"] = criterion_name(v.rule);
        if (v.round >= 0) w["round"] = v.round + 1;
        if (v.room >= 0) w["room"] = v.room + 1;
        if (v.team >= 0) w["team"] = inst.teams[v.team];
        if (v.problem > 0) w["problem"] = v.problem;
        if (v.other_team >= 0) w["other_team"] = inst.teams[v.other_team];
        if (v.other_round >= 0) w["other_round"] = v.other_round + 1;
        if (v.stage) w["stage"] = std::string(1, stage_char(*v.stage));
        w["detail"] = v.detail;
        arr.push_back(w);
    }
    return j;
}

}  // namespace fightsched
