#pragma once

#include <array>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fightsched/instance.hpp"

namespace fightsched {

/// A full tournament schedule: for each of the 3 rounds and each team, the
/// problem it presents, the room it sits in (0-based index into the room
/// plan), and its presenter stage. Immutable by convention once built.
struct Schedule {
    struct Slot {
        int problem = 0;   // published problem id
        int room = -1;     // 0-based room index
        Stage stage = Stage::A;
        bool operator==(const Slot&) const = default;
    };

    std::array<std::vector<Slot>, 3> rounds;

    Schedule() = default;
    explicit Schedule(int team_count) {
        for (auto& r : rounds) r.resize(team_count);
    }

    int team_count() const { return static_cast<int>(rounds[0].size()); }

    Slot& at(int round, int team) { return rounds[round][team]; }
    const Slot& at(int round, int team) const { return rounds[round][team]; }

    int problem_of(int round, int team) const { return rounds[round][team].problem; }
    int room_of(int round, int team) const { return rounds[round][team].room; }
    Stage stage_of(int round, int team) const { return rounds[round][team].stage; }

    bool operator==(const Schedule&) const = default;
};

/// Teams sitting in `room` during `round`, in team-index order.
inline std::vector<int> occupants(const Schedule& sched, int round, int room) {
    std::vector<int> out;
    for (int t = 0; t < sched.team_count(); ++t)
        if (sched.room_of(round, t) == room) out.push_back(t);
    return out;
}

/// Parses the machine schedule format, one line per presentation:
///
///   <round> <room> <stage> <team> <problem>
///
/// with 1-based round/room numbers, or the JSON mirror. Every (team, round)
/// pair must occur exactly once. See docs/formats.md.
inline Schedule parse_schedule(std::string_view text, const Instance& inst) {
    struct Entry {
        int round, room, problem;
        Stage stage;
        std::string team;
    };
    std::vector<Entry> entries;

    if (detail::looks_like_json(text)) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
            for (const auto& e : j.at("entries")) {
                auto stage_str = e.at("stage").get<std::string>();
                if (stage_str.size() != 1) throw ParseError("invalid stage label '" + stage_str + "'");
                entries.push_back({e.at("round").get<int>(), e.at("room").get<int>(),
                                   e.at("problem").get<int>(), stage_from_char(stage_str[0]),
                                   e.at("team").get<std::string>()});
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid schedule JSON: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    } else {
        size_t start = 0;
        int line_no = 0;
        while (start <= text.size()) {
            size_t end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            std::string_view line = detail::strip_comment(text.substr(start, end - start));
            start = end + 1;
            ++line_no;
            if (line.empty()) continue;
            auto tokens = detail::split_ws(line);
            if (tokens.size() != 5)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": expected 'round room stage team problem'");
            if (tokens[2].size() != 1)
                throw ParseError("line " + std::to_string(line_no) + ": invalid stage label '" +
                                 std::string(tokens[2]) + "'");
            Stage stage;
            try {
                stage = stage_from_char(tokens[2][0]);
            } catch (const std::invalid_argument& e) {
                throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
            }
            entries.push_back({detail::parse_int(tokens[0], "round"), detail::parse_int(tokens[1], "room"),
                               detail::parse_int(tokens[4], "problem"), stage, std::string(tokens[3])});
        }
    }

    Schedule sched(inst.team_count());
    std::vector<std::array<bool, 3>> seen(inst.team_count(), {false, false, false});
    for (const auto& e : entries) {
        if (e.round < 1 || e.round > 3)
            throw ParseError("round " + std::to_string(e.round) + " out of range 1..3");
        if (e.room < 1 || e.room > inst.room_count())
            throw ParseError("room " + std::to_string(e.room) + " out of range 1.." +
                             std::to_string(inst.room_count()));
        if (e.problem < 1 || e.problem > inst.problem_count)
            throw ParseError("unknown problem " + std::to_string(e.problem));
        int team = inst.team_index(e.team);
        if (team < 0) throw ParseError("unknown team '" + e.team + "'");
        if (seen[team][e.round - 1])
            throw ParseError("team '" + e.team + "' listed twice in round " + std::to_string(e.round));
        seen[team][e.round - 1] = true;
        sched.at(e.round - 1, team) = {e.problem, e.room - 1, e.stage};
    }
    for (int t = 0; t < inst.team_count(); ++t)
        for (int j = 0; j < 3; ++j)
            if (!seen[t][j])
                throw ParseError("no assignment for team '" + inst.teams[t] + "' in round " +
                                 std::to_string(j + 1));
    return sched;
}

enum class ScheduleFormat { table, machine, json };

inline std::optional<ScheduleFormat> schedule_format_from_name(std::string_view name) {
    if (name == "table") return ScheduleFormat::table;
    if (name == "machine") return ScheduleFormat::machine;
    if (name == "json") return ScheduleFormat::json;
    return std::nullopt;
}

/// Renders a schedule. `table` groups presentations by round and room with
/// stage rows A-D; `machine` is the parse_schedule input format; `json` the
/// JSON mirror. `footer` lines, when given, are appended as '#' comments
/// (table/machine) or under a "notes" key (json).
inline std::string render_schedule(const Instance& inst, const Schedule& sched, ScheduleFormat fmt,
                                   const std::vector<std::string>* footer = nullptr) {
    // stage-ordered occupants per fight
    auto fight_rows = [&](int round, int room) {
        auto occ = occupants(sched, round, room);
        std::sort(occ.begin(), occ.end(), [&](int a, int b) {
            if (sched.stage_of(round, a) != sched.stage_of(round, b))
                return sched.stage_of(round, a) < sched.stage_of(round, b);
            return a < b;
        });
        return occ;
    };

    if (fmt == ScheduleFormat::json) {
        nlohmann::json j;
        auto& entries = j["entries"] = nlohmann::json::array();
        for (int round = 0; round < 3; ++round)
            for (int room = 0; room < inst.room_count(); ++room)
                for (int t : fight_rows(round, room))
                    entries.push_back({{"round", round + 1},
                                       {"room", room + 1},
                                       {"stage", std::string(1, stage_char(sched.stage_of(round, t)))},
                                       {"team", inst.teams[t]},
                                       {"problem", sched.problem_of(round, t)}});
        if (footer) j["notes"] = *footer;
        return j.dump(2) + "\n";
    }

    std::ostringstream out;
    if (fmt == ScheduleFormat::machine) {
        for (int round = 0; round < 3; ++round)
            for (int room = 0; room < inst.room_count(); ++room)
                for (int t : fight_rows(round, room))
                    out << round + 1 << ' ' << room + 1 << ' ' << stage_char(sched.stage_of(round, t))
                        << ' ' << inst.teams[t] << ' ' << sched.problem_of(round, t) << "\n";
    } else {
        size_t width = 4;
        for (const auto& name : inst.teams) width = std::max(width, name.size());
        for (int round = 0; round < 3; ++round) {
            out << "Round " << round + 1 << "\n";
            for (int room = 0; room < inst.room_count(); ++room) {
                out << "  Room " << room + 1 << "\n";
                for (int t : fight_rows(round, room))
                    out << "    " << stage_char(sched.stage_of(round, t)) << "  " << std::left
                        << std::setw(static_cast<int>(width)) << inst.teams[t] << "  "
                        << sched.problem_of(round, t) << "\n";
            }
        }
    }
    if (footer)
        for (const auto& line : *footer) out << "# " << line << "\n";
    return out.str();
}

}  // namespace fightsched
