#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fightsched/core.hpp"

namespace fightsched {

/// A tournament instance: teams with their school membership, the problem
/// universe, one portfolio of 3 distinct problems per team, and the room plan.
///
/// Teams and rooms are addressed by 0-based index everywhere in the library;
/// problems keep their published 1-based ids. Instances are immutable after
/// construction and safe to share across threads.
struct Instance {
    std::vector<std::string> teams;             // t_1..t_n, index 0..n-1
    std::vector<std::string> schools;           // school id of each team
    int problem_count = 17;                     // problems are ids 1..problem_count
    std::vector<std::array<int, 3>> portfolios; // per team, in announcement order
    std::vector<int> room_plan;                 // sizes, each 3 or 4; may be empty until chosen

    int team_count() const { return static_cast<int>(teams.size()); }
    int room_count() const { return static_cast<int>(room_plan.size()); }

    /// Problem announced at position `pos` (0..2) of team `team`'s portfolio.
    int portfolio_problem(int team, int pos) const { return portfolios[team][pos]; }

    bool has_problem(int team, int problem) const {
        const auto& p = portfolios[team];
        return p[0] == problem || p[1] == problem || p[2] == problem;
    }

    /// All (team, position) pairs announcing `problem`.
    std::vector<std::pair<int, int>> teams_with_problem(int problem) const {
        std::vector<std::pair<int, int>> out;
        for (int i = 0; i < team_count(); ++i)
            for (int q = 0; q < 3; ++q)
                if (portfolios[i][q] == problem) out.emplace_back(i, q);
        return out;
    }

    /// Number of teams whose portfolio omits each problem, indexed by problem id.
    std::vector<int> avoider_counts() const {
        std::vector<int> chosen(problem_count + 1, 0);
        for (const auto& p : portfolios)
            for (int x : p) ++chosen[x];
        std::vector<int> out(problem_count + 1, 0);
        for (int l = 1; l <= problem_count; ++l) out[l] = team_count() - chosen[l];
        return out;
    }

    int team_index(std::string_view name) const {
        for (int i = 0; i < team_count(); ++i)
            if (teams[i] == name) return i;
        return -1;
    }

    /// Teams grouped by school, in order of first appearance.
    std::vector<std::vector<int>> school_groups() const {
        std::vector<std::vector<int>> groups;
        std::map<std::string, int> index;
        for (int i = 0; i < team_count(); ++i) {
            auto [it, inserted] = index.try_emplace(schools[i], static_cast<int>(groups.size()));
            if (inserted) groups.emplace_back();
            groups[it->second].push_back(i);
        }
        return groups;
    }

    /// Enforces the structural invariants; throws ParseError with a specific
    /// message on the first violation found.
    void check() const {
        const int n = team_count();
        if (n < 3) throw ParseError("instance needs at least 3 teams, got " + std::to_string(n));
        if (problem_count < 1) throw ParseError("problem universe must be nonempty");
        if (schools.size() != teams.size() || portfolios.size() != teams.size())
            throw ParseError("team, school and portfolio lists have mismatched lengths");
        for (int i = 0; i < n; ++i) {
            if (teams[i].empty()) throw ParseError("empty team id");
            if (teams[i].find_first_of(" \t\r\n") != std::string::npos)
                throw ParseError("team id '" + teams[i] + "' must not contain whitespace");
            if (schools[i].empty()) throw ParseError("team '" + teams[i] + "' has no school id");
            if (schools[i].find_first_of(" \t\r\n") != std::string::npos)
                throw ParseError("school id '" + schools[i] + "' must not contain whitespace");
            for (int j = 0; j < i; ++j)
                if (teams[j] == teams[i]) throw ParseError("duplicate team id '" + teams[i] + "'");
            const auto& p = portfolios[i];
            for (int q = 0; q < 3; ++q)
                if (p[q] < 1 || p[q] > problem_count)
                    throw ParseError("team '" + teams[i] + "' announces unknown problem " +
                                     std::to_string(p[q]) + " (universe is 1.." +
                                     std::to_string(problem_count) + ")");
            if (p[0] == p[1] || p[0] == p[2] || p[1] == p[2])
                throw ParseError("portfolio of team '" + teams[i] +
                                 "' lists a problem twice; portfolios must name 3 distinct problems");
        }
        if (!room_plan.empty()) {
            int sum = 0;
            for (int size : room_plan) {
                if (size != 3 && size != 4)
                    throw ParseError("room size " + std::to_string(size) + " is not 3 or 4");
                sum += size;
            }
            if (sum != n)
                throw ParseError("room plan seats " + std::to_string(sum) + " teams but there are " +
                                 std::to_string(n));
        }
    }
};

enum class RoomPolicy { international, min_rooms };

inline std::optional<RoomPolicy> room_policy_from_name(std::string_view name) {
    if (name == "international") return RoomPolicy::international;
    if (name == "min-rooms" || name == "min_rooms") return RoomPolicy::min_rooms;
    return std::nullopt;
}

/// Builds a room plan for `n` teams. The international policy uses exactly
/// (n mod 3) rooms of size 4 and fills the rest with 3-rooms; min_rooms packs
/// as many 4-rooms as possible. Sizes are listed 4s first.
/// Throws std::invalid_argument when no such plan exists (n < 3 or n = 5).
inline std::vector<int> room_plan_for(int n, RoomPolicy policy) {
    if (n < 3) throw std::invalid_argument("cannot build a room plan for " + std::to_string(n) + " teams");
    int fours;
    if (policy == RoomPolicy::international) {
        fours = n % 3;
    } else {
        fours = -1;
        for (int b = n / 4; b >= 0; --b)
            if ((n - 4 * b) % 3 == 0) { fours = b; break; }
    }
    if (fours < 0 || n - 4 * fours < 0)
        throw std::invalid_argument("no {3,4}-room composition exists for " + std::to_string(n) + " teams");
    std::vector<int> plan(fours, 4);
    plan.insert(plan.end(), (n - 4 * fours) / 3, 3);
    return plan;
}

namespace detail {

inline std::string_view strip_comment(std::string_view line) {
    auto pos = line.find('#');
    if (pos != std::string_view::npos) line = line.substr(0, pos);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
        line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    return line;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline int parse_int(std::string_view tok, const char* what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(std::string("expected an integer for ") + what + ", got '" + std::string(tok) + "'");
    return value;
}

inline std::vector<int> parse_int_list(std::string_view tok, const char* what) {
    std::vector<int> out;
    size_t i = 0;
    while (i <= tok.size()) {
        size_t j = tok.find(',', i);
        if (j == std::string_view::npos) j = tok.size();
        if (j > i) out.push_back(parse_int(tok.substr(i, j - i), what));
        i = j + 1;
    }
    return out;
}

inline bool looks_like_json(std::string_view text) {
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
        return c == '{';
    }
    return false;
}

}  // namespace detail

/// Parses the instance text format:
///
///   teams=<n> problems=<m> rooms=<s1,s2,...>
///   <id> <school> <p> <q> <r>        # one line per team, portfolio order kept
///
/// or its JSON mirror (detected by a leading '{'). See docs/formats.md.
inline Instance parse_instance(std::string_view text) {
    Instance inst;
    if (detail::looks_like_json(text)) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid instance JSON: ") + e.what());
        }
        try {
            inst.problem_count = j.at("problems").get<int>();
            inst.room_plan = j.value("rooms", std::vector<int>{});
            const int n = j.at("teams").get<int>();
            for (const auto& entry : j.at("entries")) {
                inst.teams.push_back(entry.at("id").get<std::string>());
                inst.schools.push_back(entry.at("school").get<std::string>());
                auto p = entry.at("portfolio").get<std::vector<int>>();
                if (p.size() != 3)
                    throw ParseError("portfolio of team '" + inst.teams.back() + "' has " +
                                     std::to_string(p.size()) + " entries, expected 3");
                inst.portfolios.push_back({p[0], p[1], p[2]});
            }
            if (n != inst.team_count())
                throw ParseError("header says teams=" + std::to_string(n) + " but " +
                                 std::to_string(inst.team_count()) + " entries follow");
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid instance JSON: ") + e.what());
        }
        inst.check();
        return inst;
    }

    std::optional<int> expected_teams;
    bool have_header = false;
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
        if (!have_header) {
            for (auto tok : tokens) {
                auto eq = tok.find('=');
                if (eq == std::string_view::npos)
                    throw ParseError("line " + std::to_string(line_no) + ": header expects key=value tokens");
                auto key = tok.substr(0, eq);
                auto value = tok.substr(eq + 1);
                if (key == "teams") expected_teams = detail::parse_int(value, "teams");
                else if (key == "problems") inst.problem_count = detail::parse_int(value, "problems");
                else if (key == "rooms") inst.room_plan = detail::parse_int_list(value, "room size");
                else throw ParseError("unknown header key '" + std::string(key) + "'");
            }
            if (!expected_teams) throw ParseError("header is missing teams=<n>");
            have_header = true;
            continue;
        }
        if (tokens.size() != 5)
            throw ParseError("line " + std::to_string(line_no) + ": expected 'id school p q r', got " +
                             std::to_string(tokens.size()) + " fields");
        inst.teams.emplace_back(tokens[0]);
        inst.schools.emplace_back(tokens[1]);
        inst.portfolios.push_back({detail::parse_int(tokens[2], "problem"),
                                   detail::parse_int(tokens[3], "problem"),
                                   detail::parse_int(tokens[4], "problem")});
    }
    if (!have_header) throw ParseError("empty instance file");
    if (inst.team_count() != *expected_teams)
        throw ParseError("header says teams=" + std::to_string(*expected_teams) + " but " +
                         std::to_string(inst.team_count()) + " team lines follow");
    inst.check();
    return inst;
}

enum class TextFormat { text, json };

inline std::string serialize_instance(const Instance& inst, TextFormat fmt = TextFormat::text) {
    if (fmt == TextFormat::json) {
        nlohmann::json j;
        j["teams"] = inst.team_count();
        j["problems"] = inst.problem_count;
        j["rooms"] = inst.room_plan;
        auto& entries = j["entries"] = nlohmann::json::array();
        for (int i = 0; i < inst.team_count(); ++i)
            entries.push_back({{"id", inst.teams[i]},
                               {"school", inst.schools[i]},
                               {"portfolio", inst.portfolios[i]}});
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "teams=" << inst.team_count() << " problems=" << inst.problem_count << " rooms=";
    for (size_t k = 0; k < inst.room_plan.size(); ++k)
        out << (k ? "," : "") << inst.room_plan[k];
    out << "\n";
    for (int i = 0; i < inst.team_count(); ++i) {
        out << inst.teams[i] << ' ' << inst.schools[i];
        for (int q = 0; q < 3; ++q) out << ' ' << inst.portfolios[i][q];
        out << "\n";
    }
    return out.str();
}

}  // namespace fightsched
