#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "fightsched/fightsched.hpp"

#ifndef FIXTURE_DIR
#error "FIXTURE_DIR must point at tests/data"
#endif

namespace fixtures {

inline std::string read_file(const std::string& name) {
    std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline fightsched::Instance ba2018() {
    return fightsched::parse_instance(read_file("ba2018.instance"));
}

inline fightsched::Schedule ba2018_real(const fightsched::Instance& inst) {
    return fightsched::parse_schedule(read_file("ba2018_real.schedule"), inst);
}

inline fightsched::Schedule ba2018_fair(const fightsched::Instance& inst) {
    return fightsched::parse_schedule(read_file("ba2018_fair.schedule"), inst);
}

inline fightsched::Schedule ba2018_order_fair(const fightsched::Instance& inst) {
    return fightsched::parse_schedule(read_file("ba2018_order_fair.schedule"), inst);
}

inline fightsched::Instance kosice15() {
    return fightsched::parse_instance(read_file("kosice15.instance"));
}

/// Instance with explicit portfolios; one school per team unless given.
inline fightsched::Instance make_instance(std::vector<std::array<int, 3>> portfolios, int problems,
                                          std::vector<int> room_plan,
                                          std::vector<std::string> schools = {}) {
    fightsched::Instance inst;
    inst.problem_count = problems;
    inst.portfolios = std::move(portfolios);
    inst.room_plan = std::move(room_plan);
    for (size_t i = 0; i < inst.portfolios.size(); ++i) {
        inst.teams.push_back("T" + std::to_string(i + 1));
        inst.schools.push_back(schools.empty() ? "school" + std::to_string(i + 1) : schools[i]);
    }
    inst.check();
    return inst;
}

/// n teams with pairwise disjoint portfolios {1,2,3}, {4,5,6}, ...
inline fightsched::Instance disjoint_instance(int n, std::vector<int> room_plan) {
    std::vector<std::array<int, 3>> portfolios;
    for (int i = 0; i < n; ++i) portfolios.push_back({3 * i + 1, 3 * i + 2, 3 * i + 3});
    return make_instance(std::move(portfolios), 3 * n, std::move(room_plan));
}

/// The 8-team obstruction profile: five copies of {1,2,3} plus {1,4,5},
/// {2,6,7}, {3,8,9}; problems 10..17 unused.
inline fightsched::Instance special_profile_instance() {
    std::vector<std::array<int, 3>> portfolios;
    for (int i = 0; i < 5; ++i) portfolios.push_back({1, 2, 3});
    portfolios.push_back({1, 4, 5});
    portfolios.push_back({2, 6, 7});
    portfolios.push_back({3, 8, 9});
    return make_instance(std::move(portfolios), 17, {4, 4});
}

/// Uniformly random instance: portfolios are 3 distinct problems from [1,m],
/// schools assigned round-robin over `school_count`.
inline fightsched::Instance random_instance(std::mt19937_64& rng, int n, int m, int school_count,
                                            std::vector<int> room_plan) {
    std::vector<std::array<int, 3>> portfolios;
    for (int i = 0; i < n; ++i) {
        std::array<int, 3> p{};
        for (int q = 0; q < 3; ++q) {
            int draw;
            do {
                draw = static_cast<int>(rng() % m) + 1;
            } while ((q > 0 && draw == p[0]) || (q > 1 && draw == p[1]));
            p[q] = draw;
        }
        portfolios.push_back(p);
    }
    std::vector<std::string> schools;
    for (int i = 0; i < n; ++i) schools.push_back("S" + std::to_string(i % school_count + 1));
    return make_instance(std::move(portfolios), m, std::move(room_plan), std::move(schools));
}

/// Random (not necessarily feasible) schedule: per round each team gets a
/// random portfolio problem, a random room, and a random stage.
inline fightsched::Schedule random_schedule(std::mt19937_64& rng, const fightsched::Instance& inst) {
    fightsched::Schedule sched(inst.team_count());
    for (int j = 0; j < 3; ++j)
        for (int t = 0; t < inst.team_count(); ++t) {
            sched.at(j, t).problem = inst.portfolios[t][rng() % 3];
            sched.at(j, t).room = static_cast<int>(rng() % inst.room_count());
            sched.at(j, t).stage = static_cast<fightsched::Stage>(rng() % 4);
        }
    return sched;
}

}  // namespace fixtures
