#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace fightsched;

namespace {

// replay a witness against the schedule it came from
bool witness_sound(const Instance& inst, const Schedule& sched, const Violation& v) {
    switch (v.rule) {
        case Criterion::fair:
        case Criterion::weakly_fair:
            return v.team != v.other_team && sched.room_of(v.round, v.team) == v.room &&
                   sched.room_of(v.round, v.other_team) == v.room &&
                   sched.problem_of(v.round, v.other_team) == v.problem &&
                   inst.has_problem(v.team, v.problem) &&
                   (v.rule != Criterion::weakly_fair || v.round < 2);
        case Criterion::non_cooperative:
            return v.team != v.other_team &&
                   sched.room_of(v.round, v.team) == sched.room_of(v.round, v.other_team) &&
                   inst.schools[v.team] == inst.schools[v.other_team];
        case Criterion::order_fair:
            return v.stage.has_value() && v.other_round != v.round &&
                   sched.stage_of(v.round, v.team) == *v.stage &&
                   sched.stage_of(v.other_round, v.team) == *v.stage;
        case Criterion::strongly_fair: {
            if (v.round == v.other_round && v.team >= 0) {
                // duplicate within one Fight
                return sched.problem_of(v.round, v.other_team) == v.problem &&
                       sched.room_of(v.round, v.other_team) == sched.room_of(v.round, v.team);
            }
            auto present_in_fight = [&](int round) {
                int room = sched.room_of(round, v.team);
                for (int o : occupants(sched, round, room))
                    if (sched.problem_of(round, o) == v.problem) return true;
                return false;
            };
            return present_in_fight(v.round) && present_in_fight(v.other_round);
        }
        case Criterion::feasible:
            return true;  // schema varies; feasibility has its own direct tests
    }
    return false;
}

}  // namespace

TEST_CASE("the real 2018 schedule is feasible and non-cooperative but unfair") {
    Instance inst = fixtures::ba2018();
    Schedule real = fixtures::ba2018_real(inst);
    FairnessCriteria crit;
    crit.level = FairnessLevel::fair;
    auto report = validate(inst, real, crit);

    REQUIRE(report.verdict(Criterion::feasible));
    REQUIRE(report.verdict(Criterion::non_cooperative));
    REQUIRE_FALSE(report.verdict(Criterion::fair));
    REQUIRE_FALSE(report.requested_pass());

    int lions = inst.team_index("Lions");
    int sharks1 = inst.team_index("Sharks1");
    int sharks2 = inst.team_index("Sharks2");

    // Lions watches Sharks1 present problem 4 in round 1 room 1...
    bool p4 = false, p10 = false;
    for (const auto* v : report.violations_of(Criterion::fair)) {
        p4 |= v->team == lions && v->round == 0 && v->room == 0 && v->problem == 4 &&
              v->other_team == sharks1;
        // ...and Sharks2 present problem 10 in round 2
        p10 |= v->team == lions && v->round == 1 && v->problem == 10 && v->other_team == sharks2;
    }
    REQUIRE(p4);
    REQUIRE(p10);

    for (const auto& v : report.violations) REQUIRE(witness_sound(inst, real, v));
}

TEST_CASE("the fair 2018 schedule: fair and non-cooperative, not order fair, not strongly fair") {
    Instance inst = fixtures::ba2018();
    Schedule fair = fixtures::ba2018_fair(inst);
    FairnessCriteria crit;
    crit.level = FairnessLevel::fair;
    crit.non_cooperative = true;
    auto report = validate(inst, fair, crit);

    REQUIRE(report.verdict(Criterion::feasible));
    REQUIRE(report.verdict(Criterion::fair));
    REQUIRE(report.verdict(Criterion::weakly_fair));
    REQUIRE(report.verdict(Criterion::non_cooperative));
    REQUIRE(report.requested_pass());

    // Lions presents first in all three Fights
    REQUIRE_FALSE(report.verdict(Criterion::order_fair));
    int lions = inst.team_index("Lions");
    bool lions_stage_a = false;
    for (const auto* v : report.violations_of(Criterion::order_fair))
        lions_stage_a |= v->team == lions && v->stage == Stage::A;
    REQUIRE(lions_stage_a);

    // Whales1 meets problem 4 in rounds 2 and 3
    REQUIRE_FALSE(report.verdict(Criterion::strongly_fair));
    int whales1 = inst.team_index("Whales1");
    bool whales1_p4 = false;
    for (const auto* v : report.violations_of(Criterion::strongly_fair))
        whales1_p4 |= v->team == whales1 && v->problem == 4 && v->other_round == 1 && v->round == 2;
    REQUIRE(whales1_p4);
}

TEST_CASE("the order-fair 2018 schedule passes everything but strong fairness") {
    Instance inst = fixtures::ba2018();
    Schedule of = fixtures::ba2018_order_fair(inst);
    auto report = validate(inst, of, {});
    REQUIRE(report.verdict(Criterion::feasible));
    REQUIRE(report.verdict(Criterion::fair));
    REQUIRE(report.verdict(Criterion::non_cooperative));
    REQUIRE(report.verdict(Criterion::order_fair));
    REQUIRE_FALSE(report.verdict(Criterion::strongly_fair));
}

TEST_CASE("three disjoint teams in one room are strongly fair") {
    Instance inst = fixtures::disjoint_instance(3, {3});
    auto result = simple_schedule(inst);
    REQUIRE(result.schedule.has_value());
    auto report = validate(inst, *result.schedule, {});
    REQUIRE(report.verdict(Criterion::feasible));
    REQUIRE(report.verdict(Criterion::strongly_fair));
}

TEST_CASE("infeasible schedules still get full fairness audits") {
    Instance inst = fixtures::ba2018();
    Schedule broken = fixtures::ba2018_fair(inst);
    broken.at(0, 0).problem = 9;  // Sharks1 claims a problem outside its portfolio
    auto report = validate(inst, broken, {});
    REQUIRE_FALSE(report.verdict(Criterion::feasible));
    REQUIRE(report.verdicts.count(Criterion::fair) == 1);
    REQUIRE(report.verdicts.count(Criterion::strongly_fair) == 1);
}

TEST_CASE("fairness hierarchy on random schedules: strong => fair => weak") {
    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 300; ++iter) {
        Instance inst = fixtures::random_instance(rng, 7, 9, 3, {4, 3});
        Schedule sched = fixtures::random_schedule(rng, inst);
        auto report = validate(inst, sched, {});
        if (report.verdict(Criterion::strongly_fair)) REQUIRE(report.verdict(Criterion::fair));
        if (report.verdict(Criterion::fair)) REQUIRE(report.verdict(Criterion::weakly_fair));
        // verdicts match their witness lists
        for (auto [c, ok] : report.verdicts) REQUIRE(ok == report.violations_of(c).empty());
    }
}

TEST_CASE("witnesses replay on random schedules") {
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 200; ++iter) {
        Instance inst = fixtures::random_instance(rng, 6, 8, 2, {3, 3});
        Schedule sched = fixtures::random_schedule(rng, inst);
        auto report = validate(inst, sched, {});
        for (const auto& v : report.violations) REQUIRE(witness_sound(inst, sched, v));
    }
}

TEST_CASE("validate is pure") {
    Instance inst = fixtures::ba2018();
    Schedule real = fixtures::ba2018_real(inst);
    auto a = validate(inst, real, {});
    auto b = validate(inst, real, {});
    REQUIRE(a.verdicts == b.verdicts);
    REQUIRE(a.violations.size() == b.violations.size());
}

TEST_CASE("dimension mismatches throw") {
    Instance inst = fixtures::ba2018();
    Schedule wrong(5);
    REQUIRE_THROWS_AS(validate(inst, wrong, {}), std::invalid_argument);
}
