#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace fightsched;

TEST_CASE("ba2018 fixture parses with the published portfolios") {
    Instance inst = fixtures::ba2018();
    REQUIRE(inst.team_count() == 13);
    REQUIRE(inst.problem_count == 17);
    REQUIRE(inst.room_plan == std::vector<int>{3, 3, 3, 4});

    int sharks1 = inst.team_index("Sharks1");
    int lions = inst.team_index("Lions");
    REQUIRE(sharks1 == 0);
    REQUIRE(inst.portfolios[sharks1] == std::array<int, 3>{4, 6, 14});
    REQUIRE(inst.portfolios[lions] == std::array<int, 3>{4, 9, 10});
    REQUIRE(inst.schools[inst.team_index("Sharks3")] == inst.schools[sharks1]);
    REQUIRE(inst.schools[lions] != inst.schools[sharks1]);
}

TEST_CASE("positional and membership accessors agree with the portfolios") {
    Instance inst = fixtures::ba2018();
    // Sharks1 is t1: positions 1..3 hold problems 4, 6, 14
    REQUIRE(inst.portfolio_problem(0, 0) == 4);
    REQUIRE(inst.portfolio_problem(0, 1) == 6);
    REQUIRE(inst.portfolio_problem(0, 2) == 14);
    // problem 16 is announced by Sharks2 (t2, position 2) and Eagles (t11, position 3)
    auto t16 = inst.teams_with_problem(16);
    REQUIRE(t16 == std::vector<std::pair<int, int>>{{1, 1}, {10, 2}});
    REQUIRE(inst.has_problem(1, 16));
    REQUIRE_FALSE(inst.has_problem(0, 16));
    // problem 4 is chosen by 6 teams
    REQUIRE(inst.teams_with_problem(4).size() == 6);
}

TEST_CASE("minimal three-team instance") {
    Instance inst = parse_instance("teams=3 problems=9 rooms=3\nA s1 1 2 3\nB s2 4 5 6\nC s3 7 8 9\n");
    REQUIRE(inst.team_count() == 3);
    REQUIRE(inst.room_plan == std::vector<int>{3});
}

TEST_CASE("parse errors") {
    SECTION("duplicate problem in a portfolio") {
        REQUIRE_THROWS_WITH(
            parse_instance("teams=3 problems=17 rooms=3\nA s1 13 13 17\nB s2 1 2 3\nC s3 4 5 6\n"),
            Catch::Matchers::ContainsSubstring("distinct"));
    }
    SECTION("wrong field count") {
        REQUIRE_THROWS_AS(
            parse_instance("teams=3 problems=17 rooms=3\nA s1 1 2\nB s2 4 5 6\nC s3 7 8 9\n"),
            ParseError);
    }
    SECTION("room plan sum mismatch") {
        REQUIRE_THROWS_WITH(
            parse_instance("teams=3 problems=17 rooms=4\nA s1 1 2 3\nB s2 4 5 6\nC s3 7 8 9\n"),
            Catch::Matchers::ContainsSubstring("seats"));
    }
    SECTION("unknown problem id") {
        REQUIRE_THROWS_WITH(
            parse_instance("teams=3 problems=17 rooms=3\nA s1 1 2 18\nB s2 4 5 6\nC s3 7 8 9\n"),
            Catch::Matchers::ContainsSubstring("unknown problem"));
    }
    SECTION("team count mismatch") {
        REQUIRE_THROWS_AS(parse_instance("teams=4 problems=17 rooms=4\nA s1 1 2 3\n"), ParseError);
    }
    SECTION("fewer than three teams") {
        REQUIRE_THROWS_AS(parse_instance("teams=2 problems=17 rooms=\nA s1 1 2 3\nB s2 4 5 6\n"),
                          ParseError);
    }
}

TEST_CASE("instance JSON mirror round-trips") {
    Instance inst = fixtures::ba2018();
    Instance back = parse_instance(serialize_instance(inst, TextFormat::json));
    REQUIRE(back.teams == inst.teams);
    REQUIRE(back.schools == inst.schools);
    REQUIRE(back.portfolios == inst.portfolios);
    REQUIRE(back.room_plan == inst.room_plan);

    Instance text_back = parse_instance(serialize_instance(inst, TextFormat::text));
    REQUIRE(text_back.portfolios == inst.portfolios);
}

TEST_CASE("room plans") {
    REQUIRE(room_plan_for(13, RoomPolicy::international) == std::vector<int>{4, 3, 3, 3});
    REQUIRE(room_plan_for(12, RoomPolicy::international) == std::vector<int>{3, 3, 3, 3});
    REQUIRE(room_plan_for(15, RoomPolicy::international) == std::vector<int>{3, 3, 3, 3, 3});
    REQUIRE(room_plan_for(15, RoomPolicy::min_rooms) == std::vector<int>{4, 4, 4, 3});
    REQUIRE(room_plan_for(16, RoomPolicy::min_rooms) == std::vector<int>{4, 4, 4, 4});
    REQUIRE(room_plan_for(4, RoomPolicy::international) == std::vector<int>{4});
    REQUIRE(room_plan_for(8, RoomPolicy::international) == std::vector<int>{4, 4});

    REQUIRE_THROWS_AS(room_plan_for(5, RoomPolicy::international), std::invalid_argument);
    REQUIRE_THROWS_AS(room_plan_for(5, RoomPolicy::min_rooms), std::invalid_argument);
    REQUIRE_THROWS_AS(room_plan_for(2, RoomPolicy::international), std::invalid_argument);

    // every constructible plan seats exactly n teams
    for (int n = 3; n <= 40; ++n) {
        if (n == 5) continue;
        for (auto policy : {RoomPolicy::international, RoomPolicy::min_rooms}) {
            auto plan = room_plan_for(n, policy);
            int sum = 0;
            for (int size : plan) sum += size;
            REQUIRE(sum == n);
        }
    }
}
