#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "fixtures.hpp"

using namespace fightsched;

TEST_CASE("generation is reproducible bit for bit") {
    auto profile = RegionProfile::bratislava();
    for (std::uint64_t seed : {0ull, 1ull, 42ull, 999ull}) {
        Instance a = generate_instance(profile, seed);
        Instance b = generate_instance(profile, seed);
        REQUIRE(a.teams == b.teams);
        REQUIRE(a.schools == b.schools);
        REQUIRE(a.portfolios == b.portfolios);
    }
    REQUIRE(generate_instance(profile, 1).portfolios != generate_instance(profile, 2).portfolios);
}

TEST_CASE("generated instances are structurally valid") {
    auto profile = RegionProfile::kosice();
    int min_n = 99, max_n = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Instance inst = generate_instance(profile, seed);
        inst.check();  // would throw on any invariant violation
        REQUIRE(inst.school_groups().size() == 8);  // 2 big + 6 small, each with >= 1 team
        for (const auto& p : inst.portfolios)
            for (int x : p) {
                REQUIRE(x >= 1);
                REQUIRE(x <= 17);
            }
        min_n = std::min(min_n, inst.team_count());
        max_n = std::max(max_n, inst.team_count());
    }
    // support is 2 big schools of 2..4 teams plus 6 small schools of 1..2,
    // and the samples land inside the 10..16 band seen in practice
    REQUIRE(min_n >= 10);
    REQUIRE(max_n <= 20);
    REQUIRE(min_n <= 16);
}

TEST_CASE("team counts follow the school-size distributions") {
    auto profile = RegionProfile::bratislava();

    // analytic distribution of n: convolution of 3 big and 3 small schools
    std::map<int, double> dist{{0, 1.0}};
    auto convolve = [&](const std::vector<std::pair<int, double>>& step) {
        std::map<int, double> next;
        for (auto [n, p] : dist)
            for (auto [k, q] : step) next[n + k] += p * q;
        dist = next;
    };
    for (int i = 0; i < 3; ++i) convolve({{2, 0.5}, {3, 0.3}, {4, 0.2}});
    for (int i = 0; i < 3; ++i) convolve({{1, 0.75}, {2, 0.25}});

    REQUIRE(dist.begin()->first == 9);
    REQUIRE(dist.rbegin()->first == 18);

    const int samples = 20000;
    std::map<int, int> observed;
    for (int seed = 0; seed < samples; ++seed) ++observed[generate_instance(profile, seed).team_count()];

    for (auto [n, count] : observed) REQUIRE(dist.count(n) == 1);  // support matches
    for (auto [n, p] : dist) {
        double se = std::sqrt(p * (1 - p) / samples);
        double freq = static_cast<double>(observed[n]) / samples;
        INFO("n=" << n << " analytic=" << p << " observed=" << freq);
        REQUIRE(std::abs(freq - p) <= 4 * se + 1e-9);
    }
}

TEST_CASE("problem draws follow the 1:2:4 popularity weights") {
    auto profile = RegionProfile::bratislava();
    std::mt19937_64 rng(7);
    const int draws = 1000000;
    std::array<long, 3> class_counts{0, 0, 0};
    std::vector<bool> taken(profile.problem_count + 1, false);
    for (int i = 0; i < draws; ++i) {
        int p = sample_weighted_problem(profile, rng, taken);
        class_counts[profile.weight(p) == 1 ? 0 : profile.weight(p) == 2 ? 1 : 2]++;
    }
    // totals: 8 low * 1 + 6 medium * 2 + 3 high * 4 = 32
    std::array<double, 3> expected{8.0 / 32, 12.0 / 32, 12.0 / 32};
    for (int c = 0; c < 3; ++c) {
        double freq = static_cast<double>(class_counts[c]) / draws;
        double se = std::sqrt(expected[c] * (1 - expected[c]) / draws);
        REQUIRE(std::abs(freq - expected[c]) <= 3 * se + 1e-9);
    }
}

TEST_CASE("portfolio draws are without replacement") {
    auto profile = RegionProfile::kosice();
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Instance inst = generate_instance(profile, seed);
        for (const auto& p : inst.portfolios) {
            REQUIRE(p[0] != p[1]);
            REQUIRE(p[0] != p[2]);
            REQUIRE(p[1] != p[2]);
        }
    }
}

TEST_CASE("degenerate profiles emit instances whose room plan fails downstream") {
    RegionProfile tiny;
    tiny.name = "tiny";
    tiny.small_schools = 1;
    tiny.small_team_probs = {1.0, 0.0};  // always one team
    Instance inst = generate_instance(tiny, 3);
    REQUIRE(inst.team_count() == 1);
    REQUIRE(inst.room_plan.empty());
    REQUIRE_THROWS_AS(room_plan_for(inst.team_count(), RoomPolicy::international),
                      std::invalid_argument);
}

TEST_CASE("region profile config round-trip") {
    auto profile = parse_region_profile(
        "region=test big_schools=2 small_schools=4\n"
        "big_team_probs=0.6,0.3,0.1\n"
        "popularity=8,6,3\n");
    REQUIRE(profile.big_schools == 2);
    REQUIRE(profile.small_schools == 4);
    REQUIRE(profile.big_team_probs == std::array<double, 3>{0.6, 0.3, 0.1});
    // semantic violations surface from the profile invariants
    REQUIRE_THROWS_AS(parse_region_profile("big_schools=1 small_schools=1 popularity=9,9,9"),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(parse_region_profile(""), ParseError);
    REQUIRE_THROWS_AS(parse_region_profile("bogus_key=3"), ParseError);
}

TEST_CASE("batch smoke run") {
    BatchOptions options;
    options.count = 3;
    options.criteria.level = FairnessLevel::none;
    options.time_limit_seconds = 30.0;
    options.seed = 5;
    options.jobs = 2;
    auto report = run_batch(RegionProfile::bratislava(), options);
    REQUIRE(report.runs.size() == 3);
    REQUIRE(report.feasible() + report.infeasible() + report.undecided() == 3);
    // feasibility alone is essentially always satisfiable at these sizes
    REQUIRE(report.feasible() == 3);

    std::string csv = batch_csv(report);
    REQUIRE(csv.find("feasible_ratio") != std::string::npos);
    REQUIRE(csv.find("bratislava") != std::string::npos);
    std::string table = batch_table(report);
    REQUIRE(table.find("Criterion") != std::string::npos);
}

TEST_CASE("batch statuses are independent of the job count") {
    BatchOptions a;
    a.count = 4;
    a.criteria.level = FairnessLevel::weak;
    a.criteria.non_cooperative = true;
    a.time_limit_seconds = 60.0;
    a.seed = 16;  // all four instances conclude in milliseconds
    a.jobs = 1;
    BatchOptions b = a;
    b.jobs = 2;
    auto ra = run_batch(RegionProfile::bratislava(), a);
    auto rb = run_batch(RegionProfile::bratislava(), b);
    for (int i = 0; i < 4; ++i) {
        REQUIRE(ra.runs[i].seed == rb.runs[i].seed);
        REQUIRE(ra.runs[i].status == rb.runs[i].status);
        REQUIRE(ra.runs[i].team_count == rb.runs[i].team_count);
    }
}

TEST_CASE("zero-count batches are rejected") {
    BatchOptions options;
    options.count = 0;
    REQUIRE_THROWS_AS(run_batch(RegionProfile::bratislava(), options), std::invalid_argument);
}
