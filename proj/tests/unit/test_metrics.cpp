#include <doctest.h>

#include "disperse/engine.hpp"
#include "disperse/fcdfs.hpp"
#include "disperse/generate.hpp"
#include "disperse/metrics.hpp"

using namespace disperse;

TEST_CASE("single-cell region: M=2, T=0, E=1") {
    Environment env = gen_square(1, {0, 0});
    FcdfsPolicy policy;
    World world(env);
    Engine engine(world, policy, Schedule::synchronous());
    REQUIRE(engine.run(10).complete());
    MetricsReport m = compute_metrics(world);
    CHECK(m.makespan == 2);
    CHECK(m.travel_total == 0);
    CHECK(m.energy_total == 1);
    CHECK(m.energy_max == 1);
    OptimalBaselines o = optimal_baselines(env);
    CHECK(o.makespan == 2);
    CHECK(o.travel_total == 0);
    CHECK(o.energy_total == 1);
    CHECK(o.energy_max == 1);
}

TEST_CASE("3x3 fcdfs metrics both ways: from the world and from the trace") {
    Environment env = gen_square(3, {0, 0});
    FcdfsPolicy policy;
    Trace trace(Trace::Mask::movement());
    World world(env);
    Engine engine(world, policy, Schedule::synchronous(), &trace);
    REQUIRE(engine.run(40).complete());

    MetricsReport from_world = compute_metrics(world);
    MetricsReport from_trace = compute_metrics(env, trace);
    CHECK(from_world.makespan == 18);
    CHECK(from_world.travel_total == 18);
    CHECK(from_world.energy_total == 27);
    CHECK(from_world.travel_max == 4);
    CHECK(from_world.energy_max == 5);
    CHECK(from_trace.makespan == from_world.makespan);
    CHECK(from_trace.travel_total == from_world.travel_total);
    CHECK(from_trace.energy_total == from_world.energy_total);
    CHECK(from_trace.energy_max == from_world.energy_max);
}

TEST_CASE("optimal baselines closed forms") {
    SUBCASE("corner-source squares: T*_total = k^2 (k-1)") {
        for (int k = 2; k <= 12; ++k) {
            OptimalBaselines o = optimal_baselines(gen_square(k, {0, 0}));
            CHECK(o.travel_total == int64_t(k) * k * (k - 1));
            CHECK(o.travel_max == 2 * (k - 1));
            CHECK(o.makespan == 2 * k * k);
            CHECK(o.energy_total == o.travel_total + k * k);
        }
    }
    SUBCASE("paths from the end: T*_total = n(n-1)/2") {
        for (int n : {1, 2, 5, 30}) {
            OptimalBaselines o = optimal_baselines(gen_path(n));
            CHECK(o.travel_total == int64_t(n) * (n - 1) / 2);
            CHECK(o.travel_max == n - 1);
            CHECK(o.energy_max == n);
        }
    }
}

TEST_CASE("observation-style inequalities hold for every complete run") {
    for (uint64_t seed = 0; seed < 5; ++seed) {
        Environment env = gen_carved(9, 20, seed);
        FcdfsPolicy policy;
        World world(env);
        Engine engine(world, policy, Schedule::synchronous());
        REQUIRE(engine.run(4 * env.size()).complete());
        MetricsReport m = compute_metrics(world);
        CHECK(m.energy_total - env.size() >= m.travel_total);
        CHECK(m.energy_max - 1 >= m.travel_max);
        CHECK(m.makespan >= 2 * env.size());
    }
}

TEST_CASE("ratios are exact rationals") {
    Environment env = gen_square(4, {0, 0});
    FcdfsPolicy policy;
    World world(env);
    Engine engine(world, policy, Schedule::synchronous());
    REQUIRE(engine.run(100).complete());
    MetricRatios r = compare(compute_metrics(world), optimal_baselines(env));
    CHECK(r.all_exact());
    CHECK(r.makespan.num == 1);
    CHECK(r.makespan.den == 1);
}

TEST_CASE("incomplete runs refuse to produce metrics") {
    Environment env = gen_square(4, {0, 0});
    FcdfsPolicy policy;
    World world(env);
    Engine engine(world, policy, Schedule::synchronous());
    engine.step();
    CHECK_THROWS_AS(compute_metrics(world), IncompleteTrace);
}

TEST_CASE("csv rows are stable") {
    Environment env = gen_square(3, {0, 0});
    FcdfsPolicy policy;
    World world(env);
    Engine engine(world, policy, Schedule::synchronous());
    REQUIRE(engine.run(40).complete());
    const std::string row =
        csv_row("square-3-s0-0", "fcdfs", 1.0, 42, compute_metrics(world), optimal_baselines(env));
    CHECK(row == "square-3-s0-0,fcdfs,1,42,9,18,18,18,18,4,4,27,27,5,5");
    CHECK(csv_header() ==
          "env_id,algorithm,p,seed,n,M,M_star,T_total,T_total_star,T_max,T_max_star,E_total,"
          "E_total_star,E_max,E_max_star");
    CHECK(format_p(0.5) == "0.5");
    CHECK(format_p(1.0) == "1");
}
