#include <doctest.h>

#include <cmath>

#include "disperse/generate.hpp"
#include "disperse/tasep.hpp"

using namespace disperse;

TEST_CASE("alpha") {
    CHECK(alpha(1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(alpha(0.75) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(alpha(0.5) == doctest::Approx(0.146446609).epsilon(1e-9));
    CHECK_THROWS_AS(alpha(0.0), BadProbability);
    CHECK_THROWS_AS(alpha(1.5), BadProbability);
    CHECK_THROWS_AS(alpha(-0.1), BadProbability);
    SUBCASE("p/alpha <= 4 across the whole parameter range") {
        for (int i = 1; i <= 100; ++i) {
            const double p = i / 100.0;
            CHECK(p / alpha(p) <= 4.0 + 1e-12);
        }
    }
}

TEST_CASE("tasep stepping") {
    SUBCASE("a lone agent at p=1 advances every step") {
        TasepState st(1);
        for (int t = 1; t <= 5; ++t) st.step([](int) { return true; });
        CHECK(st.position(1) == 4);  // started at -1
    }
    SUBCASE("exclusion: the rear of two adjacent awake agents stays put") {
        TasepState st(2);
        st.step([](int) { return true; });
        CHECK(st.position(1) == 0);
        CHECK(st.position(2) == -2);  // blocked at step start
        st.step([](int) { return true; });
        CHECK(st.position(1) == 1);
        CHECK(st.position(2) == -1);
    }
    SUBCASE("flux starts at zero and is monotone") {
        TasepState st(64);
        CHECK(st.flux() == 0);
        int prev = 0;
        for (int t = 1; t <= 500; ++t) {
            st.step_coupled(5, 0.7);
            CHECK(st.flux() >= prev);
            prev = st.flux();
        }
    }
    SUBCASE("p=1, t=1: exactly the front agent has crossed") {
        TasepState st(8);
        st.step([](int) { return true; });
        CHECK(st.flux() == 1);
    }
    SUBCASE("positions stay strictly decreasing under random waking") {
        TasepState st(40);
        for (int t = 1; t <= 300; ++t) {
            st.step_coupled(99, 0.6);
            for (int i = 1; i < 40; ++i) CHECK(st.position(i) > st.position(i + 1));
        }
    }
}

TEST_CASE("flux rate approaches alpha") {
    for (double p : {0.5, 0.75, 1.0}) {
        const int64_t T = 20000;
        TasepState st{int(T)};
        for (int64_t t = 0; t < T; ++t) st.step_coupled(123, p);
        CHECK(std::fabs(double(st.flux()) / double(T) - alpha(p)) <= 0.01);
    }
}

TEST_CASE("coupled run at p=1 is deterministic and clean") {
    Environment env = gen_square(5, {0, 0});
    CouplingReport rep = coupled_run(env, 1.0, 7, 200);
    CHECK(rep.violations.empty());
    CHECK(rep.region_makespan == 50);  // 2n, the synchronous value
    CHECK(rep.first_flux_over_n >= rep.region_makespan);
}

TEST_CASE("coupled runs hold the inequalities on random seeds") {
    for (uint64_t s = 0; s < 6; ++s) {
        const double p = (s % 2 == 0) ? 0.5 : 0.75;
        Environment env = gen_carved(12, 40, derive_seed(31, s));
        const int64_t limit = int64_t(std::ceil(6.0 * (env.size() + 1) / alpha(p))) + 64;
        CouplingReport rep = coupled_run(env, p, derive_seed(32, s), limit);
        CHECK(rep.ok());
        CHECK(rep.violations.empty());
        CHECK(rep.region_makespan <= rep.first_flux_over_n);
        CHECK(rep.path_makespan >= rep.region_makespan);  // the path is the worst case
    }
}
