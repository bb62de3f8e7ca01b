#pragma once
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "engine.hpp"
#include "environment.hpp"

namespace disperse {

class IncompleteTrace : public std::runtime_error {
public:
    explicit IncompleteTrace(const std::string& what) : std::runtime_error(what) {}
};

struct PerRobot {
    int64_t travel = 0;   // T_i: number of moves
    int64_t energy = 0;   // E_i = t_end - t_start: active steps including waits
    int64_t t_start = 0;  // step at whose end the robot entered
    int64_t t_end = 0;    // step during which it settled
    Cell settle_cell{};
};

struct MetricsReport {
    int n = 0;
    int64_t makespan = 0;
    int64_t travel_total = 0, travel_max = 0;
    int64_t energy_total = 0, energy_max = 0;
    std::vector<PerRobot> robots;
};

inline MetricsReport compute_metrics(const World& world) {
    if (!world.complete())
        throw IncompleteTrace("metrics require a complete run: " +
                              std::to_string(world.settled_count()) + "/" +
                              std::to_string(world.env().size()) + " cells settled");
    MetricsReport r;
    r.n = world.env().size();
    r.robots.reserve(size_t(world.entered()));
    for (const RobotRecord& rec : world.roster()) {
        PerRobot pr;
        pr.travel = rec.moves;
        pr.t_start = rec.t_enter;
        pr.t_end = rec.t_settle;
        pr.energy = rec.t_settle - rec.t_enter;
        pr.settle_cell = rec.pos;
        if (pr.travel > pr.energy - 1)  // the settle step carries no move
            throw std::logic_error("metrics: robot moved more steps than it was active");
        r.travel_total += pr.travel;
        r.travel_max = std::max(r.travel_max, pr.travel);
        r.energy_total += pr.energy;
        r.energy_max = std::max(r.energy_max, pr.energy);
        r.makespan = std::max(r.makespan, pr.t_end);
        r.robots.push_back(pr);
    }
    return r;
}

inline MetricsReport compute_metrics(const Environment& env, const Trace& trace) {
    return compute_metrics(replay(env, trace));
}

// The analytic optima any algorithm is measured against; computable from
// shortest-path distances alone.
struct OptimalBaselines {
    int64_t makespan = 0;      // 2n
    int64_t travel_total = 0;  // sum of dist(s, v)
    int64_t travel_max = 0;    // max dist(s, v)
    int64_t energy_total = 0;  // n + travel_total
    int64_t energy_max = 0;    // 1 + travel_max
};

inline OptimalBaselines optimal_baselines(const Environment& env) {
    OptimalBaselines ob;
    const std::vector<int> dist = bfs_distances(env, env.source());
    for (int d : dist) {
        ob.travel_total += d;
        ob.travel_max = std::max<int64_t>(ob.travel_max, d);
    }
    ob.makespan = 2 * int64_t(env.size());
    ob.energy_total = env.size() + ob.travel_total;
    ob.energy_max = 1 + ob.travel_max;
    return ob;
}

// Exact rational ratio measured/optimal; integer metrics make float equality
// traps unnecessary.
struct Ratio {
    int64_t num = 0, den = 1;
    bool exact() const { return num == den; }
    double value() const { return den == 0 ? 0.0 : double(num) / double(den); }
};

struct MetricRatios {
    Ratio makespan, travel_total, travel_max, energy_total, energy_max;
    bool all_exact() const {
        return makespan.exact() && travel_total.exact() && travel_max.exact() &&
               energy_total.exact() && energy_max.exact();
    }
};

inline MetricRatios compare(const MetricsReport& r, const OptimalBaselines& o) {
    auto ratio = [](int64_t a, int64_t b) {
        if (b == 0) return Ratio{a == 0 ? 1 : a, a == 0 ? 1 : 0};
        int64_t g = std::gcd(a, b);
        g = g == 0 ? 1 : g;
        return Ratio{a / g, b / g};
    };
    return {ratio(r.makespan, o.makespan), ratio(r.travel_total, o.travel_total),
            ratio(r.travel_max, o.travel_max), ratio(r.energy_total, o.energy_total),
            ratio(r.energy_max, o.energy_max)};
}

// ---------------------------------------------------------------------------
// CSV: one row per run.
// ---------------------------------------------------------------------------

inline std::string csv_header() {
    return "env_id,algorithm,p,seed,n,M,M_star,T_total,T_total_star,T_max,T_max_star,"
           "E_total,E_total_star,E_max,E_max_star";
}

inline std::string format_p(double p) {
    if (p == 1.0) return "1";
    std::ostringstream out;
    out << p;
    return out.str();
}

inline std::string csv_row(const std::string& env_id, const std::string& algorithm, double p,
                           uint64_t seed, const MetricsReport& r, const OptimalBaselines& o) {
    std::ostringstream out;
    out << env_id << ',' << algorithm << ',' << format_p(p) << ',' << seed << ',' << r.n << ','
        << r.makespan << ',' << o.makespan << ',' << r.travel_total << ',' << o.travel_total
        << ',' << r.travel_max << ',' << o.travel_max << ',' << r.energy_total << ','
        << o.energy_total << ',' << r.energy_max << ',' << o.energy_max;
    return out.str();
}

}  // namespace disperse
