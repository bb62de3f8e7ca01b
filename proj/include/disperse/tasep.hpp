#pragma once
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "asynch_fcdfs.hpp"
#include "engine.hpp"
#include "generate.hpp"
#include "rng.hpp"

namespace disperse {

class BadProbability : public std::runtime_error {
public:
    explicit BadProbability(double p)
        : std::runtime_error("probability must lie in (0,1], got " + std::to_string(p)) {}
};

// alpha(p) = (1 - sqrt(1-p)) / 2, the asymptotic rate at which TASEP agents
// with step initial conditions cross the origin. p / alpha never exceeds 4.
inline double alpha(double p) {
    if (!(p > 0.0) || p > 1.0) throw BadProbability(p);
    return 0.5 * (1.0 - std::sqrt(1.0 - p));
}

// TASEP with step initial conditions: agents 1..N start at x = -1, -2, ...,
// each awake agent hops +1 iff its right cell was empty at the beginning of
// the step. Simulating N = step_limit agents is exact for the flux F(t) at
// t <= step_limit since an agent moves at most once per step.
//
// Only unblocked agents (gap of at least 2 ahead) can move, so the step loop
// walks a free list instead of the whole line; moves update the freedom of
// the mover and its follower, which is the only freedom that can change.
class TasepState {
public:
    explicit TasepState(int agents) : x_(size_t(agents)), is_free_(size_t(agents), 0) {
        for (int i = 0; i < agents; ++i) x_[size_t(i)] = -(i + 1);
        if (agents > 0) {
            is_free_[0] = 1;
            free_.push_back(0);  // the front agent faces open road; all gaps start at 1
        }
    }

    int agents() const { return int(x_.size()); }
    int64_t clock() const { return clock_; }
    int64_t position(int agent) const { return x_[size_t(agent - 1)]; }  // 1-based

    // F(t): agents with non-negative coordinate
    int flux() const { return crossed_; }

    // One simultaneous-commit step. awake(i) is queried with 1-based agent
    // indices; only agents that are unblocked at step start are asked.
    template <typename AwakeFn>
    void step(const AwakeFn& awake) {
        ++clock_;
        movers_.clear();
        for (int i : free_)
            if (awake(i + 1)) movers_.push_back(i);
        for (int i : movers_) {
            const int64_t to = ++x_[size_t(i)];
            if (to == 0) ++crossed_;
        }
        for (int i : movers_) {
            update_freedom(i);
            if (i + 1 < int(x_.size())) update_freedom(i + 1);
        }
        compact_free_list();
        if (crossed_ > 0 && x_[size_t(crossed_ - 1)] < 0)
            throw SimulationError(SimulationError::Kind::ExclusionViolated, clock_, -1,
                                  "tasep: flux bookkeeping out of sync");
    }

    void step_coupled(uint64_t seed, double p) {
        if (keys_seed_ != seed || keys_.size() != x_.size()) {
            keys_.clear();
            keys_.reserve(x_.size());
            for (size_t i = 0; i < x_.size(); ++i)
                keys_.emplace_back(seed, int64_t(i) + 1);
            keys_seed_ = seed;
        }
        const uint64_t t = uint64_t(clock_ + 1);
        step([&](int agent) { return keys_[size_t(agent - 1)].awake(t, p); });
    }

private:
    bool unblocked(int i) const {
        return i == 0 || x_[size_t(i - 1)] - x_[size_t(i)] >= 2;
    }
    void update_freedom(int i) {
        const bool now = unblocked(i);
        if (now && !is_free_[size_t(i)]) {
            is_free_[size_t(i)] = 1;
            free_.push_back(i);
        } else if (!now && is_free_[size_t(i)]) {
            is_free_[size_t(i)] = 0;  // lazily dropped at compaction
        }
    }
    void compact_free_list() {
        size_t out = 0;
        for (size_t in = 0; in < free_.size(); ++in)
            if (is_free_[size_t(free_[in])]) free_[out++] = free_[in];
        free_.resize(out);
    }

    std::vector<int64_t> x_;
    std::vector<uint8_t> is_free_;
    std::vector<int32_t> free_;
    std::vector<int32_t> movers_;
    std::vector<WakeStream> keys_;
    uint64_t keys_seed_ = ~uint64_t{0};
    int64_t clock_ = 0;
    int crossed_ = 0;
};

// ---------------------------------------------------------------------------
// Coupled region / path / TASEP run over shared wake streams.
// ---------------------------------------------------------------------------

// depth = number of moves made; -1 before entry, 0 at entry.
struct CouplingViolationRecord {
    int64_t t = 0;
    int agent = 0;
    std::string what;
};

struct CouplingReport {
    int n = 0;
    double p = 0;
    uint64_t seed = 0;
    std::vector<CouplingViolationRecord> violations;
    int64_t region_makespan = -1;    // -1 if the region run never completed
    int64_t path_makespan = -1;
    int64_t first_flux_over_n = -1;  // first t with F(t) >= n+1
    int64_t steps_run = 0;
    bool ok() const { return violations.empty() && region_makespan >= 0; }
};

// Runs AsynchFCDFS over env and over the straight path P(n), plus TASEP, all
// three driven by the same per-agent wake streams, and checks each step:
//   (i)  A_i unsettled in R  =>  A_i unsettled in P(n) and depth_R >= depth_P
//   (ii) A_i unsettled in P(n) => depth_P >= x_i
//  (iii) F(t) >= n+1 => the region run is already complete
inline CouplingReport coupled_run(const Environment& env, double p, uint64_t seed,
                                  int64_t step_limit) {
    const int n = env.size();
    CouplingReport report;
    report.n = n;
    report.p = p;
    report.seed = seed;

    const Environment path = gen_path(n);
    World region_world(env), path_world(path);
    AsynchFcdfsPolicy region_policy, path_policy;
    const Schedule sched = Schedule::bernoulli_coupled(p, seed);
    Engine region_engine(region_world, region_policy, sched);
    Engine path_engine(path_world, path_policy, sched);
    TasepState tasep(int(std::min<int64_t>(std::max<int64_t>(step_limit, n + 1), 1 << 22)));

    auto violate = [&](int64_t t, int agent, const std::string& what) {
        if (report.violations.size() < 32) report.violations.push_back({t, agent, what});
    };

    for (int64_t t = 1; t <= step_limit; ++t) {
        if (!region_world.complete()) {
            region_engine.step();
            if (region_world.complete()) {
                int64_t m = 0;
                for (const auto& r : region_world.roster()) m = std::max(m, r.t_settle);
                report.region_makespan = m;
            }
        }
        if (!path_world.complete()) {
            path_engine.step();
            if (path_world.complete()) {
                int64_t m = 0;
                for (const auto& r : path_world.roster()) m = std::max(m, r.t_settle);
                report.path_makespan = m;
            }
        }
        tasep.step_coupled(seed, p);
        report.steps_run = t;

        for (int i = 1; i <= n; ++i) {
            const bool in_r = i <= region_world.entered();
            const bool in_p = i <= path_world.entered();
            const bool settled_r = in_r && region_world.robot(i - 1).settled;
            const bool settled_p = in_p && path_world.robot(i - 1).settled;
            const int64_t depth_r = in_r ? region_world.robot(i - 1).moves : -1;
            const int64_t depth_p = in_p ? path_world.robot(i - 1).moves : -1;
            if (!settled_r) {
                if (settled_p)
                    violate(t, i, "A_i settled in P(n) while still unsettled in R");
                if (depth_r < depth_p)
                    violate(t, i, "depth in R fell below depth in P(n)");
            }
            if (!settled_p && depth_p < tasep.position(i))
                violate(t, i, "depth in P(n) fell below the TASEP coordinate");
        }
        if (tasep.flux() >= n + 1) {
            if (report.first_flux_over_n < 0) report.first_flux_over_n = t;
            if (!region_world.complete())
                violate(t, 0, "F(t) reached n+1 before the region run completed");
        }
        if (region_world.complete() && path_world.complete() && report.first_flux_over_n >= 0)
            break;
    }
    return report;
}

}  // namespace disperse
