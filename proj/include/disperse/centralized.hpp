#pragma once
#include <stdexcept>
#include <vector>

#include "engine.hpp"
#include "policy.hpp"

namespace disperse {

// The omniscient benchmark: each robot steps to the clockwise-first neighbor
// that increases its distance from s within R(t), and settles when no such
// step exists. Active robots stay two apart, every path is shortest, and all
// five metrics hit their analytic optima on any connected region, simply
// connected or not.
class OfflineOptimalPolicy : public Policy {
public:
    std::string_view name() const override { return "offline-opt"; }
    Capabilities caps() const override { return {Capabilities::kOmniscient, 0, 0}; }
    bool centralized() const override { return true; }

    void on_enter(int) override {}

    void begin_step(const World& world, int64_t) override {
        world_ = &world;
        if (dist_rt_.empty() || world.settled_count() != settled_snapshot_) {
            settled_snapshot_ = world.settled_count();
            recompute(world);
        }
    }

    Action decide(int robot, const SensorView&) override {
        const World& w = *world_;
        const Environment& env = w.env();
        const Cell pos = w.robot(robot).pos;
        const int d0 = dist_rt_[size_t(env.id_of(pos))];

        bool any_increasing = false;
        for (Direction d : kDirections) {
            const Cell c = pos + delta(d);
            const int id = env.id_of(c);
            if (id < 0 || dist_rt_[size_t(id)] <= d0) continue;
            any_increasing = true;
            if (w.cell_empty(c)) return Action::move_to(d);
        }
        if (any_increasing)
            throw std::logic_error(
                "offline-opt: distance-increasing neighbors exist but all are occupied");
        return Action::settle();
    }

private:
    // BFS from s in R(t): settled robots count as walls and get distance -1
    void recompute(const World& world) {
        const Environment& env = world.env();
        dist_rt_.assign(size_t(env.size()), -1);
        const int sid = env.id_of(env.source());
        if (!world.free_in_rt(env.source())) return;  // s settled: run is over
        std::vector<int32_t> queue;
        dist_rt_[size_t(sid)] = 0;
        queue.push_back(sid);
        for (size_t head = 0; head < queue.size(); ++head) {
            const int id = queue[head];
            const Cell c = env.cell(id);
            for (Direction d : kDirections) {
                const Cell nc = c + delta(d);
                const int nid = env.id_of(nc);
                if (nid < 0 || dist_rt_[size_t(nid)] >= 0 || !world.free_in_rt(nc)) continue;
                dist_rt_[size_t(nid)] = dist_rt_[size_t(id)] + 1;
                queue.push_back(nid);
            }
        }
    }

    const World* world_ = nullptr;
    std::vector<int> dist_rt_;
    int settled_snapshot_ = -1;
};

// Phased BFS-tree filling: robots flow down the edges of a breadth-first
// spanning tree, a robot at depth d advancing only while every node at depth
// <= d is occupied, into child subtrees that still need settlers. Travel is
// exactly one tree descent per robot, so T_total = sum of distances and
// T_max = max distance; the phase discipline makes robots wait, so energy
// (and usually makespan) exceed the optimum. The travel-optimal-but-not-
// energy-optimal exhibit.
class BfsTreePolicy : public Policy {
public:
    std::string_view name() const override { return "bfs-tree"; }
    Capabilities caps() const override { return {Capabilities::kOmniscient, 0, 0}; }
    bool centralized() const override { return true; }

    void on_enter(int) override {
        if (initialized_) active_in_[size_t(root_)]++;
        else pending_enter_++;
    }

    void begin_step(const World& world, int64_t) override {
        world_ = &world;
        if (!initialized_) init(world);
        // phase gate: the shallowest depth that still has an unoccupied node
        occ_by_depth_.assign(size_t(max_depth_ + 1), 0);
        for (int i = 0; i < world.entered(); ++i)
            occ_by_depth_[size_t(depth_[size_t(world.env().id_of(world.robot(i).pos))])]++;
        min_unocc_depth_ = max_depth_ + 1;
        for (int d = 0; d <= max_depth_; ++d)
            if (occ_by_depth_[size_t(d)] < layer_size_[size_t(d)]) {
                min_unocc_depth_ = d;
                break;
            }
    }

    Action decide(int robot, const SensorView&) override {
        const World& w = *world_;
        const Environment& env = w.env();
        const Cell pos = w.robot(robot).pos;
        const int v = env.id_of(pos);

        int needing = 0;
        std::optional<Direction> target;
        int chosen = -1;
        for (int cid : children_[size_t(v)]) {
            if (unsettled_in_[size_t(cid)] <= active_in_[size_t(cid)]) continue;
            ++needing;
            if (chosen < 0 && w.cell_empty(env.cell(cid))) {
                chosen = cid;
                target = direction_to(pos, env.cell(cid));
            }
        }
        if (needing == 0) {
            for (int x = v; x >= 0; x = parent_[size_t(x)]) {
                unsettled_in_[size_t(x)]--;
                active_in_[size_t(x)]--;
            }
            return Action::settle();
        }
        if (min_unocc_depth_ <= depth_[size_t(v)]) return Action::wait();  // hold the phase
        if (!target) return Action::wait();
        active_in_[size_t(chosen)]++;
        return Action::move_to(*target);
    }

private:
    void init(const World& world) {
        const Environment& env = world.env();
        const int n = env.size();
        parent_.assign(size_t(n), -1);
        children_.assign(size_t(n), {});
        depth_.assign(size_t(n), -1);
        unsettled_in_.assign(size_t(n), 0);
        active_in_.assign(size_t(n), 0);
        root_ = env.id_of(env.source());
        depth_[size_t(root_)] = 0;
        std::vector<int32_t> queue{int32_t(root_)};
        for (size_t head = 0; head < queue.size(); ++head) {
            const int id = queue[head];
            for (Direction d : kDirections) {
                const int nid = env.id_of(env.cell(id) + delta(d));
                if (nid < 0 || depth_[size_t(nid)] >= 0) continue;
                depth_[size_t(nid)] = depth_[size_t(id)] + 1;
                parent_[size_t(nid)] = id;
                children_[size_t(id)].push_back(nid);
                queue.push_back(nid);
            }
        }
        max_depth_ = 0;
        for (int id = 0; id < n; ++id) max_depth_ = std::max(max_depth_, depth_[size_t(id)]);
        layer_size_.assign(size_t(max_depth_ + 1), 0);
        for (int id = 0; id < n; ++id) layer_size_[size_t(depth_[size_t(id)])]++;
        for (int id = 0; id < n; ++id)
            for (int x = id; x >= 0; x = parent_[size_t(x)]) unsettled_in_[size_t(x)]++;
        active_in_[size_t(root_)] += pending_enter_;
        pending_enter_ = 0;
        initialized_ = true;
    }

    static Direction direction_to(const Cell& from, const Cell& to) {
        const Offset step = to - from;
        for (Direction d : kDirections)
            if (delta(d) == step) return d;
        throw std::logic_error("bfs-tree: tree edge is not unit length");
    }

    const World* world_ = nullptr;
    bool initialized_ = false;
    int root_ = -1;
    int max_depth_ = 0;
    int pending_enter_ = 0;
    int min_unocc_depth_ = 0;
    std::vector<int32_t> parent_;
    std::vector<std::vector<int32_t>> children_;
    std::vector<int32_t> depth_;
    std::vector<int32_t> layer_size_;
    std::vector<int32_t> occ_by_depth_;
    std::vector<int32_t> unsettled_in_;
    std::vector<int32_t> active_in_;
};

}  // namespace disperse
