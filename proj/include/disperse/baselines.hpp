#pragma once
#include <stdexcept>
#include <vector>

#include "engine.hpp"
#include "policy.hpp"

namespace disperse {

// Depth-First Leader-Follower (synchronous baseline). The lowest-index active
// robot explores depth-first, preferring the clockwise-first never-visited
// neighbor, and settles when none exists; every other robot chases its
// predecessor's vacated cell, which keeps the chain two cells spaced and
// deadlock-free. Settlers therefore fill the leader's trail backward, one per
// step, and a new robot enters every two steps: makespan is exactly 2n.
// Bookkeeping (visited set, predecessor positions) is simulator-level state,
// deliberately exempt from the (V,B,S) caps.
class DflfPolicy : public Policy {
public:
    std::string_view name() const override { return "dflf"; }
    Capabilities caps() const override { return {2, 0, Capabilities::kUnboundedState}; }

    void on_enter(int robot) override {
        if (int(pos_now_.size()) <= robot) {
            pos_now_.resize(size_t(robot) + 1, Cell{0, 0});
            pos_before_.resize(size_t(robot) + 1, Cell{0, 0});
            seen_once_.resize(size_t(robot) + 1, 0);
        }
    }

    void begin_step(const World& world, int64_t) override {
        world_ = &world;
        if (visited_.size() != size_t(world.env().size()))
            visited_.assign(size_t(world.env().size()), 0);
        for (int i = 0; i < world.entered(); ++i) {
            const Cell p = world.robot(i).pos;
            if (seen_once_[size_t(i)]) {
                pos_before_[size_t(i)] = pos_now_[size_t(i)];
            } else {
                pos_before_[size_t(i)] = p;
                seen_once_[size_t(i)] = 1;
            }
            pos_now_[size_t(i)] = p;
            visited_[size_t(world.env().id_of(p))] = 1;
        }
    }

    Action decide(int robot, const SensorView&) override {
        const World& w = *world_;
        const Cell pos = w.robot(robot).pos;

        const bool chasing =
            robot > 0 && pos_before_[size_t(robot - 1)] != pos_now_[size_t(robot - 1)];
        if (chasing) {
            const Cell target = pos_before_[size_t(robot - 1)];  // predecessor's vacated cell
            const Offset step = target - pos;
            if (std::abs(step.dx) + std::abs(step.dy) != 1)
                throw std::logic_error("dflf: follower lost its predecessor's trail");
            for (Direction d : kDirections)
                if (delta(d) == step) return Action::move_to(d);
        }
        // leader: dive into unexplored territory, clockwise from up
        for (Direction d : kDirections) {
            const Cell c = pos + delta(d);
            if (w.env().in_region(c) && !visited_[size_t(w.env().id_of(c))] && w.cell_empty(c))
                return Action::move_to(d);
        }
        return Action::settle();
    }

private:
    const World* world_ = nullptr;
    std::vector<Cell> pos_now_;     // position at the beginning of this step
    std::vector<Cell> pos_before_;  // position at the beginning of the previous step
    std::vector<uint8_t> seen_once_;
    std::vector<uint8_t> visited_;
};

// Breadth-First Leader-Follower (synchronous baseline). Robots grow an
// exploration tree: whoever stands next to unexplored ground extends the tree
// into it (clockwise preference, earlier robots win same-step races);
// otherwise robots stream down tree edges, round-robin across child subtrees
// that still need settlers, waiting when the next cell is occupied; a robot
// with nothing left below it settles. Multiple exploration heads advance at
// once, which spreads travel across branches instead of one long trail.
class BflfPolicy : public Policy {
public:
    std::string_view name() const override { return "bflf"; }
    Capabilities caps() const override { return {2, 0, Capabilities::kUnboundedState}; }

    void on_enter(int robot) override {
        (void)robot;
        if (root_ >= 0) active_in_[size_t(root_)]++;
        pending_enter_++;
    }

    void begin_step(const World& world, int64_t) override {
        world_ = &world;
        if (!initialized_) init(world);
    }

    Action decide(int robot, const SensorView&) override {
        const World& w = *world_;
        const Environment& env = w.env();
        const Cell pos = w.robot(robot).pos;
        const int v = env.id_of(pos);

        // explore: extend the tree into the clockwise-first unexplored neighbor
        if (unexplored_nbrs_[size_t(v)] > 0) {
            for (Direction d : kDirections) {
                const Cell c = pos + delta(d);
                const int cid = env.id_of(c);
                if (cid < 0 || explored_[size_t(cid)]) continue;
                commit_exploration(v, cid);
                active_in_[size_t(cid)]++;
                return Action::move_to(d);
            }
        }

        // stream: descend into a child subtree that still needs robots
        const auto& kids = children_[size_t(v)];
        int needing = 0;
        std::optional<Direction> target;
        if (!kids.empty()) {
            uint32_t start = rr_[size_t(v)] % uint32_t(kids.size());
            for (size_t k = 0; k < kids.size(); ++k) {
                const int cid = kids[(start + k) % kids.size()];
                if (!subtree_needs(cid)) continue;
                ++needing;
                if (!target && w.cell_empty(env.cell(cid))) {
                    rr_[size_t(v)] = uint32_t((start + k + 1) % kids.size());
                    target = direction_to(pos, env.cell(cid));
                    active_in_[size_t(cid)]++;
                }
            }
        }
        if (target) return Action::move_to(*target);
        if (needing > 0) return Action::wait();  // pipeline backpressure

        // nothing left below this node: fill it
        for (int x = v; x >= 0; x = parent_[size_t(x)]) {
            unsettled_in_[size_t(x)]--;
            active_in_[size_t(x)]--;
        }
        return Action::settle();
    }

private:
    void init(const World& world) {
        const Environment& env = world.env();
        const int n = env.size();
        explored_.assign(size_t(n), 0);
        parent_.assign(size_t(n), -1);
        children_.assign(size_t(n), {});
        unexplored_nbrs_.assign(size_t(n), 0);
        unsettled_in_.assign(size_t(n), 0);
        open_in_.assign(size_t(n), 0);
        active_in_.assign(size_t(n), 0);
        rr_.assign(size_t(n), 0);
        root_ = env.id_of(env.source());
        explored_[size_t(root_)] = 1;
        unexplored_nbrs_[size_t(root_)] = in_region_unexplored(env, root_);
        unsettled_in_[size_t(root_)] = 1;
        if (unexplored_nbrs_[size_t(root_)] > 0) open_in_[size_t(root_)] = 1;
        active_in_[size_t(root_)] += pending_enter_;  // robots that entered before init
        pending_enter_ = 0;
        initialized_ = true;
    }

    int in_region_unexplored(const Environment& env, int id) const {
        int count = 0;
        for (Direction d : kDirections) {
            int nid = env.id_of(env.cell(id) + delta(d));
            if (nid >= 0 && !explored_[size_t(nid)]) ++count;
        }
        return count;
    }

    bool subtree_needs(int id) const {
        return open_in_[size_t(id)] > 0 || unsettled_in_[size_t(id)] > active_in_[size_t(id)];
    }

    void commit_exploration(int from, int to) {
        const Environment& env = world_->env();
        explored_[size_t(to)] = 1;
        parent_[size_t(to)] = from;
        children_[size_t(from)].push_back(to);
        // neighbors that watched `to` lose one unexplored cell
        for (Direction d : kDirections) {
            int nid = env.id_of(env.cell(to) + delta(d));
            if (nid < 0 || !explored_[size_t(nid)]) continue;
            if (--unexplored_nbrs_[size_t(nid)] == 0)
                for (int x = nid; x >= 0; x = parent_[size_t(x)]) open_in_[size_t(x)]--;
        }
        unexplored_nbrs_[size_t(to)] = in_region_unexplored(env, to);
        for (int x = to; x >= 0; x = parent_[size_t(x)]) unsettled_in_[size_t(x)]++;
        if (unexplored_nbrs_[size_t(to)] > 0)
            for (int x = to; x >= 0; x = parent_[size_t(x)]) open_in_[size_t(x)]++;
    }

    static Direction direction_to(const Cell& from, const Cell& to) {
        const Offset step = to - from;
        for (Direction d : kDirections)
            if (delta(d) == step) return d;
        throw std::logic_error("bflf: tree edge is not unit length");
    }

    const World* world_ = nullptr;
    bool initialized_ = false;
    int root_ = -1;
    int pending_enter_ = 0;
    std::vector<uint8_t> explored_;
    std::vector<int32_t> parent_;
    std::vector<std::vector<int32_t>> children_;
    std::vector<int32_t> unexplored_nbrs_;
    std::vector<int32_t> unsettled_in_;  // explored, not yet settled, per subtree
    std::vector<int32_t> open_in_;       // nodes with unexplored neighbors, per subtree
    std::vector<int32_t> active_in_;     // active robots, per subtree
    std::vector<uint32_t> rr_;           // round-robin dispatch cursor
};

}  // namespace disperse
