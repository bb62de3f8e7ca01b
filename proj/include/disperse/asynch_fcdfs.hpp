#pragma once
#include <vector>

#include "policy.hpp"

namespace disperse {

// Asynchronous FCDFS for (2,1,5)-robots under Bernoulli waking. Active robots
// continuously broadcast "1" (the light stays on between wakes, from the
// moment of insertion), which replaces the two-steps-ago trick: an obstacle
// that broadcasts is an active robot, so a broadcasting diagonal is a fake
// hall and a broadcasting walk target is someone to wait for, not a wall.
// Robots therefore visit the same cells in the same order as synchronous
// FCDFS, only slower.
class AsynchFcdfsPolicy : public Policy {
public:
    struct State {
        Direction primary = Direction::Up;
        bool initialized = false;
        bool last_move_secondary = false;
        int64_t moves = 0;
        Offset prev{};  // position one step ago, relative to current; moves only
    };

    std::string_view name() const override { return "asynch-fcdfs"; }
    Capabilities caps() const override { return {2, 1, 5}; }
    std::optional<uint32_t> entry_broadcast() const override { return 1; }

    void on_enter(int robot) override {
        if (int(states_.size()) <= robot) states_.resize(size_t(robot) + 1);
    }

    Action decide(int robot, const SensorView& view) override {
        State& s = states_[size_t(robot)];

        // surrounded by walls/settled robots only
        if (view.all_neighbors_silent_obstacles()) return Action::settle();

        if (!s.initialized) {
            for (Direction d : kDirections)
                if (view.broadcasting_one(d)) return wait();  // let active robots move off first
            for (Direction d : kDirections) {
                if (!view.occupied(d)) {
                    s.primary = d;
                    s.initialized = true;
                    break;
                }
            }
        }

        const Direction sec = secondary_of(s.primary);
        if (view.broadcasting_one(s.primary)) return wait();
        if (!view.occupied(s.primary)) return move(s, s.primary, false);
        if (view.broadcasting_one(sec)) return wait();
        if (!view.occupied(sec)) return move(s, sec, true);

        // corner or hall: both directions blocked by walls or settled robots
        if (view.silent_obstacle_neighbors() >= 3) return Action::settle();
        const Offset diag = Offset{0, 0} - delta(s.primary) - delta(sec);
        if (!view.occupied(diag) || view.broadcasting_one(diag)) return Action::settle();

        // a real hall: turn toward the open neighbor we did not come from.
        // The turn commits only when the move itself happens; if the target
        // currently holds an active robot we wait with the state unchanged
        // and reread the (possibly settled) picture on the next wake.
        const Direction turn = s.last_move_secondary ? opposite(s.primary) : opposite(sec);
        if (view.broadcasting_one(turn)) return wait();
        if (!view.occupied(turn)) {
            s.primary = turn;
            return move(s, turn, false);
        }
        return Action::settle();  // unreachable: a silent turn target makes 3 silent obstacles
    }

    std::optional<Direction> primary_of(int robot) const override {
        const State& s = states_[size_t(robot)];
        return s.initialized ? std::optional<Direction>(s.primary) : std::nullopt;
    }

private:
    static Action wait() { return Action::wait().with_broadcast(1); }
    Action move(State& s, Direction d, bool is_secondary) {
        s.prev = Offset{0, 0} - delta(d);
        s.last_move_secondary = is_secondary;
        s.moves++;
        return Action::move_to(d).with_broadcast(1);
    }

    std::vector<State> states_;
};

}  // namespace disperse
