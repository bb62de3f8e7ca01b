#pragma once
#include <cassert>
#include <vector>

#include "policy.hpp"

namespace disperse {

// Find-Corner Depth-First Search. A (2,0,5)-robot walks in a primary
// direction (secondary = its clockwise rotation) and settles at corners of
// R(t). When both directions are blocked the cell is a corner or a hall; the
// shared diagonal of the two open neighbors decides which, except that an
// active follower can sit on that diagonal and fake a hall. The robot's
// position two steps ago equals the diagonal exactly in that case, so
// remembering two steps of history is enough to tell them apart.
class FcdfsPolicy : public Policy {
public:
    struct State {
        Direction primary = Direction::Up;
        bool initialized = false;
        bool last_move_secondary = false;
        int64_t moves = 0;
        Offset prev{};      // position one step ago, relative to current
        Offset prevprev{};  // position two steps ago, relative to current
    };

    std::string_view name() const override { return "fcdfs"; }
    Capabilities caps() const override { return {2, 0, 5}; }

    void on_enter(int robot) override {
        if (int(states_.size()) <= robot) states_.resize(size_t(robot) + 1);
    }

    Action decide(int robot, const SensorView& view) override {
        State& s = states_[size_t(robot)];

        if (view.all_neighbors_occupied()) return Action::settle();

        if (!s.initialized) {
            for (Direction d : kDirections) {
                if (!view.occupied(d)) {
                    s.primary = d;
                    s.initialized = true;
                    break;
                }
            }
        }

        const Direction sec = secondary_of(s.primary);
        if (!view.occupied(s.primary)) return move(s, s.primary, false);
        if (!view.occupied(sec)) return move(s, sec, true);

        // corner or hall: both walk directions blocked
        if (view.occupied_neighbors() >= 3) return Action::settle();
        const Offset diag = Offset{0, 0} - delta(s.primary) - delta(sec);
        const bool follower_on_diag = s.moves >= 2 && s.prevprev == diag;
        if (follower_on_diag || !view.occupied(diag)) return Action::settle();

        // a real hall: re-aim at the open neighbor we did not come from
        s.primary = s.last_move_secondary ? opposite(s.primary) : opposite(sec);
        return move(s, s.primary, false);
    }

    std::optional<Direction> primary_of(int robot) const override {
        const State& s = states_[size_t(robot)];
        return s.initialized ? std::optional<Direction>(s.primary) : std::nullopt;
    }

    const State& state(int robot) const { return states_[size_t(robot)]; }

private:
    Action move(State& s, Direction d, bool is_secondary) {
        s.prevprev = s.prev - delta(d);
        s.prev = Offset{0, 0} - delta(d);
        s.last_move_secondary = is_secondary;
        s.moves++;
        return Action::move_to(d);
    }

    std::vector<State> states_;
};

// The same algorithm squeezed into 5 persistent bits per robot:
//   b1 b2  primary direction (up/right/down/left)
//   b3     the last step was taken in the secondary direction
//   b4 b5  history register: 10 right after initialization or a hall turn,
//          afterwards (previous b3, 1)
// A blocked robot reads "fake hall" exactly when b5 = 1 and b3 + b4 = 1: at
// least one plain step since the last turn, and the two latest moves form an
// L, which puts its two-steps-ago position on the diagonal.
class Fcdfs5Policy : public Policy {
public:
    std::string_view name() const override { return "fcdfs5"; }
    Capabilities caps() const override { return {2, 0, 5}; }

    void on_enter(int robot) override {
        if (int(regs_.size()) <= robot) regs_.resize(size_t(robot) + 1, 0);
    }

    Action decide(int robot, const SensorView& view) override {
        uint8_t& reg = regs_[size_t(robot)];
        Direction primary = Direction((reg >> 3) & 3);
        uint8_t b3 = (reg >> 2) & 1;
        uint8_t b4 = (reg >> 1) & 1;
        uint8_t b5 = reg & 1;
        bool counter_updated = false;

        if (view.all_neighbors_occupied()) return Action::settle();

        if (b4 == 0 && b5 == 0) {  // all-zero register: first activation
            for (Direction d : kDirections) {
                if (!view.occupied(d)) {
                    primary = d;
                    break;
                }
            }
            b4 = 1;
            b5 = 0;
            counter_updated = true;
        }

        Direction sec = secondary_of(primary);
        if (view.occupied(primary) && view.occupied(sec)) {
            if (view.occupied_neighbors() >= 3) return Action::settle();
            const Offset diag = Offset{0, 0} - delta(primary) - delta(sec);
            if ((b5 == 1 && b3 + b4 == 1) || !view.occupied(diag)) return Action::settle();
            // hall turn: the open direction that is not 180 degrees from the
            // direction last stepped in, inferred from b1b2 and b3
            primary = b3 ? opposite(primary) : opposite(sec);
            sec = secondary_of(primary);
            b4 = 1;
            b5 = 0;
            counter_updated = true;
        }

        if (!counter_updated) {
            b4 = b3;
            b5 = 1;
        }

        if (!view.occupied(primary)) {
            b3 = 0;
        } else if (!view.occupied(sec)) {
            b3 = 1;
        } else {
            return Action::settle();  // unreachable: a turn always opens primary
        }
        reg = uint8_t((uint8_t(primary) << 3) | (b3 << 2) | (b4 << 1) | b5);
        return Action::move_to(b3 ? sec : primary);
    }

    std::optional<uint64_t> packed_state(int robot) const override {
        return regs_[size_t(robot)];
    }

    std::optional<Direction> primary_of(int robot) const override {
        uint8_t reg = regs_[size_t(robot)];
        if ((reg & 3) == 0) return std::nullopt;  // b4b5 = 00: not initialized
        return Direction((reg >> 3) & 3);
    }

private:
    std::vector<uint8_t> regs_;
};

}  // namespace disperse
