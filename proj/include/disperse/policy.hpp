#pragma once
#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cell.hpp"

namespace disperse {

class World;
class Environment;

// (V, B, S)-robot capability declaration: Manhattan sensing radius, broadcast
// bits per step, persistent state bits between steps.
struct Capabilities {
    int sensing = 2;      // V
    int broadcast = 0;    // B
    int state_bits = 5;   // S; kUnboundedState for baselines exempt from the cap
    static constexpr int kUnboundedState = 1 << 20;
    static constexpr int kOmniscient = 1 << 20;  // sensing sentinel for centralized policies
};

class SimulationError : public std::runtime_error {
public:
    enum class Kind {
        CollisionSameCell,
        CollisionSwap,
        MoveIntoOccupied,
        MoveOffRegion,
        BroadcastOverCapacity,
        StateBitsExceeded,
        RobotSettledActed,
        MoveAndSettle,
        SourceEntryCollision,
        ExclusionViolated,
        CouplingViolation,
    };

    SimulationError(Kind kind, int64_t t, int robot, const std::string& what)
        : std::runtime_error("t=" + std::to_string(t) + " robot=" + std::to_string(robot + 1) +
                             ": " + what),
          kind_(kind), t_(t), robot_(robot) {}

    Kind kind() const { return kind_; }
    int64_t step() const { return t_; }
    int robot() const { return robot_; }

private:
    Kind kind_;
    int64_t t_;
    int robot_;
};

// What one robot senses: every cell at Manhattan distance <= V, by relative
// offset. Walls, settled robots, and active robots all read as "occupied";
// only a broadcast payload distinguishes an active robot. No absolute
// coordinates and no identities are exposed. Reads outside the radius throw,
// which is what mechanically enforces the V capability.
//
// The engine binds a probe so entries materialize on first read; everything
// a policy can observe is still the beginning-of-step snapshot, because moves
// commit only after every decision is collected.
class SensorView {
public:
    struct Entry {
        bool occupied = false;
        bool is_source = false;
        bool has_broadcast = false;
        uint32_t broadcast = 0;
    };

    using Probe = Entry (*)(const void* ctx, int dx, int dy);

    explicit SensorView(int v) : v_(v), side_(2 * v + 1), entries_(size_t(side_) * size_t(side_)) {}

    int radius() const { return v_; }

    void clear() { std::fill(entries_.begin(), entries_.end(), Entry{}); }

    // lazy mode; supports radii up to 3 (64 slots)
    void bind(const void* ctx, Probe probe) {
        ctx_ = ctx;
        probe_ = probe;
        computed_ = 0;
    }

    Entry& at(int dx, int dy) {
        check(dx, dy);
        return fetch(dx, dy);
    }
    const Entry& at(int dx, int dy) const {
        check(dx, dy);
        return fetch(dx, dy);
    }

    bool occupied(Offset o) const { return at(o.dx, o.dy).occupied; }
    bool occupied(Direction d) const { return occupied(delta(d)); }
    bool empty(Direction d) const { return !occupied(delta(d)); }
    // an obstacle whose occupant is currently broadcasting "1"
    bool broadcasting_one(Offset o) const {
        const Entry& e = at(o.dx, o.dy);
        return e.occupied && e.has_broadcast && e.broadcast == 1;
    }
    bool broadcasting_one(Direction d) const { return broadcasting_one(delta(d)); }

    int occupied_neighbors() const {
        int n = 0;
        for (Direction d : kDirections) n += occupied(d) ? 1 : 0;
        return n;
    }
    bool all_neighbors_occupied() const {
        for (Direction d : kDirections)
            if (!occupied(d)) return false;
        return true;
    }
    // obstacles that are not broadcasting "1" (walls or settled robots, as
    // far as an asynchronous robot can tell)
    int silent_obstacle_neighbors() const {
        int n = 0;
        for (Direction d : kDirections) n += (occupied(d) && !broadcasting_one(d)) ? 1 : 0;
        return n;
    }
    bool all_neighbors_silent_obstacles() const {
        for (Direction d : kDirections)
            if (!occupied(d) || broadcasting_one(d)) return false;
        return true;
    }

private:
    void check(int dx, int dy) const {
        int m = (dx < 0 ? -dx : dx) + (dy < 0 ? -dy : dy);
        if (m > v_)
            throw std::out_of_range("sensor read outside declared radius V=" + std::to_string(v_));
    }
    size_t index(int dx, int dy) const {
        return size_t(dy + v_) * size_t(side_) + size_t(dx + v_);
    }
    Entry& fetch(int dx, int dy) const {
        const size_t i = index(dx, dy);
        if (probe_ && !(computed_ & (uint64_t{1} << i))) {
            entries_[i] = probe_(ctx_, dx, dy);
            computed_ |= uint64_t{1} << i;
        }
        return entries_[i];
    }

    int v_;
    int side_;
    mutable std::vector<Entry> entries_;
    mutable uint64_t computed_ = 0;
    const void* ctx_ = nullptr;
    Probe probe_ = nullptr;
};

// One robot's decision for a step. A robot may not move and settle together;
// an optional broadcast payload is emitted after the action.
struct Action {
    enum class Kind { Wait, Move, Settle };
    Kind kind = Kind::Wait;
    Direction move = Direction::Up;
    std::optional<uint32_t> broadcast;

    static Action wait() { return {}; }
    static Action move_to(Direction d) { return {Kind::Move, d, std::nullopt}; }
    static Action settle() { return {Kind::Settle, Direction::Up, std::nullopt}; }
    Action with_broadcast(uint32_t bits) const {
        Action a = *this;
        a.broadcast = bits;
        return a;
    }
};

// A dispersion policy. The engine owns the lifecycle: one instance per run,
// on_enter for each robot in entry order, decide for each awake robot against
// a beginning-of-step view. Decentralized policies must work from the view
// alone; centralized ones (offline-opt, bfs-tree) get the world snapshot via
// begin_step. decide() is called in roster order, which the two leader-
// follower baselines rely on for deterministic shared bookkeeping.
class Policy {
public:
    virtual ~Policy() = default;

    virtual std::string_view name() const = 0;
    virtual Capabilities caps() const = 0;
    virtual bool centralized() const { return false; }
    // centralized policies work from the begin_step snapshot; building a
    // sensor view for an effectively infinite radius would be pointless
    virtual bool wants_view() const { return !centralized(); }

    virtual void on_enter(int robot) = 0;
    // payload a robot carries from the moment it is inserted at s
    virtual std::optional<uint32_t> entry_broadcast() const { return std::nullopt; }

    virtual void begin_step(const World& /*world*/, int64_t /*t*/) {}
    virtual Action decide(int robot, const SensorView& view) = 0;

    // exact persistent state for policies that implement the S-bit contract
    // literally; the engine asserts it stays under 2^S every step
    virtual std::optional<uint64_t> packed_state(int /*robot*/) const { return std::nullopt; }
    // primary-direction state, used by renderers and invariant checks
    virtual std::optional<Direction> primary_of(int /*robot*/) const { return std::nullopt; }
};

}  // namespace disperse
