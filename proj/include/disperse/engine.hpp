#pragma once
#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "environment.hpp"
#include "policy.hpp"
#include "rng.hpp"

namespace disperse {

// Scheduling regime. Under Bernoulli, every robot and the source wake each
// step independently with probability p, driven by per-entity counter-based
// streams so the same seed couples different processes agent-by-agent.
//
// Source modes: normally insertion attempts follow the source's own stream
// (entity -1). In the coupled analysis runs the insertion attempt for the
// i-th robot follows robot i's stream instead -- the "virtual wake-up"
// construction, under which a robot's entry lines up with its TASEP agent's
// origin crossing and the coupling inequalities hold step by step.
struct Schedule {
    enum class Kind { Synchronous, Bernoulli };
    enum class SourceMode { SourceStream, EntrantStream };
    Kind kind = Kind::Synchronous;
    double p = 1.0;
    uint64_t seed = 0;
    SourceMode source_mode = SourceMode::SourceStream;

    static Schedule synchronous() { return {}; }
    static Schedule bernoulli(double p, uint64_t seed) {
        return {Kind::Bernoulli, p, seed, SourceMode::SourceStream};
    }
    static Schedule bernoulli_coupled(double p, uint64_t seed) {
        return {Kind::Bernoulli, p, seed, SourceMode::EntrantStream};
    }
    bool synchronous_kind() const { return kind == Kind::Synchronous; }
};

// Entity numbering for wake streams: robot A_i is entity i (1-based entry
// order), the source is entity -1.
inline constexpr int64_t kSourceEntity = -1;

struct TraceEvent {
    enum class Kind { Enter, Wake, Move, Settle, Broadcast, SourceBlocked };
    Kind kind;
    int64_t t = 0;
    int robot = -1;  // 0-based roster index; -1 for SourceBlocked
    Cell a{};        // position (Enter/Wake/Settle), move origin, or {bits,0} for Broadcast
    Cell b{};        // move destination
};

// Append-only event log. Replaying a trace against its environment rebuilds
// the final world without consulting any policy.
class Trace {
public:
    // which event kinds to record; perf-sensitive sweeps keep only the cheap ones
    struct Mask {
        bool enter = true, wake = false, move = true, settle = true, broadcast = false,
             source_blocked = false;
        static Mask movement() { return {}; }
        static Mask everything() { return {true, true, true, true, true, true}; }
        static Mask nothing() { return {false, false, false, false, false, false}; }
    };

    explicit Trace(Mask mask = Mask::movement()) : mask_(mask) {}

    const Mask& mask() const { return mask_; }
    const std::vector<TraceEvent>& events() const { return events_; }
    void push(const TraceEvent& e) { events_.push_back(e); }

    std::string serialize() const {
        std::ostringstream out;
        for (const TraceEvent& e : events_) {
            out << e.t << ',';
            switch (e.kind) {
                case TraceEvent::Kind::Enter:
                    out << "enter," << e.robot + 1 << ',' << e.a.x << ',' << e.a.y;
                    break;
                case TraceEvent::Kind::Wake:
                    out << "wake," << e.robot + 1 << ',' << e.a.x << ',' << e.a.y;
                    break;
                case TraceEvent::Kind::Move:
                    out << "move," << e.robot + 1 << ',' << e.a.x << ',' << e.a.y << ',' << e.b.x
                        << ',' << e.b.y;
                    break;
                case TraceEvent::Kind::Settle:
                    out << "settle," << e.robot + 1 << ',' << e.a.x << ',' << e.a.y;
                    break;
                case TraceEvent::Kind::Broadcast:
                    out << "broadcast," << e.robot + 1 << ',' << e.a.x;
                    break;
                case TraceEvent::Kind::SourceBlocked:
                    out << "source_blocked";
                    break;
            }
            out << '\n';
        }
        return out.str();
    }

private:
    Mask mask_;
    std::vector<TraceEvent> events_;
};

struct RobotRecord {
    Cell pos{};
    bool settled = false;
    int64_t t_enter = 0;   // step at whose end the robot appeared at s
    int64_t t_settle = 0;  // step during which it settled (0 while active)
    int64_t moves = 0;
    int64_t wakes = 0;     // steps the robot was awake while active
    std::optional<uint32_t> last_broadcast;  // persists between steps while active
};

// Dynamic simulation state: roster in entry order, occupancy index, clock.
class World {
public:
    explicit World(const Environment& env)
        : env_(&env), occupant_(size_t(env.size()), -1) {}

    const Environment& env() const { return *env_; }
    int64_t clock() const { return clock_; }
    const std::vector<RobotRecord>& roster() const { return roster_; }
    const RobotRecord& robot(int i) const { return roster_[size_t(i)]; }
    int entered() const { return int(roster_.size()); }
    int settled_count() const { return settled_; }
    int active_count() const { return int(roster_.size()) - settled_; }
    const std::vector<int32_t>& active_indices() const { return active_; }
    bool complete() const { return settled_ == env_->size(); }

    // -1 when empty; robots and walls both block, but walls are not stored
    int occupant_at(const Cell& c) const {
        int id = env_->id_of(c);
        return id < 0 ? -1 : occupant_[size_t(id)];
    }
    int occupant_by_id(int cell_id) const { return occupant_[size_t(cell_id)]; }
    bool cell_empty(const Cell& c) const {
        int id = env_->id_of(c);
        return id >= 0 && occupant_[size_t(id)] < 0;
    }

    // R(t): the region minus cells holding settled robots
    bool free_in_rt(const Cell& c) const {
        int id = env_->id_of(c);
        if (id < 0) return false;
        int r = occupant_[size_t(id)];
        return r < 0 || !roster_[size_t(r)].settled;
    }

private:
    friend class Engine;
    friend World replay(const Environment&, const Trace&);
    const Environment* env_;
    int64_t clock_ = 0;
    std::vector<RobotRecord> roster_;
    std::vector<int32_t> occupant_;
    std::vector<int32_t> active_;  // unsettled roster indices, ascending
    int settled_ = 0;
};

World replay(const Environment& env, const Trace& trace);

// Beginning-of-step sensor view for one robot. Exposed for tests and for the
// engine itself; views never leak absolute coordinates to policies.
inline void sense_into(const World& world, int robot, SensorView& view) {
    const RobotRecord& rec = world.roster()[size_t(robot)];
    if (rec.settled)
        throw SimulationError(SimulationError::Kind::RobotSettledActed, world.clock(), robot,
                              "sense() on a settled robot");
    view.clear();
    const int radius = view.radius();
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
            if (std::abs(dx) + std::abs(dy) > radius) continue;
            Cell q{rec.pos.x + dx, rec.pos.y + dy};
            SensorView::Entry& e = view.at(dx, dy);
            e.is_source = (q == world.env().source());
            if (!world.env().in_region(q)) {
                e.occupied = true;  // wall
                continue;
            }
            int occ = world.occupant_at(q);
            if (occ >= 0) {
                e.occupied = true;
                const auto& other = world.robot(occ);
                if (!other.settled && other.last_broadcast) {
                    e.has_broadcast = true;
                    e.broadcast = *other.last_broadcast;
                }
            }
        }
}

inline SensorView sense(const World& world, int robot, int radius) {
    SensorView view(radius);
    sense_into(world, robot, view);
    return view;
}

namespace detail {
struct ViewCtx {
    const World* world;
    Cell center;
};
inline SensorView::Entry probe_cell(const void* vctx, int dx, int dy) {
    const auto* ctx = static_cast<const ViewCtx*>(vctx);
    const Cell q{ctx->center.x + dx, ctx->center.y + dy};
    SensorView::Entry e;
    e.is_source = (q == ctx->world->env().source());
    const int id = ctx->world->env().id_of(q);
    if (id < 0) {
        e.occupied = true;
        return e;
    }
    const int occ = ctx->world->occupant_by_id(id);
    if (occ >= 0) {
        e.occupied = true;
        const auto& other = ctx->world->robot(occ);
        if (!other.settled && other.last_broadcast) {
            e.has_broadcast = true;
            e.broadcast = *other.last_broadcast;
        }
    }
    return e;
}
}  // namespace detail

struct RunResult {
    enum class Outcome { Complete, StepLimitExceeded };
    Outcome outcome = Outcome::Complete;
    int64_t makespan = 0;  // valid when complete
    bool complete() const { return outcome == Outcome::Complete; }
};

// The world loop. Per step: wake set -> beginning-of-step views -> decisions
// -> simultaneous move commit -> settles -> source entry -> clock. Conflicting
// moves are fatal: the policies under study are proven collision-free, so
// arbitration would only mask bugs.
class Engine {
public:
    using Observer = std::function<void(const World&, int64_t /*t about to finish*/)>;

    Engine(World& world, Policy& policy, Schedule schedule, Trace* trace = nullptr)
        : world_(world), policy_(policy), schedule_(schedule), trace_(trace),
          source_stream_(schedule.seed, kSourceEntity),
          view_scratch_(policy.wants_view() ? policy.caps().sensing : 0),
          caps_(policy.caps()) {}

    // Runs one full Look-Compute-Move step for every awake robot.
    void step() {
        World& w = world_;
        const int64_t t = w.clock_ + 1;
        const bool bern = !schedule_.synchronous_kind();

        policy_.begin_step(w, t);

        bool source_awake = true;
        if (bern) {
            if (schedule_.source_mode == Schedule::SourceMode::EntrantStream)
                source_awake =
                    WakeStream(schedule_.seed, int64_t(w.entered()) + 1).awake(uint64_t(t), schedule_.p);
            else
                source_awake = source_stream_.awake(uint64_t(t), schedule_.p);
        }
        const bool source_free_at_start = w.cell_empty(w.env().source());

        decisions_.clear();
        while (robot_streams_.size() < w.roster_.size())
            robot_streams_.emplace_back(schedule_.seed, int64_t(robot_streams_.size()) + 1);
        const bool wants_view = policy_.wants_view();
        const bool lazy_views = wants_view && view_scratch_.radius() <= 3;
        for (int32_t idx : w.active_) {
            if (bern && !robot_streams_[size_t(idx)].awake(uint64_t(t), schedule_.p)) continue;
            if (lazy_views) {
                view_ctx_ = {&w, w.roster_[size_t(idx)].pos};
                view_scratch_.bind(&view_ctx_, &detail::probe_cell);
            } else if (wants_view) {
                sense_into(w, idx, view_scratch_);
            }
            Action a = policy_.decide(idx, view_scratch_);
            validate(a, idx, t);
            w.roster_[size_t(idx)].wakes++;
            if (trace_ && trace_->mask().wake)
                trace_->push({TraceEvent::Kind::Wake, t, idx, w.roster_[size_t(idx)].pos, {}});
            decisions_.push_back({idx, a});
        }

        // commit moves simultaneously against the beginning-of-step occupancy
        if (move_claim_.size() != size_t(w.env().size()))
            move_claim_.assign(size_t(w.env().size()), -1);
        for (const auto& [idx, a] : decisions_) {
            if (a.kind != Action::Kind::Move) continue;
            RobotRecord& rec = w.roster_[size_t(idx)];
            const Cell from = rec.pos;
            const Cell to = from + delta(a.move);
            const int to_id = w.env().id_of(to);
            if (to_id < 0)
                throw SimulationError(SimulationError::Kind::MoveOffRegion, t, idx,
                                      "move into a wall at (" + std::to_string(to.x) + "," +
                                          std::to_string(to.y) + ")");
            const int occ = w.occupant_[size_t(to_id)];
            if (occ >= 0) {
                // was the occupant simultaneously moving away? still illegal:
                // swaps and follow-ins both read as conflicts in this model
                bool swap = false;
                for (const auto& [jdx, b] : decisions_)
                    if (jdx == occ && b.kind == Action::Kind::Move &&
                        w.roster_[size_t(jdx)].pos + delta(b.move) == from)
                        swap = true;
                throw SimulationError(swap ? SimulationError::Kind::CollisionSwap
                                           : SimulationError::Kind::MoveIntoOccupied,
                                      t, idx, "move target occupied at step start");
            }
            if (move_claim_[size_t(to_id)] >= 0)
                throw SimulationError(SimulationError::Kind::CollisionSameCell, t, idx,
                                      "two robots moved into the same cell");
            move_claim_[size_t(to_id)] = idx;
            pending_moves_.push_back({idx, from, to});
        }
        for (const auto& m : pending_moves_)
            w.occupant_[size_t(w.env().id_of(m.from))] = -1;
        for (const auto& m : pending_moves_) {
            RobotRecord& rec = w.roster_[size_t(m.robot)];
            rec.pos = m.to;
            rec.moves++;
            const int to_id = w.env().id_of(m.to);
            w.occupant_[size_t(to_id)] = m.robot;
            move_claim_[size_t(to_id)] = -1;
            if (trace_ && trace_->mask().move)
                trace_->push({TraceEvent::Kind::Move, t, m.robot, m.from, m.to});
        }
        pending_moves_.clear();

        // settles
        for (const auto& [idx, a] : decisions_) {
            if (a.kind != Action::Kind::Settle) continue;
            RobotRecord& rec = w.roster_[size_t(idx)];
            rec.settled = true;
            rec.t_settle = t;
            rec.last_broadcast.reset();  // a settled robot goes dark
            w.settled_++;
            w.active_.erase(std::find(w.active_.begin(), w.active_.end(), idx));
            if (trace_ && trace_->mask().settle)
                trace_->push({TraceEvent::Kind::Settle, t, idx, rec.pos, {}});
        }

        // broadcasts become visible from the next step's views
        for (const auto& [idx, a] : decisions_) {
            RobotRecord& rec = w.roster_[size_t(idx)];
            if (a.broadcast && !rec.settled) {
                rec.last_broadcast = *a.broadcast;
                if (trace_ && trace_->mask().broadcast)
                    trace_->push({TraceEvent::Kind::Broadcast, t, idx,
                                  Cell{int(*a.broadcast), 0}, {}});
            }
        }

        // source entry at end of step
        if (source_awake && source_free_at_start) {
            const Cell s = w.env().source();
            if (!w.cell_empty(s))
                throw SimulationError(SimulationError::Kind::SourceEntryCollision, t,
                                      w.occupant_at(s),
                                      "robot moved onto the source cell in an entry step");
            int idx = w.entered();
            // a region of n cells can never demand an (n+1)-th entry while
            // occupancy is consistent; hitting this means the policy broke
            if (idx >= w.env().size())
                throw SimulationError(SimulationError::Kind::SourceEntryCollision, t, -1,
                                      "source free after all robots entered");
            RobotRecord rec;
            rec.pos = s;
            rec.t_enter = t;
            rec.last_broadcast = policy_.entry_broadcast();
            w.roster_.push_back(rec);
            w.occupant_[size_t(w.env().id_of(s))] = idx;
            w.active_.push_back(idx);
            policy_.on_enter(idx);
            if (trace_ && trace_->mask().enter)
                trace_->push({TraceEvent::Kind::Enter, t, idx, s, {}});
        } else if (bern && source_awake && !source_free_at_start) {
            if (trace_ && trace_->mask().source_blocked)
                trace_->push({TraceEvent::Kind::SourceBlocked, t, -1, {}, {}});
        }

        w.clock_ = t;
    }

    RunResult run(int64_t step_limit, const Observer& observer = {}) {
        while (!world_.complete()) {
            if (world_.clock_ >= step_limit) return {RunResult::Outcome::StepLimitExceeded, 0};
            step();
            if (observer) observer(world_, world_.clock_);
        }
        int64_t makespan = 0;
        for (const auto& r : world_.roster()) makespan = std::max(makespan, r.t_settle);
        return {RunResult::Outcome::Complete, makespan};
    }

private:
    struct Decision {
        int robot;
        Action action;
    };
    struct PendingMove {
        int robot;
        Cell from, to;
    };

    void validate(const Action& a, int idx, int64_t t) {
        if (a.broadcast) {
            if (caps_.broadcast <= 0 || (caps_.broadcast < 32 && *a.broadcast >> caps_.broadcast))
                throw SimulationError(SimulationError::Kind::BroadcastOverCapacity, t, idx,
                                      "broadcast payload exceeds declared B=" +
                                          std::to_string(caps_.broadcast));
        }
        if (packed_mode_ != 0) {
            const auto bits = policy_.packed_state(idx);
            if (packed_mode_ < 0) packed_mode_ = bits.has_value() ? 1 : 0;
            if (bits && caps_.state_bits < 64 && (*bits >> caps_.state_bits))
                throw SimulationError(SimulationError::Kind::StateBitsExceeded, t, idx,
                                      "persistent state exceeds declared S=" +
                                          std::to_string(caps_.state_bits) + " bits");
        }
    }

    World& world_;
    Policy& policy_;
    Schedule schedule_;
    Trace* trace_;
    WakeStream source_stream_;
    SensorView view_scratch_;
    detail::ViewCtx view_ctx_{nullptr, {}};
    Capabilities caps_;
    int packed_mode_ = -1;  // unknown / absent / present
    std::vector<WakeStream> robot_streams_;
    std::vector<Decision> decisions_;
    std::vector<PendingMove> pending_moves_;
    std::vector<int32_t> move_claim_;
};

// Convenience wrapper: fresh world, run to completion or step limit.
struct RunOutput {
    World world;
    RunResult result;
};

inline RunOutput run_policy(const Environment& env, Policy& policy, Schedule schedule,
                            int64_t step_limit, Trace* trace = nullptr,
                            const Engine::Observer& observer = {}) {
    RunOutput out{World(env), {}};
    Engine engine(out.world, policy, schedule, trace);
    out.result = engine.run(step_limit, observer);
    return out;
}

// Rebuild the final world from a movement trace (enter/move/settle events).
inline World replay(const Environment& env, const Trace& trace) {
    World w(env);
    for (const TraceEvent& e : trace.events()) {
        switch (e.kind) {
            case TraceEvent::Kind::Enter: {
                RobotRecord rec;
                rec.pos = e.a;
                rec.t_enter = e.t;
                w.roster_.push_back(rec);
                w.occupant_[size_t(env.id_of(e.a))] = e.robot;
                w.active_.push_back(e.robot);
                break;
            }
            case TraceEvent::Kind::Move: {
                RobotRecord& rec = w.roster_[size_t(e.robot)];
                w.occupant_[size_t(env.id_of(e.a))] = -1;
                rec.pos = e.b;
                rec.moves++;
                w.occupant_[size_t(env.id_of(e.b))] = e.robot;
                break;
            }
            case TraceEvent::Kind::Settle: {
                RobotRecord& rec = w.roster_[size_t(e.robot)];
                rec.settled = true;
                rec.t_settle = e.t;
                w.settled_++;
                w.active_.erase(std::find(w.active_.begin(), w.active_.end(), e.robot));
                break;
            }
            case TraceEvent::Kind::Broadcast: {
                RobotRecord& rec = w.roster_[size_t(e.robot)];
                if (!rec.settled) rec.last_broadcast = uint32_t(e.a.x);
                break;
            }
            default:
                break;
        }
        w.clock_ = std::max(w.clock_, e.t);
    }
    return w;
}

}  // namespace disperse
