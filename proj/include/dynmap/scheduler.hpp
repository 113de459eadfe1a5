#ifndef DYNMAP_SCHEDULER_HPP
#define DYNMAP_SCHEDULER_HPP

// Logical-clock list scheduler over a fixed set of simulated cores.
// Tasks of one kernel go to the earliest-idle core (lowest id on ties);
// every kernel ends with a barrier.

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "dynmap/errors.hpp"
#include "dynmap/primitives.hpp"

namespace dynmap {

struct CoreState {
    Index id = 0;
    Cycles busy_until = 0;
    std::optional<PrimitiveKind> last_primitive;  // for mode-switch charging
    Cycles busy_cycles = 0;
    std::uint64_t macs = 0;
    Index tasks_run = 0;
};

struct ScheduledTask {
    Index kernel = 0;
    Index task = 0;
    Index core = 0;
    Cycles start = 0;
    Cycles end = 0;
};

class CoreScheduler {
public:
    explicit CoreScheduler(Index n_cores) {
        if (n_cores == 0) throw ConfigError("scheduler needs at least one core");
        cores_.resize(n_cores);
        for (Index i = 0; i < n_cores; ++i) cores_[i].id = i;
    }

    /// Dispatches tasks 0..n_tasks-1 in order. `duration(task, core)` is evaluated after the core is
    /// chosen, so it may read and update the core's mode state. Returns the kernel's span.
    template <typename DurationFn>
    Cycles run_kernel(Index kernel_id, Index n_tasks, DurationFn&& duration) {
        const Cycles start = clock_;
        for (auto& c : cores_) c.busy_until = start;
        Cycles end = start;
        for (Index t = 0; t < n_tasks; ++t) {
            CoreState& core = earliest_idle();
            const Cycles begin = core.busy_until;
            const Cycles d = duration(t, core);
            core.busy_until = begin + d;
            core.busy_cycles += d;
            ++core.tasks_run;
            records_.push_back({kernel_id, t, core.id, begin, core.busy_until});
            end = std::max(end, core.busy_until);
        }
        clock_ = end;
        return end - start;
    }

    Cycles now() const { return clock_; }
    const std::vector<CoreState>& cores() const { return cores_; }
    const std::vector<ScheduledTask>& records() const { return records_; }

private:
    CoreState& earliest_idle() {
        CoreState* best = &cores_.front();
        for (auto& c : cores_)
            if (c.busy_until < best->busy_until) best = &c;
        return *best;
    }

    std::vector<CoreState> cores_;
    std::vector<ScheduledTask> records_;
    Cycles clock_ = 0;
};

struct ScheduleResult {
    Cycles makespan = 0;
    std::vector<Cycles> kernel_spans;
    std::vector<ScheduledTask> tasks;
    std::vector<Cycles> core_busy;
};

/// Schedules fixed task costs, one inner vector per kernel, with no mode-switch charges.
ScheduleResult schedule_fixed_costs(std::span<const std::vector<Cycles>> kernels, Index n_cores);

}  // namespace dynmap

#endif  // DYNMAP_SCHEDULER_HPP
