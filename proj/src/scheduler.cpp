#include "dynmap/scheduler.hpp"

namespace dynmap {

ScheduleResult schedule_fixed_costs(std::span<const std::vector<Cycles>> kernels, Index n_cores) {
    CoreScheduler sched(n_cores);
    ScheduleResult out;
    for (Index k = 0; k < kernels.size(); ++k) {
        const auto& costs = kernels[k];
        out.kernel_spans.push_back(
            sched.run_kernel(k, costs.size(), [&](Index t, CoreState&) { return costs[t]; }));
    }
    out.makespan = sched.now();
    out.tasks = sched.records();
    for (const auto& c : sched.cores()) out.core_busy.push_back(c.busy_cycles);
    return out;
}

}  // namespace dynmap
