#include "dynmap/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "dynmap/generators.hpp"
#include "dynmap/io.hpp"

namespace dynmap {

GraphKind parse_graph_kind(const std::string& s) {
    if (s == "er" || s == "erdos-renyi") return GraphKind::ErdosRenyi;
    if (s == "powerlaw" || s == "power-law") return GraphKind::PowerLaw;
    throw ConfigError("unknown graph kind '" + s + "' (expected er or powerlaw)");
}

GraphInput synthetic_input(const std::string& name, GraphKind kind, Index num_vertices, double adjacency_density,
                           Index feature_dim, double feature_density, std::uint64_t seed) {
    GraphInput in;
    in.name = name;
    in.graph = kind == GraphKind::ErdosRenyi ? generate_erdos_renyi(num_vertices, adjacency_density, seed)
                                             : generate_power_law(num_vertices, adjacency_density, seed);
    in.features = generate_features(num_vertices, feature_dim, feature_density, seed + 1);
    return in;
}

std::vector<CompareCell> run_sweep(std::span<const GraphInput> graphs, const SweepConfig& cfg) {
    cfg.sim.validate();
    if (cfg.strategies.empty()) throw ConfigError("no strategies requested");
    if (cfg.weight_densities.empty()) throw ConfigError("no weight densities requested");

    struct Job {
        std::size_t graph;
        std::size_t density;
    };
    std::vector<Job> jobs;
    for (std::size_t g = 0; g < graphs.size(); ++g)
        for (std::size_t d = 0; d < cfg.weight_densities.size(); ++d) jobs.push_back({g, d});

    const std::size_t per_job = cfg.strategies.size();
    std::vector<CompareCell> cells(jobs.size() * per_job);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) {
            try {
                const GraphInput& in = graphs[jobs[j].graph];
                const double density = cfg.weight_densities[jobs[j].density];
                const ModelSpec spec = zoo_model(cfg.model_id, in.features.cols(), cfg.hidden,
                                                 cfg.f_out.value_or(cfg.hidden), density, cfg.seed);
                CompileOptions opts = cfg.compile;
                opts.n_cores = cfg.sim.n_cores;
                const CompiledProgram prog = compile(spec, in.graph, in.features, opts);
                for (std::size_t s = 0; s < per_job; ++s) {
                    SimConfig sim = cfg.sim;
                    sim.record_pairs = false;
                    const InferenceResult res = schedule_and_run(prog, cfg.strategies[s], sim);
                    const SimReport& r = res.report;
                    cells[j * per_job + s] = {in.name, density, cfg.strategies[s], r.makespan,
                                              r.compute_cycles(), r.predicted_cycles(), r.histogram()};
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    std::size_t n_threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, jobs.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return cells;
}

}  // namespace dynmap
