#ifndef DYNMAP_SIMULATOR_HPP
#define DYNMAP_SIMULATOR_HPP

// Executes a compiled program on simulated cores: analyzer decisions per pair,
// functional primitive execution, write-back profiling and cycle accounting.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "dynmap/analyzer.hpp"
#include "dynmap/compiler.hpp"
#include "dynmap/scheduler.hpp"

namespace dynmap {

struct SimConfig {
    CoreConfig core;
    Index n_cores = 7;
    /// Charge max(compute, transfer) + transform cycles per task instead of compute alone.
    bool visible_overheads = false;
    /// 77 GB/s at 250 MHz.
    double bytes_per_cycle = 308.0;
    /// Keep one PairRecord per analyzed pair (large on big graphs).
    bool record_pairs = false;

    void validate() const;
};

/// Histogram indexed by PairChoice.
using DecisionHistogram = std::array<std::uint64_t, 4>;

struct KernelStats {
    Index kernel_id = 0;
    KernelType type = KernelType::Aggregate;
    Index layer_id = 0;
    Index tasks = 0;
    Cycles span = 0;                 // barrier-to-barrier
    Cycles task_cycles = 0;          // sum of task durations
    Cycles max_task = 0;
    Cycles compute_cycles = 0;       // executed primitive cycles
    Cycles predicted_cycles = 0;     // performance-model cycles of the chosen primitives
    Cycles switch_cycles = 0;
    Cycles elementwise_cycles = 0;   // activation + elementwise add
    Cycles transform_cycles = 0;     // tallied always, charged only with visible overheads
    Cycles transfer_cycles = 0;      // same
    std::uint64_t macs = 0;
    std::uint64_t decisions = 0;
    DecisionHistogram histogram{};
};

struct TaskStats {
    Index kernel = 0;
    Index task = 0;
    Index core = 0;
    Cycles start = 0;
    Cycles end = 0;
    Index chain_length = 0;  // K
    Index decisions = 0;
};

struct PairRecord {
    Index kernel = 0;
    Index task = 0;
    Index slot = 0;  // position in the chain
    PairShape shape;
    DensityRecord left;
    DensityRecord right;
    PairDecision decision;
    Cycles executed_cycles = 0;
};

struct SimReport {
    MappingStrategy strategy = MappingStrategy::Dynamic;
    Index n_cores = 0;
    Index p_sys = 0;
    Index n1 = 0;
    Index n2 = 0;
    bool visible_overheads = false;
    Cycles makespan = 0;
    std::vector<KernelStats> kernels;
    std::vector<Cycles> core_busy;
    std::vector<TaskStats> tasks;
    std::vector<PairRecord> pairs;

    std::vector<double> core_utilization() const;
    DecisionHistogram histogram() const;
    Cycles compute_cycles() const;
    Cycles predicted_cycles() const;
    Cycles switch_cycles() const;
    Cycles elementwise_cycles() const;
    Cycles transform_cycles() const;
    Cycles transfer_cycles() const;
    std::uint64_t decisions() const;
};

struct InferenceResult {
    DenseMatrixf output;
    SimReport report;
    /// Every feature tensor produced at runtime, with its write-back tile densities.
    std::map<Index, DenseMatrixf> features;
    std::map<Index, TileDensityMap> tile_densities;
};

/// Runs every kernel of the program in order under one strategy.
InferenceResult schedule_and_run(const CompiledProgram& program, MappingStrategy strategy, const SimConfig& cfg);

/// Compiles (partition sizes sized for cfg.n_cores) and runs.
InferenceResult run_inference(const ModelSpec& spec, const Graph& graph, const DenseMatrixf& features,
                              MappingStrategy strategy, const SimConfig& cfg, CompileOptions options = {});

}  // namespace dynmap

#endif  // DYNMAP_SIMULATOR_HPP
