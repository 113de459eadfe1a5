#ifndef DYNMAP_REPORT_HPP
#define DYNMAP_REPORT_HPP

// Line-delimited JSON records and aligned text tables for runs and sweeps.
//
// Run output: one "kernel" record per kernel, then one "summary" record.
// Sweep output: one "cell" record per (graph, weight density, strategy), then
// "speedup" records per (graph, density) and "geomean" records per density.
// Derived fields (latency_ms, core_utilization, so_s1, so_s2) are pure functions
// of the base fields; recompute_derived() rebuilds them.

#include <span>
#include <string>
#include <vector>

#include "dynmap/simulator.hpp"

namespace dynmap {

inline constexpr int kReportSchemaVersion = 1;

struct RunMeta {
    std::string run_id = "run";
    double clock_mhz = 250.0;
};

double latency_ms(Cycles cycles, double clock_mhz);

std::vector<std::string> report_records(const SimReport& report, const RunMeta& meta);
std::string report_table(const SimReport& report, const RunMeta& meta);

struct CompareCell {
    std::string graph;
    double weight_density = 1.0;
    MappingStrategy strategy = MappingStrategy::Dynamic;
    Cycles makespan = 0;
    Cycles compute_cycles = 0;
    Cycles predicted_cycles = 0;
    DecisionHistogram histogram{};
};

std::vector<std::string> compare_records(std::span<const CompareCell> cells, double clock_mhz = 250.0);
std::string compare_table(std::span<const CompareCell> cells);

/// Reparses records and rewrites every derived field from the base fields.
/// Speedup and geomean records are rebuilt from the cell records in the same input.
std::vector<std::string> recompute_derived(const std::vector<std::string>& lines);

}  // namespace dynmap

#endif  // DYNMAP_REPORT_HPP
