#ifndef DYNMAP_EXPERIMENT_HPP
#define DYNMAP_EXPERIMENT_HPP

// Strategy comparison sweeps over weight densities.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynmap/report.hpp"

namespace dynmap {

struct GraphInput {
    std::string name;
    Graph graph;
    DenseMatrixf features;
};

enum class GraphKind { ErdosRenyi, PowerLaw };
GraphKind parse_graph_kind(const std::string& s);

/// Synthetic graph plus features, both derived from `seed`.
GraphInput synthetic_input(const std::string& name, GraphKind kind, Index num_vertices, double adjacency_density,
                           Index feature_dim, double feature_density, std::uint64_t seed);

struct SweepConfig {
    std::string model_id = "gcn2";
    Index hidden = 64;
    std::optional<Index> f_out;  // defaults to hidden
    std::vector<double> weight_densities{1.0, 0.5, 0.3, 0.1, 0.05};
    std::vector<MappingStrategy> strategies{MappingStrategy::Static1, MappingStrategy::Static2,
                                            MappingStrategy::Dynamic};
    SimConfig sim;
    CompileOptions compile;
    std::uint64_t seed = 1;
    /// Host worker threads; 0 picks the hardware concurrency.
    Index threads = 0;
};

/// One cell per (graph, density, strategy), ordered graph-major, then density, then strategy as configured.
/// The order and values do not depend on the thread count.
std::vector<CompareCell> run_sweep(std::span<const GraphInput> graphs, const SweepConfig& cfg);

}  // namespace dynmap

#endif  // DYNMAP_EXPERIMENT_HPP
