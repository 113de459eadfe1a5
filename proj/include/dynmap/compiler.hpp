#ifndef DYNMAP_COMPILER_HPP
#define DYNMAP_COMPILER_HPP

// Preprocessing: model + graph -> kernel DAG, partition sizes, partitioned
// and profiled compile-time matrices, and per-kernel execution schemes.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dynmap/ir.hpp"
#include "dynmap/model.hpp"
#include "dynmap/sparsity.hpp"

namespace dynmap {

/// Smallest partition edge the compiler will emit.
inline constexpr Index kMinPartitionSize = 16;
/// Default per-core on-chip budget in bytes.
inline constexpr std::uint64_t kDefaultMemBudget = 6ull << 20;

struct GraphMeta {
    Index num_vertices = 0;
    Index num_edges = 0;
};

/// Expands each layer into its kernels. Rejects Max/Min aggregation and broken dimension chains.
ComputationGraph build_computation_graph(const ModelSpec& spec, const GraphMeta& meta);

/// Largest power of two N with two input blocks plus one result block (3 * N^2 * 4 bytes) fitting in `mem_budget`.
Index max_partition_size(std::uint64_t mem_budget);

struct KernelWorkload {
    KernelType type = KernelType::Aggregate;
    std::uint64_t q = 0;  // |V| * feature width
};

std::vector<KernelWorkload> kernel_workloads(const ComputationGraph& graph);

struct PartitionChoice {
    Index n1 = 0;
    Index n2 = 0;
    Index n_max = 0;
    std::vector<std::string> warnings;
};

/// Two-step minimax: N2 from Update kernels (Q / N^2 >= eta * n_cc), then N1 from Aggregate kernels
/// (Q / (N * N2) >= eta * n_cc), each the largest power of two in [16, N_max] meeting the bound.
PartitionChoice choose_partition_sizes(std::span<const KernelWorkload> workloads, std::uint64_t mem_budget,
                                       Index n_cc, Index eta);

/// Blocks of one matrix over a grid, each in the source's format and layout with its density attached.
struct PartitionedMatrix {
    std::string source;
    BlockGrid grid;
    std::vector<MatrixReff> blocks;

    const MatrixReff& block(Index bi, Index bj) const { return blocks[grid.flat(bi, bj)]; }
    DensityRecord total_density() const;
};

PartitionedMatrix partition(const MatrixReff& m, Index block_rows, Index block_cols, std::string source = {});

/// Inverse of partition(): concatenates the blocks back into one matrix of the same format.
MatrixReff reassemble(const PartitionedMatrix& p);

/// Per-tile nonzero counts for a feature matrix. Tiles start Unknown until profiled.
class TileDensityMap {
public:
    TileDensityMap() = default;
    TileDensityMap(Index rows, Index cols, Index tile);

    const BlockGrid& grid() const { return grid_; }
    void record(Index ti, Index tj, DensityRecord d) { tiles_[grid_.flat(ti, tj)] = d; }
    const std::optional<DensityRecord>& tile(Index ti, Index tj) const { return tiles_[grid_.flat(ti, tj)]; }
    bool complete() const;

    /// Density of a tile-aligned region. RuntimeOrderError if any covered tile is still Unknown.
    DensityRecord query(Range rows, Range cols) const;
    /// As query(), but nullopt instead of throwing when a covered tile is Unknown.
    std::optional<DensityRecord> try_query(Range rows, Range cols) const;

    /// Profiles every tile overlapping the region [rows) x [cols) of `m` (absolute coordinates).
    void profile_region(const DenseMatrixf& m, Range rows, Range cols);

private:
    BlockGrid grid_;
    std::vector<std::optional<DensityRecord>> tiles_;
};

TileDensityMap profile_tiles(const DenseMatrixf& m, Index tile);

/// Applies the compile-time adjacency rewrite. Input is the raw adjacency (A[dst][src]).
CooMatrixf make_adjacency(const CooMatrixf& raw, AdjacencyVariant variant, double epsilon = 0.0);

/// Fills every kernel's ExecutionScheme for the given partition sizes.
void generate_schemes(ComputationGraph& graph, Index n1, Index n2);

struct CompileOptions {
    Index n_cores = 7;
    Index eta = 4;
    std::uint64_t mem_budget = kDefaultMemBudget;
    /// Bypasses choose_partition_sizes (reusing a stored IR). N1 must be a multiple of N2.
    std::optional<std::pair<Index, Index>> partition_sizes;
};

struct CompiledProgram {
    ComputationGraph graph;
    Index n1 = 0;
    Index n2 = 0;
    Index n_max = 0;
    std::vector<std::string> warnings;
    /// Compile-time partitioned operands (adjacency variants at N1 x N1, weights at N2 x N2) by tensor id.
    std::map<Index, PartitionedMatrix> blocks;
    DenseMatrixf features;
    TileDensityMap feature_tiles;  // H0 profiled at N2 x N2
};

CompiledProgram compile(const ModelSpec& spec, const Graph& graph, DenseMatrixf features,
                        const CompileOptions& options = {});

}  // namespace dynmap

#endif  // DYNMAP_COMPILER_HPP
