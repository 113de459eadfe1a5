#ifndef DYNMAP_IR_HPP
#define DYNMAP_IR_HPP

// Kernel-level intermediate representation: one node per Aggregate / Update
// kernel, each carrying its execution scheme (partition geometry + tasks).

#include <optional>
#include <string>
#include <vector>

#include "dynmap/matrix.hpp"
#include "dynmap/model.hpp"

namespace dynmap {

enum class KernelType { Aggregate, Update, ElementwiseAdd };
enum class TensorRole { Adjacency, Feature, Weight };

/// Compile-time rewrite applied to the raw adjacency before partitioning.
enum class AdjacencyVariant {
    Raw,              // A (Sum)
    RowNormalized,    // D^-1 A (Mean)
    SymNormalized,    // D^-1/2 (A + I) D^-1/2
    ScaledSelfLoops,  // A + (1 + eps) I
    RowNormalizedScaledSelfLoops,  // D^-1 A + (1 + eps) I
};

const char* to_string(KernelType t);
const char* to_string(TensorRole r);
const char* to_string(AdjacencyVariant v);
KernelType parse_kernel_type(const std::string& s);
TensorRole parse_tensor_role(const std::string& s);
AdjacencyVariant parse_adjacency_variant(const std::string& s);

struct TensorInfo {
    std::string name;
    TensorRole role = TensorRole::Feature;
    Index rows = 0;
    Index cols = 0;
    bool compile_time = false;  // density known before execution (A, W, H0)
    AdjacencyVariant variant = AdjacencyVariant::Raw;
    double epsilon = 0.0;

    bool operator==(const TensorInfo&) const = default;
};

/// Regular grid of blocks over a rows x cols matrix; the last row/column of blocks may be smaller.
struct BlockGrid {
    Index rows = 0;
    Index cols = 0;
    Index block_rows = 1;
    Index block_cols = 1;

    Index grid_rows() const { return (rows + block_rows - 1) / block_rows; }
    Index grid_cols() const { return (cols + block_cols - 1) / block_cols; }
    Index num_blocks() const { return grid_rows() * grid_cols(); }
    Range row_range(Index bi) const { return {bi * block_rows, std::min(rows, (bi + 1) * block_rows)}; }
    Range col_range(Index bj) const { return {bj * block_cols, std::min(cols, (bj + 1) * block_cols)}; }
    Index flat(Index bi, Index bj) const { return bi * grid_cols() + bj; }

    bool operator==(const BlockGrid&) const = default;
};

/// One multiplication X_block(left_row, left_col) * Y_block(right_row, right_col) in an accumulation chain.
struct PairRef {
    Index left_row = 0;
    Index left_col = 0;
    Index right_row = 0;
    Index right_col = 0;

    bool operator==(const PairRef&) const = default;
};

/// Computes one output block through a chain of K pair multiplications.
struct TaskDescriptor {
    Index out_row = 0;
    Index out_col = 0;
    // Update tasks also carry the fiber/subfiber coordinates of their output block.
    Index fiber = 0;
    Index subfiber = 0;
    std::vector<PairRef> chain;

    Index K() const { return chain.size(); }
    bool operator==(const TaskDescriptor&) const = default;
};

struct ExecutionScheme {
    Index n1 = 0;
    Index n2 = 0;
    BlockGrid left;    // grid over the left operand
    BlockGrid right;   // grid over the right operand
    BlockGrid output;  // grid over the result
    std::vector<TaskDescriptor> tasks;
    std::vector<Index> depends_on;  // upstream kernel ids

    bool operator==(const ExecutionScheme&) const = default;
};

struct KernelIR {
    Index id = 0;
    KernelType type = KernelType::Aggregate;
    Index layer_id = 0;
    Index f_in = 0;
    Index f_out = 0;
    Index num_vertices = 0;
    Index num_edges = 0;
    AggregationOp aggregation = AggregationOp::Sum;
    Activation activation{};
    Index left = 0;    // tensor ids
    Index right = 0;
    Index output = 0;
    ExecutionScheme scheme;

    bool operator==(const KernelIR&) const = default;
};

/// Kernel DAG (in topological order) plus the tensors it references.
struct ComputationGraph {
    std::vector<TensorInfo> tensors;
    std::vector<KernelIR> kernels;
    Index input_tensor = 0;
    Index output_tensor = 0;

    std::optional<Index> find_tensor(const std::string& name) const;
    bool operator==(const ComputationGraph&) const = default;
};

}  // namespace dynmap

#endif  // DYNMAP_IR_HPP
