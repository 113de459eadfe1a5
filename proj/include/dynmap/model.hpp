#ifndef DYNMAP_MODEL_HPP
#define DYNMAP_MODEL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dynmap/matrix.hpp"

namespace dynmap {

enum class ModelKind { GCN, SAGE, GIN, SGC };
enum class AggregationOp { Sum, Mean, Max, Min };

const char* to_string(ModelKind k);
const char* to_string(AggregationOp a);
ModelKind parse_model_kind(const std::string& s);
AggregationOp parse_aggregation(const std::string& s);

struct LayerSpec {
    ModelKind kind = ModelKind::GCN;
    Index f_in = 0;
    Index f_out = 0;
    AggregationOp aggregation = AggregationOp::Sum;
    Activation activation{};
    bool normalize = true;    // GCN/SGC: symmetric normalization with self loops
    double gin_epsilon = 0.0;
    Index sgc_hops = 2;

    bool operator==(const LayerSpec&) const = default;
};

struct ModelSpec {
    int spec_version = 1;
    std::vector<LayerSpec> layers;
    /// Keyed by the names weight_slots() returns.
    std::map<std::string, DenseMatrixf> weights;

    /// Throws ShapeError when consecutive layer dimensions do not chain.
    void validate_dims() const;
};

/// Weight tensor names a layer needs, with their (rows, cols).
struct WeightSlot {
    std::string name;
    Index rows = 0;
    Index cols = 0;
};
std::vector<WeightSlot> weight_slots(const LayerSpec& layer, Index layer_id);

/// The graph as the compiler sees it: vertex count plus raw adjacency (A[dst][src] = edge weight).
struct Graph {
    Index num_vertices = 0;
    CooMatrixf adjacency;

    Index num_edges() const { return adjacency.nnz(); }
};

}  // namespace dynmap

#endif  // DYNMAP_MODEL_HPP
