#include "dynmap/model.hpp"

#include <algorithm>
#include <cctype>

namespace dynmap {

const char* to_string(ModelKind k) {
    switch (k) {
        case ModelKind::GCN: return "gcn";
        case ModelKind::SAGE: return "sage";
        case ModelKind::GIN: return "gin";
        case ModelKind::SGC: return "sgc";
    }
    return "?";
}

const char* to_string(AggregationOp a) {
    switch (a) {
        case AggregationOp::Sum: return "sum";
        case AggregationOp::Mean: return "mean";
        case AggregationOp::Max: return "max";
        case AggregationOp::Min: return "min";
    }
    return "?";
}

namespace {
std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}
}  // namespace

ModelKind parse_model_kind(const std::string& s) {
    const auto v = lower(s);
    if (v == "gcn") return ModelKind::GCN;
    if (v == "sage" || v == "graphsage") return ModelKind::SAGE;
    if (v == "gin") return ModelKind::GIN;
    if (v == "sgc") return ModelKind::SGC;
    throw ConfigError("unknown model kind '" + s + "'");
}

AggregationOp parse_aggregation(const std::string& s) {
    const auto v = lower(s);
    if (v == "sum") return AggregationOp::Sum;
    if (v == "mean") return AggregationOp::Mean;
    if (v == "max") return AggregationOp::Max;
    if (v == "min") return AggregationOp::Min;
    throw ConfigError("unknown aggregation operator '" + s + "'");
}

void ModelSpec::validate_dims() const {
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (layers[l].f_in == 0 || layers[l].f_out == 0)
            throw ShapeError("layer " + std::to_string(l + 1) + ": dimensions must be positive");
        if (l + 1 < layers.size() && layers[l].f_out != layers[l + 1].f_in)
            throw ShapeError("layer " + std::to_string(l + 1) + " outputs " + std::to_string(layers[l].f_out) +
                             " features but layer " + std::to_string(l + 2) + " expects " +
                             std::to_string(layers[l + 1].f_in));
    }
}

std::vector<WeightSlot> weight_slots(const LayerSpec& layer, Index layer_id) {
    const std::string p = "l" + std::to_string(layer_id) + ".";
    switch (layer.kind) {
        case ModelKind::GCN:
        case ModelKind::SGC: return {{p + "W", layer.f_in, layer.f_out}};
        case ModelKind::SAGE:
            return {{p + "W_neigh", layer.f_in, layer.f_out}, {p + "W_self", layer.f_in, layer.f_out}};
        case ModelKind::GIN: return {{p + "W1", layer.f_in, layer.f_out}, {p + "W2", layer.f_out, layer.f_out}};
    }
    return {};
}

}  // namespace dynmap
