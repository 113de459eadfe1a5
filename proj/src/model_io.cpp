#include <algorithm>

#include <json.hpp>

#include "dynmap/generators.hpp"
#include "dynmap/io.hpp"

namespace dynmap {

using nlohmann::json;

namespace {

std::size_t line_of_offset(const std::string& text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

const char* activation_name(ActivationKind k) { return k == ActivationKind::ReLU ? "relu" : "prelu"; }

ActivationKind parse_activation_kind(const std::string& s) {
    std::string v = s;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "relu") return ActivationKind::ReLU;
    if (v == "prelu") return ActivationKind::PReLU;
    throw ConfigError("unknown activation '" + s + "'");
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where, T fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + " has the wrong type");
    }
}

}  // namespace

ModelSpec parse_model_spec(const std::string& text, const fs::path& base_dir, const std::optional<fs::path>& weights_dir,
                           const std::string& name) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(name, line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
    try {
        if (!doc.is_object()) throw ConfigError("top level must be an object");
        ModelSpec spec;
        spec.spec_version = field<int>(doc, "spec_version", "spec", -1);
        if (spec.spec_version != kModelSpecVersion)
            throw ConfigError("spec_version " + std::to_string(spec.spec_version) + " is not supported (expected " +
                              std::to_string(kModelSpecVersion) + ")");
        const auto layers = doc.find("layers");
        if (layers == doc.end() || !layers->is_array()) throw ConfigError("'layers' must be an array");
        for (std::size_t i = 0; i < layers->size(); ++i) {
            const json& lj = (*layers)[i];
            const std::string where = "layers[" + std::to_string(i) + "]";
            if (!lj.is_object()) throw ConfigError(where + " must be an object");
            LayerSpec l;
            l.kind = parse_model_kind(field<std::string>(lj, "kind", where, ""));
            l.f_in = field<Index>(lj, "f_in", where, 0);
            l.f_out = field<Index>(lj, "f_out", where, 0);
            l.aggregation = parse_aggregation(
                field<std::string>(lj, "aggregation", where, l.kind == ModelKind::SAGE ? "mean" : "sum"));
            if (const auto a = lj.find("activation"); a != lj.end()) {
                const std::string aw = where + ".activation";
                l.activation.kind = parse_activation_kind(field<std::string>(*a, "kind", aw, "relu"));
                l.activation.enabled = field<bool>(*a, "enabled", aw, true);
                l.activation.slope = field<double>(*a, "slope", aw, 0.25);
            }
            l.normalize = field<bool>(lj, "normalize", where, true);
            l.gin_epsilon = field<double>(lj, "gin_epsilon", where, 0.0);
            l.sgc_hops = field<Index>(lj, "sgc_hops", where, 2);
            spec.layers.push_back(l);
        }
        spec.validate_dims();

        std::map<std::string, std::string> files;
        if (const auto w = doc.find("weights"); w != doc.end()) {
            if (!w->is_object()) throw ConfigError("'weights' must map names to file paths");
            files = w->get<std::map<std::string, std::string>>();
        }
        for (Index l = 0; l < spec.layers.size(); ++l)
            for (const auto& slot : weight_slots(spec.layers[l], l + 1)) {
                fs::path file;
                if (const auto it = files.find(slot.name); it != files.end()) {
                    file = base_dir / it->second;
                } else if (weights_dir) {
                    for (const char* ext : {".dmat", ".txt"})
                        if (fs::exists(*weights_dir / (slot.name + ext))) {
                            file = *weights_dir / (slot.name + ext);
                            break;
                        }
                }
                if (file.empty()) throw ConfigError("no file given for weight '" + slot.name + "'");
                DenseMatrixf m = load_dense(file);
                if (m.rows() != slot.rows || m.cols() != slot.cols)
                    throw ShapeError("weight '" + slot.name + "' in " + file.string() + " is " +
                                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                                     std::to_string(slot.rows) + "x" + std::to_string(slot.cols));
                spec.weights.emplace(slot.name, std::move(m));
            }
        return spec;
    } catch (const ConfigError& e) {
        throw ParseError(name, 0, e.what());
    }
}

ModelSpec load_model_spec(const fs::path& path, const std::optional<fs::path>& weights_dir) {
    return parse_model_spec(read_file(path), path.parent_path(), weights_dir, path.string());
}

void save_model_spec(const ModelSpec& spec, const fs::path& path, const fs::path& weights_dir) {
    json doc = json::object();
    doc["spec_version"] = spec.spec_version;
    json layers = json::array();
    for (const auto& l : spec.layers) {
        json lj = json::object();
        lj["kind"] = to_string(l.kind);
        lj["f_in"] = l.f_in;
        lj["f_out"] = l.f_out;
        lj["aggregation"] = to_string(l.aggregation);
        lj["activation"] = {{"kind", activation_name(l.activation.kind)},
                            {"enabled", l.activation.enabled},
                            {"slope", l.activation.slope}};
        lj["normalize"] = l.normalize;
        lj["gin_epsilon"] = l.gin_epsilon;
        lj["sgc_hops"] = l.sgc_hops;
        layers.push_back(lj);
    }
    doc["layers"] = layers;
    json weights = json::object();
    const fs::path base = path.parent_path().empty() ? fs::path(".") : path.parent_path();
    for (const auto& [name, m] : spec.weights) {
        const fs::path file = weights_dir / (name + ".dmat");
        save_dense_binary(m, file);
        weights[name] = fs::relative(file, base).generic_string();
    }
    doc["weights"] = weights;
    write_file(path, doc.dump(2) + "\n");
}

bool is_zoo_id(const std::string& id) { return id == "gcn2" || id == "sage2" || id == "gin2" || id == "sgc2"; }

ModelSpec zoo_model(const std::string& id, Index f_in, Index hidden, Index f_out, double weight_density,
                    std::uint64_t seed) {
    const Activation relu{ActivationKind::ReLU, 0.25, true};
    ModelSpec spec;
    auto two_layers = [&](ModelKind kind, AggregationOp agg) {
        spec.layers.push_back({kind, f_in, hidden, agg, relu, true, 0.0, 2});
        spec.layers.push_back({kind, hidden, f_out, agg, Activation{}, true, 0.0, 2});
    };
    if (id == "gcn2")
        two_layers(ModelKind::GCN, AggregationOp::Sum);
    else if (id == "sage2")
        two_layers(ModelKind::SAGE, AggregationOp::Mean);
    else if (id == "gin2")
        two_layers(ModelKind::GIN, AggregationOp::Sum);
    else if (id == "sgc2")
        spec.layers.push_back({ModelKind::SGC, f_in, f_out, AggregationOp::Sum, Activation{}, true, 0.0, 2});
    else
        throw ConfigError("unknown model zoo id '" + id + "' (expected gcn2, sage2, gin2 or sgc2)");
    spec.validate_dims();

    std::uint64_t salt = 0;
    for (Index l = 0; l < spec.layers.size(); ++l)
        for (const auto& slot : weight_slots(spec.layers[l], l + 1)) {
            const std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ull * ++salt);
            spec.weights.emplace(slot.name, prune_magnitude(generate_weights(slot.rows, slot.cols, s), weight_density));
        }
    return spec;
}

}  // namespace dynmap
