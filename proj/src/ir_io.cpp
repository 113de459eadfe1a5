#include <algorithm>

#include <json.hpp>

#include "dynmap/io.hpp"

namespace dynmap {

using ojson = nlohmann::ordered_json;

namespace {

ojson grid_json(const BlockGrid& g) {
    return ojson{{"rows", g.rows}, {"cols", g.cols}, {"block_rows", g.block_rows}, {"block_cols", g.block_cols}};
}

BlockGrid grid_from(const ojson& j) {
    return {j.at("rows").get<Index>(), j.at("cols").get<Index>(), j.at("block_rows").get<Index>(),
            j.at("block_cols").get<Index>()};
}

ActivationKind activation_kind_from(const std::string& s) {
    if (s == "relu") return ActivationKind::ReLU;
    if (s == "prelu") return ActivationKind::PReLU;
    throw ConfigError("unknown activation '" + s + "'");
}

}  // namespace

std::string serialize_ir(const CompiledProgram& prog) {
    const ComputationGraph& g = prog.graph;
    ojson doc;
    doc["ir_version"] = kIrVersion;
    doc["partition"] = {{"n1", prog.n1}, {"n2", prog.n2}, {"n_max", prog.n_max}};
    doc["warnings"] = prog.warnings;
    doc["input_tensor"] = g.input_tensor;
    doc["output_tensor"] = g.output_tensor;

    ojson tensors = ojson::array();
    for (const auto& t : g.tensors)
        tensors.push_back({{"name", t.name},
                           {"role", to_string(t.role)},
                           {"rows", t.rows},
                           {"cols", t.cols},
                           {"compile_time", t.compile_time},
                           {"variant", to_string(t.variant)},
                           {"epsilon", t.epsilon}});
    doc["tensors"] = tensors;

    ojson kernels = ojson::array();
    for (const auto& k : g.kernels) {
        const ExecutionScheme& s = k.scheme;
        ojson tasks = ojson::array();
        for (const auto& t : s.tasks) {
            ojson chain = ojson::array();
            for (const auto& p : t.chain) chain.push_back({p.left_row, p.left_col, p.right_row, p.right_col});
            tasks.push_back({t.out_row, t.out_col, t.fiber, t.subfiber, chain});
        }
        kernels.push_back(
            {{"id", k.id},
             {"type", to_string(k.type)},
             {"layer_id", k.layer_id},
             {"f_in", k.f_in},
             {"f_out", k.f_out},
             {"num_vertices", k.num_vertices},
             {"num_edges", k.num_edges},
             {"aggregation", to_string(k.aggregation)},
             {"activation",
              {{"kind", k.activation.kind == ActivationKind::ReLU ? "relu" : "prelu"},
               {"enabled", k.activation.enabled},
               {"slope", k.activation.slope}}},
             {"left", k.left},
             {"right", k.right},
             {"output", k.output},
             {"scheme",
              {{"n1", s.n1},
               {"n2", s.n2},
               {"depends_on", s.depends_on},
               {"left", grid_json(s.left)},
               {"right", grid_json(s.right)},
               {"output", grid_json(s.output)},
               {"num_tasks", s.tasks.size()},
               {"tasks", tasks}}}});
    }
    doc["kernels"] = kernels;
    return doc.dump() + "\n";
}

std::string serialize_density_sidecar(const CompiledProgram& prog) {
    ojson doc;
    doc["ir_version"] = kIrVersion;
    ojson blocks = ojson::array();
    for (const auto& [id, pm] : prog.blocks) {
        ojson nnz = ojson::array(), total = ojson::array();
        for (const auto& b : pm.blocks) {
            const DensityRecord d = b.density().value_or(profile_density(b));
            nnz.push_back(d.nnz);
            total.push_back(d.total);
        }
        blocks.push_back({{"tensor", id}, {"name", pm.source}, {"grid", grid_json(pm.grid)}, {"nnz", nnz}, {"total", total}});
    }
    doc["compile_time"] = blocks;
    const TileDensityMap& tiles = prog.feature_tiles;
    ojson nnz = ojson::array();
    for (Index i = 0; i < tiles.grid().grid_rows(); ++i)
        for (Index j = 0; j < tiles.grid().grid_cols(); ++j) nnz.push_back(tiles.tile(i, j) ? tiles.tile(i, j)->nnz : 0);
    doc["input_features"] = {{"tensor", prog.graph.input_tensor}, {"grid", grid_json(tiles.grid())}, {"nnz", nnz}};
    return doc.dump() + "\n";
}

StoredIr parse_ir(const std::string& text, const std::string& name) {
    ojson doc;
    try {
        doc = ojson::parse(text);
    } catch (const ojson::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        throw ParseError(name, 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'),
                         e.what());
    }
    try {
        if (doc.at("ir_version").get<int>() != kIrVersion)
            throw ConfigError("unsupported ir_version " + doc.at("ir_version").dump());
        StoredIr ir;
        ir.n1 = doc.at("partition").at("n1").get<Index>();
        ir.n2 = doc.at("partition").at("n2").get<Index>();
        ComputationGraph& g = ir.graph;
        g.input_tensor = doc.at("input_tensor").get<Index>();
        g.output_tensor = doc.at("output_tensor").get<Index>();
        for (const auto& t : doc.at("tensors"))
            g.tensors.push_back({t.at("name").get<std::string>(), parse_tensor_role(t.at("role").get<std::string>()),
                                 t.at("rows").get<Index>(), t.at("cols").get<Index>(), t.at("compile_time").get<bool>(),
                                 parse_adjacency_variant(t.at("variant").get<std::string>()),
                                 t.at("epsilon").get<double>()});
        for (const auto& kj : doc.at("kernels")) {
            KernelIR k;
            k.id = kj.at("id").get<Index>();
            k.type = parse_kernel_type(kj.at("type").get<std::string>());
            k.layer_id = kj.at("layer_id").get<Index>();
            k.f_in = kj.at("f_in").get<Index>();
            k.f_out = kj.at("f_out").get<Index>();
            k.num_vertices = kj.at("num_vertices").get<Index>();
            k.num_edges = kj.at("num_edges").get<Index>();
            k.aggregation = parse_aggregation(kj.at("aggregation").get<std::string>());
            const auto& a = kj.at("activation");
            k.activation = {activation_kind_from(a.at("kind").get<std::string>()), a.at("slope").get<double>(),
                            a.at("enabled").get<bool>()};
            k.left = kj.at("left").get<Index>();
            k.right = kj.at("right").get<Index>();
            k.output = kj.at("output").get<Index>();
            for (Index t : {k.left, k.right, k.output})
                if (t >= g.tensors.size()) throw ConfigError("kernel " + std::to_string(k.id) + " names unknown tensor");
            const auto& sj = kj.at("scheme");
            ExecutionScheme& s = k.scheme;
            s.n1 = sj.at("n1").get<Index>();
            s.n2 = sj.at("n2").get<Index>();
            s.depends_on = sj.at("depends_on").get<std::vector<Index>>();
            s.left = grid_from(sj.at("left"));
            s.right = grid_from(sj.at("right"));
            s.output = grid_from(sj.at("output"));
            for (const auto& tj : sj.at("tasks")) {
                TaskDescriptor t{tj.at(0).get<Index>(), tj.at(1).get<Index>(), tj.at(2).get<Index>(),
                                 tj.at(3).get<Index>(), {}};
                for (const auto& p : tj.at(4))
                    t.chain.push_back({p.at(0).get<Index>(), p.at(1).get<Index>(), p.at(2).get<Index>(),
                                       p.at(3).get<Index>()});
                s.tasks.push_back(std::move(t));
            }
            if (s.tasks.size() != sj.at("num_tasks").get<Index>())
                throw ConfigError("kernel " + std::to_string(k.id) + ": task list length disagrees with num_tasks");
            g.kernels.push_back(std::move(k));
        }
        return ir;
    } catch (const ojson::exception& e) {
        throw ParseError(name, 0, std::string("malformed IR: ") + e.what());
    } catch (const ConfigError& e) {
        throw ParseError(name, 0, e.what());
    }
}

StoredIr load_ir(const fs::path& path) { return parse_ir(read_file(path), path.string()); }

}  // namespace dynmap
