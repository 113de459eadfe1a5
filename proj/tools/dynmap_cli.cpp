// dynmap: command-line front end (gen, compile, run, compare, profile).

#include <chrono>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynmap/experiment.hpp"
#include "dynmap/generators.hpp"
#include "dynmap/io.hpp"
#include "dynmap/report.hpp"

namespace {

using namespace dynmap;

struct CommonOptions {
    std::string graph;
    std::string features;
    std::string model = "gcn2";
    std::string weights;
    Index hidden = 64;
    Index out_dim = 0;  // 0: same as hidden
    double weight_density = 1.0;
    std::uint64_t seed = 1;
    Index cores = 7;
    Index psys = 16;
    Index eta = 4;
    std::uint64_t mem_budget = kDefaultMemBudget;
    bool visible_overheads = false;
    std::string out;
    double clock_mhz = 250.0;
};

void add_machine_options(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--cores", o.cores, "Number of computation cores")->check(CLI::PositiveNumber);
    cmd->add_option("--psys", o.psys, "ALU array dimension per core")->check(CLI::Range(8, 1 << 20));
    cmd->add_option("--eta", o.eta, "Minimum tasks per kernel, as a multiple of the core count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--mem-budget", o.mem_budget, "On-chip bytes per core");
    cmd->add_flag("--visible-overheads", o.visible_overheads, "Charge transfer and transform cycles to the makespan");
    cmd->add_option("--clock-mhz", o.clock_mhz, "Clock used to derive latency")->check(CLI::PositiveNumber);
}

void add_model_options(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--model", o.model, "Model spec JSON, or a zoo id: gcn2, sage2, gin2, sgc2");
    cmd->add_option("--weights", o.weights, "Directory holding <name>.dmat weight files");
    cmd->add_option("--hidden", o.hidden, "Hidden width for zoo models")->check(CLI::PositiveNumber);
    cmd->add_option("--out-dim", o.out_dim, "Output width for zoo models (default: hidden)");
    cmd->add_option("--weight-density", o.weight_density, "Magnitude-prune zoo weights to this density")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--seed", o.seed, "Seed for generated weights");
}

SimConfig sim_config(const CommonOptions& o) {
    SimConfig s;
    s.core.p_sys = o.psys;
    s.n_cores = o.cores;
    s.visible_overheads = o.visible_overheads;
    return s;
}

CompileOptions compile_options(const CommonOptions& o) {
    CompileOptions c;
    c.n_cores = o.cores;
    c.eta = o.eta;
    c.mem_budget = o.mem_budget;
    return c;
}

ModelSpec resolve_model(const CommonOptions& o, Index f_in) {
    if (is_zoo_id(o.model))
        return zoo_model(o.model, f_in, o.hidden, o.out_dim ? o.out_dim : o.hidden, o.weight_density, o.seed);
    std::optional<fs::path> wdir;
    if (!o.weights.empty()) wdir = o.weights;
    return load_model_spec(o.model, wdir);
}

struct Inputs {
    Graph graph;
    DenseMatrixf features;
    ModelSpec spec;
};

Inputs load_inputs(const CommonOptions& o) {
    if (o.graph.empty()) throw ConfigError("--graph is required");
    if (o.features.empty()) throw ConfigError("--features is required");
    Inputs in;
    in.graph = load_graph(o.graph);
    in.features = load_dense(o.features);
    in.spec = resolve_model(o, in.features.cols());
    return in;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_file(path, text);
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string s;
    for (const auto& l : lines) s += l + "\n";
    return s;
}

std::string density_tag(double d) {
    std::ostringstream os;
    os << d;
    return os.str();
}

// --- subcommands ------------------------------------------------------------

struct GenOptions {
    Index vertices = 4096;
    double density = 0.005;
    std::string kind = "er";
    Index feature_dim = 64;
    double feature_density = 0.5;
    std::vector<double> weight_densities{1.0};
};

int cmd_gen(const CommonOptions& o, const GenOptions& g) {
    const fs::path dir = o.out.empty() ? fs::path("data") : fs::path(o.out);
    const GraphInput in =
        synthetic_input("synthetic", parse_graph_kind(g.kind), g.vertices, g.density, g.feature_dim, g.feature_density, o.seed);
    save_edge_list(in.graph, dir / "graph.el");
    save_dense_binary(in.features, dir / "features.dmat");
    std::cout << "graph      " << (dir / "graph.el").string() << "  vertices " << in.graph.num_vertices << "  nnz "
              << in.graph.num_edges() << "  density " << profile_density(in.graph.adjacency).density() << '\n';
    std::cout << "features   " << (dir / "features.dmat").string() << "  density "
              << profile_density(in.features).density() << '\n';
    if (is_zoo_id(o.model)) {
        for (double d : g.weight_densities) {
            const ModelSpec spec =
                zoo_model(o.model, g.feature_dim, o.hidden, o.out_dim ? o.out_dim : o.hidden, d, o.seed);
            const std::string tag = o.model + "_w" + density_tag(d);
            save_model_spec(spec, dir / (tag + ".json"), dir / ("weights_" + tag));
            std::cout << "model      " << (dir / (tag + ".json")).string() << "  weight density " << d << '\n';
        }
    }
    return 0;
}

int cmd_compile(const CommonOptions& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const Inputs in = load_inputs(o);
    const CompiledProgram prog = compile(in.spec, in.graph, in.features, compile_options(o));
    const auto t1 = std::chrono::steady_clock::now();
    for (const auto& w : prog.warnings) std::cerr << "warning: " << w << '\n';
    const std::string out = o.out.empty() ? "model.ir.json" : o.out;
    write_file(out, serialize_ir(prog));
    write_file(out + ".density.json", serialize_density_sidecar(prog));
    std::cout << "compiled " << prog.graph.kernels.size() << " kernels (N1=" << prog.n1 << ", N2=" << prog.n2
              << ") in " << std::fixed << std::setprecision(3)
              << std::chrono::duration<double, std::milli>(t1 - t0).count() << " ms -> " << out << '\n';
    return 0;
}

int cmd_run(const CommonOptions& o, const std::string& strategy, const std::string& ir_path,
            const std::string& embeddings) {
    const Inputs in = load_inputs(o);
    CompileOptions copts = compile_options(o);
    std::optional<StoredIr> stored;
    if (!ir_path.empty()) {
        stored = load_ir(ir_path);
        copts.partition_sizes = std::pair(stored->n1, stored->n2);
    }
    const CompiledProgram prog = compile(in.spec, in.graph, in.features, copts);
    if (stored && !(stored->graph == prog.graph))
        throw ConfigError("IR in " + ir_path + " was compiled from a different model or graph");
    for (const auto& w : prog.warnings) std::cerr << "warning: " << w << '\n';

    const InferenceResult res = schedule_and_run(prog, parse_strategy(strategy), sim_config(o));
    const RunMeta meta{strategy, o.clock_mhz};
    emit(o.out, join_lines(report_records(res.report, meta)));
    if (!o.out.empty() && o.out != "-") std::cout << report_table(res.report, meta);
    if (!embeddings.empty()) save_dense(res.output, embeddings);
    return 0;
}

struct CompareOptions {
    std::vector<std::string> graphs;
    std::vector<std::string> features;
    GenOptions gen;
    Index synthetic_graphs = 1;
    std::vector<double> weight_densities{1.0, 0.5, 0.3, 0.1, 0.05};
    std::vector<std::string> strategies{"s1", "s2", "dynamic"};
    Index threads = 0;
    std::string plot_data;
};

int cmd_compare(const CommonOptions& o, const CompareOptions& c) {
    if (!is_zoo_id(o.model)) throw ConfigError("compare sweeps weight density and needs a zoo model id");
    std::vector<GraphInput> inputs;
    if (!c.graphs.empty()) {
        if (c.graphs.size() != c.features.size())
            throw ConfigError("give one --features per --graph");
        for (std::size_t i = 0; i < c.graphs.size(); ++i)
            inputs.push_back({fs::path(c.graphs[i]).stem().string(), load_graph(c.graphs[i]), load_dense(c.features[i])});
    } else {
        for (Index i = 0; i < c.synthetic_graphs; ++i)
            inputs.push_back(synthetic_input("synthetic" + std::to_string(i), parse_graph_kind(c.gen.kind),
                                             c.gen.vertices, c.gen.density, c.gen.feature_dim, c.gen.feature_density,
                                             o.seed + 1000 * i));
    }
    SweepConfig cfg;
    cfg.model_id = o.model;
    cfg.hidden = o.hidden;
    if (o.out_dim) cfg.f_out = o.out_dim;
    cfg.weight_densities = c.weight_densities;
    cfg.strategies.clear();
    for (const auto& s : c.strategies) cfg.strategies.push_back(parse_strategy(s));
    cfg.sim = sim_config(o);
    cfg.compile = compile_options(o);
    cfg.seed = o.seed;
    cfg.threads = c.threads;

    const auto cells = run_sweep(inputs, cfg);
    emit(o.out, join_lines(compare_records(cells, o.clock_mhz)));
    if (!o.out.empty() && o.out != "-") std::cout << compare_table(cells);
    if (!c.plot_data.empty()) {
        std::ostringstream csv;
        csv << "graph,weight_density,strategy,makespan_cycles,compute_cycles\n";
        for (const auto& cell : cells)
            csv << cell.graph << ',' << cell.weight_density << ',' << to_string(cell.strategy) << ',' << cell.makespan
                << ',' << cell.compute_cycles << '\n';
        write_file(c.plot_data, csv.str());
    }
    return 0;
}

int cmd_profile(const std::string& matrix, Index block_rows, Index block_cols, const std::string& out) {
    const MatrixReff m = load_matrix(matrix);
    const PartitionedMatrix p = partition(m, block_rows, block_cols ? block_cols : block_rows, matrix);
    nlohmann::ordered_json doc;
    doc["matrix"] = matrix;
    doc["rows"] = m.rows();
    doc["cols"] = m.cols();
    doc["block_rows"] = p.grid.block_rows;
    doc["block_cols"] = p.grid.block_cols;
    std::cout << m.rows() << "x" << m.cols() << " in " << p.grid.grid_rows() << "x" << p.grid.grid_cols()
              << " blocks; nnz per block:\n";
    nlohmann::ordered_json grid = nlohmann::ordered_json::array();
    for (Index i = 0; i < p.grid.grid_rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Index j = 0; j < p.grid.grid_cols(); ++j) {
            const DensityRecord d = *p.block(i, j).density();
            std::cout << std::setw(8) << d.nnz;
            row.push_back({{"nnz", d.nnz}, {"total", d.total}, {"density", d.density()}});
        }
        std::cout << '\n';
        grid.push_back(row);
    }
    const DensityRecord total = p.total_density();
    std::cout << "total nnz " << total.nnz << "  density " << total.density() << '\n';
    doc["blocks"] = grid;
    doc["nnz"] = total.nnz;
    doc["density"] = total.density();
    if (!out.empty()) write_file(out, doc.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparsity-aware GNN inference compiler and multi-core simulator"};
    app.require_subcommand(1);
    CommonOptions o;

    auto* gen = app.add_subcommand("gen", "Write a synthetic graph, features and pruned zoo weights");
    GenOptions g;
    gen->add_option("--vertices", g.vertices, "Vertex count")->check(CLI::PositiveNumber);
    gen->add_option("--density", g.density, "Adjacency density")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--graph-kind", g.kind, "er or powerlaw");
    gen->add_option("--feature-dim", g.feature_dim, "Input feature width")->check(CLI::PositiveNumber);
    gen->add_option("--feature-density", g.feature_density, "Input feature density")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--weight-densities", g.weight_densities, "One model per density")->delimiter(',');
    gen->add_option("--model", o.model, "Zoo id for the generated models");
    gen->add_option("--hidden", o.hidden, "Hidden width");
    gen->add_option("--out-dim", o.out_dim, "Output width (default: hidden)");
    gen->add_option("--seed", o.seed, "Seed");
    gen->add_option("--out", o.out, "Output directory");

    auto* comp = app.add_subcommand("compile", "Compile model + graph into an IR file and density sidecar");
    comp->add_option("--graph", o.graph, "Edge list or Matrix Market file");
    comp->add_option("--features", o.features, "Input feature matrix");
    add_model_options(comp, o);
    add_machine_options(comp, o);
    comp->add_option("--out", o.out, "IR output path");

    auto* run = app.add_subcommand("run", "Run inference under one mapping strategy");
    std::string strategy = "dynamic", ir_path, embeddings;
    run->add_option("--graph", o.graph, "Edge list or Matrix Market file");
    run->add_option("--features", o.features, "Input feature matrix");
    add_model_options(run, o);
    add_machine_options(run, o);
    run->add_option("--strategy", strategy, "s1, s2 or dynamic")
        ->check(CLI::IsMember({"s1", "s2", "dynamic"}, CLI::ignore_case));
    run->add_option("--ir", ir_path, "Reuse the partition sizes of a stored IR");
    run->add_option("--embeddings", embeddings, "Write output embeddings (.dmat binary, else text)");
    run->add_option("--out", o.out, "Report records (JSON lines); stdout if omitted");

    auto* cmp = app.add_subcommand("compare", "Sweep weight density across mapping strategies");
    CompareOptions c;
    cmp->add_option("--graph", c.graphs, "Graph files (repeatable)");
    cmp->add_option("--features", c.features, "Feature files, one per --graph");
    cmp->add_option("--vertices", c.gen.vertices, "Synthetic vertex count")->check(CLI::PositiveNumber);
    cmp->add_option("--density", c.gen.density, "Synthetic adjacency density")->check(CLI::Range(0.0, 1.0));
    cmp->add_option("--graph-kind", c.gen.kind, "er or powerlaw");
    cmp->add_option("--feature-dim", c.gen.feature_dim, "Synthetic feature width")->check(CLI::PositiveNumber);
    cmp->add_option("--feature-density", c.gen.feature_density, "Synthetic feature density")
        ->check(CLI::Range(0.0, 1.0));
    cmp->add_option("--graphs", c.synthetic_graphs, "Number of synthetic graphs")->check(CLI::PositiveNumber);
    cmp->add_option("--weight-densities", c.weight_densities, "Comma-separated weight densities")->delimiter(',');
    cmp->add_option("--strategies", c.strategies, "Comma-separated subset of s1,s2,dynamic")->delimiter(',');
    cmp->add_option("--threads", c.threads, "Host worker threads (0: all)");
    cmp->add_option("--plot-data", c.plot_data, "Also write a CSV of the cells");
    cmp->add_option("--model", o.model, "Zoo id");
    cmp->add_option("--hidden", o.hidden, "Hidden width");
    cmp->add_option("--out-dim", o.out_dim, "Output width (default: hidden)");
    cmp->add_option("--seed", o.seed, "Seed");
    add_machine_options(cmp, o);
    cmp->add_option("--out", o.out, "Records (JSON lines); stdout if omitted");

    auto* prof = app.add_subcommand("profile", "Print the per-block density grid of a matrix");
    std::string matrix, prof_out;
    Index block_rows = 16, block_cols = 0;
    prof->add_option("--matrix", matrix, "Matrix Market or dense matrix file")->required();
    prof->add_option("--block-rows", block_rows, "Block height")->check(CLI::PositiveNumber);
    prof->add_option("--block-cols", block_cols, "Block width (default: block height)");
    prof->add_option("--out", prof_out, "Also write the grid as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) return cmd_gen(o, g);
        if (*comp) return cmd_compile(o);
        if (*run) return cmd_run(o, strategy, ir_path, embeddings);
        if (*cmp) return cmd_compare(o, c);
        if (*prof) return cmd_profile(matrix, block_rows, block_cols, prof_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
