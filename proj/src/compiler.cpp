#include "dynmap/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dynmap {

const char* to_string(KernelType t) {
    switch (t) {
        case KernelType::Aggregate: return "aggregate";
        case KernelType::Update: return "update";
        case KernelType::ElementwiseAdd: return "elementwise_add";
    }
    return "?";
}

const char* to_string(TensorRole r) {
    switch (r) {
        case TensorRole::Adjacency: return "adjacency";
        case TensorRole::Feature: return "feature";
        case TensorRole::Weight: return "weight";
    }
    return "?";
}

const char* to_string(AdjacencyVariant v) {
    switch (v) {
        case AdjacencyVariant::Raw: return "raw";
        case AdjacencyVariant::RowNormalized: return "row_normalized";
        case AdjacencyVariant::SymNormalized: return "sym_normalized";
        case AdjacencyVariant::ScaledSelfLoops: return "scaled_self_loops";
        case AdjacencyVariant::RowNormalizedScaledSelfLoops: return "row_normalized_scaled_self_loops";
    }
    return "?";
}

KernelType parse_kernel_type(const std::string& s) {
    for (auto t : {KernelType::Aggregate, KernelType::Update, KernelType::ElementwiseAdd})
        if (s == to_string(t)) return t;
    throw ConfigError("unknown kernel type '" + s + "'");
}

TensorRole parse_tensor_role(const std::string& s) {
    for (auto r : {TensorRole::Adjacency, TensorRole::Feature, TensorRole::Weight})
        if (s == to_string(r)) return r;
    throw ConfigError("unknown tensor role '" + s + "'");
}

AdjacencyVariant parse_adjacency_variant(const std::string& s) {
    for (auto v : {AdjacencyVariant::Raw, AdjacencyVariant::RowNormalized, AdjacencyVariant::SymNormalized,
                   AdjacencyVariant::ScaledSelfLoops, AdjacencyVariant::RowNormalizedScaledSelfLoops})
        if (s == to_string(v)) return v;
    throw ConfigError("unknown adjacency variant '" + s + "'");
}

std::optional<Index> ComputationGraph::find_tensor(const std::string& name) const {
    for (Index i = 0; i < tensors.size(); ++i)
        if (tensors[i].name == name) return i;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Computation graph

ComputationGraph build_computation_graph(const ModelSpec& spec, const GraphMeta& meta) {
    spec.validate_dims();
    ComputationGraph g;
    const Index V = meta.num_vertices;
    std::vector<std::optional<Index>> producer;

    auto add_tensor = [&](TensorInfo t) -> Index {
        if (auto id = g.find_tensor(t.name)) return *id;
        g.tensors.push_back(std::move(t));
        producer.push_back(std::nullopt);
        return g.tensors.size() - 1;
    };
    auto feature = [&](const std::string& name, Index cols) {
        return add_tensor({name, TensorRole::Feature, V, cols, false, AdjacencyVariant::Raw, 0.0});
    };
    auto adjacency = [&](AdjacencyVariant v, double eps) {
        std::ostringstream name;
        name << "A." << to_string(v);
        if (v == AdjacencyVariant::ScaledSelfLoops || v == AdjacencyVariant::RowNormalizedScaledSelfLoops)
            name << "(" << eps << ")";
        return add_tensor({name.str(), TensorRole::Adjacency, V, V, true, v, eps});
    };
    auto weight = [&](const WeightSlot& s) {
        return add_tensor({s.name, TensorRole::Weight, s.rows, s.cols, true, AdjacencyVariant::Raw, 0.0});
    };
    auto kernel = [&](KernelType type, Index layer_id, Index left, Index right, Index out, Index f_in, Index f_out,
                      AggregationOp agg, Activation act) {
        KernelIR k;
        k.id = g.kernels.size();
        k.type = type;
        k.layer_id = layer_id;
        k.f_in = f_in;
        k.f_out = f_out;
        k.num_vertices = V;
        k.num_edges = meta.num_edges;
        k.aggregation = agg;
        k.activation = act;
        k.left = left;
        k.right = right;
        k.output = out;
        for (Index operand : {left, right})
            if (producer[operand] &&
                std::find(k.scheme.depends_on.begin(), k.scheme.depends_on.end(), *producer[operand]) ==
                    k.scheme.depends_on.end())
                k.scheme.depends_on.push_back(*producer[operand]);
        producer[out] = k.id;
        g.kernels.push_back(std::move(k));
    };

    Index cur = add_tensor({"H0", TensorRole::Feature, V, spec.layers.empty() ? 0 : spec.layers.front().f_in, true,
                            AdjacencyVariant::Raw, 0.0});
    g.input_tensor = cur;

    for (Index l = 0; l < spec.layers.size(); ++l) {
        const LayerSpec& layer = spec.layers[l];
        const Index id = l + 1;
        const std::string p = "l" + std::to_string(id) + ".";
        if (layer.aggregation == AggregationOp::Max || layer.aggregation == AggregationOp::Min)
            throw ConfigError("layer " + std::to_string(id) + ": " + to_string(layer.aggregation) +
                              " aggregation is not a matrix product and cannot run on the multiply primitives; "
                              "use sum or mean");
        const auto slots = weight_slots(layer, id);
        const Activation off{layer.activation.kind, layer.activation.slope, false};
        const AdjacencyVariant base =
            layer.aggregation == AggregationOp::Mean ? AdjacencyVariant::RowNormalized : AdjacencyVariant::Raw;

        switch (layer.kind) {
            case ModelKind::GCN: {
                const Index a = adjacency(layer.normalize ? AdjacencyVariant::SymNormalized : base, 0.0);
                const Index agg = feature(p + "agg", layer.f_in);
                kernel(KernelType::Aggregate, id, a, cur, agg, layer.f_in, layer.f_in, layer.aggregation, off);
                const Index out = feature(p + "out", layer.f_out);
                kernel(KernelType::Update, id, agg, weight(slots[0]), out, layer.f_in, layer.f_out, layer.aggregation,
                       layer.activation);
                cur = out;
                break;
            }
            case ModelKind::SGC: {
                if (layer.sgc_hops == 0) throw ConfigError("layer " + std::to_string(id) + ": sgc_hops must be >= 1");
                const Index a = adjacency(layer.normalize ? AdjacencyVariant::SymNormalized : base, 0.0);
                for (Index h = 1; h <= layer.sgc_hops; ++h) {
                    const Index hop = feature(p + "hop" + std::to_string(h), layer.f_in);
                    kernel(KernelType::Aggregate, id, a, cur, hop, layer.f_in, layer.f_in, layer.aggregation, off);
                    cur = hop;
                }
                const Index out = feature(p + "out", layer.f_out);
                kernel(KernelType::Update, id, cur, weight(slots[0]), out, layer.f_in, layer.f_out, layer.aggregation,
                       layer.activation);
                cur = out;
                break;
            }
            case ModelKind::GIN: {
                const AdjacencyVariant v = base == AdjacencyVariant::Raw ? AdjacencyVariant::ScaledSelfLoops
                                                                         : AdjacencyVariant::RowNormalizedScaledSelfLoops;
                const Index a = adjacency(v, layer.gin_epsilon);
                const Index agg = feature(p + "agg", layer.f_in);
                kernel(KernelType::Aggregate, id, a, cur, agg, layer.f_in, layer.f_in, layer.aggregation, off);
                const Index hidden = feature(p + "mlp1", layer.f_out);
                kernel(KernelType::Update, id, agg, weight(slots[0]), hidden, layer.f_in, layer.f_out,
                       layer.aggregation, Activation{ActivationKind::ReLU, 0.0, true});
                const Index out = feature(p + "out", layer.f_out);
                kernel(KernelType::Update, id, hidden, weight(slots[1]), out, layer.f_out, layer.f_out,
                       layer.aggregation, layer.activation);
                cur = out;
                break;
            }
            case ModelKind::SAGE: {
                const Index a = adjacency(base, 0.0);
                const Index agg = feature(p + "agg", layer.f_in);
                kernel(KernelType::Aggregate, id, a, cur, agg, layer.f_in, layer.f_in, layer.aggregation, off);
                const Index neigh = feature(p + "neigh", layer.f_out);
                kernel(KernelType::Update, id, agg, weight(slots[0]), neigh, layer.f_in, layer.f_out,
                       layer.aggregation, off);
                const Index self = feature(p + "self", layer.f_out);
                kernel(KernelType::Update, id, cur, weight(slots[1]), self, layer.f_in, layer.f_out,
                       layer.aggregation, off);
                const Index out = feature(p + "out", layer.f_out);
                kernel(KernelType::ElementwiseAdd, id, neigh, self, out, layer.f_out, layer.f_out, layer.aggregation,
                       layer.activation);
                cur = out;
                break;
            }
        }
    }
    g.output_tensor = cur;
    return g;
}

// ---------------------------------------------------------------------------
// Partition sizes

Index max_partition_size(std::uint64_t mem_budget) {
    auto fits = [&](std::uint64_t n) { return 3ull * n * n * 4ull <= mem_budget; };
    Index n = 0;
    for (std::uint64_t cand = 1; fits(cand); cand *= 2) n = static_cast<Index>(cand);
    if (n < kMinPartitionSize)
        throw ConfigError("memory budget of " + std::to_string(mem_budget) + " bytes cannot hold three " +
                          std::to_string(kMinPartitionSize) + "x" + std::to_string(kMinPartitionSize) +
                          " blocks (needs " + std::to_string(3 * kMinPartitionSize * kMinPartitionSize * 4) + ")");
    return n;
}

std::vector<KernelWorkload> kernel_workloads(const ComputationGraph& graph) {
    std::vector<KernelWorkload> out;
    for (const auto& k : graph.kernels) {
        if (k.type == KernelType::Aggregate)
            out.push_back({k.type, static_cast<std::uint64_t>(k.num_vertices) * k.f_in});
        else if (k.type == KernelType::Update)
            out.push_back({k.type, static_cast<std::uint64_t>(k.num_vertices) * k.f_out});
    }
    return out;
}

PartitionChoice choose_partition_sizes(std::span<const KernelWorkload> workloads, std::uint64_t mem_budget,
                                       Index n_cc, Index eta) {
    if (eta < 1) throw ConfigError("eta must be >= 1");
    if (n_cc < 1) throw ConfigError("core count must be >= 1");
    PartitionChoice c;
    c.n_max = max_partition_size(mem_budget);
    const std::uint64_t target = static_cast<std::uint64_t>(eta) * n_cc;

    // Largest power of two N in [floor, N_max] with tasks(N) >= target.
    auto largest = [&](Index floor, auto&& meets) -> std::optional<Index> {
        for (Index n = c.n_max; n >= floor; n /= 2)
            if (meets(static_cast<std::uint64_t>(n))) return n;
        return std::nullopt;
    };
    auto warn = [&](std::size_t k, const KernelWorkload& w, Index fallback) {
        std::ostringstream os;
        os << to_string(w.type) << " workload #" << k << " (Q=" << w.q << ") yields fewer than eta*N_CC=" << target
           << " tasks at every allowed size; using " << fallback;
        c.warnings.push_back(os.str());
    };

    c.n2 = c.n_max;
    for (std::size_t k = 0; k < workloads.size(); ++k) {
        const auto& w = workloads[k];
        if (w.type != KernelType::Update) continue;
        auto n = largest(kMinPartitionSize, [&](std::uint64_t N) { return w.q >= target * N * N; });
        if (!n) warn(k, w, kMinPartitionSize);
        c.n2 = std::min(c.n2, n.value_or(kMinPartitionSize));
    }

    c.n1 = c.n_max;
    for (std::size_t k = 0; k < workloads.size(); ++k) {
        const auto& w = workloads[k];
        if (w.type != KernelType::Aggregate) continue;
        auto n = largest(c.n2, [&](std::uint64_t N) { return w.q >= target * N * c.n2; });
        if (!n) warn(k, w, c.n2);
        c.n1 = std::min(c.n1, n.value_or(c.n2));
    }
    return c;
}

// ---------------------------------------------------------------------------
// Partitioning

DensityRecord PartitionedMatrix::total_density() const {
    DensityRecord total;
    for (const auto& b : blocks) total += b.density().value_or(profile_density(b));
    return total;
}

PartitionedMatrix partition(const MatrixReff& m, Index block_rows, Index block_cols, std::string source) {
    if (block_rows == 0 || block_cols == 0) throw ConfigError("partition: block size must be >= 1");
    PartitionedMatrix p;
    p.source = std::move(source);
    p.grid = {m.rows(), m.cols(), block_rows, block_cols};
    const BlockGrid& grid = p.grid;
    p.blocks.reserve(grid.num_blocks());

    if (m.is_sparse()) {
        const auto& coo = m.sparse();
        std::vector<std::vector<CooEntry<float>>> buckets(grid.num_blocks());
        for (const auto& e : coo.entries()) {
            const Index bi = e.row / block_rows, bj = e.col / block_cols;
            buckets[grid.flat(bi, bj)].push_back({e.row - bi * block_rows, e.col - bj * block_cols, e.value});
        }
        for (Index bi = 0; bi < grid.grid_rows(); ++bi)
            for (Index bj = 0; bj < grid.grid_cols(); ++bj)
                p.blocks.push_back(profiled(MatrixReff(CooMatrixf::from_canonical(
                    grid.row_range(bi).size(), grid.col_range(bj).size(), std::move(buckets[grid.flat(bi, bj)]),
                    coo.layout()))));
    } else {
        for (Index bi = 0; bi < grid.grid_rows(); ++bi)
            for (Index bj = 0; bj < grid.grid_cols(); ++bj)
                p.blocks.push_back(profiled(MatrixReff(slice_block(m.dense(), grid.row_range(bi), grid.col_range(bj)))));
    }
    return p;
}

MatrixReff reassemble(const PartitionedMatrix& p) {
    const BlockGrid& grid = p.grid;
    if (!p.blocks.empty() && p.blocks.front().is_sparse()) {
        std::vector<CooEntry<float>> entries;
        for (Index bi = 0; bi < grid.grid_rows(); ++bi)
            for (Index bj = 0; bj < grid.grid_cols(); ++bj)
                for (const auto& e : p.block(bi, bj).sparse().entries())
                    entries.push_back({e.row + bi * grid.block_rows, e.col + bj * grid.block_cols, e.value});
        return MatrixReff(CooMatrixf(grid.rows, grid.cols, std::move(entries), p.blocks.front().layout()));
    }
    const Layout layout = p.blocks.empty() ? Layout::RowMajor : p.blocks.front().layout();
    DenseMatrixf out(grid.rows, grid.cols, layout);
    for (Index bi = 0; bi < grid.grid_rows(); ++bi)
        for (Index bj = 0; bj < grid.grid_cols(); ++bj) {
            const Range r = grid.row_range(bi), c = grid.col_range(bj);
            out.view().block(r.begin, c.begin, r.size(), c.size()) = p.block(bi, bj).dense().view();
        }
    return MatrixReff(std::move(out));
}

TileDensityMap::TileDensityMap(Index rows, Index cols, Index tile)
    : grid_{rows, cols, tile, tile}, tiles_(grid_.num_blocks()) {
    if (tile == 0) throw ConfigError("tile size must be >= 1");
}

bool TileDensityMap::complete() const {
    return std::all_of(tiles_.begin(), tiles_.end(), [](const auto& t) { return t.has_value(); });
}

namespace {
void check_aligned(const BlockGrid& g, Range rows, Range cols) {
    auto aligned = [](Range r, Index step, Index extent) {
        return r.begin % step == 0 && (r.end % step == 0 || r.end == extent) && r.begin <= r.end && r.end <= extent;
    };
    if (!aligned(rows, g.block_rows, g.rows) || !aligned(cols, g.block_cols, g.cols))
        throw ShapeError("tile density: region is not aligned to the tile grid");
}
}  // namespace

std::optional<DensityRecord> TileDensityMap::try_query(Range rows, Range cols) const {
    check_aligned(grid_, rows, cols);
    DensityRecord total;
    for (Index ti = rows.begin / grid_.block_rows; ti * grid_.block_rows < rows.end; ++ti)
        for (Index tj = cols.begin / grid_.block_cols; tj * grid_.block_cols < cols.end; ++tj) {
            const auto& t = tile(ti, tj);
            if (!t) return std::nullopt;
            total += *t;
        }
    return total;
}

DensityRecord TileDensityMap::query(Range rows, Range cols) const {
    if (auto d = try_query(rows, cols)) return *d;
    throw RuntimeOrderError("density of rows [" + std::to_string(rows.begin) + "," + std::to_string(rows.end) +
                            ") cols [" + std::to_string(cols.begin) + "," + std::to_string(cols.end) +
                            ") requested before every covering tile was profiled");
}

void TileDensityMap::profile_region(const DenseMatrixf& m, Range rows, Range cols) {
    check_aligned(grid_, rows, cols);
    for (Index ti = rows.begin / grid_.block_rows; ti * grid_.block_rows < rows.end; ++ti)
        for (Index tj = cols.begin / grid_.block_cols; tj * grid_.block_cols < cols.end; ++tj) {
            const Range r = grid_.row_range(ti), c = grid_.col_range(tj);
            const auto block = m.view().block(r.begin, c.begin, r.size(), c.size());
            record(ti, tj, {static_cast<Index>((block.array() != 0.0f).count()), r.size() * c.size()});
        }
}

TileDensityMap profile_tiles(const DenseMatrixf& m, Index tile) {
    TileDensityMap map(m.rows(), m.cols(), tile);
    map.profile_region(m, {0, m.rows()}, {0, m.cols()});
    return map;
}

// ---------------------------------------------------------------------------
// Adjacency rewrites

CooMatrixf make_adjacency(const CooMatrixf& raw, AdjacencyVariant variant, double epsilon) {
    if (raw.rows() != raw.cols()) throw ShapeError("adjacency must be square");
    const Index n = raw.rows();
    std::vector<CooEntry<float>> entries(raw.entries().begin(), raw.entries().end());

    auto row_sums = [&](const std::vector<CooEntry<float>>& es) {
        std::vector<double> s(n, 0.0);
        for (const auto& e : es) s[e.row] += e.value;
        return s;
    };
    switch (variant) {
        case AdjacencyVariant::Raw: break;
        case AdjacencyVariant::RowNormalized:
        case AdjacencyVariant::RowNormalizedScaledSelfLoops: {
            const auto s = row_sums(entries);
            for (auto& e : entries)
                if (s[e.row] != 0.0) e.value = static_cast<float>(e.value / s[e.row]);
            break;
        }
        case AdjacencyVariant::SymNormalized:
        case AdjacencyVariant::ScaledSelfLoops: break;
    }

    if (variant == AdjacencyVariant::SymNormalized) {
        for (Index i = 0; i < n; ++i) entries.push_back({i, i, 1.0f});
        CooMatrixf with_loops(n, n, std::move(entries));
        entries.assign(with_loops.entries().begin(), with_loops.entries().end());
        const auto deg = row_sums(entries);
        for (auto& e : entries) {
            const double dd = deg[e.row] * deg[e.col];
            e.value = dd > 0.0 ? static_cast<float>(e.value / std::sqrt(dd)) : 0.0f;
        }
    } else if (variant == AdjacencyVariant::ScaledSelfLoops ||
               variant == AdjacencyVariant::RowNormalizedScaledSelfLoops) {
        for (Index i = 0; i < n; ++i) entries.push_back({i, i, static_cast<float>(1.0 + epsilon)});
    }
    return CooMatrixf(n, n, std::move(entries), Layout::RowMajor);
}

// ---------------------------------------------------------------------------
// Execution schemes

void generate_schemes(ComputationGraph& graph, Index n1, Index n2) {
    if (n2 == 0 || n1 == 0 || n1 % n2 != 0)
        throw ConfigError("partition sizes N1=" + std::to_string(n1) + ", N2=" + std::to_string(n2) +
                          ": N1 must be a positive multiple of N2");
    for (auto& k : graph.kernels) {
        ExecutionScheme& s = k.scheme;
        s.n1 = n1;
        s.n2 = n2;
        s.tasks.clear();
        const Index V = k.num_vertices;
        switch (k.type) {
            case KernelType::Aggregate: {
                s.left = {V, V, n1, n1};
                s.right = {V, k.f_in, n1, n2};
                s.output = {V, k.f_out, n1, n2};
                for (Index i = 0; i < s.output.grid_rows(); ++i)
                    for (Index c = 0; c < s.output.grid_cols(); ++c) {
                        TaskDescriptor t{i, c, i, 0, {}};
                        for (Index j = 0; j < s.left.grid_cols(); ++j) t.chain.push_back({i, j, j, c});
                        s.tasks.push_back(std::move(t));
                    }
                break;
            }
            case KernelType::Update: {
                s.left = {V, k.f_in, n2, n2};
                s.right = {k.f_in, k.f_out, n2, n2};
                s.output = {V, k.f_out, n2, n2};
                for (Index i = 0; i < s.output.grid_rows(); ++i)
                    for (Index c = 0; c < s.output.grid_cols(); ++c) {
                        TaskDescriptor t{i, c, i * n2 / n1, i % (n1 / n2), {}};
                        for (Index j = 0; j < s.left.grid_cols(); ++j) t.chain.push_back({i, j, j, c});
                        s.tasks.push_back(std::move(t));
                    }
                break;
            }
            case KernelType::ElementwiseAdd: {
                s.left = s.right = s.output = {V, k.f_out, n2, n2};
                for (Index i = 0; i < s.output.grid_rows(); ++i)
                    for (Index c = 0; c < s.output.grid_cols(); ++c) s.tasks.push_back({i, c, 0, 0, {}});
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------

CompiledProgram compile(const ModelSpec& spec, const Graph& graph, DenseMatrixf features,
                        const CompileOptions& options) {
    spec.validate_dims();
    if (graph.adjacency.rows() != graph.num_vertices || graph.adjacency.cols() != graph.num_vertices)
        throw ShapeError("adjacency is " + std::to_string(graph.adjacency.rows()) + "x" +
                         std::to_string(graph.adjacency.cols()) + " for " + std::to_string(graph.num_vertices) +
                         " vertices");
    if (features.rows() != graph.num_vertices)
        throw ShapeError("feature matrix has " + std::to_string(features.rows()) + " rows for " +
                         std::to_string(graph.num_vertices) + " vertices");
    if (!spec.layers.empty() && features.cols() != spec.layers.front().f_in)
        throw ShapeError("feature matrix has " + std::to_string(features.cols()) + " columns, model expects " +
                         std::to_string(spec.layers.front().f_in));

    CompiledProgram prog;
    prog.graph = build_computation_graph(spec, {graph.num_vertices, graph.num_edges()});

    if (options.partition_sizes) {
        prog.n1 = options.partition_sizes->first;
        prog.n2 = options.partition_sizes->second;
        prog.n_max = std::max(prog.n1, prog.n2);
    } else {
        const auto workloads = kernel_workloads(prog.graph);
        auto choice = choose_partition_sizes(workloads, options.mem_budget, options.n_cores, options.eta);
        prog.n1 = choice.n1;
        prog.n2 = choice.n2;
        prog.n_max = choice.n_max;
        prog.warnings = std::move(choice.warnings);
    }
    generate_schemes(prog.graph, prog.n1, prog.n2);

    prog.features = transform_layout(features, Layout::RowMajor);
    prog.feature_tiles = profile_tiles(prog.features, prog.n2);

    for (Index t = 0; t < prog.graph.tensors.size(); ++t) {
        const TensorInfo& info = prog.graph.tensors[t];
        if (info.role == TensorRole::Adjacency) {
            const auto adj = make_adjacency(transform_layout(graph.adjacency, Layout::RowMajor), info.variant,
                                            info.epsilon);
            prog.blocks.emplace(t, partition(MatrixReff(adj), prog.n1, prog.n1, info.name));
        } else if (info.role == TensorRole::Weight) {
            const auto it = spec.weights.find(info.name);
            if (it == spec.weights.end()) throw ConfigError("model is missing weight '" + info.name + "'");
            if (it->second.rows() != info.rows || it->second.cols() != info.cols)
                throw ShapeError("weight '" + info.name + "' is " + std::to_string(it->second.rows()) + "x" +
                                 std::to_string(it->second.cols()) + ", expected " + std::to_string(info.rows) +
                                 "x" + std::to_string(info.cols));
            prog.blocks.emplace(t, partition(MatrixReff(transform_layout(it->second, Layout::RowMajor)), prog.n2,
                                             prog.n2, info.name));
        }
    }
    return prog;
}

}  // namespace dynmap
