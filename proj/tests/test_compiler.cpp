#include <gtest/gtest.h>

#include <cmath>

#include "dynmap/compiler.hpp"
#include "dynmap/io.hpp"
#include "support/reference.hpp"

using namespace dynmap;

namespace {

LayerSpec layer(ModelKind kind, Index f_in, Index f_out, bool relu = false) {
    LayerSpec l;
    l.kind = kind;
    l.f_in = f_in;
    l.f_out = f_out;
    l.activation.enabled = relu;
    return l;
}

std::vector<KernelType> kernel_types(const ComputationGraph& g) {
    std::vector<KernelType> out;
    for (const auto& k : g.kernels) out.push_back(k.type);
    return out;
}

Graph path_graph(Index n) {
    std::vector<CooEntry<float>> e;
    for (Index i = 0; i + 1 < n; ++i) {
        e.push_back({i, i + 1, 1.0f});
        e.push_back({i + 1, i, 1.0f});
    }
    return {n, CooMatrixf(n, n, e)};
}

using KT = KernelType;

}  // namespace

TEST(ComputationGraph, TwoLayerGcnAlternates) {
    ModelSpec spec;
    spec.layers = {layer(ModelKind::GCN, 8, 4, true), layer(ModelKind::GCN, 4, 2)};
    const auto g = build_computation_graph(spec, {10, 20});
    EXPECT_EQ(kernel_types(g), (std::vector{KT::Aggregate, KT::Update, KT::Aggregate, KT::Update}));
    EXPECT_TRUE(g.kernels[1].activation.enabled);
    EXPECT_FALSE(g.kernels[0].activation.enabled);
    EXPECT_FALSE(g.kernels[3].activation.enabled);
    EXPECT_EQ(g.kernels[2].scheme.depends_on, std::vector<Index>{1});
    EXPECT_EQ(g.kernels.back().output, g.output_tensor);
    EXPECT_EQ(g.tensors[g.input_tensor].name, "H0");
}

TEST(ComputationGraph, SgcHopsThenUpdate) {
    ModelSpec spec;
    spec.layers = {layer(ModelKind::SGC, 8, 3)};
    const auto g = build_computation_graph(spec, {10, 20});
    EXPECT_EQ(kernel_types(g), (std::vector{KT::Aggregate, KT::Aggregate, KT::Update}));
    EXPECT_EQ(g.kernels[0].left, g.kernels[1].left);  // one adjacency tensor shared by both hops
}

TEST(ComputationGraph, EmptyModelIsEmptyDag) {
    EXPECT_TRUE(build_computation_graph(ModelSpec{}, {5, 0}).kernels.empty());
}

TEST(ComputationGraph, GinAndSageExpansion) {
    ModelSpec gin;
    gin.layers = {layer(ModelKind::GIN, 8, 4)};
    gin.layers[0].gin_epsilon = 0.5;
    const auto g = build_computation_graph(gin, {10, 20});
    EXPECT_EQ(kernel_types(g), (std::vector{KT::Aggregate, KT::Update, KT::Update}));
    EXPECT_TRUE(g.kernels[1].activation.enabled);  // ReLU between the two MLP layers
    const auto& adj = g.tensors[g.kernels[0].left];
    EXPECT_EQ(adj.variant, AdjacencyVariant::ScaledSelfLoops);
    EXPECT_DOUBLE_EQ(adj.epsilon, 0.5);

    ModelSpec sage;
    sage.layers = {layer(ModelKind::SAGE, 8, 4, true)};
    sage.layers[0].aggregation = AggregationOp::Mean;
    const auto s = build_computation_graph(sage, {10, 20});
    EXPECT_EQ(kernel_types(s), (std::vector{KT::Aggregate, KT::Update, KT::Update, KT::ElementwiseAdd}));
    EXPECT_EQ(s.tensors[s.kernels[0].left].variant, AdjacencyVariant::RowNormalized);
    EXPECT_TRUE(s.kernels[3].activation.enabled);
    EXPECT_FALSE(s.kernels[1].activation.enabled);
}

TEST(ComputationGraph, RejectsMaxAggregationAndBrokenChains) {
    ModelSpec spec;
    spec.layers = {layer(ModelKind::GCN, 8, 4)};
    spec.layers[0].aggregation = AggregationOp::Max;
    EXPECT_THROW(build_computation_graph(spec, {10, 20}), ConfigError);
    spec.layers = {layer(ModelKind::GCN, 8, 4), layer(ModelKind::GCN, 5, 2)};
    EXPECT_THROW(build_computation_graph(spec, {10, 20}), ShapeError);
}

TEST(PartitionSizes, MaxSizeFromBudget) {
    EXPECT_EQ(max_partition_size(kDefaultMemBudget), 512u);
    EXPECT_EQ(max_partition_size(12u * 128 * 128), 128u);
    EXPECT_EQ(max_partition_size(12u * 128 * 128 - 1), 64u);
    EXPECT_THROW(max_partition_size(12u * 16 * 16 - 1), ConfigError);
}

TEST(PartitionSizes, SingleUpdateKernel) {
    const std::vector<KernelWorkload> w{{KT::Update, 4096u * 64}};
    const auto c = choose_partition_sizes(w, 12u * 128 * 128, 7, 4);
    EXPECT_EQ(c.n_max, 128u);
    EXPECT_EQ(c.n2, 64u);
    EXPECT_TRUE(c.warnings.empty());
}

TEST(PartitionSizes, EnormousWorkloadClampsToMax) {
    const std::vector<KernelWorkload> w{{KT::Aggregate, 1ull << 40}, {KT::Update, 1ull << 40}};
    const auto c = choose_partition_sizes(w, kDefaultMemBudget, 7, 4);
    EXPECT_EQ(c.n1, 512u);
    EXPECT_EQ(c.n2, 512u);
}

TEST(PartitionSizes, TinyGraphFallsBackWithWarning) {
    const std::vector<KernelWorkload> w{{KT::Aggregate, 100}, {KT::Update, 100}};
    const auto c = choose_partition_sizes(w, kDefaultMemBudget, 7, 4);
    EXPECT_EQ(c.n1, 16u);
    EXPECT_EQ(c.n2, 16u);
    EXPECT_EQ(c.warnings.size(), 2u);
}

TEST(PartitionSizes, AggregateBoundUsesN2) {
    // Q = 4096*64: N2 = 64, then N1 is the largest N with Q/(N*64) >= 28, i.e. N = 128.
    const std::vector<KernelWorkload> w{{KT::Aggregate, 4096u * 64}, {KT::Update, 4096u * 64}};
    const auto c = choose_partition_sizes(w, kDefaultMemBudget, 7, 4);
    EXPECT_EQ(c.n2, 64u);
    EXPECT_EQ(c.n1, 128u);
    EXPECT_EQ(c.n1 % c.n2, 0u);
    EXPECT_THROW(choose_partition_sizes(w, kDefaultMemBudget, 7, 0), ConfigError);
}

TEST(Partition, FourByFourIntoTwoByTwoBlocks) {
    Rng rng(1);
    const auto m = ref::random_dense(rng, 4, 4, 0.6, true);
    const auto p = partition(MatrixReff(m), 2, 2);
    EXPECT_EQ(p.grid.grid_rows(), 2u);
    EXPECT_EQ(p.grid.grid_cols(), 2u);
    for (const auto& b : p.blocks) {
        EXPECT_EQ(b.rows(), 2u);
        ASSERT_TRUE(b.density().has_value());
    }
    EXPECT_TRUE(reassemble(p).dense() == m);
}

TEST(Partition, BlockDiagonalOffDiagonalBlocksAreEmpty) {
    const Graph g = generate_block_diagonal(64, 4, 0.5, 3);
    const auto p = partition(MatrixReff(g.adjacency), 16, 16);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j) {
            const auto d = *p.block(i, j).density();
            if (i == j)
                EXPECT_GT(d.nnz, 0u);
            else
                EXPECT_EQ(d.nnz, 0u);
        }
}

TEST(Partition, RaggedLastBlockRow) {
    const auto p = partition(MatrixReff(DenseMatrixf::identity(5)), 2, 2);
    EXPECT_EQ(p.grid.grid_rows(), 3u);
    EXPECT_EQ(p.block(2, 2).rows(), 1u);
    EXPECT_EQ(p.block(2, 0).cols(), 2u);
    EXPECT_EQ(p.total_density(), (DensityRecord{5, 25}));
}

TEST(Partition, ConservesNonzerosRandomized) {
    Rng rng(2);
    for (int t = 0; t < 30; ++t) {
        const auto m = ref::random_dense(rng, 1 + rng.below(50), 1 + rng.below(50), rng.uniform(), false);
        const Index br = 1 + rng.below(12), bc = 1 + rng.below(12);
        for (const MatrixReff& ref : {MatrixReff(m), MatrixReff(dense_to_sparse(m))}) {
            const auto p = partition(ref, br, bc);
            Index nnz = 0;
            for (const auto& b : p.blocks) nnz += b.density()->nnz;
            EXPECT_EQ(nnz, profile_density(m).nnz);
            EXPECT_EQ(p.total_density().total, m.size());
        }
    }
}

TEST(TileDensityMap, QueriesAlignedRegions) {
    auto m = DenseMatrixf(8, 8);
    m(0, 0) = 1;
    m(5, 6) = 1;
    m(7, 7) = 1;
    const auto t = profile_tiles(m, 4);
    EXPECT_TRUE(t.complete());
    EXPECT_EQ(t.query({0, 8}, {0, 8}), (DensityRecord{3, 64}));
    EXPECT_EQ(t.query({4, 8}, {4, 8}), (DensityRecord{2, 16}));
    EXPECT_EQ(t.query({0, 4}, {4, 8}), (DensityRecord{0, 16}));
    EXPECT_THROW(t.query({0, 3}, {0, 4}), ShapeError);
}

TEST(TileDensityMap, UnknownTilesRaise) {
    TileDensityMap t(8, 8, 4);
    EXPECT_FALSE(t.complete());
    EXPECT_THROW(t.query({0, 4}, {0, 4}), RuntimeOrderError);
    EXPECT_FALSE(t.try_query({0, 4}, {0, 4}).has_value());
    t.profile_region(DenseMatrixf::identity(8), {0, 4}, {0, 8});
    EXPECT_EQ(t.query({0, 4}, {0, 8}), (DensityRecord{4, 32}));
    EXPECT_THROW(t.query({0, 8}, {0, 8}), RuntimeOrderError);
}

TEST(TileDensityMap, RaggedEdges) {
    const auto t = profile_tiles(DenseMatrixf::identity(6), 4);
    EXPECT_EQ(t.query({4, 6}, {4, 6}), (DensityRecord{2, 4}));
    EXPECT_EQ(t.query({0, 6}, {0, 6}), (DensityRecord{6, 36}));
}

TEST(Adjacency, Variants) {
    const Graph g = path_graph(3);  // degrees 1, 2, 1
    const auto raw = make_adjacency(g.adjacency, AdjacencyVariant::Raw);
    EXPECT_TRUE(raw == g.adjacency);

    const auto rn = sparse_to_dense(make_adjacency(g.adjacency, AdjacencyVariant::RowNormalized));
    EXPECT_FLOAT_EQ(rn(1, 0), 0.5f);
    EXPECT_FLOAT_EQ(rn(0, 1), 1.0f);

    const auto sym = sparse_to_dense(make_adjacency(g.adjacency, AdjacencyVariant::SymNormalized));
    // Degrees with self loops: 2, 3, 2.
    EXPECT_NEAR(sym(0, 0), 0.5, 1e-6);
    EXPECT_NEAR(sym(0, 1), 1.0 / std::sqrt(6.0), 1e-6);
    EXPECT_NEAR(sym(1, 1), 1.0 / 3.0, 1e-6);

    const auto gin = sparse_to_dense(make_adjacency(g.adjacency, AdjacencyVariant::ScaledSelfLoops, 0.25));
    EXPECT_FLOAT_EQ(gin(2, 2), 1.25f);
    EXPECT_FLOAT_EQ(gin(2, 1), 1.0f);
}

TEST(Schemes, TaskCountsAndChains) {
    ModelSpec spec;
    spec.layers = {layer(ModelKind::GCN, 40, 24)};
    auto g = build_computation_graph(spec, {70, 0});
    generate_schemes(g, 32, 16);
    const auto& agg = g.kernels[0].scheme;
    EXPECT_EQ(agg.tasks.size(), 3u * 3u);  // ceil(70/32) * ceil(40/16)
    for (const auto& t : agg.tasks) EXPECT_EQ(t.K(), 3u);
    const auto& upd = g.kernels[1].scheme;
    EXPECT_EQ(upd.tasks.size(), 5u * 2u);  // ceil(70/16) * ceil(24/16)
    for (const auto& t : upd.tasks) {
        EXPECT_EQ(t.K(), 3u);  // ceil(40/16)
        EXPECT_EQ(t.fiber, t.out_row / 2);
        EXPECT_EQ(t.subfiber, t.out_row % 2);
    }
    EXPECT_THROW(generate_schemes(g, 24, 16), ConfigError);
}

TEST(Compile, ProducesBlocksForEveryCompileTimeOperand) {
    ModelSpec spec = zoo_model("gcn2", 8, 8, 4, 0.5, 1);
    const Graph g = generate_erdos_renyi(50, 0.1, 2);
    const auto h = generate_features(50, 8, 0.5, 3);
    const auto prog = compile(spec, g, h);
    EXPECT_EQ(prog.n1, 16u);
    EXPECT_EQ(prog.n2, 16u);
    EXPECT_FALSE(prog.warnings.empty());
    EXPECT_TRUE(prog.feature_tiles.complete());
    Index adjacency = 0, weights = 0;
    for (const auto& [id, pm] : prog.blocks) {
        const auto role = prog.graph.tensors[id].role;
        adjacency += role == TensorRole::Adjacency;
        weights += role == TensorRole::Weight;
        for (const auto& b : pm.blocks) EXPECT_TRUE(b.density().has_value());
    }
    EXPECT_EQ(adjacency, 1u);
    EXPECT_EQ(weights, 2u);
}

TEST(Compile, HonoursExplicitSizesAndValidatesInputs) {
    ModelSpec spec = zoo_model("gcn2", 8, 8, 4, 1.0, 1);
    const Graph g = generate_erdos_renyi(50, 0.1, 2);
    const auto h = generate_features(50, 8, 0.5, 3);
    CompileOptions o;
    o.partition_sizes = std::pair<Index, Index>{32, 16};
    EXPECT_EQ(compile(spec, g, h, o).n1, 32u);
    EXPECT_THROW(compile(spec, g, generate_features(49, 8, 0.5, 3)), ShapeError);
    EXPECT_THROW(compile(spec, g, generate_features(50, 7, 0.5, 3)), ShapeError);
    spec.weights.erase("l2.W");
    EXPECT_THROW(compile(spec, g, h), ConfigError);
}
