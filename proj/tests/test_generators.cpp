#include <gtest/gtest.h>

#include <cmath>

#include "dynmap/generators.hpp"
#include "dynmap/sparsity.hpp"

using namespace dynmap;

namespace {

bool symmetric_without_loops(const Graph& g) {
    for (const auto& e : g.adjacency.entries()) {
        if (e.row == e.col) return false;
        const auto es = g.adjacency.entries();
        const bool mirrored = std::binary_search(es.begin(), es.end(), CooEntry<float>{e.col, e.row, e.value},
                                                 CooMatrixf::order_less(Layout::RowMajor));
        if (!mirrored) return false;
    }
    return true;
}

}  // namespace

TEST(Rng, DeterministicAndInRange) {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        EXPECT_EQ(u, b.uniform());
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        EXPECT_LT(a.below(7), 7u);
        b.below(7);
    }
}

TEST(ErdosRenyi, CoraScaleDensityWithinFivePercent) {
    // Cora: 2708 vertices, adjacency density 0.14%.
    const Graph g = generate_erdos_renyi(2708, 0.0014, 1);
    const double d = profile_density(g.adjacency).density();
    EXPECT_NEAR(d, 0.0014, 0.0014 * 0.05);
    EXPECT_TRUE(symmetric_without_loops(g));
}

TEST(ErdosRenyi, ZeroDensityIsEmptyAndSeedsDiffer) {
    EXPECT_EQ(generate_erdos_renyi(100, 0.0, 1).num_edges(), 0u);
    EXPECT_TRUE(generate_erdos_renyi(100, 0.1, 1).adjacency == generate_erdos_renyi(100, 0.1, 1).adjacency);
    EXPECT_FALSE(generate_erdos_renyi(100, 0.1, 1).adjacency == generate_erdos_renyi(100, 0.1, 2).adjacency);
}

TEST(ErdosRenyi, DenseRequestsUseComplement) {
    const Graph g = generate_erdos_renyi(40, 0.9, 3);
    EXPECT_EQ(g.num_edges(), 2u * static_cast<Index>(std::llround(0.9 * 40 * 40 / 2)));
    EXPECT_TRUE(symmetric_without_loops(g));
    EXPECT_THROW(generate_erdos_renyi(10, 1.0, 1), ConfigError);  // no room without self loops
}

TEST(PowerLaw, MeetsEdgeBudgetWithSkewedDegrees) {
    const Graph g = generate_power_law(1000, 0.01, 5);
    EXPECT_NEAR(profile_density(g.adjacency).density(), 0.01, 0.01 * 0.05);
    EXPECT_TRUE(symmetric_without_loops(g));
    std::vector<Index> deg(1000, 0);
    for (const auto& e : g.adjacency.entries()) ++deg[e.row];
    Index head = 0, tail = 0;
    for (Index i = 0; i < 100; ++i) head += deg[i];
    for (Index i = 900; i < 1000; ++i) tail += deg[i];
    EXPECT_GT(head, 2 * tail);
}

TEST(BlockDiagonal, NoEdgesAcrossCommunities) {
    const Graph g = generate_block_diagonal(120, 4, 0.3, 9);
    EXPECT_GT(g.num_edges(), 0u);
    for (const auto& e : g.adjacency.entries()) EXPECT_EQ(e.row / 30, e.col / 30);
}

TEST(Features, ExactCountAndPositiveValues) {
    const auto f = generate_features(50, 40, 0.3, 7);
    EXPECT_EQ(profile_density(f).nnz, 600u);
    for (float v : f.values()) {
        EXPECT_GE(v, 0.0f);
        EXPECT_LE(v, 1.0f);
    }
    EXPECT_TRUE(f == generate_features(50, 40, 0.3, 7));
}

TEST(Weights, ScaledUniform) {
    const auto w = generate_weights(64, 32, 3);
    for (float v : w.values()) EXPECT_LE(std::abs(v), 1.0f / 8.0f);
    EXPECT_EQ(profile_density(w).density(), 1.0);
}

TEST(Prune, KeepsLargestMagnitudes) {
    const auto w = DenseMatrixf::from_rows({{0.1f, -0.9f}, {0.5f, -0.2f}});
    const auto p = prune_magnitude(w, 0.5);
    EXPECT_TRUE(p == DenseMatrixf::from_rows({{0.0f, -0.9f}, {0.5f, 0.0f}}));
    EXPECT_THROW(prune_magnitude(w, 1.5), ConfigError);
}

TEST(Prune, DensityBoundAfterReprofiling) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto w = generate_weights(17, 13, seed);
        for (double d : {1.0, 0.5, 0.3, 0.1, 0.05, 0.0}) {
            const auto p = prune_magnitude(w, d);
            EXPECT_LE(profile_density(p).density(), d + 1.0 / static_cast<double>(w.size()));
        }
    }
}
