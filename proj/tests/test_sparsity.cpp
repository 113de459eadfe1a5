#include <gtest/gtest.h>

#include <cmath>

#include "dynmap/sparsity.hpp"
#include "support/reference.hpp"

using namespace dynmap;

TEST(ProfileDensity, CountsNonzerosOverTotal) {
    const auto m = DenseMatrixf::from_rows({{0, 1, 0}, {2, 0, 0}});
    EXPECT_EQ(profile_density(m), (DensityRecord{2, 6}));
    EXPECT_DOUBLE_EQ(profile_density(m).density(), 1.0 / 3.0);
}

TEST(ProfileDensity, NegativeZeroIsZero) {
    const auto m = DenseMatrixf::from_rows({{-0.0f, 0.0f}});
    EXPECT_EQ(profile_density(m).nnz, 0u);
}

TEST(ProfileDensity, EmptyMatrixHasZeroDensity) {
    EXPECT_EQ(profile_density(DenseMatrixf(0, 5)).density(), 0.0);
}

TEST(ProfileDensity, FullAndZeroExtremes) {
    DenseMatrixf ones(4, 4);
    for (auto& v : ones.values()) v = 3.0f;
    EXPECT_EQ(profile_density(ones).density(), 1.0);
    EXPECT_EQ(profile_density(DenseMatrixf(4, 4)).density(), 0.0);
}

TEST(ProfileDensity, SparseAndDenseAgree) {
    Rng rng(3);
    for (int t = 0; t < 30; ++t) {
        const auto d = ref::random_dense(rng, 1 + rng.below(20), 1 + rng.below(20), rng.uniform(), false);
        EXPECT_EQ(profile_density(d), profile_density(dense_to_sparse(d)));
        EXPECT_EQ(profile_density(MatrixReff(d)), profile_density(d));
    }
}

TEST(Conversion, RoundTripBothLayouts) {
    Rng rng(4);
    for (int t = 0; t < 40; ++t) {
        const Layout l = t % 2 ? Layout::ColMajor : Layout::RowMajor;
        const auto d = ref::random_dense(rng, 1 + rng.below(30), 1 + rng.below(30), rng.uniform(), false, l);
        const auto s = dense_to_sparse(d);
        EXPECT_EQ(s.layout(), l);
        EXPECT_TRUE(sparse_to_dense(s) == d);
    }
}

TEST(Conversion, SparseToDenseRejectsDuplicates) {
    const std::vector<CooEntry<float>> e{{0, 0, 1.0f}, {0, 0, 2.0f}};
    EXPECT_THROW(sparse_to_dense<float>(2, 2, e), FormatError);
    const std::vector<CooEntry<float>> out{{2, 0, 1.0f}};
    EXPECT_THROW(sparse_to_dense<float>(2, 2, out), ShapeError);
}

TEST(Conversion, D2SOutputIsCanonical) {
    const auto d = DenseMatrixf::from_rows({{0, 5}, {7, 0}});
    const auto s = dense_to_sparse(d);
    ASSERT_EQ(s.nnz(), 2u);
    EXPECT_NO_THROW(CooMatrixf::from_canonical(2, 2, {s.entries().begin(), s.entries().end()}));
}

TEST(Layout, FlipPreservesElements) {
    Rng rng(9);
    const auto d = ref::random_dense(rng, 7, 11, 0.4, false);
    const auto f = transform_layout(d, Layout::ColMajor);
    EXPECT_EQ(f.layout(), Layout::ColMajor);
    EXPECT_TRUE(same_elements(d, f));
    EXPECT_TRUE(transform_layout(f, Layout::RowMajor) == d);

    const auto s = dense_to_sparse(d);
    const auto sf = transform_layout(s, Layout::ColMajor);
    EXPECT_TRUE(sparse_to_dense(sf) == f);
    EXPECT_TRUE(transform_layout(sf, Layout::RowMajor) == s);
}

TEST(Layout, MatrixRefFlipKeepsDensity) {
    MatrixReff m = profiled(MatrixReff(DenseMatrixf::identity(3)));
    const auto f = transform_layout(m, Layout::ColMajor);
    ASSERT_TRUE(f.density().has_value());
    EXPECT_EQ(*f.density(), (DensityRecord{3, 9}));
}

TEST(TransformCost, LaneWidthRounding) {
    EXPECT_EQ(transform_cycle_cost(TransformKind::D2S, 16), 1u);
    EXPECT_EQ(transform_cycle_cost(TransformKind::D2S, 33), 3u);
    EXPECT_EQ(transform_cycle_cost(TransformKind::D2S, 0), 0u);
    for (auto k : {TransformKind::S2D, TransformKind::LayoutFlip, TransformKind::Profile})
        EXPECT_EQ(transform_cycle_cost(k, 100), 7u);
    EXPECT_EQ(transform_cycle_cost(TransformKind::D2S, 100, 32), 4u);
    EXPECT_THROW(transform_cycle_cost(TransformKind::D2S, 1, 0), DomainError);
}

TEST(TransformCost, MatchesCeilFormula) {
    for (Index n = 0; n < 200; ++n)
        EXPECT_EQ(transform_cycle_cost(TransformKind::Profile, n), static_cast<Cycles>(std::ceil(n / 16.0)));
}
