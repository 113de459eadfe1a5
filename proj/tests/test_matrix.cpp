#include <gtest/gtest.h>

#include "dynmap/compiler.hpp"
#include "support/reference.hpp"

using namespace dynmap;

namespace {

DenseMatrixf mat(std::initializer_list<std::initializer_list<float>> rows) { return DenseMatrixf::from_rows(rows); }

}  // namespace

TEST(DenseMatrix, StorageOffsetsFollowLayout) {
    DenseMatrixf rm(2, 3, Layout::RowMajor), cm(2, 3, Layout::ColMajor);
    EXPECT_EQ(rm.offset(1, 2), 1u * 3 + 2);
    EXPECT_EQ(cm.offset(1, 2), 2u * 2 + 1);
    EXPECT_EQ(rm.size(), 6u);
    EXPECT_THROW((void)rm.at(2, 0), ShapeError);
}

TEST(DenseMatrix, ViewIndexesLogicallyInBothLayouts) {
    const DenseMatrixf a = mat({{1, 2, 3}, {4, 5, 6}});
    const DenseMatrixf b = transform_layout(a, Layout::ColMajor);
    EXPECT_EQ(b(1, 2), 6.0f);
    EXPECT_EQ(b.values()[1], 4.0f);
    EXPECT_TRUE(same_elements(a, b));
    EXPECT_FALSE(a == b);
}

TEST(Oracle, IdentityTimesMatrix) {
    const DenseMatrixf m = mat({{1, 2}, {3, 4}});
    EXPECT_TRUE(same_elements(dense_matmul_oracle(DenseMatrixf::identity(2), m), m));
}

TEST(Oracle, HandComputedProduct) {
    const DenseMatrixf z = dense_matmul_oracle(mat({{0, 2}, {0, 0}}), mat({{1, 1}, {3, 4}}));
    EXPECT_TRUE(same_elements(z, mat({{6, 8}, {0, 0}})));
    EXPECT_EQ(z.layout(), Layout::RowMajor);
}

TEST(Oracle, ZeroAnnihilates) {
    DenseMatrixf ones(3, 3);
    for (auto& v : ones.values()) v = 1.0f;
    const DenseMatrixf z = dense_matmul_oracle(DenseMatrixf(2, 3), ones);
    for (float v : z.values()) EXPECT_EQ(v, 0.0f);
}

TEST(Oracle, ShapeMismatchThrows) {
    EXPECT_THROW(dense_matmul_oracle(DenseMatrixf(2, 3), DenseMatrixf(2, 3)), ShapeError);
}

TEST(Oracle, BitDeterministic) {
    Rng rng(7);
    const auto a = ref::random_dense(rng, 17, 23, 0.7, false);
    const auto b = ref::random_dense(rng, 23, 9, 0.7, false);
    EXPECT_TRUE(dense_matmul_oracle(a, b) == dense_matmul_oracle(a, b));
}

TEST(CooMatrix, CanonicalizesOnConstruction) {
    const CooMatrixf m(3, 3, {{2, 0, 1.0f}, {0, 1, 2.0f}, {0, 1, 3.0f}, {1, 1, 0.0f}, {1, 2, 4.0f}, {1, 2, -4.0f}});
    ASSERT_EQ(m.nnz(), 2u);
    EXPECT_EQ(m.entries()[0], (CooEntry<float>{0, 1, 5.0f}));
    EXPECT_EQ(m.entries()[1], (CooEntry<float>{2, 0, 1.0f}));
}

TEST(CooMatrix, ColMajorOrdersByColumnFirst) {
    const CooMatrixf m(2, 2, {{0, 1, 1.0f}, {1, 0, 2.0f}}, Layout::ColMajor);
    EXPECT_EQ(m.entries()[0].col, 0u);
    EXPECT_EQ(m.entries()[1].col, 1u);
}

TEST(CooMatrix, RejectsOutOfRangeAndNonCanonical) {
    EXPECT_THROW(CooMatrixf(2, 2, {{2, 0, 1.0f}}), ShapeError);
    EXPECT_THROW(CooMatrixf::from_canonical(2, 2, {{0, 0, 1.0f}, {0, 0, 2.0f}}), FormatError);
    EXPECT_THROW(CooMatrixf::from_canonical(2, 2, {{1, 0, 1.0f}, {0, 0, 2.0f}}), FormatError);
    EXPECT_THROW(CooMatrixf::from_canonical(2, 2, {{0, 0, 0.0f}}), FormatError);
}

TEST(SliceBlock, FullRangeIsIdentity) {
    const DenseMatrixf m = mat({{1, 2}, {3, 4}});
    EXPECT_TRUE(slice_block(m, {0, 2}, {0, 2}) == m);
    const CooMatrixf c = CooMatrixf::identity(3);
    EXPECT_TRUE(slice_block(c, {0, 3}, {0, 3}) == c);
}

TEST(SliceBlock, OffDiagonalOfIdentityIsZero) {
    const auto b = slice_block(MatrixReff(CooMatrixf::identity(4)), {0, 2}, {2, 4});
    EXPECT_EQ(b.sparse().nnz(), 0u);
    const auto d = slice_block(DenseMatrixf::identity(4), {0, 2}, {2, 4});
    for (float v : d.values()) EXPECT_EQ(v, 0.0f);
}

TEST(SliceBlock, DiagonalBlockOfIdentityIsIdentity) {
    EXPECT_TRUE(slice_block(CooMatrixf::identity(4), {2, 4}, {2, 4}) == CooMatrixf::identity(2));
    EXPECT_TRUE(same_elements(slice_block(DenseMatrixf::identity(4), {2, 4}, {2, 4}), DenseMatrixf::identity(2)));
}

TEST(SliceBlock, OutOfRangeThrows) {
    EXPECT_THROW(slice_block(DenseMatrixf(3, 3), {0, 4}, {0, 1}), ShapeError);
    EXPECT_THROW(slice_block(CooMatrixf(3, 3), {2, 1}, {0, 1}), ShapeError);
}

TEST(SliceBlock, ReassemblyReproducesMatrixForBothFormats) {
    Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const Index r = 1 + rng.below(37), c = 1 + rng.below(37);
        const Index br = 1 + rng.below(9), bc = 1 + rng.below(9);
        const DenseMatrixf d = ref::random_dense(rng, r, c, rng.uniform(), false);
        for (const MatrixReff& m : {MatrixReff(d), MatrixReff(dense_to_sparse(d))}) {
            const auto back = reassemble(partition(m, br, bc));
            if (m.is_sparse())
                EXPECT_TRUE(back.sparse() == m.sparse());
            else
                EXPECT_TRUE(back.dense() == m.dense());
        }
    }
}

TEST(Activation, ReluSignCases) {
    EXPECT_TRUE(same_elements(elementwise_activation(mat({{-1, 2}, {0, -3}}), ActivationKind::ReLU),
                              mat({{0, 2}, {0, 0}})));
}

TEST(Activation, ReluFixpointOnNonnegative) {
    const DenseMatrixf m = mat({{0, 1}, {2, 3}});
    EXPECT_TRUE(elementwise_activation(m, ActivationKind::ReLU) == m);
}

TEST(Activation, PreluDefinition) {
    const DenseMatrixf r = elementwise_activation(mat({{-10}}), ActivationKind::PReLU, 0.1f);
    EXPECT_FLOAT_EQ(r(0, 0), -1.0f);
}

TEST(Activation, PreservesLayoutAndDisabledIsNoOp) {
    const DenseMatrixf cm = transform_layout(mat({{-1, 2}}), Layout::ColMajor);
    EXPECT_EQ(elementwise_activation(cm, ActivationKind::ReLU).layout(), Layout::ColMajor);
    EXPECT_TRUE(elementwise_activation(cm, Activation{}) == cm);
}

TEST(Activation, ReluNeverIncreasesDensity) {
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        const auto m = ref::random_dense(rng, 13, 7, rng.uniform(), false);
        EXPECT_LE(profile_density(elementwise_activation(m, ActivationKind::ReLU)).nnz, profile_density(m).nnz);
    }
}

TEST(RelativeError, NormWise) {
    const DenseMatrixf a = mat({{1, 2}}), b = mat({{1, 4}});
    EXPECT_DOUBLE_EQ(relative_error(a, b), 0.5);
    EXPECT_DOUBLE_EQ(relative_error(mat({{0.5f}}), mat({{0.25f}})), 0.25);
    EXPECT_THROW(relative_error(a, mat({{1}})), ShapeError);
}
