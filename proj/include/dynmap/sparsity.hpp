#ifndef DYNMAP_SPARSITY_HPP
#define DYNMAP_SPARSITY_HPP

// Density profiling, dense <-> COO conversion and layout transposition,
// each with the cycle cost the corresponding hardware unit would charge.

#include <algorithm>
#include <vector>

#include "dynmap/matrix.hpp"

namespace dynmap {

/// Element counts as nonzero iff it compares unequal to 0.0 (so -0.0 is zero).
template <typename Scalar>
DensityRecord profile_density(const DenseMatrix<Scalar>& m) {
    const auto v = m.values();
    const auto nnz = static_cast<Index>(std::count_if(v.begin(), v.end(), [](Scalar x) { return x != Scalar(0); }));
    return {nnz, m.size()};
}

template <typename Scalar>
DensityRecord profile_density(const CooMatrix<Scalar>& m) {
    return {m.nnz(), m.rows() * m.cols()};
}

template <typename Scalar>
DensityRecord profile_density(const MatrixRef<Scalar>& m) {
    return m.visit([](const auto& inner) { return profile_density(inner); });
}

/// Copy of `m` with its density record attached.
template <typename Scalar>
MatrixRef<Scalar> profiled(MatrixRef<Scalar> m) {
    m.set_density(profile_density(m));
    return m;
}

/// Compaction in storage order, so the output is already canonical for the input's layout.
template <typename Scalar>
CooMatrix<Scalar> dense_to_sparse(const DenseMatrix<Scalar>& m) {
    std::vector<CooEntry<Scalar>> entries;
    const bool row_major = m.layout() == Layout::RowMajor;
    const Index outer = row_major ? m.rows() : m.cols();
    const Index inner = row_major ? m.cols() : m.rows();
    for (Index a = 0; a < outer; ++a)
        for (Index b = 0; b < inner; ++b) {
            const Index i = row_major ? a : b;
            const Index j = row_major ? b : a;
            const Scalar v = m(i, j);
            if (v != Scalar(0)) entries.push_back({i, j, v});
        }
    return CooMatrix<Scalar>::from_canonical(m.rows(), m.cols(), std::move(entries), m.layout());
}

/// Raw-entry form: rejects duplicate coordinates with FormatError.
template <typename Scalar>
DenseMatrix<Scalar> sparse_to_dense(Index rows, Index cols, std::span<const CooEntry<Scalar>> entries,
                                    Layout layout = Layout::RowMajor) {
    DenseMatrix<Scalar> out(rows, cols, layout);
    std::vector<bool> seen(rows * cols, false);
    for (const auto& e : entries) {
        if (e.row >= rows || e.col >= cols) throw ShapeError("sparse_to_dense: entry out of range");
        const Index at = out.offset(e.row, e.col);
        if (seen[at])
            throw FormatError("sparse_to_dense: duplicate coordinate (" + std::to_string(e.row) + "," +
                              std::to_string(e.col) + ")");
        seen[at] = true;
        out.values()[at] = e.value;
    }
    return out;
}

template <typename Scalar>
DenseMatrix<Scalar> sparse_to_dense(const CooMatrix<Scalar>& m) {
    DenseMatrix<Scalar> out(m.rows(), m.cols(), m.layout());
    for (const auto& e : m.entries()) out(e.row, e.col) = e.value;
    return out;
}

template <typename Scalar>
DenseMatrix<Scalar> transform_layout(const DenseMatrix<Scalar>& m, Layout target) {
    if (m.layout() == target) return m;
    DenseMatrix<Scalar> out(m.rows(), m.cols(), target);
    out.view() = m.view();
    return out;
}

template <typename Scalar>
CooMatrix<Scalar> transform_layout(const CooMatrix<Scalar>& m, Layout target) {
    if (m.layout() == target) return m;
    std::vector<CooEntry<Scalar>> entries(m.entries().begin(), m.entries().end());
    std::sort(entries.begin(), entries.end(), CooMatrix<Scalar>::order_less(target));
    return CooMatrix<Scalar>::from_canonical(m.rows(), m.cols(), std::move(entries), target);
}

template <typename Scalar>
MatrixRef<Scalar> transform_layout(const MatrixRef<Scalar>& m, Layout target) {
    MatrixRef<Scalar> out = m.visit([&](const auto& inner) { return MatrixRef<Scalar>(transform_layout(inner, target)); });
    if (m.density()) out.set_density(*m.density());
    return out;
}

enum class TransformKind { D2S, S2D, LayoutFlip, Profile };

inline const char* to_string(TransformKind k) {
    switch (k) {
        case TransformKind::D2S: return "d2s";
        case TransformKind::S2D: return "s2d";
        case TransformKind::LayoutFlip: return "layout_flip";
        case TransformKind::Profile: return "profile";
    }
    return "?";
}

/// Streaming units move `lane_width` elements per cycle. The kind does not change the rate.
inline Cycles transform_cycle_cost(TransformKind /*kind*/, Index elements, Index lane_width = 16) {
    if (lane_width == 0) throw DomainError("transform_cycle_cost: lane_width must be >= 1");
    return (elements + lane_width - 1) / lane_width;
}

}  // namespace dynmap

#endif  // DYNMAP_SPARSITY_HPP
