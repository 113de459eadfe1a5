#ifndef DYNMAP_PRIMITIVES_HPP
#define DYNMAP_PRIMITIVES_HPP

// Functional models of the three execution modes of a computation core.
// Each computes acc + X*Y and charges cycles at the mode's MAC throughput:
//   GEMM   p^2   MACs/cycle, every element
//   SpDMM  p^2/2 MACs/cycle, nonzeros of the sparse operand only
//   SPMM   p     MACs/cycle, nonzero x nonzero pairs only

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dynmap/matrix.hpp"

namespace dynmap {

enum class PrimitiveKind { GEMM, SpDMM, SPMM };

inline const char* to_string(PrimitiveKind k) {
    switch (k) {
        case PrimitiveKind::GEMM: return "GEMM";
        case PrimitiveKind::SpDMM: return "SpDMM";
        case PrimitiveKind::SPMM: return "SPMM";
    }
    return "?";
}

struct CoreConfig {
    Index p_sys = 16;       // ALU array is p_sys x p_sys
    Index lane_width = 16;  // elements per cycle through the transform units

    void validate() const {
        if (p_sys < 8) throw ConfigError("p_sys must be >= 8, got " + std::to_string(p_sys));
        if (lane_width < 1) throw ConfigError("lane_width must be >= 1");
    }
};

template <typename Scalar>
struct ExecResult {
    DenseMatrix<Scalar> output;
    Cycles compute_cycles = 0;
    std::uint64_t macs_executed = 0;
};

inline Cycles ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

/// Output-stationary systolic tiling: every p x p x p tile takes p cycles.
inline Cycles gemm_cycles(Index m, Index n, Index d, Index p) {
    return ceil_div(m, p) * ceil_div(n, p) * ceil_div(d, p) * p;
}

/// Each nonzero of the sparse operand multiplies a length-`dense_extent` vector at p^2/2 MACs/cycle.
inline Cycles spdmm_cycles(Index sparse_nnz, Index dense_extent, Index p) {
    return ceil_div(2ull * sparse_nnz * dense_extent, static_cast<std::uint64_t>(p) * p);
}

inline Cycles spmm_cycles(std::uint64_t pairs, Index p) { return ceil_div(pairs, p); }

/// Changing execution mode costs one cycle.
constexpr Cycles mode_switch_cost() { return 1; }

/// Switch cycles for a core running `sequence` back to back.
inline Cycles mode_switch_cycles(std::span<const PrimitiveKind> sequence) {
    Cycles total = 0;
    for (std::size_t k = 1; k < sequence.size(); ++k)
        if (sequence[k] != sequence[k - 1]) total += mode_switch_cost();
    return total;
}

namespace detail {
template <typename Scalar>
void check_product(Index xr, Index xc, Index yr, Index yc, const DenseMatrix<Scalar>& acc, const char* who) {
    if (xc != yr || acc.rows() != xr || acc.cols() != yc)
        throw ShapeError(std::string(who) + ": " + std::to_string(xr) + "x" + std::to_string(xc) + " * " +
                         std::to_string(yr) + "x" + std::to_string(yc) + " into " + std::to_string(acc.rows()) +
                         "x" + std::to_string(acc.cols()));
    if (acc.layout() != Layout::RowMajor) throw FormatError(std::string(who) + ": result buffer must be row-major");
}

inline void require_layout(Layout have, Layout want, const char* who, const char* operand) {
    if (have != want)
        throw FormatError(std::string(who) + ": operand " + operand + " must be " + to_string(want));
}
}  // namespace detail

/// X dense row-major, Y dense column-major.
template <typename Scalar>
ExecResult<Scalar> exec_gemm(const DenseMatrix<Scalar>& x, const DenseMatrix<Scalar>& y, DenseMatrix<Scalar> acc,
                             const CoreConfig& cfg) {
    detail::check_product(x.rows(), x.cols(), y.rows(), y.cols(), acc, "exec_gemm");
    detail::require_layout(x.layout(), Layout::RowMajor, "exec_gemm", "X");
    detail::require_layout(y.layout(), Layout::ColMajor, "exec_gemm", "Y");
    if (x.size() != 0 && y.size() != 0) acc.view().noalias() += x.view() * y.view();
    const Index m = x.rows(), n = x.cols(), d = y.cols();
    return {std::move(acc), m * n * d == 0 ? 0 : gemm_cycles(m, n, d, cfg.p_sys),
            static_cast<std::uint64_t>(m) * n * d};
}

/// Scatter-gather with the left operand sparse: each nonzero X(r,c) adds X(r,c)*Y[c] into Z[r].
template <typename Scalar>
ExecResult<Scalar> exec_spdmm(const CooMatrix<Scalar>& x, const DenseMatrix<Scalar>& y, DenseMatrix<Scalar> acc,
                              const CoreConfig& cfg) {
    detail::check_product(x.rows(), x.cols(), y.rows(), y.cols(), acc, "exec_spdmm");
    detail::require_layout(y.layout(), Layout::RowMajor, "exec_spdmm", "Y");
    const Index d = y.cols();
    const auto yv = y.values();
    auto zv = acc.values();
    for (const auto& e : x.entries()) {
        const Scalar* src = yv.data() + e.col * d;
        Scalar* dst = zv.data() + e.row * d;
        for (Index k = 0; k < d; ++k) dst[k] += e.value * src[k];
    }
    return {std::move(acc), spdmm_cycles(x.nnz(), d, cfg.p_sys), static_cast<std::uint64_t>(x.nnz()) * d};
}

/// Scatter-gather with the right operand sparse: each nonzero Y(k,j) adds X[:,k]*Y(k,j) into Z[:,j].
template <typename Scalar>
ExecResult<Scalar> exec_spdmm(const DenseMatrix<Scalar>& x, const CooMatrix<Scalar>& y, DenseMatrix<Scalar> acc,
                              const CoreConfig& cfg) {
    detail::check_product(x.rows(), x.cols(), y.rows(), y.cols(), acc, "exec_spdmm");
    detail::require_layout(x.layout(), Layout::RowMajor, "exec_spdmm", "X");
    const Index m = x.rows(), n = x.cols(), d = y.cols();
    const auto xv = x.values();
    auto zv = acc.values();
    for (Index i = 0; i < m; ++i) {
        const Scalar* xrow = xv.data() + i * n;
        Scalar* zrow = zv.data() + i * d;
        for (const auto& e : y.entries()) zrow[e.col] += xrow[e.row] * e.value;
    }
    return {std::move(acc), spdmm_cycles(y.nnz(), m, cfg.p_sys), static_cast<std::uint64_t>(y.nnz()) * m};
}

/// Row-wise product: Z[j] += sum_i X[j][i] * Y[i], touching only nonzeros of both operands.
template <typename Scalar>
ExecResult<Scalar> exec_spmm(const CooMatrix<Scalar>& x, const CooMatrix<Scalar>& y, DenseMatrix<Scalar> acc,
                             const CoreConfig& cfg) {
    detail::check_product(x.rows(), x.cols(), y.rows(), y.cols(), acc, "exec_spmm");
    detail::require_layout(x.layout(), Layout::RowMajor, "exec_spmm", "X");
    detail::require_layout(y.layout(), Layout::RowMajor, "exec_spmm", "Y");
    // Row extents of Y inside its sorted entry list.
    std::vector<Index> row_start(y.rows() + 1, 0);
    for (const auto& e : y.entries()) ++row_start[e.row + 1];
    for (Index r = 0; r < y.rows(); ++r) row_start[r + 1] += row_start[r];

    const auto ye = y.entries();
    const Index d = y.cols();
    auto zv = acc.values();
    std::uint64_t pairs = 0;
    for (const auto& e : x.entries()) {
        Scalar* zrow = zv.data() + e.row * d;
        for (Index k = row_start[e.col]; k < row_start[e.col + 1]; ++k) zrow[ye[k].col] += e.value * ye[k].value;
        pairs += row_start[e.col + 1] - row_start[e.col];
    }
    return {std::move(acc), spmm_cycles(pairs, cfg.p_sys), pairs};
}

}  // namespace dynmap

#endif  // DYNMAP_PRIMITIVES_HPP
