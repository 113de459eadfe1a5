#ifndef DYNMAP_PERF_MODEL_HPP
#define DYNMAP_PERF_MODEL_HPP

// Closed-form execution-time model of the three primitives and the
// density-driven selector built on it.

#include <array>
#include <string>
#include <vector>

#include "dynmap/primitives.hpp"

namespace dynmap {

enum class PairChoice { GEMM, SpDMM, SPMM, Skip };

inline const char* to_string(PairChoice c) {
    switch (c) {
        case PairChoice::GEMM: return "GEMM";
        case PairChoice::SpDMM: return "SpDMM";
        case PairChoice::SPMM: return "SPMM";
        case PairChoice::Skip: return "Skip";
    }
    return "?";
}

inline PairChoice to_choice(PrimitiveKind k) { return static_cast<PairChoice>(static_cast<int>(k)); }
inline PrimitiveKind to_primitive(PairChoice c) {
    if (c == PairChoice::Skip) throw std::logic_error("Skip has no primitive");
    return static_cast<PrimitiveKind>(static_cast<int>(c));
}

/// Which operand is held in COO form for the chosen mode.
enum class SparseOperand { None, Left, Right, Both };

inline const char* to_string(SparseOperand s) {
    switch (s) {
        case SparseOperand::None: return "none";
        case SparseOperand::Left: return "left";
        case SparseOperand::Right: return "right";
        case SparseOperand::Both: return "both";
    }
    return "?";
}

/// Z(m x d) = X(m x n) * Y(n x d).
struct PairShape {
    Index m = 0;
    Index n = 0;
    Index d = 0;
    bool operator==(const PairShape&) const = default;
};

struct PairDecision {
    PairChoice choice = PairChoice::Skip;
    SparseOperand sparse_operand = SparseOperand::None;
    Cycles predicted_cycles = 0;
    bool operator==(const PairDecision&) const = default;
};

/// ceil() that forgives floating-point noise just above an integer.
Cycles ceil_cycles(double x);

/// GEMM: mnd/p^2; SpDMM: min(ax,ay)*2mnd/p^2; SPMM: ax*ay*mnd/p (each rounded up).
Cycles predict_cycles(PrimitiveKind kind, const PairShape& shape, double ax, double ay, Index p_sys);

/// SpDMM cost when the sparse side is fixed in advance (static strategies).
Cycles predict_spdmm_forced(const PairShape& shape, double sparse_density, Index p_sys);

/// Density-only region test: Skip if min == 0; GEMM if min >= 1/2; SpDMM if max >= 2/p; else SPMM.
PairChoice classify_region(double ax, double ay, Index p_sys);

/// classify_region plus the sparse-operand tag and the predicted cycles for `shape`.
PairDecision select_primitive(double ax, double ay, Index p_sys, const PairShape& shape);

struct RegionReport {
    Index p_sys = 0;
    Index grid_steps = 0;
    Index points = 0;
    Index skip_points = 0;
    std::array<Index, 3> region_points{};  // GEMM, SpDMM, SPMM
    std::vector<std::string> violations;
};

/// Enumerates 0 <= a_min <= a_max <= 1 on a grid of `grid_steps` intervals and checks that exactly
/// one region claims each point and that the selector's choice attains the minimum predicted cycles.
/// Throws ModelInconsistencyError on any violation unless `throw_on_violation` is false.
RegionReport region_partition_check(Index p_sys, Index grid_steps = 100, PairShape shape = {256, 256, 256},
                                    bool throw_on_violation = true);

}  // namespace dynmap

#endif  // DYNMAP_PERF_MODEL_HPP
