#ifndef DYNMAP_ANALYZER_HPP
#define DYNMAP_ANALYZER_HPP

// Per-pair kernel-to-primitive mapping for one task's accumulation chain.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynmap/ir.hpp"
#include "dynmap/perf_model.hpp"

namespace dynmap {

enum class MappingStrategy { Static1, Static2, Dynamic };

const char* to_string(MappingStrategy s);
/// Accepts "s1", "s2", "dynamic" (any case) and the long names "static1"/"static2".
MappingStrategy parse_strategy(const std::string& s);

/// What the analyzer knows about one X*Y pair before it runs.
struct PairOperands {
    PairShape shape;
    std::optional<DensityRecord> left;
    std::optional<DensityRecord> right;
};

/// Decision a strategy makes for one pair given both densities.
PairDecision decide_pair(KernelType kernel, MappingStrategy strategy, double ax, double ay, const PairShape& shape,
                         Index p_sys);

/// One decision per pair, in chain order. RuntimeOrderError if any density is still unknown.
std::vector<PairDecision> analyze_task(KernelType kernel, std::span<const PairOperands> pairs,
                                       MappingStrategy strategy, const CoreConfig& cfg);

}  // namespace dynmap

#endif  // DYNMAP_ANALYZER_HPP
