#include "dynmap/analyzer.hpp"

#include <algorithm>
#include <cctype>

namespace dynmap {

const char* to_string(MappingStrategy s) {
    switch (s) {
        case MappingStrategy::Static1: return "s1";
        case MappingStrategy::Static2: return "s2";
        case MappingStrategy::Dynamic: return "dynamic";
    }
    return "?";
}

MappingStrategy parse_strategy(const std::string& s) {
    std::string v = s;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "s1" || v == "static1") return MappingStrategy::Static1;
    if (v == "s2" || v == "static2") return MappingStrategy::Static2;
    if (v == "dynamic" || v == "dyn") return MappingStrategy::Dynamic;
    throw ConfigError("unknown strategy '" + s + "' (expected s1, s2 or dynamic)");
}

PairDecision decide_pair(KernelType kernel, MappingStrategy strategy, double ax, double ay, const PairShape& shape,
                         Index p_sys) {
    if (kernel == KernelType::ElementwiseAdd) throw std::logic_error("elementwise kernels have no pairs");
    if (strategy == MappingStrategy::Dynamic) return select_primitive(ax, ay, p_sys, shape);

    // Both static baselines hold the left operand sparse whenever they use SpDMM:
    // A for Aggregate, H for Update.
    const bool gemm = strategy == MappingStrategy::Static1 && kernel == KernelType::Update;
    if (gemm) return {PairChoice::GEMM, SparseOperand::None, predict_cycles(PrimitiveKind::GEMM, shape, ax, ay, p_sys)};
    return {PairChoice::SpDMM, SparseOperand::Left, predict_spdmm_forced(shape, ax, p_sys)};
}

std::vector<PairDecision> analyze_task(KernelType kernel, std::span<const PairOperands> pairs,
                                       MappingStrategy strategy, const CoreConfig& cfg) {
    std::vector<PairDecision> out;
    out.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& p = pairs[k];
        if (!p.left || !p.right)
            throw RuntimeOrderError("pair " + std::to_string(k) + " of a " + to_string(kernel) +
                                    " task has an operand whose density has not been profiled");
        out.push_back(decide_pair(kernel, strategy, p.left->density(), p.right->density(), p.shape, cfg.p_sys));
    }
    return out;
}

}  // namespace dynmap
