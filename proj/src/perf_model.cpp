#include "dynmap/perf_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dynmap {

namespace {

void check_density(double a, const char* name) {
    if (!(a >= 0.0 && a <= 1.0)) {
        std::ostringstream os;
        os << "density " << name << " = " << a << " outside [0,1]";
        throw DomainError(os.str());
    }
}

double volume(const PairShape& s) {
    return static_cast<double>(s.m) * static_cast<double>(s.n) * static_cast<double>(s.d);
}

void check_shape(const PairShape& s) {
    if (s.m == 0 || s.n == 0 || s.d == 0) throw DomainError("predict_cycles: dimensions must be >= 1");
}

}  // namespace

Cycles ceil_cycles(double x) {
    if (x <= 0.0) return 0;
    const double r = std::nearbyint(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, x)) return static_cast<Cycles>(r);
    return static_cast<Cycles>(std::ceil(x));
}

Cycles predict_cycles(PrimitiveKind kind, const PairShape& shape, double ax, double ay, Index p_sys) {
    check_density(ax, "alpha_x");
    check_density(ay, "alpha_y");
    check_shape(shape);
    const double p = static_cast<double>(p_sys);
    switch (kind) {
        case PrimitiveKind::GEMM:
            return ceil_div(static_cast<std::uint64_t>(shape.m) * shape.n * shape.d,
                            static_cast<std::uint64_t>(p_sys) * p_sys);
        case PrimitiveKind::SpDMM:
            return ceil_cycles(std::min(ax, ay) * 2.0 * volume(shape) / (p * p));
        case PrimitiveKind::SPMM:
            return ceil_cycles(ax * ay * volume(shape) / p);
    }
    return 0;
}

Cycles predict_spdmm_forced(const PairShape& shape, double sparse_density, Index p_sys) {
    check_density(sparse_density, "alpha_sparse");
    check_shape(shape);
    const double p = static_cast<double>(p_sys);
    return ceil_cycles(sparse_density * 2.0 * volume(shape) / (p * p));
}

PairChoice classify_region(double ax, double ay, Index p_sys) {
    check_density(ax, "alpha_x");
    check_density(ay, "alpha_y");
    const double lo = std::min(ax, ay);
    const double hi = std::max(ax, ay);
    if (lo == 0.0) return PairChoice::Skip;
    if (lo >= 0.5) return PairChoice::GEMM;
    if (hi >= 2.0 / static_cast<double>(p_sys)) return PairChoice::SpDMM;
    return PairChoice::SPMM;
}

PairDecision select_primitive(double ax, double ay, Index p_sys, const PairShape& shape) {
    PairDecision d;
    d.choice = classify_region(ax, ay, p_sys);
    switch (d.choice) {
        case PairChoice::Skip:
            d.sparse_operand = SparseOperand::None;
            d.predicted_cycles = 0;
            return d;
        case PairChoice::GEMM: d.sparse_operand = SparseOperand::None; break;
        case PairChoice::SpDMM: d.sparse_operand = ay < ax ? SparseOperand::Right : SparseOperand::Left; break;
        case PairChoice::SPMM: d.sparse_operand = SparseOperand::Both; break;
    }
    d.predicted_cycles = predict_cycles(to_primitive(d.choice), shape, ax, ay, p_sys);
    return d;
}

RegionReport region_partition_check(Index p_sys, Index grid_steps, PairShape shape, bool throw_on_violation) {
    if (p_sys < 8) throw ConfigError("region_partition_check: p_sys must be >= 8");
    if (grid_steps == 0) throw ConfigError("region_partition_check: grid_steps must be >= 1");
    RegionReport report;
    report.p_sys = p_sys;
    report.grid_steps = grid_steps;
    const double steps = static_cast<double>(grid_steps);
    const double threshold = 2.0 / static_cast<double>(p_sys);

    auto fail = [&](double lo, double hi, const std::string& what) {
        std::ostringstream os;
        os << "(" << lo << ", " << hi << "): " << what;
        report.violations.push_back(os.str());
    };

    for (Index i = 0; i <= grid_steps; ++i) {
        for (Index j = i; j <= grid_steps; ++j) {
            const double lo = static_cast<double>(i) / steps;
            const double hi = static_cast<double>(j) / steps;
            ++report.points;

            // Region predicates evaluated independently of the selector.
            const bool in_gemm = lo >= 0.5;
            const bool in_spdmm = lo < 0.5 && hi >= threshold;
            const bool in_spmm = lo < 0.5 && hi < threshold;
            const int claims = int(in_gemm) + int(in_spdmm) + int(in_spmm);
            if (claims != 1) fail(lo, hi, std::to_string(claims) + " regions claim this point");
            const PairChoice region = in_gemm ? PairChoice::GEMM : in_spdmm ? PairChoice::SpDMM : PairChoice::SPMM;
            if (claims == 1) ++report.region_points[static_cast<int>(region)];

            const std::array<Cycles, 3> cost = {
                predict_cycles(PrimitiveKind::GEMM, shape, lo, hi, p_sys),
                predict_cycles(PrimitiveKind::SpDMM, shape, lo, hi, p_sys),
                predict_cycles(PrimitiveKind::SPMM, shape, lo, hi, p_sys),
            };
            const Cycles best = *std::min_element(cost.begin(), cost.end());

            const PairDecision pick = select_primitive(lo, hi, p_sys, shape);
            const PairDecision swapped = select_primitive(hi, lo, p_sys, shape);
            if (pick.choice != swapped.choice || pick.predicted_cycles != swapped.predicted_cycles)
                fail(lo, hi, "selector is not symmetric in its operands");

            if (pick.choice == PairChoice::Skip) {
                ++report.skip_points;
                if (lo != 0.0) fail(lo, hi, "Skip chosen with nonzero min density");
                if (best != 0) fail(lo, hi, "Skip chosen but cheapest primitive costs cycles");
                continue;
            }
            if (pick.choice != region) fail(lo, hi, std::string("selector chose ") + to_string(pick.choice) +
                                                        " outside its region " + to_string(region));
            if (pick.predicted_cycles != best)
                fail(lo, hi, std::string(to_string(pick.choice)) + " costs " + std::to_string(pick.predicted_cycles) +
                                 " but minimum is " + std::to_string(best));
        }
    }
    if (throw_on_violation && !report.violations.empty())
        throw ModelInconsistencyError("region check p_sys=" + std::to_string(p_sys) + ": " +
                                      std::to_string(report.violations.size()) + " violations, first " +
                                      report.violations.front());
    return report;
}

}  // namespace dynmap
