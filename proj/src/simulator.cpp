#include "dynmap/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace dynmap {

void SimConfig::validate() const {
    core.validate();
    if (n_cores == 0) throw ConfigError("need at least one computation core");
    if (!(bytes_per_cycle > 0.0)) throw ConfigError("bytes_per_cycle must be positive");
}

std::vector<double> SimReport::core_utilization() const {
    std::vector<double> out;
    for (Cycles b : core_busy) out.push_back(makespan == 0 ? 0.0 : static_cast<double>(b) / static_cast<double>(makespan));
    return out;
}

DecisionHistogram SimReport::histogram() const {
    DecisionHistogram h{};
    for (const auto& k : kernels)
        for (std::size_t i = 0; i < h.size(); ++i) h[i] += k.histogram[i];
    return h;
}

namespace {
template <typename F>
auto sum_over(const std::vector<KernelStats>& ks, F field) {
    std::uint64_t total = 0;
    for (const auto& k : ks) total += field(k);
    return total;
}
}  // namespace

Cycles SimReport::compute_cycles() const { return sum_over(kernels, [](const auto& k) { return k.compute_cycles; }); }
Cycles SimReport::predicted_cycles() const { return sum_over(kernels, [](const auto& k) { return k.predicted_cycles; }); }
Cycles SimReport::switch_cycles() const { return sum_over(kernels, [](const auto& k) { return k.switch_cycles; }); }
Cycles SimReport::elementwise_cycles() const {
    return sum_over(kernels, [](const auto& k) { return k.elementwise_cycles; });
}
Cycles SimReport::transform_cycles() const { return sum_over(kernels, [](const auto& k) { return k.transform_cycles; }); }
Cycles SimReport::transfer_cycles() const { return sum_over(kernels, [](const auto& k) { return k.transfer_cycles; }); }
std::uint64_t SimReport::decisions() const { return sum_over(kernels, [](const auto& k) { return k.decisions; }); }

namespace {

// One operand block in its stored form, with the other forms derived on first use.
struct Operand {
    MatrixReff stored;
    std::optional<DensityRecord> density;
    std::optional<DenseMatrixf> row_major;
    std::optional<DenseMatrixf> col_major;
    std::optional<CooMatrixf> coo;

    Index elements() const { return stored.rows() * stored.cols(); }

    const DenseMatrixf& dense_rm() {
        if (!row_major)
            row_major = stored.is_sparse() ? transform_layout(sparse_to_dense(stored.sparse()), Layout::RowMajor)
                                           : transform_layout(stored.dense(), Layout::RowMajor);
        return *row_major;
    }
    const DenseMatrixf& dense_cm() {
        if (!col_major) col_major = transform_layout(dense_rm(), Layout::ColMajor);
        return *col_major;
    }
    const CooMatrixf& coo_rm() {
        if (!coo)
            coo = stored.is_sparse() ? transform_layout(stored.sparse(), Layout::RowMajor) : dense_to_sparse(dense_rm());
        return *coo;
    }

    // Transform-unit cycles to present this block in the form a mode wants.
    Cycles cost_dense_rm(Index lane) const {
        if (stored.is_sparse()) return transform_cycle_cost(TransformKind::S2D, elements(), lane);
        return stored.layout() == Layout::RowMajor ? 0 : transform_cycle_cost(TransformKind::LayoutFlip, elements(), lane);
    }
    Cycles cost_dense_cm(Index lane) const {
        if (stored.is_sparse())
            return transform_cycle_cost(TransformKind::S2D, elements(), lane) +
                   transform_cycle_cost(TransformKind::LayoutFlip, elements(), lane);
        return stored.layout() == Layout::ColMajor ? 0 : transform_cycle_cost(TransformKind::LayoutFlip, elements(), lane);
    }
    Cycles cost_coo(Index lane) const {
        if (stored.is_sparse())
            return stored.layout() == Layout::RowMajor ? 0
                                                       : transform_cycle_cost(TransformKind::LayoutFlip, elements(), lane);
        return transform_cycle_cost(TransformKind::D2S, elements(), lane);
    }
    std::uint64_t stored_bytes() const {
        return stored.is_sparse() ? 12ull * stored.sparse().nnz() : 4ull * elements();
    }
};

class OperandGrid {
public:
    using Loader = std::function<Operand(Index, Index)>;

    OperandGrid(BlockGrid grid, Loader load) : grid_(grid), load_(std::move(load)), cache_(grid.num_blocks()) {}

    Operand& at(Index bi, Index bj) {
        auto& slot = cache_[grid_.flat(bi, bj)];
        if (!slot) slot = load_(bi, bj);
        return *slot;
    }

private:
    BlockGrid grid_;
    Loader load_;
    std::vector<std::optional<Operand>> cache_;
};

OperandGrid::Loader compile_time_loader(const PartitionedMatrix& pm, const BlockGrid& want) {
    if (!(pm.grid == want))
        throw ModelInconsistencyError("partitioned operand '" + pm.source + "' does not match the kernel's block grid");
    return [&pm](Index bi, Index bj) {
        const MatrixReff& b = pm.block(bi, bj);
        return Operand{b, b.density().value_or(profile_density(b)), {}, {}, {}};
    };
}

OperandGrid::Loader feature_loader(const DenseMatrixf& h, const TileDensityMap& tiles, const BlockGrid& grid) {
    return [&h, &tiles, grid](Index bi, Index bj) {
        const Range r = grid.row_range(bi), c = grid.col_range(bj);
        return Operand{MatrixReff(slice_block(h, r, c)), tiles.try_query(r, c), {}, {}, {}};
    };
}

Cycles elementwise_cost(Index elements, Index p) { return ceil_div(elements, static_cast<std::uint64_t>(p) * p); }

struct TaskCost {
    Cycles compute = 0;
    Cycles predicted = 0;
    Cycles switches = 0;
    Cycles elementwise = 0;
    Cycles transform = 0;
    std::uint64_t bytes = 0;
    std::uint64_t macs = 0;
};

class Engine {
public:
    Engine(const CompiledProgram& prog, MappingStrategy strategy, const SimConfig& cfg)
        : prog_(prog), strategy_(strategy), cfg_(cfg), sched_(cfg.n_cores) {}

    InferenceResult run() {
        const auto& g = prog_.graph;
        result_.features.emplace(g.input_tensor, prog_.features);
        result_.tile_densities.emplace(g.input_tensor, prog_.feature_tiles);

        SimReport& rep = result_.report;
        rep.strategy = strategy_;
        rep.n_cores = cfg_.n_cores;
        rep.p_sys = cfg_.core.p_sys;
        rep.n1 = prog_.n1;
        rep.n2 = prog_.n2;
        rep.visible_overheads = cfg_.visible_overheads;

        for (const auto& k : g.kernels) {
            if (k.type == KernelType::ElementwiseAdd)
                run_elementwise(k);
            else
                run_product(k);
        }
        rep.makespan = sched_.now();
        for (const auto& c : sched_.cores()) rep.core_busy.push_back(c.busy_cycles);
        result_.output = result_.features.at(g.output_tensor);
        return std::move(result_);
    }

private:
    const DenseMatrixf& feature(Index tensor) const {
        const auto it = result_.features.find(tensor);
        if (it == result_.features.end())
            throw RuntimeOrderError("feature tensor '" + prog_.graph.tensors[tensor].name +
                                    "' read before the kernel producing it ran");
        return it->second;
    }
    const TileDensityMap& tiles(Index tensor) const { return result_.tile_densities.at(tensor); }

    OperandGrid operand(Index tensor, const BlockGrid& grid) const {
        const auto& info = prog_.graph.tensors[tensor];
        if (info.role == TensorRole::Feature) return OperandGrid(grid, feature_loader(feature(tensor), tiles(tensor), grid));
        const auto it = prog_.blocks.find(tensor);
        if (it == prog_.blocks.end())
            throw ModelInconsistencyError("no partitioned data for tensor '" + info.name + "'");
        return OperandGrid(grid, compile_time_loader(it->second, grid));
    }

    Cycles finish_task(const KernelIR& k, DenseMatrixf acc, Range rows, Range cols, DenseMatrixf& out,
                       TileDensityMap& out_tiles, TaskCost& c) {
        const Index lane = cfg_.core.lane_width;
        if (k.activation.enabled) {
            acc = elementwise_activation(std::move(acc), k.activation);
            c.elementwise += elementwise_cost(acc.size(), cfg_.core.p_sys);
        }
        out.view().block(rows.begin, cols.begin, rows.size(), cols.size()) = acc.view();
        out_tiles.profile_region(out, rows, cols);
        c.transform += transform_cycle_cost(TransformKind::Profile, acc.size(), lane);
        c.bytes += 4ull * acc.size();

        Cycles d = c.compute + c.switches + c.elementwise;
        if (cfg_.visible_overheads) {
            const auto transfer = static_cast<Cycles>(std::ceil(static_cast<double>(c.bytes) / cfg_.bytes_per_cycle));
            d = std::max(d, transfer) + c.transform;
        }
        return d;
    }

    void tally(KernelStats& ks, const TaskCost& c, Cycles duration) {
        ks.compute_cycles += c.compute;
        ks.predicted_cycles += c.predicted;
        ks.switch_cycles += c.switches;
        ks.elementwise_cycles += c.elementwise;
        ks.transform_cycles += c.transform;
        ks.transfer_cycles += static_cast<Cycles>(std::ceil(static_cast<double>(c.bytes) / cfg_.bytes_per_cycle));
        ks.macs += c.macs;
        ks.task_cycles += duration;
        ks.max_task = std::max(ks.max_task, duration);
    }

    void close_kernel(KernelStats ks, Cycles span, const std::vector<TaskStats>& partial, Index first_record) {
        ks.span = span;
        const auto& recs = sched_.records();
        for (Index t = 0; t < partial.size(); ++t) {
            TaskStats ts = partial[t];
            const auto& r = recs[first_record + t];
            ts.core = r.core;
            ts.start = r.start;
            ts.end = r.end;
            result_.report.tasks.push_back(ts);
        }
        result_.report.kernels.push_back(ks);
    }

    void run_product(const KernelIR& k) {
        const ExecutionScheme& s = k.scheme;
        const Index lane = cfg_.core.lane_width;
        OperandGrid left = operand(k.left, s.left);
        OperandGrid right = operand(k.right, s.right);
        DenseMatrixf out(s.output.rows, s.output.cols, Layout::RowMajor);
        TileDensityMap out_tiles(s.output.rows, s.output.cols, prog_.n2);

        KernelStats ks;
        ks.kernel_id = k.id;
        ks.type = k.type;
        ks.layer_id = k.layer_id;
        ks.tasks = s.tasks.size();
        std::vector<TaskStats> partial(s.tasks.size());
        const Index first_record = sched_.records().size();

        const Cycles span = sched_.run_kernel(k.id, s.tasks.size(), [&](Index t, CoreState& core) -> Cycles {
            const TaskDescriptor& task = s.tasks[t];
            std::vector<PairOperands> ops;
            ops.reserve(task.chain.size());
            for (const auto& pr : task.chain) {
                const Operand& l = left.at(pr.left_row, pr.left_col);
                const Operand& r = right.at(pr.right_row, pr.right_col);
                ops.push_back({{l.stored.rows(), l.stored.cols(), r.stored.cols()}, l.density, r.density});
            }
            const auto decisions = analyze_task(k.type, ops, strategy_, cfg_.core);

            const Range rows = s.output.row_range(task.out_row), cols = s.output.col_range(task.out_col);
            DenseMatrixf acc(rows.size(), cols.size(), Layout::RowMajor);
            TaskCost c;
            for (Index i = 0; i < task.chain.size(); ++i) {
                const PairRef& pr = task.chain[i];
                const PairDecision& dec = decisions[i];
                ++ks.histogram[static_cast<std::size_t>(dec.choice)];
                c.predicted += dec.predicted_cycles;
                Cycles executed = 0;
                if (dec.choice != PairChoice::Skip) {
                    Operand& l = left.at(pr.left_row, pr.left_col);
                    Operand& r = right.at(pr.right_row, pr.right_col);
                    const PrimitiveKind kind = to_primitive(dec.choice);
                    if (core.last_primitive && *core.last_primitive != kind) c.switches += mode_switch_cost();
                    core.last_primitive = kind;

                    ExecResult<float> res;
                    if (kind == PrimitiveKind::GEMM) {
                        c.transform += l.cost_dense_rm(lane) + r.cost_dense_cm(lane);
                        res = exec_gemm(l.dense_rm(), r.dense_cm(), std::move(acc), cfg_.core);
                    } else if (kind == PrimitiveKind::SPMM) {
                        c.transform += l.cost_coo(lane) + r.cost_coo(lane);
                        res = exec_spmm(l.coo_rm(), r.coo_rm(), std::move(acc), cfg_.core);
                    } else if (dec.sparse_operand == SparseOperand::Right) {
                        c.transform += l.cost_dense_rm(lane) + r.cost_coo(lane);
                        res = exec_spdmm(l.dense_rm(), r.coo_rm(), std::move(acc), cfg_.core);
                    } else {
                        c.transform += l.cost_coo(lane) + r.cost_dense_rm(lane);
                        res = exec_spdmm(l.coo_rm(), r.dense_rm(), std::move(acc), cfg_.core);
                    }
                    c.bytes += l.stored_bytes() + r.stored_bytes();
                    acc = std::move(res.output);
                    executed = res.compute_cycles;
                    c.compute += executed;
                    c.macs += res.macs_executed;
                    core.macs += res.macs_executed;
                }
                if (cfg_.record_pairs)
                    result_.report.pairs.push_back(
                        {k.id, t, i, ops[i].shape, *ops[i].left, *ops[i].right, dec, executed});
            }
            ks.decisions += decisions.size();
            partial[t] = {k.id, t, 0, 0, 0, task.K(), decisions.size()};

            const Cycles d = finish_task(k, std::move(acc), rows, cols, out, out_tiles, c);
            tally(ks, c, d);
            return d;
        });

        result_.features.insert_or_assign(k.output, std::move(out));
        result_.tile_densities.insert_or_assign(k.output, std::move(out_tiles));
        close_kernel(ks, span, partial, first_record);
    }

    void run_elementwise(const KernelIR& k) {
        const ExecutionScheme& s = k.scheme;
        const DenseMatrixf& a = feature(k.left);
        const DenseMatrixf& b = feature(k.right);
        if (a.rows() != b.rows() || a.cols() != b.cols())
            throw ShapeError("elementwise add of " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
        DenseMatrixf out(s.output.rows, s.output.cols, Layout::RowMajor);
        TileDensityMap out_tiles(s.output.rows, s.output.cols, prog_.n2);

        KernelStats ks;
        ks.kernel_id = k.id;
        ks.type = k.type;
        ks.layer_id = k.layer_id;
        ks.tasks = s.tasks.size();
        std::vector<TaskStats> partial(s.tasks.size());
        const Index first_record = sched_.records().size();

        const Cycles span = sched_.run_kernel(k.id, s.tasks.size(), [&](Index t, CoreState&) -> Cycles {
            const TaskDescriptor& task = s.tasks[t];
            const Range rows = s.output.row_range(task.out_row), cols = s.output.col_range(task.out_col);
            DenseMatrixf acc = slice_block(a, rows, cols);
            acc.view() += b.view().block(rows.begin, cols.begin, rows.size(), cols.size());
            TaskCost c;
            c.elementwise = elementwise_cost(acc.size(), cfg_.core.p_sys);
            c.bytes = 8ull * acc.size();
            partial[t] = {k.id, t, 0, 0, 0, 0, 0};
            const Cycles d = finish_task(k, std::move(acc), rows, cols, out, out_tiles, c);
            tally(ks, c, d);
            return d;
        });

        result_.features.insert_or_assign(k.output, std::move(out));
        result_.tile_densities.insert_or_assign(k.output, std::move(out_tiles));
        close_kernel(ks, span, partial, first_record);
    }

    const CompiledProgram& prog_;
    MappingStrategy strategy_;
    const SimConfig& cfg_;
    CoreScheduler sched_;
    InferenceResult result_;
};

}  // namespace

InferenceResult schedule_and_run(const CompiledProgram& program, MappingStrategy strategy, const SimConfig& cfg) {
    cfg.validate();
    return Engine(program, strategy, cfg).run();
}

InferenceResult run_inference(const ModelSpec& spec, const Graph& graph, const DenseMatrixf& features,
                              MappingStrategy strategy, const SimConfig& cfg, CompileOptions options) {
    cfg.validate();
    options.n_cores = cfg.n_cores;
    const CompiledProgram program = compile(spec, graph, features, options);
    return schedule_and_run(program, strategy, cfg);
}

}  // namespace dynmap
