// Acceptance checks. `acceptance N` runs criterion N; with no argument all ten run.
// Each prints one "criterion N: PASS|FAIL (details)" line; the exit status is nonzero on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dynmap/experiment.hpp"
#include "dynmap/io.hpp"
#include "support/reference.hpp"

using namespace dynmap;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    int violations = 0;

    void check(bool ok, const std::string& what) {
        if (ok) return;
        pass = false;
        if (violations++ < 5) detail << "[" << what << "] ";
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr MappingStrategy kStrategies[] = {MappingStrategy::Static1, MappingStrategy::Static2,
                                           MappingStrategy::Dynamic};

// --- 1 ------------------------------------------------------------------------

// Random matrix under one of several nonzero patterns.
DenseMatrixf patterned(Rng& rng, Index rows, Index cols, double density, int pattern, bool integer) {
    DenseMatrixf m = ref::random_dense(rng, rows, cols, density, integer);
    switch (pattern) {
        case 0: break;  // uniform support
        case 1: {       // whole rows empty
            for (Index i = 0; i < rows; ++i)
                if (rng.below(2) == 0)
                    for (Index j = 0; j < cols; ++j) m(i, j) = 0.0f;
            break;
        }
        case 2: {  // banded around the diagonal
            const Index band = 1 + rng.below(4);
            for (Index i = 0; i < rows; ++i)
                for (Index j = 0; j < cols; ++j)
                    if ((i > j ? i - j : j - i) > band) m(i, j) = 0.0f;
            break;
        }
        case 3: {  // one dense corner block
            const Index r = rng.below(rows + 1), c = rng.below(cols + 1);
            for (Index i = 0; i < rows; ++i)
                for (Index j = 0; j < cols; ++j)
                    if (i >= r || j >= c) m(i, j) = 0.0f;
            break;
        }
    }
    return m;
}

Outcome criterion1() {
    Outcome o;
    const auto t0 = Clock::now();
    Rng rng(2024);
    const CoreConfig cfg{16, 16};
    const int triples = 1200;
    double worst = 0.0;
    for (int t = 0; t < triples; ++t) {
        const Index m = 1 + rng.below(64), n = 1 + rng.below(64), d = 1 + rng.below(64);
        const bool integer = t % 2 == 0;
        const int pattern = static_cast<int>(rng.below(4));
        const double ax = rng.below(10) == 0 ? (rng.below(2) ? 0.0 : 1.0) : rng.uniform();
        const double ay = rng.below(10) == 0 ? (rng.below(2) ? 0.0 : 1.0) : rng.uniform();
        const auto x = patterned(rng, m, n, ax, pattern, integer);
        const auto y = patterned(rng, n, d, ay, static_cast<int>(rng.below(4)), integer);
        const auto want = dense_matmul_oracle(x, y);

        const DenseMatrixf outs[] = {
            exec_gemm(x, transform_layout(y, Layout::ColMajor), DenseMatrixf(m, d), cfg).output,
            exec_spdmm(dense_to_sparse(x), y, DenseMatrixf(m, d), cfg).output,
            exec_spdmm(x, dense_to_sparse(y), DenseMatrixf(m, d), cfg).output,
            exec_spmm(dense_to_sparse(x), dense_to_sparse(y), DenseMatrixf(m, d), cfg).output,
        };
        const char* names[] = {"gemm", "spdmm_left", "spdmm_right", "spmm"};
        for (int k = 0; k < 4; ++k) {
            if (integer) {
                o.check(same_elements(outs[k], want), std::string(names[k]) + " inexact on integer triple " +
                                                          std::to_string(t));
            } else {
                const double e = relative_error(outs[k], want);
                worst = std::max(worst, e);
                o.check(e <= 1e-5, std::string(names[k]) + " error " + std::to_string(e));
            }
        }
    }
    const double secs = seconds_since(t0);
    o.check(secs < 10.0, "runtime " + std::to_string(secs) + " s");
    o.detail << triples << " triples, worst float error " << worst << ", " << secs << " s";
    return o;
}

// --- 2 ------------------------------------------------------------------------

Outcome criterion2() {
    Outcome o;
    for (Index p : {8, 16, 32}) {
        const auto r = region_partition_check(p, 100, {256, 256, 256}, false);
        o.check(r.violations.empty(), "p=" + std::to_string(p) + ": " + std::to_string(r.violations.size()) +
                                          " violations" + (r.violations.empty() ? "" : ", " + r.violations[0]));
        o.detail << "p=" << p << " points=" << r.points << " gemm/spdmm/spmm/skip=" << r.region_points[0] << "/"
                 << r.region_points[1] << "/" << r.region_points[2] << "/" << r.skip_points << "; ";
    }
    return o;
}

// --- shared workloads ---------------------------------------------------------

struct Workload {
    std::string name;
    ModelSpec spec;
    Graph graph;
    DenseMatrixf features;
    CompileOptions options;
};

std::vector<Workload> randomized_workloads() {
    std::vector<Workload> out;
    Rng rng(77);
    const char* models[] = {"gcn2", "gin2", "sage2", "sgc2"};
    for (int i = 0; i < 12; ++i) {
        const std::string model = models[i % 4];
        const Index v = 100 + rng.below(300);
        const Index f = 8 + rng.below(56);
        const Index hidden = 8 + rng.below(56);
        const double wd = std::vector<double>{1.0, 0.5, 0.3, 0.1, 0.05}[rng.below(5)];
        const double adj = 0.005 + 0.1 * rng.uniform();
        const double feat = rng.uniform();
        const std::uint64_t seed = 1000 + i;
        Graph g = i % 3 == 2 ? generate_power_law(v, adj, seed) : generate_erdos_renyi(v, adj, seed);
        Workload w{model + "#" + std::to_string(i), zoo_model(model, f, hidden, 4 + rng.below(20), wd, seed),
                   std::move(g), generate_features(v, f, feat, seed + 1), {}};
        if (i % 2 == 1) w.options.partition_sizes = std::pair<Index, Index>{32, 16};
        out.push_back(std::move(w));
    }
    return out;
}

// 512 vertices in four communities; a 4x4 adjacency grid with only the diagonal blocks populated.
Workload block_diagonal_workload() {
    Workload w{"block_diagonal", zoo_model("gcn2", 64, 64, 64, 0.1, 5), generate_block_diagonal(512, 4, 0.05, 6),
               generate_features(512, 64, 0.1, 7), {}};
    w.options.partition_sizes = std::pair<Index, Index>{128, 16};
    return w;
}

// --- 3 ------------------------------------------------------------------------

Outcome criterion3() {
    Outcome o;
    auto workloads = randomized_workloads();
    workloads.push_back(block_diagonal_workload());
    std::uint64_t pairs = 0;
    for (const auto& w : workloads) {
        SimConfig cfg;
        cfg.record_pairs = true;
        Cycles predicted[3] = {}, executed[3] = {};
        for (auto s : kStrategies) {
            const auto r = run_inference(w.spec, w.graph, w.features, s, cfg, w.options);
            predicted[static_cast<int>(s)] = r.report.predicted_cycles();
            executed[static_cast<int>(s)] = r.report.compute_cycles();
            if (s != MappingStrategy::Dynamic) continue;
            for (const auto& p : r.report.pairs) {
                ++pairs;
                const KernelType type = r.report.kernels[p.kernel].type;
                const double ax = p.left.density(), ay = p.right.density();
                const Cycles dyn = p.decision.predicted_cycles;
                for (auto st : {MappingStrategy::Static1, MappingStrategy::Static2}) {
                    const Cycles forced = decide_pair(type, st, ax, ay, p.shape, cfg.core.p_sys).predicted_cycles;
                    o.check(dyn <= forced, w.name + " kernel " + std::to_string(p.kernel) + " pair " +
                                               std::to_string(p.slot) + ": dynamic " + std::to_string(dyn) + " > " +
                                               to_string(st) + " " + std::to_string(forced));
                }
            }
        }
        const Cycles dyn = predicted[2];
        o.check(dyn <= std::min(predicted[0], predicted[1]),
                w.name + " modeled totals dyn=" + std::to_string(dyn) + " s1=" + std::to_string(predicted[0]) +
                    " s2=" + std::to_string(predicted[1]));
        o.check(executed[2] <= std::min(executed[0], executed[1]),
                w.name + " executed totals dyn=" + std::to_string(executed[2]) + " s1=" +
                    std::to_string(executed[0]) + " s2=" + std::to_string(executed[1]));
    }
    o.detail << workloads.size() << " workloads, " << pairs << " dynamic pairs checked";
    return o;
}

// --- 4 and 10 -----------------------------------------------------------------

const std::vector<double> kSweepDensities{1.0, 0.5, 0.3, 0.1, 0.05};

std::vector<CompareCell> trend_sweep() {
    const std::vector<GraphInput> graphs{
        synthetic_input("er4096", GraphKind::ErdosRenyi, 4096, 0.005, 64, 0.5, 1)};
    SweepConfig cfg;
    cfg.model_id = "gcn2";
    cfg.hidden = 64;
    cfg.weight_densities = kSweepDensities;
    return run_sweep(graphs, cfg);
}

Cycles makespan_of(const std::vector<CompareCell>& cells, double density, MappingStrategy s) {
    for (const auto& c : cells)
        if (c.weight_density == density && c.strategy == s) return c.makespan;
    return 0;
}

Outcome criterion4() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto cells = trend_sweep();
    const double secs = seconds_since(t0);
    double prev = 0.0;
    for (double d : kSweepDensities) {
        const Cycles dyn = makespan_of(cells, d, MappingStrategy::Dynamic);
        const double so1 = static_cast<double>(makespan_of(cells, d, MappingStrategy::Static1)) / dyn;
        const double so2 = static_cast<double>(makespan_of(cells, d, MappingStrategy::Static2)) / dyn;
        o.detail << "w=" << d << " so_s1=" << so1 << " so_s2=" << so2 << "; ";
        o.check(so1 >= prev, "so_s1 decreases at w=" + std::to_string(d));
        if (d <= 0.5) o.check(so1 > 2.0, "so_s1 <= 2 at w=" + std::to_string(d));
        prev = so1;
    }
    o.check(secs < 60.0, "runtime " + std::to_string(secs) + " s");
    o.detail << secs << " s";
    return o;
}

Outcome criterion10() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto cells = trend_sweep();
    const double secs = seconds_since(t0);
    o.check(cells.size() == 15, std::to_string(cells.size()) + " cells instead of 15");
    o.check(secs < 300.0, "runtime " + std::to_string(secs) + " s");
    o.detail << cells.size() << " cells in " << secs << " s";
    return o;
}

// --- 5 ------------------------------------------------------------------------

Outcome criterion5() {
    Outcome o;
    const auto t0 = Clock::now();
    const Graph g = generate_erdos_renyi(100, 0.05, 11);
    const auto h0 = generate_features(100, 24, 0.5, 12);
    for (const char* model : {"gcn2", "gin2", "sgc2", "sage2"}) {
        const ModelSpec spec = zoo_model(model, 24, 32, 8, 0.5, 13);
        const auto want = ref::inference(spec, g, h0);
        std::vector<DenseMatrixf> outs;
        for (auto s : kStrategies) {
            const auto r = run_inference(spec, g, h0, s, SimConfig{});
            const double e = ref::rel_error(r.output, want);
            o.check(e <= 1e-4, std::string(model) + "/" + to_string(s) + " error " + std::to_string(e));
            outs.push_back(r.output);
        }
        for (std::size_t k = 1; k < outs.size(); ++k)
            o.check(relative_error(outs[k], outs[0]) <= 1e-4, std::string(model) + " strategies disagree");
        o.detail << model << " ok; ";
    }
    const double secs = seconds_since(t0);
    o.check(secs < 10.0, "runtime " + std::to_string(secs) + " s");
    o.detail << secs << " s";
    return o;
}

// --- 6 ------------------------------------------------------------------------

void check_schedule(Outcome& o, const std::vector<std::vector<Cycles>>& kernels, Index n_cores,
                    const ScheduleResult& r, const std::string& tag) {
    Cycles total = 0, longest = 0;
    Index n_tasks = 0;
    for (const auto& k : kernels)
        for (Cycles c : k) {
            total += c;
            longest = std::max(longest, c);
            ++n_tasks;
        }
    o.check(r.tasks.size() == n_tasks, tag + " task records " + std::to_string(r.tasks.size()));

    std::vector<std::vector<int>> seen(kernels.size());
    for (std::size_t k = 0; k < kernels.size(); ++k) seen[k].assign(kernels[k].size(), 0);
    for (const auto& t : r.tasks) {
        if (t.kernel >= kernels.size() || t.task >= kernels[t.kernel].size()) {
            o.check(false, tag + " unknown task");
            continue;
        }
        ++seen[t.kernel][t.task];
        o.check(t.end - t.start == kernels[t.kernel][t.task], tag + " duration mismatch");
        o.check(t.core < n_cores, tag + " core id out of range");
    }
    for (const auto& k : seen)
        for (int s : k) o.check(s == 1, tag + " task ran " + std::to_string(s) + " times");

    // No two tasks overlap on one core.
    for (Index c = 0; c < n_cores; ++c) {
        std::vector<std::pair<Cycles, Cycles>> spans;
        for (const auto& t : r.tasks)
            if (t.core == c) spans.emplace_back(t.start, t.end);
        std::sort(spans.begin(), spans.end());
        for (std::size_t i = 1; i < spans.size(); ++i)
            o.check(spans[i].first >= spans[i - 1].second, tag + " overlap on core " + std::to_string(c));
    }

    // Barrier: every task of kernel k starts after every task of kernel k-1 ends.
    Cycles prev_end = 0;
    for (std::size_t k = 0; k < kernels.size(); ++k) {
        Cycles first_start = UINT64_MAX, last_end = prev_end;
        for (const auto& t : r.tasks)
            if (t.kernel == k) {
                first_start = std::min(first_start, t.start);
                last_end = std::max(last_end, t.end);
            }
        if (first_start != UINT64_MAX) o.check(first_start >= prev_end, tag + " barrier broken");
        prev_end = last_end;
    }

    o.check(r.makespan >= longest && r.makespan <= total, tag + " makespan outside [max task, sum]");
    o.check(r.makespan >= (total + n_cores - 1) / n_cores, tag + " makespan below work bound");
    o.check(r.makespan == prev_end, tag + " makespan is not the last task end");
}

Outcome criterion6() {
    Outcome o;
    Rng rng(606);
    int sets = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const Index n_cores = 1 + rng.below(16);
        const Index budget = 1 + rng.below(500);
        std::vector<std::vector<Cycles>> kernels(1 + rng.below(6));
        for (Index t = 0; t < budget; ++t) {
            auto& k = kernels[rng.below(kernels.size())];
            k.push_back(rng.below(8) == 0 ? 0 : 1 + rng.below(1000));
        }
        const auto r = schedule_fixed_costs(kernels, n_cores);
        const std::string tag = "set " + std::to_string(trial);
        check_schedule(o, kernels, n_cores, r, tag);
        const auto again = schedule_fixed_costs(kernels, n_cores);
        bool same = again.makespan == r.makespan && again.tasks.size() == r.tasks.size();
        for (std::size_t i = 0; same && i < r.tasks.size(); ++i)
            same = again.tasks[i].core == r.tasks[i].core && again.tasks[i].start == r.tasks[i].start;
        o.check(same, tag + " nondeterministic");
        ++sets;
    }

    // The simulator's own schedules obey the same rules.
    int runs = 0;
    for (const auto& w : randomized_workloads()) {
        for (Index cores : {1, 3, 7}) {
            SimConfig cfg;
            cfg.n_cores = cores;
            const auto rep = run_inference(w.spec, w.graph, w.features, MappingStrategy::Dynamic, cfg, w.options).report;
            std::vector<std::vector<Cycles>> kernels(rep.kernels.size());
            for (std::size_t k = 0; k < rep.kernels.size(); ++k) kernels[k].resize(rep.kernels[k].tasks);
            ScheduleResult r;
            r.makespan = rep.makespan;
            for (const auto& t : rep.tasks) {
                kernels[t.kernel][t.task] = t.end - t.start;
                r.tasks.push_back({t.kernel, t.task, t.core, t.start, t.end});
            }
            check_schedule(o, kernels, cores, r, w.name + " cores=" + std::to_string(cores));
            const auto again = run_inference(w.spec, w.graph, w.features, MappingStrategy::Dynamic, cfg, w.options);
            o.check(again.report.makespan == rep.makespan, w.name + " simulator nondeterministic");
            ++runs;
        }
    }
    o.detail << sets << " random task sets, " << runs << " simulator schedules";
    return o;
}

// --- 7 ------------------------------------------------------------------------

Index cdiv(Index a, Index b) { return (a + b - 1) / b; }

Outcome criterion7() {
    Outcome o;
    Rng rng(707);
    int matrices = 0, graphs = 0;
    for (int t = 0; t < 200; ++t) {
        const Index r = 1 + rng.below(90), c = 1 + rng.below(90);
        const Index br = 1 + rng.below(20), bc = 1 + rng.below(20);
        const auto d = ref::random_dense(rng, r, c, rng.uniform(), false, t % 2 ? Layout::ColMajor : Layout::RowMajor);
        Index nnz = 0;
        for (float v : d.values()) nnz += v != 0.0f;
        for (const MatrixReff& m : {MatrixReff(d), MatrixReff(dense_to_sparse(d))}) {
            const auto p = partition(m, br, bc);
            Index sum = 0, elems = 0;
            for (const auto& b : p.blocks) {
                sum += b.density()->nnz;
                elems += b.rows() * b.cols();
            }
            o.check(sum == nnz, "block nnz sum " + std::to_string(sum) + " != " + std::to_string(nnz));
            o.check(elems == r * c, "block sizes do not tile the matrix");
            o.check(p.blocks.size() == cdiv(r, br) * cdiv(c, bc), "block count");
            const auto back = reassemble(p);
            o.check(m.is_sparse() ? back.sparse() == m.sparse() : back.dense() == m.dense(), "reassembly differs");
        }
        ++matrices;
    }

    for (int t = 0; t < 100; ++t) {
        const Index n2 = Index{16} << rng.below(3);
        const Index n1 = n2 << rng.below(3);
        const Index v = 1 + rng.below(700);
        LayerSpec l;
        l.kind = ModelKind::GCN;
        l.f_in = 1 + rng.below(150);
        l.f_out = 1 + rng.below(150);
        ModelSpec spec;
        spec.layers = {l};
        auto g = build_computation_graph(spec, {v, 0});
        generate_schemes(g, n1, n2);
        for (const auto& k : g.kernels) {
            const auto& s = k.scheme;
            if (k.type == KernelType::Aggregate) {
                o.check(s.tasks.size() == cdiv(v, n1) * cdiv(k.f_in, n2), "aggregate task count");
                for (const auto& task : s.tasks) o.check(task.K() == cdiv(v, n1), "aggregate chain length");
            } else if (k.type == KernelType::Update) {
                o.check(s.tasks.size() == cdiv(v, n2) * cdiv(k.f_out, n2), "update task count");
                for (const auto& task : s.tasks) o.check(task.K() == cdiv(k.f_in, n2), "update chain length");
            }
            // Output blocks are covered exactly once.
            std::vector<int> cover(s.output.num_blocks(), 0);
            for (const auto& task : s.tasks) ++cover[s.output.flat(task.out_row, task.out_col)];
            o.check(std::all_of(cover.begin(), cover.end(), [](int x) { return x == 1; }), "output coverage");
        }
        ++graphs;
    }
    o.detail << matrices << " matrices in two formats, " << graphs << " scheme geometries";
    return o;
}

// --- 8 ------------------------------------------------------------------------

// Nonzeros of rows x cols of a dense or COO matrix, counted directly.
Index region_nnz(const DenseMatrixf& m, Range rows, Range cols) {
    Index n = 0;
    for (Index i = rows.begin; i < rows.end; ++i)
        for (Index j = cols.begin; j < cols.end; ++j) n += m(i, j) != 0.0f;
    return n;
}

Outcome criterion8() {
    Outcome o;
    const Workload w = block_diagonal_workload();
    Cycles makespan[3] = {};
    std::uint64_t skips = 0, expected = 0, empty_adjacency_blocks = 0;
    for (auto s : kStrategies) {
        const CompiledProgram prog = compile(w.spec, w.graph, w.features, w.options);
        const auto res = schedule_and_run(prog, s, SimConfig{});
        makespan[static_cast<int>(s)] = res.report.makespan;
        if (s != MappingStrategy::Dynamic) continue;
        skips = res.report.histogram()[static_cast<int>(PairChoice::Skip)];

        // Brute-force count of pairs with an all-zero operand from the raw matrices.
        auto matrix_of = [&](Index tensor) -> DenseMatrixf {
            const TensorInfo& info = prog.graph.tensors[tensor];
            if (info.role == TensorRole::Adjacency) return sparse_to_dense(make_adjacency(w.graph.adjacency, info.variant, info.epsilon));
            if (info.role == TensorRole::Weight) return w.spec.weights.at(info.name);
            if (tensor == prog.graph.input_tensor) return w.features;
            return res.features.at(tensor);
        };
        for (const auto& k : prog.graph.kernels) {
            if (k.type == KernelType::ElementwiseAdd) continue;
            const DenseMatrixf left = matrix_of(k.left), right = matrix_of(k.right);
            const auto& sc = k.scheme;
            if (k.type == KernelType::Aggregate && k.layer_id == 1)
                for (Index i = 0; i < sc.left.grid_rows(); ++i)
                    for (Index j = 0; j < sc.left.grid_cols(); ++j)
                        empty_adjacency_blocks += region_nnz(left, sc.left.row_range(i), sc.left.col_range(j)) == 0;
            for (const auto& task : sc.tasks)
                for (const auto& pr : task.chain) {
                    const Index ln = region_nnz(left, sc.left.row_range(pr.left_row), sc.left.col_range(pr.left_col));
                    const Index rn =
                        region_nnz(right, sc.right.row_range(pr.right_row), sc.right.col_range(pr.right_col));
                    expected += ln == 0 || rn == 0;
                }
        }
    }
    o.check(empty_adjacency_blocks == 12, "adjacency grid has " + std::to_string(empty_adjacency_blocks) +
                                              " empty blocks of 16, expected 12");
    o.check(skips == expected, "skip count " + std::to_string(skips) + " != empty pairs " + std::to_string(expected));
    o.check(makespan[2] < makespan[0], "dynamic not faster than s1");
    o.check(makespan[2] < makespan[1], "dynamic not faster than s2");
    o.detail << "empty A blocks " << empty_adjacency_blocks << "/16, skips " << skips << " = empty pairs "
             << expected << ", makespan s1/s2/dyn " << makespan[0] << "/" << makespan[1] << "/" << makespan[2];
    return o;
}

// --- 9 ------------------------------------------------------------------------

Outcome criterion9() {
    Outcome o;
    auto workloads = randomized_workloads();
    workloads.push_back(block_diagonal_workload());
    std::uint64_t tasks = 0;
    for (const auto& w : workloads) {
        const CompiledProgram prog = compile(w.spec, w.graph, w.features, w.options);
        for (auto s : kStrategies) {
            const auto rep = schedule_and_run(prog, s, SimConfig{}).report;
            for (const auto& t : rep.tasks) {
                const Index k = prog.graph.kernels[t.kernel].scheme.tasks[t.task].K();
                o.check(t.decisions == k && t.chain_length == k,
                        w.name + " task decisions " + std::to_string(t.decisions) + " != K " + std::to_string(k));
                ++tasks;
            }
            for (const auto& ks : rep.kernels) {
                std::uint64_t sum_k = 0;
                for (const auto& task : prog.graph.kernels[ks.kernel_id].scheme.tasks) sum_k += task.K();
                o.check(ks.decisions == sum_k, w.name + " kernel decisions != sum of K");
            }
        }
    }
    o.detail << tasks << " tasks across " << workloads.size() << " workloads and 3 strategies";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                         criterion5, criterion6, criterion7, criterion8,
                                                         criterion9, criterion10};
    std::vector<int> which;
    if (argc > 1) {
        for (int a = 1; a < argc; ++a) {
            const int n = std::atoi(argv[a]);
            if (n < 1 || n > 10) {
                std::fprintf(stderr, "usage: %s [criterion 1-10 ...]\n", argv[0]);
                return 2;
            }
            which.push_back(n);
        }
    } else {
        which.resize(10);
        std::iota(which.begin(), which.end(), 1);
    }

    bool all = true;
    for (int n : which) {
        Outcome o;
        try {
            o = criteria[n - 1]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        all = all && o.pass;
        std::printf("criterion %d: %s (%s)\n", n, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
