#include "dynmap/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace dynmap {

using ojson = nlohmann::ordered_json;

namespace {

ojson histogram_json(const DecisionHistogram& h) {
    ojson j;
    for (auto c : {PairChoice::GEMM, PairChoice::SpDMM, PairChoice::SPMM, PairChoice::Skip})
        j[to_string(c)] = h[static_cast<std::size_t>(c)];
    return j;
}

void fill_summary_derived(ojson& s) {
    const auto makespan = s.at("makespan_cycles").get<Cycles>();
    s["latency_ms"] = latency_ms(makespan, s.at("clock_mhz").get<double>());
    ojson util = ojson::array();
    for (const auto& b : s.at("core_busy_cycles"))
        util.push_back(makespan == 0 ? 0.0 : static_cast<double>(b.get<Cycles>()) / static_cast<double>(makespan));
    s["core_utilization"] = util;
}

void fill_cell_derived(ojson& c) {
    c["latency_ms"] = latency_ms(c.at("makespan_cycles").get<Cycles>(), c.at("clock_mhz").get<double>());
}

ojson ratio_or_null(const ojson* num, const ojson* den) {
    if (!num || !den) return nullptr;
    const auto d = den->at("makespan_cycles").get<Cycles>();
    if (d == 0) return nullptr;
    return static_cast<double>(num->at("makespan_cycles").get<Cycles>()) / static_cast<double>(d);
}

// Speedup records per (graph, density) and geometric means per density, in first-appearance order.
std::vector<ojson> derive_sweep(const std::vector<ojson>& cells) {
    struct Group {
        std::string graph;
        double density;
        const ojson* by_strategy[3] = {nullptr, nullptr, nullptr};
    };
    std::vector<Group> groups;
    for (const auto& c : cells) {
        const auto graph = c.at("graph").get<std::string>();
        const auto density = c.at("weight_density").get<double>();
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const Group& g) { return g.graph == graph && g.density == density; });
        if (it == groups.end()) it = groups.insert(groups.end(), Group{graph, density});
        it->by_strategy[static_cast<int>(parse_strategy(c.at("strategy").get<std::string>()))] = &c;
    }

    std::vector<ojson> out;
    std::vector<double> densities;
    for (const auto& g : groups) {
        const ojson* s1 = g.by_strategy[static_cast<int>(MappingStrategy::Static1)];
        const ojson* s2 = g.by_strategy[static_cast<int>(MappingStrategy::Static2)];
        const ojson* dyn = g.by_strategy[static_cast<int>(MappingStrategy::Dynamic)];
        if (!dyn || (!s1 && !s2)) continue;
        ojson r;
        r["record"] = "speedup";
        r["schema_version"] = kReportSchemaVersion;
        r["graph"] = g.graph;
        r["weight_density"] = g.density;
        r["so_s1"] = ratio_or_null(s1, dyn);
        r["so_s2"] = ratio_or_null(s2, dyn);
        out.push_back(r);
        if (std::find(densities.begin(), densities.end(), g.density) == densities.end()) densities.push_back(g.density);
    }

    const std::size_t n_speedups = out.size();
    for (double d : densities) {
        ojson r;
        r["record"] = "geomean";
        r["schema_version"] = kReportSchemaVersion;
        r["weight_density"] = d;
        std::size_t graphs = 0;
        for (const char* key : {"so_s1", "so_s2"}) {
            double log_sum = 0.0;
            std::size_t n = 0;
            for (std::size_t i = 0; i < n_speedups; ++i) {
                const ojson& s = out[i];
                if (s.at("weight_density").get<double>() != d || s.at(key).is_null()) continue;
                log_sum += std::log(s.at(key).get<double>());
                ++n;
            }
            graphs = std::max(graphs, n);
            r[key] = n == 0 ? ojson(nullptr) : ojson(std::exp(log_sum / static_cast<double>(n)));
        }
        r["graphs"] = graphs;
        out.push_back(r);
    }
    return out;
}

}  // namespace

double latency_ms(Cycles cycles, double clock_mhz) {
    if (!(clock_mhz > 0.0)) throw ConfigError("clock frequency must be positive");
    return static_cast<double>(cycles) / (clock_mhz * 1000.0);
}

std::vector<std::string> report_records(const SimReport& r, const RunMeta& meta) {
    std::vector<std::string> lines;
    for (const auto& k : r.kernels) {
        ojson j;
        j["record"] = "kernel";
        j["schema_version"] = kReportSchemaVersion;
        j["run_id"] = meta.run_id;
        j["strategy"] = to_string(r.strategy);
        j["kernel_id"] = k.kernel_id;
        j["kernel_type"] = to_string(k.type);
        j["layer_id"] = k.layer_id;
        j["tasks"] = k.tasks;
        j["span_cycles"] = k.span;
        j["task_cycles"] = k.task_cycles;
        j["max_task_cycles"] = k.max_task;
        j["compute_cycles"] = k.compute_cycles;
        j["predicted_cycles"] = k.predicted_cycles;
        j["switch_cycles"] = k.switch_cycles;
        j["elementwise_cycles"] = k.elementwise_cycles;
        j["transform_cycles"] = k.transform_cycles;
        j["transfer_cycles"] = k.transfer_cycles;
        j["macs"] = k.macs;
        j["analyzer_decisions"] = k.decisions;
        j["decisions"] = histogram_json(k.histogram);
        lines.push_back(j.dump());
    }
    ojson s;
    s["record"] = "summary";
    s["schema_version"] = kReportSchemaVersion;
    s["run_id"] = meta.run_id;
    s["strategy"] = to_string(r.strategy);
    s["n_cores"] = r.n_cores;
    s["p_sys"] = r.p_sys;
    s["n1"] = r.n1;
    s["n2"] = r.n2;
    s["visible_overheads"] = r.visible_overheads;
    s["makespan_cycles"] = r.makespan;
    s["clock_mhz"] = meta.clock_mhz;
    s["compute_cycles"] = r.compute_cycles();
    s["predicted_cycles"] = r.predicted_cycles();
    s["switch_cycles"] = r.switch_cycles();
    s["elementwise_cycles"] = r.elementwise_cycles();
    s["transform_cycles"] = r.transform_cycles();
    s["transfer_cycles"] = r.transfer_cycles();
    s["analyzer_decisions"] = r.decisions();
    s["decisions"] = histogram_json(r.histogram());
    s["core_busy_cycles"] = r.core_busy;
    fill_summary_derived(s);
    lines.push_back(s.dump());
    return lines;
}

std::string report_table(const SimReport& r, const RunMeta& meta) {
    std::ostringstream os;
    os << "run " << meta.run_id << "  strategy " << to_string(r.strategy) << "  cores " << r.n_cores << "  p_sys "
       << r.p_sys << "  N1 " << r.n1 << "  N2 " << r.n2 << '\n';
    os << std::left << std::setw(4) << "id" << std::setw(17) << "kernel" << std::right << std::setw(7) << "tasks"
       << std::setw(12) << "span" << std::setw(12) << "compute" << std::setw(12) << "predicted" << std::setw(8)
       << "GEMM" << std::setw(8) << "SpDMM" << std::setw(8) << "SPMM" << std::setw(8) << "Skip" << '\n';
    for (const auto& k : r.kernels) {
        os << std::left << std::setw(4) << k.kernel_id << std::setw(17) << to_string(k.type) << std::right
           << std::setw(7) << k.tasks << std::setw(12) << k.span << std::setw(12) << k.compute_cycles << std::setw(12)
           << k.predicted_cycles;
        for (auto n : k.histogram) os << std::setw(8) << n;
        os << '\n';
    }
    os << "makespan " << r.makespan << " cycles (" << std::fixed << std::setprecision(4)
       << latency_ms(r.makespan, meta.clock_mhz) << " ms at " << std::setprecision(1) << meta.clock_mhz << " MHz)\n";
    os << "core utilization";
    os << std::setprecision(3);
    for (double u : r.core_utilization()) os << ' ' << u;
    os << '\n';
    return os.str();
}

std::vector<std::string> compare_records(std::span<const CompareCell> cells, double clock_mhz) {
    std::vector<ojson> cell_json;
    for (const auto& c : cells) {
        ojson j;
        j["record"] = "cell";
        j["schema_version"] = kReportSchemaVersion;
        j["graph"] = c.graph;
        j["weight_density"] = c.weight_density;
        j["strategy"] = to_string(c.strategy);
        j["makespan_cycles"] = c.makespan;
        j["compute_cycles"] = c.compute_cycles;
        j["predicted_cycles"] = c.predicted_cycles;
        j["decisions"] = histogram_json(c.histogram);
        j["clock_mhz"] = clock_mhz;
        fill_cell_derived(j);
        cell_json.push_back(std::move(j));
    }
    std::vector<std::string> lines;
    for (const auto& j : cell_json) lines.push_back(j.dump());
    for (const auto& j : derive_sweep(cell_json)) lines.push_back(j.dump());
    return lines;
}

std::string compare_table(std::span<const CompareCell> cells) {
    std::vector<ojson> cell_json;
    for (const auto& c : cells)
        cell_json.push_back({{"graph", c.graph},
                             {"weight_density", c.weight_density},
                             {"strategy", to_string(c.strategy)},
                             {"makespan_cycles", c.makespan}});
    std::ostringstream os;
    os << std::left << std::setw(16) << "graph" << std::right << std::setw(10) << "w-density" << std::setw(10)
       << "strategy" << std::setw(14) << "makespan" << '\n';
    for (const auto& c : cells)
        os << std::left << std::setw(16) << c.graph << std::right << std::setw(10) << c.weight_density << std::setw(10)
           << to_string(c.strategy) << std::setw(14) << c.makespan << '\n';
    auto fmt = [](const ojson& v) {
        if (v.is_null()) return std::string("-");
        std::ostringstream s;
        s << std::fixed << std::setprecision(3) << v.get<double>();
        return s.str();
    };
    os << '\n' << std::left << std::setw(16) << "graph" << std::right << std::setw(10) << "w-density" << std::setw(10)
       << "SO-S1" << std::setw(10) << "SO-S2" << '\n';
    for (const auto& r : derive_sweep(cell_json)) {
        const bool geo = r.at("record") == "geomean";
        os << std::left << std::setw(16) << (geo ? std::string("geomean") : r.at("graph").get<std::string>())
           << std::right << std::setw(10) << r.at("weight_density").get<double>() << std::setw(10) << fmt(r.at("so_s1"))
           << std::setw(10) << fmt(r.at("so_s2")) << '\n';
    }
    return os.str();
}

std::vector<std::string> recompute_derived(const std::vector<std::string>& lines) {
    std::vector<std::string> out;
    std::vector<ojson> cells;
    bool sweep = false;
    for (const auto& line : lines) {
        ojson j = ojson::parse(line);
        const auto kind = j.at("record").get<std::string>();
        if (kind == "summary") {
            fill_summary_derived(j);
        } else if (kind == "cell") {
            fill_cell_derived(j);
            cells.push_back(j);
        } else if (kind == "speedup" || kind == "geomean") {
            sweep = true;
            continue;
        } else if (kind != "kernel") {
            throw FormatError("unknown record type '" + kind + "'");
        }
        out.push_back(j.dump());
    }
    if (sweep || !cells.empty())
        for (const auto& j : derive_sweep(cells)) out.push_back(j.dump());
    return out;
}

}  // namespace dynmap
