#include "dynmap/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace dynmap {

namespace {

void check_density(double density, const char* what) {
    if (!(density >= 0.0 && density <= 1.0)) {
        std::ostringstream os;
        os << what << " density " << density << " is outside [0, 1]";
        throw ConfigError(os.str());
    }
}

std::uint64_t pair_budget(Index n, double density) {
    check_density(density, "adjacency");
    const double possible = static_cast<double>(n) * static_cast<double>(n == 0 ? 0 : n - 1) / 2.0;
    const auto pairs = static_cast<std::uint64_t>(std::llround(density * static_cast<double>(n) * n / 2.0));
    if (static_cast<double>(pairs) > possible) {
        std::ostringstream os;
        os << "adjacency density " << density << " needs " << pairs << " undirected edges but " << n
           << " vertices without self loops allow only " << static_cast<std::uint64_t>(possible);
        throw ConfigError(os.str());
    }
    return pairs;
}

// Distinct unordered pairs {i, j}, i != j, over [0, n), drawn by `draw` until `count` are collected.
template <typename Draw>
std::vector<std::pair<Index, Index>> collect_pairs(Index n, std::uint64_t count, Draw&& draw, std::uint64_t max_attempts) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(count * 2);
    std::vector<std::pair<Index, Index>> out;
    out.reserve(count);
    for (std::uint64_t attempt = 0; out.size() < count; ++attempt) {
        if (attempt >= max_attempts)
            throw ConfigError("could not place " + std::to_string(count) + " distinct edges after " +
                              std::to_string(max_attempts) + " draws; lower the density");
        auto [i, j] = draw();
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        if (seen.insert(static_cast<std::uint64_t>(i) * n + j).second) out.emplace_back(i, j);
    }
    return out;
}

Graph symmetric_graph(Index n, const std::vector<std::pair<Index, Index>>& pairs) {
    std::vector<CooEntry<float>> e;
    e.reserve(pairs.size() * 2);
    for (auto [i, j] : pairs) {
        e.push_back({i, j, 1.0f});
        e.push_back({j, i, 1.0f});
    }
    return Graph{n, CooMatrixf(n, n, std::move(e))};
}

// Uniform pairs over [0, n); switches to sampling the complement when the graph is dense.
std::vector<std::pair<Index, Index>> uniform_pairs(Index n, std::uint64_t count, Rng& rng) {
    const std::uint64_t possible = static_cast<std::uint64_t>(n) * (n == 0 ? 0 : n - 1) / 2;
    auto draw = [&] { return std::pair<Index, Index>(rng.below(n), rng.below(n)); };
    if (count * 2 <= possible) return collect_pairs(n, count, draw, 64 * count + 1024);

    const auto excluded = collect_pairs(n, possible - count, draw, 64 * possible + 1024);
    std::unordered_set<std::uint64_t> skip;
    for (auto [i, j] : excluded) skip.insert(static_cast<std::uint64_t>(i) * n + j);
    std::vector<std::pair<Index, Index>> out;
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (!skip.count(static_cast<std::uint64_t>(i) * n + j)) out.emplace_back(i, j);
    return out;
}

}  // namespace

Graph generate_erdos_renyi(Index num_vertices, double density, std::uint64_t seed) {
    const std::uint64_t pairs = pair_budget(num_vertices, density);
    Rng rng(seed);
    return symmetric_graph(num_vertices, uniform_pairs(num_vertices, pairs, rng));
}

Graph generate_power_law(Index num_vertices, double density, std::uint64_t seed, double exponent) {
    if (!(exponent > 1.0)) throw ConfigError("power-law exponent must exceed 1");
    const std::uint64_t pairs = pair_budget(num_vertices, density);
    std::vector<double> cumulative(num_vertices);
    double total = 0.0;
    for (Index i = 0; i < num_vertices; ++i) {
        total += std::pow(static_cast<double>(i + 1), -1.0 / (exponent - 1.0));
        cumulative[i] = total;
    }
    Rng rng(seed);
    auto endpoint = [&]() -> Index {
        const double u = rng.uniform() * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        return static_cast<Index>(std::min<std::ptrdiff_t>(it - cumulative.begin(), num_vertices - 1));
    };
    auto draw = [&] {
        const Index a = endpoint();
        return std::pair<Index, Index>(a, endpoint());
    };
    return symmetric_graph(num_vertices, collect_pairs(num_vertices, pairs, draw, 256 * pairs + 4096));
}

Graph generate_block_diagonal(Index num_vertices, Index communities, double intra_density, std::uint64_t seed) {
    check_density(intra_density, "intra-community");
    if (communities == 0) throw ConfigError("need at least one community");
    const Index size = (num_vertices + communities - 1) / communities;
    Rng rng(seed);
    std::vector<std::pair<Index, Index>> all;
    for (Index c = 0; c * size < num_vertices; ++c) {
        const Index begin = c * size;
        const Index n = std::min(num_vertices, begin + size) - begin;
        for (auto [i, j] : uniform_pairs(n, pair_budget(n, intra_density), rng)) all.emplace_back(begin + i, begin + j);
    }
    return symmetric_graph(num_vertices, all);
}

DenseMatrixf generate_features(Index rows, Index cols, double density, std::uint64_t seed) {
    check_density(density, "feature");
    const Index total = rows * cols;
    const auto keep = static_cast<Index>(std::llround(density * static_cast<double>(total)));
    std::vector<Index> pos(total);
    std::iota(pos.begin(), pos.end(), Index{0});
    Rng rng(seed);
    DenseMatrixf m(rows, cols, Layout::RowMajor);
    auto values = m.values();
    for (Index k = 0; k < keep; ++k) {
        std::swap(pos[k], pos[k + rng.below(total - k)]);
        values[pos[k]] = static_cast<float>(1.0 - rng.uniform());
    }
    return m;
}

DenseMatrixf generate_weights(Index rows, Index cols, std::uint64_t seed) {
    Rng rng(seed);
    DenseMatrixf w(rows, cols, Layout::RowMajor);
    const double scale = rows == 0 ? 1.0 : 1.0 / std::sqrt(static_cast<double>(rows));
    for (auto& v : w.values()) v = static_cast<float>((2.0 * rng.uniform() - 1.0) * scale);
    return w;
}

DenseMatrixf prune_magnitude(const DenseMatrixf& w, double density) {
    check_density(density, "weight");
    const auto values = w.values();
    const auto keep = static_cast<Index>(std::llround(density * static_cast<double>(values.size())));
    std::vector<Index> order(values.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return std::abs(values[a]) > std::abs(values[b]); });
    DenseMatrixf out = w;
    auto ov = out.values();
    for (Index k = keep; k < order.size(); ++k) ov[order[k]] = 0.0f;
    return out;
}

}  // namespace dynmap
