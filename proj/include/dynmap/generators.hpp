#ifndef DYNMAP_GENERATORS_HPP
#define DYNMAP_GENERATORS_HPP

// Seeded synthetic inputs. The same seed gives the same bytes on every run.

#include <cstdint>
#include <random>

#include "dynmap/model.hpp"

namespace dynmap {

/// mt19937_64 with fixed bit-level mappings, so results do not depend on the
/// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        for (;;) {
            const std::uint64_t x = eng_();
            if (x < limit) return x % n;
        }
    }

private:
    std::mt19937_64 eng_;
};

/// Undirected graph without self loops whose adjacency has round(density * V^2 / 2) edge pairs,
/// each stored in both directions. ConfigError if the density cannot be met.
Graph generate_erdos_renyi(Index num_vertices, double density, std::uint64_t seed);

/// Same edge budget, endpoints drawn with Chung-Lu weights w_i ~ (i+1)^(-1/(exponent-1)).
Graph generate_power_law(Index num_vertices, double density, std::uint64_t seed, double exponent = 2.5);

/// `communities` equal vertex ranges, each an Erdos-Renyi block at `intra_density`; no edges between ranges.
Graph generate_block_diagonal(Index num_vertices, Index communities, double intra_density, std::uint64_t seed);

/// Exactly round(density * rows * cols) nonzeros at uniformly random positions, values in (0, 1].
DenseMatrixf generate_features(Index rows, Index cols, double density, std::uint64_t seed);

/// Dense weights uniform in [-1, 1] / sqrt(rows).
DenseMatrixf generate_weights(Index rows, Index cols, std::uint64_t seed);

/// Keeps the round(density * size) largest-magnitude entries (earlier positions win ties), zeroes the rest.
DenseMatrixf prune_magnitude(const DenseMatrixf& w, double density);

}  // namespace dynmap

#endif  // DYNMAP_GENERATORS_HPP
