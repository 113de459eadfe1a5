#ifndef DYNMAP_IO_HPP
#define DYNMAP_IO_HPP

// File formats. Every reader reports problems as ParseError("file:line: reason").
//
//   edge list      "src dst [weight]" per line, 0-based ids, '#' or '%' comments.
//                  Optional directive "# vertices: N" fixes the vertex count.
//                  Edge (src, dst) becomes A[dst][src].
//   Matrix Market  "%%MatrixMarket matrix coordinate real|integer|pattern general|symmetric", 1-based.
//   dense text     first line "rows cols", then rows lines of cols values.
//   dense binary   "DMAT", u32 version (1), u64 rows, u64 cols, rows*cols little-endian float32, row-major.
//   model spec     JSON; see README for the schema.
//   IR             JSON, deterministic key order, no timestamps; density sidecar is a separate JSON file.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "dynmap/compiler.hpp"
#include "dynmap/model.hpp"

namespace dynmap {

namespace fs = std::filesystem;

// --- graphs -----------------------------------------------------------------

Graph parse_graph(std::istream& in, const std::string& name = "<stream>");
Graph load_graph(const fs::path& path);
/// Writes an edge list with a vertex-count directive; edges in (src, dst) order.
void save_edge_list(const Graph& g, const fs::path& path);

// --- matrices ---------------------------------------------------------------

DenseMatrixf parse_dense_text(std::istream& in, const std::string& name = "<stream>");
/// Detects binary vs text by the magic bytes.
DenseMatrixf load_dense(const fs::path& path);
void save_dense_text(const DenseMatrixf& m, const fs::path& path);
void save_dense_binary(const DenseMatrixf& m, const fs::path& path);
/// Writes binary when the extension is ".dmat", text otherwise.
void save_dense(const DenseMatrixf& m, const fs::path& path);

/// Matrix Market files load as COO; anything else as dense.
MatrixReff load_matrix(const fs::path& path);
CooMatrixf parse_matrix_market(std::istream& in, const std::string& name = "<stream>");

// --- model specs ------------------------------------------------------------

inline constexpr int kModelSpecVersion = 1;

/// Parses the JSON model spec. Weight file paths inside it resolve relative to `base_dir`;
/// names missing from the file are looked up as <weights_dir>/<name>.dmat or .txt.
ModelSpec parse_model_spec(const std::string& json_text, const fs::path& base_dir = {},
                           const std::optional<fs::path>& weights_dir = std::nullopt,
                           const std::string& name = "<string>");
ModelSpec load_model_spec(const fs::path& path, const std::optional<fs::path>& weights_dir = std::nullopt);
/// Writes the spec plus one binary file per weight into `weights_dir` (paths stored relative to the spec).
void save_model_spec(const ModelSpec& spec, const fs::path& path, const fs::path& weights_dir);

/// Built-in two-layer models: gcn2, sage2, gin2, sgc2 (one layer, two hops).
/// Weights are uniform in [-1, 1] / sqrt(f_in), then magnitude-pruned to `weight_density`.
ModelSpec zoo_model(const std::string& id, Index f_in, Index hidden, Index f_out, double weight_density,
                    std::uint64_t seed);
bool is_zoo_id(const std::string& id);

// --- IR ---------------------------------------------------------------------

inline constexpr int kIrVersion = 1;

std::string serialize_ir(const CompiledProgram& prog);
std::string serialize_density_sidecar(const CompiledProgram& prog);

struct StoredIr {
    ComputationGraph graph;
    Index n1 = 0;
    Index n2 = 0;
};
StoredIr parse_ir(const std::string& json_text, const std::string& name = "<string>");
StoredIr load_ir(const fs::path& path);

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, const std::string& content);

}  // namespace dynmap

#endif  // DYNMAP_IO_HPP
