#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dynmap/io.hpp"

namespace dynmap {

static_assert(std::endian::native == std::endian::little, "binary matrix format assumes a little-endian host");

namespace {
constexpr char kMagic[4] = {'D', 'M', 'A', 'T'};
constexpr std::uint32_t kBinaryVersion = 1;
}  // namespace

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

DenseMatrixf parse_dense_text(std::istream& in, const std::string& name) {
    std::string line;
    std::size_t lineno = 0;
    auto next_content = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            const auto p = line.find_first_not_of(" \t\r");
            if (p != std::string::npos && line[p] != '#') return true;
        }
        return false;
    };
    if (!next_content()) throw ParseError(name, lineno, "missing 'rows cols' header");
    Index rows = 0, cols = 0;
    {
        std::istringstream is(line);
        std::string extra;
        if (!(is >> rows >> cols) || (is >> extra)) throw ParseError(name, lineno, "expected 'rows cols' header");
    }
    DenseMatrixf m(rows, cols, Layout::RowMajor);
    for (Index i = 0; i < rows; ++i) {
        if (!next_content())
            throw ParseError(name, lineno, "expected " + std::to_string(rows) + " rows, found " + std::to_string(i));
        std::istringstream is(line);
        Index j = 0;
        for (std::string tok; is >> tok; ++j) {
            if (j >= cols) throw ParseError(name, lineno, "more than " + std::to_string(cols) + " values in row");
            try {
                std::size_t used = 0;
                m(i, j) = std::stof(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ParseError(name, lineno, "value '" + tok + "' is not a number");
            }
        }
        if (j != cols)
            throw ParseError(name, lineno, "row has " + std::to_string(j) + " values, expected " + std::to_string(cols));
    }
    if (next_content()) throw ParseError(name, lineno, "trailing data after " + std::to_string(rows) + " rows");
    return m;
}

DenseMatrixf load_dense(const fs::path& path) {
    const std::string bytes = read_file(path);
    const std::string name = path.string();
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0) {
        constexpr std::size_t header = 4 + 4 + 8 + 8;
        if (bytes.size() < header) throw ParseError(name, 1, "truncated binary header");
        std::uint32_t version = 0;
        std::uint64_t rows = 0, cols = 0;
        std::memcpy(&version, bytes.data() + 4, 4);
        std::memcpy(&rows, bytes.data() + 8, 8);
        std::memcpy(&cols, bytes.data() + 16, 8);
        if (version != kBinaryVersion) throw ParseError(name, 1, "unsupported binary version " + std::to_string(version));
        if (bytes.size() != header + rows * cols * 4)
            throw ParseError(name, 1, "binary payload size does not match " + std::to_string(rows) + "x" +
                                          std::to_string(cols));
        DenseMatrixf m(rows, cols, Layout::RowMajor);
        std::memcpy(m.values().data(), bytes.data() + header, rows * cols * 4);
        return m;
    }
    std::istringstream in(bytes);
    return parse_dense_text(in, name);
}

void save_dense_text(const DenseMatrixf& m, const fs::path& path) {
    std::ostringstream os;
    os << std::setprecision(9);
    os << m.rows() << ' ' << m.cols() << '\n';
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
        os << '\n';
    }
    write_file(path, os.str());
}

void save_dense_binary(const DenseMatrixf& m, const fs::path& path) {
    const DenseMatrixf rm = transform_layout(m, Layout::RowMajor);
    std::string bytes(24 + rm.size() * 4, '\0');
    const std::uint64_t rows = rm.rows(), cols = rm.cols();
    std::memcpy(bytes.data(), kMagic, 4);
    std::memcpy(bytes.data() + 4, &kBinaryVersion, 4);
    std::memcpy(bytes.data() + 8, &rows, 8);
    std::memcpy(bytes.data() + 16, &cols, 8);
    if (rm.size()) std::memcpy(bytes.data() + 24, rm.values().data(), rm.size() * 4);
    write_file(path, bytes);
}

void save_dense(const DenseMatrixf& m, const fs::path& path) {
    if (path.extension() == ".dmat")
        save_dense_binary(m, path);
    else
        save_dense_text(m, path);
}

MatrixReff load_matrix(const fs::path& path) {
    const std::string bytes = read_file(path);
    if (bytes.rfind("%%MatrixMarket", 0) == 0 || bytes.rfind("%%matrixmarket", 0) == 0) {
        std::istringstream in(bytes);
        return MatrixReff(parse_matrix_market(in, path.string()));
    }
    return MatrixReff(load_dense(path));
}

}  // namespace dynmap
