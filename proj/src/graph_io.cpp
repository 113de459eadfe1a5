#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dynmap/io.hpp"

namespace dynmap {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string tok; is >> tok;) out.push_back(tok);
    return out;
}

Index parse_index(const std::string& tok, const std::string& file, std::size_t line, const char* what) {
    Index v = 0;
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ParseError(file, line, std::string(what) + " '" + tok + "' is not a non-negative integer");
    return v;
}

float parse_value(const std::string& tok, const std::string& file, std::size_t line) {
    try {
        std::size_t used = 0;
        const float v = std::stof(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(file, line, "value '" + tok + "' is not a number");
    }
}

Graph parse_edge_list_lines(std::istream& in, const std::string& name, std::string first_line) {
    std::vector<CooEntry<float>> edges;
    std::optional<Index> declared;
    Index max_id = 0;
    bool any = false;
    std::size_t lineno = 0;
    std::string line = std::move(first_line);
    bool have_line = true;
    while (have_line || std::getline(in, line)) {
        have_line = false;
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#' || t[0] == '%') {
            const std::string body = trim(t.substr(1));
            if (body.rfind("vertices:", 0) == 0)
                declared = parse_index(trim(body.substr(9)), name, lineno, "vertex count");
            continue;
        }
        const auto tok = split_ws(t);
        if (tok.size() < 2 || tok.size() > 3)
            throw ParseError(name, lineno, "expected 'src dst [weight]', got " + std::to_string(tok.size()) + " fields");
        const Index src = parse_index(tok[0], name, lineno, "source id");
        const Index dst = parse_index(tok[1], name, lineno, "destination id");
        const float w = tok.size() == 3 ? parse_value(tok[2], name, lineno) : 1.0f;
        if (declared && (src >= *declared || dst >= *declared))
            throw ParseError(name, lineno, "vertex id exceeds declared count " + std::to_string(*declared));
        max_id = std::max({max_id, src, dst});
        any = true;
        edges.push_back({dst, src, w});
    }
    const Index n = declared.value_or(any ? max_id + 1 : 0);
    return Graph{n, CooMatrixf(n, n, std::move(edges))};
}

}  // namespace

CooMatrixf parse_matrix_market(std::istream& in, const std::string& name) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(name, 1, "empty file");
    ++lineno;
    std::vector<std::string> header;
    for (const auto& tok : split_ws(line)) {
        std::string low = tok;
        for (auto& ch : low) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        header.push_back(low);
    }
    if (header.size() != 5 || header[0] != "%%matrixmarket" || header[1] != "matrix")
        throw ParseError(name, lineno, "not a Matrix Market header");
    if (header[2] != "coordinate") throw ParseError(name, lineno, "only coordinate Matrix Market files are supported");
    const std::string& field = header[3];
    const std::string& symmetry = header[4];
    if (field != "real" && field != "integer" && field != "pattern")
        throw ParseError(name, lineno, "unsupported field type '" + field + "'");
    if (symmetry != "general" && symmetry != "symmetric")
        throw ParseError(name, lineno, "unsupported symmetry '" + symmetry + "'");

    Index rows = 0, cols = 0, nnz = 0;
    bool have_size = false;
    std::vector<CooEntry<float>> entries;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;
        const auto tok = split_ws(t);
        if (!have_size) {
            if (tok.size() != 3) throw ParseError(name, lineno, "expected 'rows cols nnz'");
            rows = parse_index(tok[0], name, lineno, "row count");
            cols = parse_index(tok[1], name, lineno, "column count");
            nnz = parse_index(tok[2], name, lineno, "entry count");
            have_size = true;
            entries.reserve(nnz);
            continue;
        }
        const std::size_t want = field == "pattern" ? 2 : 3;
        if (tok.size() != want)
            throw ParseError(name, lineno, "expected " + std::to_string(want) + " fields, got " + std::to_string(tok.size()));
        const Index i = parse_index(tok[0], name, lineno, "row index");
        const Index j = parse_index(tok[1], name, lineno, "column index");
        if (i == 0 || j == 0 || i > rows || j > cols)
            throw ParseError(name, lineno, "index (" + tok[0] + "," + tok[1] + ") outside 1.." + std::to_string(rows) +
                                               " x 1.." + std::to_string(cols));
        const float v = field == "pattern" ? 1.0f : parse_value(tok[2], name, lineno);
        entries.push_back({i - 1, j - 1, v});
        if (symmetry == "symmetric" && i != j) entries.push_back({j - 1, i - 1, v});
    }
    if (!have_size) throw ParseError(name, lineno, "missing size line");
    return CooMatrixf(rows, cols, std::move(entries));
}

Graph parse_graph(std::istream& in, const std::string& name) {
    std::string first;
    if (!std::getline(in, first)) return Graph{0, CooMatrixf(0, 0)};
    if (trim(first).rfind("%%MatrixMarket", 0) == 0 || trim(first).rfind("%%matrixmarket", 0) == 0) {
        std::stringstream rest;
        rest << first << '\n' << in.rdbuf();
        CooMatrixf a = parse_matrix_market(rest, name);
        if (a.rows() != a.cols())
            throw ParseError(name, 1, "adjacency must be square, got " + std::to_string(a.rows()) + "x" +
                                          std::to_string(a.cols()));
        const Index n = a.rows();
        return Graph{n, std::move(a)};
    }
    return parse_edge_list_lines(in, name, first);
}

Graph load_graph(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    return parse_graph(in, path.string());
}

void save_edge_list(const Graph& g, const fs::path& path) {
    std::vector<CooEntry<float>> edges(g.adjacency.entries().begin(), g.adjacency.entries().end());
    std::sort(edges.begin(), edges.end(),
              [](const auto& a, const auto& b) { return std::pair(a.col, a.row) < std::pair(b.col, b.row); });
    std::ostringstream os;
    os << std::setprecision(9);
    os << "# vertices: " << g.num_vertices << '\n';
    for (const auto& e : edges) {
        os << e.col << ' ' << e.row;
        if (e.value != 1.0f) os << ' ' << e.value;
        os << '\n';
    }
    write_file(path, os.str());
}

}  // namespace dynmap
