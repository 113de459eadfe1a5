#ifndef DYNMAP_MATRIX_HPP
#define DYNMAP_MATRIX_HPP

// Dense and COO matrices with an explicit storage layout, plus the
// reference multiplication used as ground truth by every other module.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "dynmap/errors.hpp"

namespace dynmap {

using Index = std::size_t;
using Cycles = std::uint64_t;

enum class Layout { RowMajor, ColMajor };

inline const char* to_string(Layout l) { return l == Layout::RowMajor ? "row_major" : "col_major"; }

/// Half-open index interval [begin, end).
struct Range {
    Index begin = 0;
    Index end = 0;

    Index size() const { return end - begin; }
    bool operator==(const Range&) const = default;
};

template <typename Scalar>
class DenseMatrix {
public:
    using Scalar_t = Scalar;
    using EigenMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using StrideType = Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>;
    using MapType = Eigen::Map<EigenMatrix, Eigen::Unaligned, StrideType>;
    using ConstMapType = Eigen::Map<const EigenMatrix, Eigen::Unaligned, StrideType>;

    DenseMatrix() = default;

    DenseMatrix(Index rows, Index cols, Layout layout = Layout::RowMajor)
        : rows_(rows), cols_(cols), layout_(layout), values_(rows * cols, Scalar(0)) {}

    DenseMatrix(Index rows, Index cols, std::vector<Scalar> values, Layout layout = Layout::RowMajor)
        : rows_(rows), cols_(cols), layout_(layout), values_(std::move(values)) {
        if (values_.size() != rows_ * cols_)
            throw ShapeError("dense matrix: " + std::to_string(values_.size()) + " values for " +
                             std::to_string(rows_) + "x" + std::to_string(cols_));
    }

    /// Row-major matrix from nested initializer lists; all rows must have equal length.
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<Scalar>> rows) {
        const Index r = rows.size();
        const Index c = r == 0 ? 0 : rows.begin()->size();
        std::vector<Scalar> values;
        values.reserve(r * c);
        for (const auto& row : rows) {
            if (row.size() != c) throw ShapeError("dense matrix: ragged initializer");
            values.insert(values.end(), row.begin(), row.end());
        }
        return DenseMatrix(r, c, std::move(values));
    }

    template <typename Derived>
    static DenseMatrix from_eigen(const Eigen::MatrixBase<Derived>& m, Layout layout = Layout::RowMajor) {
        DenseMatrix out(static_cast<Index>(m.rows()), static_cast<Index>(m.cols()), layout);
        out.view() = m.template cast<Scalar>();
        return out;
    }

    static DenseMatrix identity(Index n, Layout layout = Layout::RowMajor) {
        DenseMatrix out(n, n, layout);
        for (Index i = 0; i < n; ++i) out(i, i) = Scalar(1);
        return out;
    }

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index size() const { return values_.size(); }
    Layout layout() const { return layout_; }

    std::span<const Scalar> values() const { return values_; }
    std::span<Scalar> values() { return values_; }

    Index offset(Index i, Index j) const {
        return layout_ == Layout::RowMajor ? i * cols_ + j : j * rows_ + i;
    }

    Scalar operator()(Index i, Index j) const { return values_[offset(i, j)]; }
    Scalar& operator()(Index i, Index j) { return values_[offset(i, j)]; }

    Scalar at(Index i, Index j) const {
        if (i >= rows_ || j >= cols_) throw ShapeError("dense matrix: index out of range");
        return (*this)(i, j);
    }

    /// Eigen view honoring the storage layout; expressions on it index logically.
    ConstMapType view() const { return ConstMapType(values_.data(), rows_, cols_, stride()); }
    MapType view() { return MapType(values_.data(), rows_, cols_, stride()); }

    /// Storage equality: same shape, layout and value sequence.
    bool operator==(const DenseMatrix&) const = default;

private:
    StrideType stride() const {
        // Eigen::Stride<Outer, Inner>: address(i, j) = i * inner + j * outer for a column-major map.
        const auto major = static_cast<Eigen::Index>(std::max<Index>(1, layout_ == Layout::RowMajor ? cols_ : rows_));
        return layout_ == Layout::RowMajor ? StrideType(1, major) : StrideType(major, 1);
    }

    Index rows_ = 0;
    Index cols_ = 0;
    Layout layout_ = Layout::RowMajor;
    std::vector<Scalar> values_;
};

template <typename Scalar>
struct CooEntry {
    Index row = 0;
    Index col = 0;
    Scalar value = Scalar(0);

    bool operator==(const CooEntry&) const = default;
};

/// Coordinate-format sparse matrix, always held in canonical form:
/// in-range indices, unique coordinates, no zero values, sorted by the layout order.
template <typename Scalar>
class CooMatrix {
public:
    using Entry = CooEntry<Scalar>;

    CooMatrix() = default;

    CooMatrix(Index rows, Index cols, Layout layout = Layout::RowMajor)
        : rows_(rows), cols_(cols), layout_(layout) {}

    /// Canonicalizes arbitrary entries: duplicates are summed, zeros dropped, order fixed.
    CooMatrix(Index rows, Index cols, std::vector<Entry> entries, Layout layout = Layout::RowMajor)
        : rows_(rows), cols_(cols), layout_(layout), entries_(std::move(entries)) {
        for (const auto& e : entries_)
            if (e.row >= rows_ || e.col >= cols_)
                throw ShapeError("coo matrix: entry (" + std::to_string(e.row) + "," +
                                 std::to_string(e.col) + ") outside " + std::to_string(rows_) + "x" +
                                 std::to_string(cols_));
        std::stable_sort(entries_.begin(), entries_.end(), order_less(layout_));
        std::vector<Entry> merged;
        merged.reserve(entries_.size());
        for (const auto& e : entries_) {
            if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col)
                merged.back().value += e.value;
            else
                merged.push_back(e);
        }
        std::erase_if(merged, [](const Entry& e) { return e.value == Scalar(0); });
        entries_ = std::move(merged);
    }

    /// Adopts entries that the caller asserts are already canonical. Throws FormatError otherwise.
    static CooMatrix from_canonical(Index rows, Index cols, std::vector<Entry> entries,
                                    Layout layout = Layout::RowMajor) {
        CooMatrix out(rows, cols, layout);
        const auto less = order_less(layout);
        for (std::size_t k = 0; k < entries.size(); ++k) {
            const auto& e = entries[k];
            if (e.row >= rows || e.col >= cols) throw ShapeError("coo matrix: entry out of range");
            if (e.value == Scalar(0)) throw FormatError("coo matrix: explicit zero entry");
            if (k > 0) {
                const auto& p = entries[k - 1];
                if (p.row == e.row && p.col == e.col)
                    throw FormatError("coo matrix: duplicate coordinate (" + std::to_string(e.row) + "," +
                                      std::to_string(e.col) + ")");
                if (!less(p, e)) throw FormatError("coo matrix: entries not sorted for layout");
            }
        }
        out.entries_ = std::move(entries);
        return out;
    }

    static CooMatrix identity(Index n, Layout layout = Layout::RowMajor) {
        std::vector<Entry> e;
        e.reserve(n);
        for (Index i = 0; i < n; ++i) e.push_back({i, i, Scalar(1)});
        return from_canonical(n, n, std::move(e), layout);
    }

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index nnz() const { return entries_.size(); }
    Layout layout() const { return layout_; }
    std::span<const Entry> entries() const { return entries_; }

    bool operator==(const CooMatrix&) const = default;

    static auto order_less(Layout layout) {
        return [layout](const Entry& a, const Entry& b) {
            return layout == Layout::RowMajor ? std::pair(a.row, a.col) < std::pair(b.row, b.col)
                                              : std::pair(a.col, a.row) < std::pair(b.col, b.row);
        };
    }

private:
    Index rows_ = 0;
    Index cols_ = 0;
    Layout layout_ = Layout::RowMajor;
    std::vector<Entry> entries_;
};

/// Nonzero count over total element count of one matrix or block.
struct DensityRecord {
    Index nnz = 0;
    Index total = 0;

    double density() const { return total == 0 ? 0.0 : static_cast<double>(nnz) / static_cast<double>(total); }

    DensityRecord& operator+=(const DensityRecord& o) {
        nnz += o.nnz;
        total += o.total;
        return *this;
    }
    bool operator==(const DensityRecord&) const = default;
};

/// Either storage format, plus the profiled density once known.
template <typename Scalar>
class MatrixRef {
public:
    using Dense = DenseMatrix<Scalar>;
    using Sparse = CooMatrix<Scalar>;

    MatrixRef() = default;
    MatrixRef(Dense m) : storage_(std::move(m)) {}
    MatrixRef(Sparse m) : storage_(std::move(m)) {}

    bool is_sparse() const { return std::holds_alternative<Sparse>(storage_); }
    const Dense& dense() const { return std::get<Dense>(storage_); }
    const Sparse& sparse() const { return std::get<Sparse>(storage_); }

    Index rows() const { return std::visit([](const auto& m) { return m.rows(); }, storage_); }
    Index cols() const { return std::visit([](const auto& m) { return m.cols(); }, storage_); }
    Layout layout() const { return std::visit([](const auto& m) { return m.layout(); }, storage_); }

    const std::optional<DensityRecord>& density() const { return density_; }
    void set_density(DensityRecord d) { density_ = d; }

    template <typename Visitor>
    decltype(auto) visit(Visitor&& v) const { return std::visit(std::forward<Visitor>(v), storage_); }

private:
    std::variant<Dense, Sparse> storage_;
    std::optional<DensityRecord> density_;
};

/// Naive triple loop, k ascending. Ground truth for all primitive equivalence checks.
template <typename Scalar>
DenseMatrix<Scalar> dense_matmul_oracle(const DenseMatrix<Scalar>& x, const DenseMatrix<Scalar>& y) {
    if (x.cols() != y.rows())
        throw ShapeError("matmul: " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) + " times " +
                         std::to_string(y.rows()) + "x" + std::to_string(y.cols()));
    DenseMatrix<Scalar> z(x.rows(), y.cols());
    for (Index i = 0; i < x.rows(); ++i)
        for (Index j = 0; j < y.cols(); ++j) {
            Scalar sum(0);
            for (Index k = 0; k < x.cols(); ++k) sum += x(i, k) * y(k, j);
            z(i, j) = sum;
        }
    return z;
}

namespace detail {
inline void check_ranges(Index rows, Index cols, Range r, Range c) {
    if (r.begin > r.end || c.begin > c.end || r.end > rows || c.end > cols)
        throw ShapeError("slice: range [" + std::to_string(r.begin) + "," + std::to_string(r.end) + ")x[" +
                         std::to_string(c.begin) + "," + std::to_string(c.end) + ") outside " +
                         std::to_string(rows) + "x" + std::to_string(cols));
}
}  // namespace detail

template <typename Scalar>
DenseMatrix<Scalar> slice_block(const DenseMatrix<Scalar>& m, Range rows, Range cols) {
    detail::check_ranges(m.rows(), m.cols(), rows, cols);
    DenseMatrix<Scalar> out(rows.size(), cols.size(), m.layout());
    if (m.layout() == Layout::RowMajor) {
        for (Index i = 0; i < rows.size(); ++i) {
            const auto src = m.values().subspan(m.offset(rows.begin + i, cols.begin), cols.size());
            std::copy(src.begin(), src.end(), out.values().begin() + static_cast<std::ptrdiff_t>(i * cols.size()));
        }
    } else {
        for (Index j = 0; j < cols.size(); ++j) {
            const auto src = m.values().subspan(m.offset(rows.begin, cols.begin + j), rows.size());
            std::copy(src.begin(), src.end(), out.values().begin() + static_cast<std::ptrdiff_t>(j * rows.size()));
        }
    }
    return out;
}

template <typename Scalar>
CooMatrix<Scalar> slice_block(const CooMatrix<Scalar>& m, Range rows, Range cols) {
    detail::check_ranges(m.rows(), m.cols(), rows, cols);
    using Entry = CooEntry<Scalar>;
    const auto all = m.entries();
    // Narrow by the major index first; filtering a sorted list keeps it sorted.
    const bool row_major = m.layout() == Layout::RowMajor;
    const Range major = row_major ? rows : cols;
    auto major_of = [row_major](const Entry& e) { return row_major ? e.row : e.col; };
    auto first = std::partition_point(all.begin(), all.end(), [&](const Entry& e) { return major_of(e) < major.begin; });
    auto last = std::partition_point(first, all.end(), [&](const Entry& e) { return major_of(e) < major.end; });
    std::vector<Entry> picked;
    for (auto it = first; it != last; ++it)
        if (it->row >= rows.begin && it->row < rows.end && it->col >= cols.begin && it->col < cols.end)
            picked.push_back({it->row - rows.begin, it->col - cols.begin, it->value});
    return CooMatrix<Scalar>::from_canonical(rows.size(), cols.size(), std::move(picked), m.layout());
}

template <typename Scalar>
MatrixRef<Scalar> slice_block(const MatrixRef<Scalar>& m, Range rows, Range cols) {
    return m.visit([&](const auto& inner) { return MatrixRef<Scalar>(slice_block(inner, rows, cols)); });
}

enum class ActivationKind { ReLU, PReLU };

struct Activation {
    ActivationKind kind = ActivationKind::ReLU;
    double slope = 0.25;  // PReLU negative-side slope
    bool enabled = false;

    bool operator==(const Activation&) const = default;
};

template <typename Scalar>
DenseMatrix<Scalar> elementwise_activation(DenseMatrix<Scalar> m, ActivationKind kind, Scalar slope = Scalar(0)) {
    auto a = m.view().array();
    if (kind == ActivationKind::ReLU)
        a = (a > Scalar(0)).select(a, Scalar(0));
    else
        a = (a >= Scalar(0)).select(a, a * slope);
    return m;
}

template <typename Scalar>
DenseMatrix<Scalar> elementwise_activation(DenseMatrix<Scalar> m, const Activation& act) {
    if (!act.enabled) return m;
    return elementwise_activation(std::move(m), act.kind, static_cast<Scalar>(act.slope));
}

/// Logical equality independent of layout.
template <typename Scalar>
bool same_elements(const DenseMatrix<Scalar>& a, const DenseMatrix<Scalar>& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a.view() == b.view();
}

/// max|a - b| / max(1, max|b|). Norm-wise so near-cancelling entries do not dominate.
template <typename Scalar>
double relative_error(const DenseMatrix<Scalar>& a, const DenseMatrix<Scalar>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("relative_error: shape mismatch");
    if (a.size() == 0) return 0.0;
    const double diff = (a.view().template cast<double>() - b.view().template cast<double>()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, static_cast<double>(b.view().template cast<double>().cwiseAbs().maxCoeff()));
    return diff / scale;
}

using DenseMatrixf = DenseMatrix<float>;
using CooMatrixf = CooMatrix<float>;
using MatrixReff = MatrixRef<float>;

}  // namespace dynmap

#endif  // DYNMAP_MATRIX_HPP
