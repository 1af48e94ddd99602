#ifndef WLP_LINALG_HPP
#define WLP_LINALG_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <wlp/field.hpp>

namespace wlp {

struct SparseEntry {
    std::uint32_t col;
    std::uint32_t val;
    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

using SparseRow = std::vector<SparseEntry>;

/// Row-major sparse matrix over a prime field. Column indices within a row are
/// strictly increasing and no zero is stored.
class SparseMatrix {
public:
    explicit SparseMatrix(std::size_t ncols = 0) : ncols_(ncols) {}

    /// Sorts the row, merges repeated columns and drops zeros.
    void add_row(SparseRow row, const PrimeField& field);
    /// Caller guarantees the invariant (checked in debug builds).
    void add_normalized_row(SparseRow row);

    std::size_t nrows() const noexcept { return rows_.size(); }
    std::size_t ncols() const noexcept { return ncols_; }
    std::size_t nnz() const noexcept;
    const std::vector<SparseRow>& rows() const noexcept { return rows_; }

    SparseMatrix transpose() const;

private:
    std::size_t ncols_;
    std::vector<SparseRow> rows_;
};

class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static DenseMatrix from_sparse(const SparseMatrix& m);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::uint32_t* row(std::size_t i) noexcept { return data_.data() + i * cols_; }
    const std::uint32_t* row(std::size_t i) const noexcept { return data_.data() + i * cols_; }
    std::uint32_t& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    std::uint32_t operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint32_t> data_;
};

enum class RankMethod { Auto, Dense, SparseSchur, Reference };

struct RankOptions {
    RankMethod method = RankMethod::Auto;
    /// Auto uses plain dense elimination below this many columns.
    std::size_t dense_threshold = 4000;
};

/// Exact rank. The result does not depend on the method.
std::size_t rank(const SparseMatrix& m, const PrimeField& field, RankOptions options = {});
std::size_t kernel_dim(const SparseMatrix& m, const PrimeField& field, RankOptions options = {});
std::size_t span_dim(std::span<const SparseRow> vectors, std::size_t dim, const PrimeField& field);

/// Blocked elimination with OpenMP-parallel trailing updates. Destroys `m`.
std::size_t dense_rank(DenseMatrix m, const PrimeField& field);
/// Unblocked serial elimination kept as the reference for the fast kernel.
std::size_t dense_rank_reference(DenseMatrix m, const PrimeField& field);

/// Basis of the right kernel {x : m x = 0}, one vector per free column.
std::vector<std::vector<std::uint32_t>> kernel_basis(DenseMatrix m, const PrimeField& field);

/// Incrementally grown row-echelon basis, for span computations that stop as
/// soon as a target dimension is reached.
class EchelonBasis {
public:
    EchelonBasis(std::size_t dim, const PrimeField& field) : dim_(dim), field_(field) {}

    /// Reduces `v` against the basis and keeps it if independent.
    bool insert(std::vector<std::uint32_t> v);
    std::size_t size() const noexcept { return pivots_.size(); }
    std::size_t dim() const noexcept { return dim_; }

private:
    std::size_t dim_;
    PrimeField field_;
    std::vector<std::size_t> pivots_;                // increasing
    std::vector<std::vector<std::uint32_t>> rows_;   // pivot entry normalised to 1
};

namespace detail {

/// a[j] = a[j] + m * b[j] mod p for j in [0, len).
void axpy_mod(std::uint32_t* a, const std::uint32_t* b, std::uint32_t m, std::size_t len, const PrimeField& field);

} // namespace detail

} // namespace wlp

#endif
