#include <wlp/linalg.hpp>

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wlp {

// ---------------------------------------------------------------------------
// Sparse / dense containers

void SparseMatrix::add_row(SparseRow row, const PrimeField& field)
{
    for (const auto& e : row) {
        if (e.col >= ncols_) throw std::out_of_range("sparse entry column out of range");
    }
    std::sort(row.begin(), row.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });
    SparseRow out;
    out.reserve(row.size());
    for (const auto& e : row) {
        const auto v = field.reduce(e.val);
        if (!out.empty() && out.back().col == e.col) {
            out.back().val = field.add(out.back().val, v);
        } else {
            out.push_back({e.col, v});
        }
    }
    std::erase_if(out, [](const SparseEntry& e) { return e.val == 0; });
    rows_.push_back(std::move(out));
}

void SparseMatrix::add_normalized_row(SparseRow row)
{
#ifndef NDEBUG
    for (std::size_t i = 0; i < row.size(); ++i) {
        assert(row[i].col < ncols_ && row[i].val != 0);
        assert(i == 0 || row[i - 1].col < row[i].col);
    }
#endif
    rows_.push_back(std::move(row));
}

std::size_t SparseMatrix::nnz() const noexcept
{
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
}

SparseMatrix SparseMatrix::transpose() const
{
    std::vector<SparseRow> cols(ncols_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        for (const auto& e : rows_[i]) cols[e.col].push_back({static_cast<std::uint32_t>(i), e.val});
    }
    SparseMatrix t(rows_.size());
    for (auto& c : cols) t.add_normalized_row(std::move(c));
    return t;
}

DenseMatrix DenseMatrix::from_sparse(const SparseMatrix& m)
{
    DenseMatrix d(m.nrows(), m.ncols());
    for (std::size_t i = 0; i < m.nrows(); ++i) {
        auto* r = d.row(i);
        for (const auto& e : m.rows()[i]) r[e.col] = e.val;
    }
    return d;
}

// ---------------------------------------------------------------------------
// Modular reduction helpers.
//
// For p in (2^29, 2^30) we reduce with 32x32->64 multiplies only, which the
// compiler vectorises: fold the top 32 bits twice using r32 = 2^32 mod p, then
// one Barrett step with mu = floor(2^61 / p). Other primes go through `%`.

namespace {

struct FastReducer {
    std::uint64_t p, r32, mu;

    explicit FastReducer(std::uint32_t prime)
        : p(prime), r32((1ull << 32) % prime), mu((1ull << 61) / prime)
    {
    }

    // Any x < 2^64.
    std::uint32_t operator()(std::uint64_t x) const noexcept
    {
        std::uint64_t y = (x >> 32) * r32 + (x & 0xffffffffu);   // < 2^62 + 2^32
        std::uint64_t z = (y >> 32) * r32 + (y & 0xffffffffu);   // < 2^61
        return barrett(z);
    }

    // z < 2^61.
    std::uint32_t barrett(std::uint64_t z) const noexcept
    {
        std::uint64_t q = ((z >> 29) * mu) >> 32;
        std::uint64_t r = z - q * p;   // < 4p
        r = r >= 2 * p ? r - 2 * p : r;
        r = r >= p ? r - p : r;
        return static_cast<std::uint32_t>(r);
    }
};

struct SlowReducer {
    std::uint64_t p;
    explicit SlowReducer(std::uint32_t prime) : p(prime) {}
    std::uint32_t operator()(std::uint64_t x) const noexcept { return static_cast<std::uint32_t>(x % p); }
    std::uint32_t barrett(std::uint64_t z) const noexcept { return static_cast<std::uint32_t>(z % p); }
};

bool fast_path(const PrimeField& f) { return f.modulus() > (1u << 29); }

template <class Red>
void axpy_impl(std::uint32_t* __restrict a, const std::uint32_t* __restrict b, std::uint32_t m, std::size_t len,
               const Red& red)
{
    for (std::size_t j = 0; j < len; ++j) a[j] = red.barrett(a[j] + static_cast<std::uint64_t>(m) * b[j]);
}

// Sixteen products of two elements plus one element stay below 2^64.
constexpr std::size_t kLazy = 15;
constexpr std::size_t kPanel = 64;
constexpr std::size_t kColTile = 512;

// dst[j] += sum_t mult[t] * src[t][j] for j in [c0, c1), skipping zero multipliers.
template <class Red>
void accumulate_rows(std::uint32_t* __restrict dst, const std::uint32_t* const* src, const std::uint32_t* mult,
                     std::size_t k, std::size_t c0, std::size_t c1, const Red& red)
{
    std::uint32_t idx[kPanel];
    std::size_t nz = 0;
    for (std::size_t t = 0; t < k; ++t) {
        if (mult[t] != 0) idx[nz++] = static_cast<std::uint32_t>(t);
    }
    if (nz == 0) return;
    alignas(64) std::uint64_t acc[kColTile];
    for (std::size_t j0 = c0; j0 < c1; j0 += kColTile) {
        const std::size_t w = std::min(kColTile, c1 - j0);
        for (std::size_t j = 0; j < w; ++j) acc[j] = dst[j0 + j];
        std::size_t pending = 0;
        for (std::size_t s = 0; s < nz; ++s) {
            const std::uint64_t m = mult[idx[s]];
            const std::uint32_t* __restrict row = src[idx[s]] + j0;
            for (std::size_t j = 0; j < w; ++j) acc[j] += m * row[j];
            if (++pending == kLazy) {
                for (std::size_t j = 0; j < w; ++j) acc[j] = red(acc[j]);
                pending = 0;
            }
        }
        for (std::size_t j = 0; j < w; ++j) dst[j0 + j] = red(acc[j]);
    }
}

template <class Red>
std::size_t blocked_rank(DenseMatrix& a, const PrimeField& field, const Red& red)
{
    const std::size_t R = a.rows();
    const std::size_t C = a.cols();
    std::vector<std::uint32_t*> rows(R);
    for (std::size_t i = 0; i < R; ++i) rows[i] = a.row(i);
    // mult[i * kPanel + t]: multiple of panel pivot t added to row slot i.
    std::vector<std::uint32_t> mult(R * kPanel);
    const std::uint32_t p = field.modulus();

    std::size_t rank = 0;
    for (std::size_t c0 = 0; c0 < C && rank < R; c0 += kPanel) {
        const std::size_t c1 = std::min(C, c0 + kPanel);
        std::fill(mult.begin() + static_cast<std::ptrdiff_t>(rank * kPanel), mult.end(), 0u);

        // 1. factor the panel columns, recording multipliers.
        std::size_t k = 0;
        for (std::size_t c = c0; c < c1 && rank + k < R; ++c) {
            std::size_t piv = rank + k;
            while (piv < R && rows[piv][c] == 0) ++piv;
            if (piv == R) continue;
            const std::size_t top = rank + k;
            if (piv != top) {
                std::swap(rows[piv], rows[top]);
                std::swap_ranges(mult.begin() + static_cast<std::ptrdiff_t>(piv * kPanel),
                                 mult.begin() + static_cast<std::ptrdiff_t>(piv * kPanel + k),
                                 mult.begin() + static_cast<std::ptrdiff_t>(top * kPanel));
            }
            const std::uint32_t inv = field.inv(rows[top][c]);
            for (std::size_t i = top + 1; i < R; ++i) {
                const std::uint32_t f = rows[i][c];
                if (f == 0) continue;
                const std::uint32_t m = p - field.mul(f, inv);
                mult[i * kPanel + k] = m;
                axpy_impl(rows[i] + c, rows[top] + c, m, c1 - c, red);
            }
            ++k;
        }
        if (k == 0) continue;

        // 2. bring the pivot rows' trailing parts up to date, in order.
        const std::uint32_t* prow[kPanel];
        for (std::size_t t = 0; t < k; ++t) {
            prow[t] = rows[rank + t];
            if (t > 0) accumulate_rows(rows[rank + t], prow, &mult[(rank + t) * kPanel], t, c1, C, red);
        }

        // 3. trailing update of the remaining rows.
        const std::ptrdiff_t first = static_cast<std::ptrdiff_t>(rank + k);
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t i = first; i < static_cast<std::ptrdiff_t>(R); ++i) {
            accumulate_rows(rows[i], prow, &mult[static_cast<std::size_t>(i) * kPanel], k, c1, C, red);
        }
        rank += k;
    }
    return rank;
}

} // namespace

namespace detail {

void axpy_mod(std::uint32_t* a, const std::uint32_t* b, std::uint32_t m, std::size_t len, const PrimeField& field)
{
    if (fast_path(field))
        axpy_impl(a, b, m, len, FastReducer(field.modulus()));
    else
        axpy_impl(a, b, m, len, SlowReducer(field.modulus()));
}

} // namespace detail

std::size_t dense_rank(DenseMatrix m, const PrimeField& field)
{
    if (fast_path(field)) return blocked_rank(m, field, FastReducer(field.modulus()));
    return blocked_rank(m, field, SlowReducer(field.modulus()));
}

std::size_t dense_rank_reference(DenseMatrix m, const PrimeField& field)
{
    const std::size_t R = m.rows(), C = m.cols();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < C && rank < R; ++c) {
        std::size_t piv = rank;
        while (piv < R && m(piv, c) == 0) ++piv;
        if (piv == R) continue;
        if (piv != rank) std::swap_ranges(m.row(piv), m.row(piv) + C, m.row(rank));
        const auto inv = field.inv(m(rank, c));
        for (std::size_t i = rank + 1; i < R; ++i) {
            const auto f = m(i, c);
            if (f == 0) continue;
            const auto s = field.mul(f, inv);
            for (std::size_t j = c; j < C; ++j) m(i, j) = field.sub(m(i, j), field.mul(s, m(rank, j)));
        }
        ++rank;
    }
    return rank;
}

// ---------------------------------------------------------------------------
// Sparse front end: rows with distinct leading columns are an echelon set
// already; everything else is reduced against them and the Schur complement
// on the remaining columns goes to the dense kernel.

namespace {

std::size_t sparse_schur_rank(const SparseMatrix& m, const PrimeField& field)
{
    const std::size_t C = m.ncols();
    const auto& rows = m.rows();
    constexpr std::size_t kNone = SIZE_MAX;
    std::vector<std::size_t> pivot_row(C, kNone);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].empty()) continue;
        const auto lead = rows[i].front().col;
        auto& slot = pivot_row[lead];
        if (slot == kNone || rows[i].size() < rows[slot].size()) slot = i;
    }
    std::vector<char> is_pivot_row(rows.size(), 0);
    std::vector<std::uint32_t> schur_col(C, UINT32_MAX);
    std::size_t npiv = 0, nfree = 0;
    for (std::size_t c = 0; c < C; ++c) {
        if (pivot_row[c] != kNone) {
            is_pivot_row[pivot_row[c]] = 1;
            ++npiv;
        } else {
            schur_col[c] = static_cast<std::uint32_t>(nfree++);
        }
    }
    std::vector<std::uint32_t> pivot_inv(C, 0);
    for (std::size_t c = 0; c < C; ++c) {
        if (pivot_row[c] != kNone) pivot_inv[c] = field.inv(rows[pivot_row[c]].front().val);
    }

    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!is_pivot_row[i] && !rows[i].empty()) rest.push_back(i);
    }
    if (rest.empty() || nfree == 0) return npiv;

    DenseMatrix schur(rest.size(), nfree);
    const std::uint32_t p = field.modulus();
#pragma omp parallel
    {
        std::vector<std::uint32_t> v(C);
#pragma omp for schedule(dynamic, 8)
        for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rest.size()); ++r) {
            std::fill(v.begin(), v.end(), 0u);
            const auto& src = rows[rest[static_cast<std::size_t>(r)]];
            for (const auto& e : src) v[e.col] = e.val;
            for (std::size_t c = src.front().col; c < C; ++c) {
                if (v[c] == 0 || pivot_row[c] == kNone) continue;
                const std::uint32_t f = p - field.mul(v[c], pivot_inv[c]);
                for (const auto& e : rows[pivot_row[c]]) v[e.col] = field.add(v[e.col], field.mul(f, e.val));
            }
            auto* out = schur.row(static_cast<std::size_t>(r));
            for (std::size_t c = 0; c < C; ++c) {
                if (schur_col[c] != UINT32_MAX) out[schur_col[c]] = v[c];
            }
        }
    }
    return npiv + dense_rank(std::move(schur), field);
}

} // namespace

std::size_t rank(const SparseMatrix& m, const PrimeField& field, RankOptions options)
{
    if (m.nrows() == 0 || m.ncols() == 0) return 0;
    switch (options.method) {
    case RankMethod::Reference:
        return dense_rank_reference(DenseMatrix::from_sparse(m), field);
    case RankMethod::Dense:
        return dense_rank(DenseMatrix::from_sparse(m), field);
    case RankMethod::SparseSchur:
        return sparse_schur_rank(m, field);
    case RankMethod::Auto:
        break;
    }
    if (m.ncols() <= options.dense_threshold && m.nrows() <= options.dense_threshold)
        return dense_rank(DenseMatrix::from_sparse(m), field);
    return sparse_schur_rank(m, field);
}

std::size_t kernel_dim(const SparseMatrix& m, const PrimeField& field, RankOptions options)
{
    return m.ncols() - rank(m, field, options);
}

std::size_t span_dim(std::span<const SparseRow> vectors, std::size_t dim, const PrimeField& field)
{
    SparseMatrix m(dim);
    for (const auto& v : vectors) m.add_row(v, field);
    return rank(m, field);
}

// ---------------------------------------------------------------------------

std::vector<std::vector<std::uint32_t>> kernel_basis(DenseMatrix m, const PrimeField& field)
{
    const std::size_t R = m.rows(), C = m.cols();
    std::vector<std::size_t> pivcol;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < C && rank < R; ++c) {
        std::size_t piv = rank;
        while (piv < R && m(piv, c) == 0) ++piv;
        if (piv == R) continue;
        if (piv != rank) std::swap_ranges(m.row(piv), m.row(piv) + C, m.row(rank));
        const auto inv = field.inv(m(rank, c));
        for (std::size_t j = c; j < C; ++j) m(rank, j) = field.mul(m(rank, j), inv);
        for (std::size_t i = 0; i < R; ++i) {
            if (i == rank || m(i, c) == 0) continue;
            detail::axpy_mod(m.row(i) + c, m.row(rank) + c, field.neg(m(i, c)), C - c, field);
        }
        pivcol.push_back(c);
        ++rank;
    }
    std::vector<char> is_piv(C, 0);
    for (auto c : pivcol) is_piv[c] = 1;
    std::vector<std::vector<std::uint32_t>> basis;
    for (std::size_t f = 0; f < C; ++f) {
        if (is_piv[f]) continue;
        std::vector<std::uint32_t> v(C, 0);
        v[f] = 1;
        for (std::size_t r = 0; r < pivcol.size(); ++r) v[pivcol[r]] = field.neg(m(r, f));
        basis.push_back(std::move(v));
    }
    return basis;
}

bool EchelonBasis::insert(std::vector<std::uint32_t> v)
{
    if (v.size() != dim_) throw std::invalid_argument("vector length does not match basis dimension");
    for (std::size_t b = 0; b < pivots_.size(); ++b) {
        const auto c = pivots_[b];
        if (v[c] == 0) continue;
        detail::axpy_mod(v.data() + c, rows_[b].data() + c, field_.neg(v[c]), dim_ - c, field_);
    }
    std::size_t lead = 0;
    while (lead < dim_ && v[lead] == 0) ++lead;
    if (lead == dim_) return false;
    const auto inv = field_.inv(v[lead]);
    for (std::size_t j = lead; j < dim_; ++j) v[j] = field_.mul(v[j], inv);
    const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), lead) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, lead);
    rows_.insert(rows_.begin() + pos, std::move(v));
    return true;
}

} // namespace wlp
