#include <wlp/apolar.hpp>

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

namespace wlp {

namespace {

constexpr int kBinomMax = 160;

struct BinomialTable {
    std::uint64_t c[kBinomMax][kBinomMax] = {};
    BinomialTable()
    {
        for (int n = 0; n < kBinomMax; ++n) {
            c[n][0] = 1;
            for (int k = 1; k <= n; ++k) {
                const auto a = c[n - 1][k - 1], b = c[n - 1][k];
                c[n][k] = (a > UINT64_MAX - b) ? UINT64_MAX : a + b;
            }
        }
    }
};

const BinomialTable& binomials()
{
    static const BinomialTable table;
    return table;
}

// Number of monomials of degree `rem` in `k` variables (k >= 1).
inline std::uint64_t count(std::int64_t rem, int k) noexcept { return binomial(rem + k - 1, k - 1); }

} // namespace

std::uint64_t binomial(std::int64_t n, std::int64_t k) noexcept
{
    if (k < 0 || n < 0 || k > n) return 0;
    if (n < kBinomMax) return binomials().c[n][k];
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (r > UINT64_MAX) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(r);
}

std::uint64_t monomial_count(int n, int j) noexcept
{
    if (n < 1 || j < 0) return (n == 0 && j == 0) ? 1 : 0;
    return count(j, n);
}

// Monomials are ordered by the exponent of the last variable, then
// recursively by the remaining ones; this is grevlex, largest first.
std::size_t monomial_rank(std::span<const std::uint8_t> e) noexcept
{
    std::int64_t rem = 0;
    for (auto x : e) rem += x;
    std::size_t r = 0;
    for (std::size_t k = e.size(); k >= 2; --k) {
        const int kk = static_cast<int>(k);
        const std::int64_t ek = e[k - 1];
        r += count(rem, kk) - count(rem - ek, kk);
        rem -= ek;
    }
    return r;
}

std::vector<std::uint8_t> monomial_unrank(int n, int j, std::size_t index)
{
    if (n < 1 || j < 0 || index >= monomial_count(n, j)) throw ApolarError("monomial index out of range");
    std::vector<std::uint8_t> e(static_cast<std::size_t>(n), 0);
    std::int64_t rem = j;
    for (int k = n; k >= 2; --k) {
        // Largest ek with count(rem, k) - count(rem - ek, k) <= index.
        const std::uint64_t total = count(rem, k);
        std::int64_t ek = 0;
        while (ek < rem && total - count(rem - ek - 1, k) <= index) ++ek;
        index -= total - count(rem - ek, k);
        e[static_cast<std::size_t>(k - 1)] = static_cast<std::uint8_t>(ek);
        rem -= ek;
    }
    e[0] = static_cast<std::uint8_t>(rem);
    return e;
}

MonomialBasis::MonomialBasis(int n, int j) : n_(n), j_(j)
{
    if (n < 1 || j < 0 || j > 255) throw ApolarError("monomial basis needs n >= 1 and 0 <= j <= 255");
    const auto c = monomial_count(n, j);
    if (c > (1ull << 28)) throw ApolarError("monomial basis too large");
    size_ = static_cast<std::size_t>(c);
    exps_.assign(size_ * static_cast<std::size_t>(n), 0);
    // Emit in rank order: recurse on the last variable's exponent.
    std::vector<std::uint8_t> cur(static_cast<std::size_t>(n), 0);
    std::size_t pos = 0;
    auto rec = [&](auto&& self, int k, int rem) -> void {
        if (k == 1) {
            cur[0] = static_cast<std::uint8_t>(rem);
            std::copy(cur.begin(), cur.end(), exps_.begin() + static_cast<std::ptrdiff_t>(pos * cur.size()));
            ++pos;
            return;
        }
        for (int e = 0; e <= rem; ++e) {
            cur[static_cast<std::size_t>(k - 1)] = static_cast<std::uint8_t>(e);
            self(self, k - 1, rem - e);
        }
        cur[static_cast<std::size_t>(k - 1)] = 0;
    };
    rec(rec, n, j);
}

std::size_t MonomialBasis::rank(std::span<const std::uint8_t> e) const noexcept { return monomial_rank(e); }

std::shared_ptr<const MonomialBasis> monomial_basis(int n, int j)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{n, j}];
    if (!slot) slot = std::make_shared<MonomialBasis>(n, j);
    return slot;
}

// ---------------------------------------------------------------------------

GradedForm::GradedForm(int n, int degree, const PrimeField& field) : n_(n), degree_(degree), field_(field)
{
    if (n < 1 || degree < 0) throw ApolarError("form needs n >= 1 and degree >= 0");
}

GradedForm GradedForm::constant(int n, std::uint32_t c, const PrimeField& field)
{
    GradedForm f(n, 0, field);
    c = field.reduce(c);
    if (c != 0) f.terms_.push_back({0, c});
    return f;
}

GradedForm GradedForm::monomial(std::span<const std::uint8_t> exps, std::uint32_t c, const PrimeField& field)
{
    int deg = 0;
    for (auto x : exps) deg += x;
    GradedForm f(static_cast<int>(exps.size()), deg, field);
    c = field.reduce(c);
    if (c != 0) f.terms_.push_back({static_cast<std::uint32_t>(monomial_rank(exps)), c});
    return f;
}

GradedForm GradedForm::from_dense(int n, int degree, std::span<const std::uint32_t> coeffs, const PrimeField& field)
{
    GradedForm f(n, degree, field);
    if (coeffs.size() != monomial_count(n, degree)) throw ApolarError("dense coefficient vector has wrong length");
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const auto c = field.reduce(coeffs[i]);
        if (c != 0) f.terms_.push_back({static_cast<std::uint32_t>(i), c});
    }
    return f;
}

std::uint32_t GradedForm::coeff(std::size_t index) const noexcept
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), index,
                               [](const Term& t, std::size_t i) { return t.index < i; });
    return (it != terms_.end() && it->index == index) ? it->coeff : 0;
}

std::vector<std::uint32_t> GradedForm::to_dense() const
{
    std::vector<std::uint32_t> v(static_cast<std::size_t>(monomial_count(n_, degree_)), 0);
    for (const auto& t : terms_) v[t.index] = t.coeff;
    return v;
}

GradedForm GradedForm::operator+(const GradedForm& o) const
{
    if (n_ != o.n_ || degree_ != o.degree_ || !(field_ == o.field_)) throw ApolarError("adding incompatible forms");
    GradedForm r(n_, degree_, field_);
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        if (j == o.terms_.size() || (i < terms_.size() && terms_[i].index < o.terms_[j].index)) {
            r.terms_.push_back(terms_[i++]);
        } else if (i == terms_.size() || o.terms_[j].index < terms_[i].index) {
            r.terms_.push_back(o.terms_[j++]);
        } else {
            const auto c = field_.add(terms_[i].coeff, o.terms_[j].coeff);
            if (c != 0) r.terms_.push_back({terms_[i].index, c});
            ++i;
            ++j;
        }
    }
    return r;
}

GradedForm GradedForm::operator-(const GradedForm& o) const { return *this + o.scaled(field_.modulus() - 1); }

GradedForm GradedForm::scaled(std::uint32_t c) const
{
    GradedForm r(n_, degree_, field_);
    c = field_.reduce(c);
    if (c == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.index, field_.mul(t.coeff, c)});
    return r;
}

std::string GradedForm::to_string() const
{
    if (terms_.empty()) return "0";
    auto basis = monomial_basis(n_, degree_);
    std::string out;
    const auto p = field_.modulus();
    for (const auto& t : terms_) {
        const bool negative = t.coeff > p / 2;
        const std::uint64_t mag = negative ? p - t.coeff : t.coeff;
        if (out.empty())
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        std::string mono;
        const auto e = basis->exps(t.index);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += "X" + std::to_string(i + 1);
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty())
            out += std::to_string(mag);
        else if (mag == 1)
            out += mono;
        else
            out += std::to_string(mag) + "*" + mono;
    }
    return out;
}

LinearForm::LinearForm(std::vector<std::uint32_t> coeffs, const PrimeField& field) : coeffs_(std::move(coeffs))
{
    if (coeffs_.empty()) throw ApolarError("linear form needs at least one variable");
    bool nonzero = false;
    for (auto& c : coeffs_) {
        c = field.reduce(c);
        nonzero = nonzero || c != 0;
    }
    if (!nonzero) throw ApolarError("linear form is zero");
}

LinearForm moment_form(int n, std::uint32_t alpha, const PrimeField& field)
{
    if (n < 1) throw ApolarError("moment_form needs n >= 1");
    std::vector<std::uint32_t> c(static_cast<std::size_t>(n));
    std::uint32_t x = 1;
    alpha = field.reduce(alpha);
    for (auto& v : c) {
        v = x;
        x = field.mul(x, alpha);
    }
    return LinearForm(std::move(c), field);
}

// ---------------------------------------------------------------------------

namespace {

GradedForm contract_once(const LinearForm& l, const GradedForm& f)
{
    const int n = f.nvars();
    const auto& field = f.field();
    if (f.degree() == 0) return GradedForm(n, 0, field);
    auto basis = monomial_basis(n, f.degree());
    std::vector<std::uint32_t> out(static_cast<std::size_t>(monomial_count(n, f.degree() - 1)), 0);
    std::vector<std::uint8_t> e(static_cast<std::size_t>(n));
    const auto& lc = l.coeffs();
    for (const auto& t : f.terms()) {
        const auto src = basis->exps(t.index);
        std::copy(src.begin(), src.end(), e.begin());
        for (int i = 0; i < n; ++i) {
            if (e[static_cast<std::size_t>(i)] == 0 || lc[static_cast<std::size_t>(i)] == 0) continue;
            const auto mult = field.mul(lc[static_cast<std::size_t>(i)],
                                        field.mul(t.coeff, e[static_cast<std::size_t>(i)]));
            --e[static_cast<std::size_t>(i)];
            auto& slot = out[monomial_rank(e)];
            slot = field.add(slot, mult);
            ++e[static_cast<std::size_t>(i)];
        }
    }
    return GradedForm::from_dense(n, f.degree() - 1, out, field);
}

} // namespace

GradedForm contract(const LinearForm& l, int e, const GradedForm& f)
{
    if (l.nvars() != f.nvars()) throw ApolarError("contract: variable count mismatch");
    if (e < 0) throw ApolarError("contract: negative power");
    if (e > f.degree()) return GradedForm(f.nvars(), 0, f.field());
    GradedForm r = f;
    for (int i = 0; i < e && !r.is_zero(); ++i) r = contract_once(l, r);
    if (r.is_zero()) return GradedForm(f.nvars(), f.degree() - e, f.field());
    return r;
}

GradedForm contract_monomial(std::span<const std::uint8_t> a, const GradedForm& f)
{
    const int n = f.nvars();
    if (a.size() != static_cast<std::size_t>(n)) throw ApolarError("contract_monomial: variable count mismatch");
    int deg_a = 0;
    for (auto x : a) deg_a += x;
    const auto& field = f.field();
    if (deg_a > f.degree()) return GradedForm(n, 0, field);
    auto basis = monomial_basis(n, f.degree());
    std::vector<std::uint32_t> out(static_cast<std::size_t>(monomial_count(n, f.degree() - deg_a)), 0);
    std::vector<std::uint8_t> e(static_cast<std::size_t>(n));
    for (const auto& t : f.terms()) {
        const auto src = basis->exps(t.index);
        bool divides = true;
        std::uint32_t c = t.coeff;
        for (int i = 0; i < n && divides; ++i) {
            const auto bi = src[static_cast<std::size_t>(i)], ai = a[static_cast<std::size_t>(i)];
            if (bi < ai) {
                divides = false;
                break;
            }
            for (int r = 0; r < ai; ++r) c = field.mul(c, static_cast<std::uint32_t>(bi - r));
            e[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(bi - ai);
        }
        if (!divides) continue;
        auto& slot = out[monomial_rank(e)];
        slot = field.add(slot, c);
    }
    return GradedForm::from_dense(n, f.degree() - deg_a, out, field);
}

GradedForm multiply(const GradedForm& f, const GradedForm& g)
{
    if (f.nvars() != g.nvars() || !(f.field() == g.field())) throw ApolarError("multiply: incompatible forms");
    const int n = f.nvars();
    const auto& field = f.field();
    const int deg = f.degree() + g.degree();
    if (f.is_zero() || g.is_zero()) return GradedForm(n, deg, field);
    auto bf = monomial_basis(n, f.degree());
    auto bg = monomial_basis(n, g.degree());
    std::vector<std::uint32_t> out(static_cast<std::size_t>(monomial_count(n, deg)), 0);
    // Iterate the larger form in the inner loop.
    const bool swap = f.terms().size() > g.terms().size();
    const auto& outer = swap ? g : f;
    const auto& inner = swap ? f : g;
    const auto& bo = swap ? bg : bf;
    const auto& bi = swap ? bf : bg;
    std::vector<std::uint8_t> e(static_cast<std::size_t>(n));
    for (const auto& a : outer.terms()) {
        const auto ea = bo->exps(a.index);
        for (const auto& b : inner.terms()) {
            const auto eb = bi->exps(b.index);
            for (int i = 0; i < n; ++i)
                e[static_cast<std::size_t>(i)] =
                    static_cast<std::uint8_t>(ea[static_cast<std::size_t>(i)] + eb[static_cast<std::size_t>(i)]);
            auto& slot = out[monomial_rank(e)];
            slot = field.add(slot, field.mul(a.coeff, b.coeff));
        }
    }
    return GradedForm::from_dense(n, deg, out, field);
}

GradedForm power(const GradedForm& f, int k)
{
    if (k < 0) throw ApolarError("power: negative exponent");
    GradedForm r = GradedForm::constant(f.nvars(), 1, f.field());
    for (int i = 0; i < k; ++i) r = multiply(r, f);
    return r;
}

// ---------------------------------------------------------------------------

std::uint32_t determinant(std::vector<std::vector<std::uint32_t>> m, const PrimeField& field)
{
    const std::size_t N = m.size();
    for (const auto& row : m) {
        if (row.size() != N) throw ApolarError("determinant of a non-square matrix");
    }
    std::uint32_t det = 1;
    for (std::size_t c = 0; c < N; ++c) {
        std::size_t piv = c;
        while (piv < N && m[piv][c] == 0) ++piv;
        if (piv == N) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = field.neg(det);
        }
        det = field.mul(det, m[c][c]);
        const auto inv = field.inv(m[c][c]);
        for (std::size_t i = c + 1; i < N; ++i) {
            if (m[i][c] == 0) continue;
            const auto f = field.mul(m[i][c], inv);
            for (std::size_t j = c; j < N; ++j) m[i][j] = field.sub(m[i][j], field.mul(f, m[c][j]));
        }
    }
    return det;
}

namespace {

int permutation_sign(std::span<const int> perm)
{
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
    }
    return inversions % 2 == 0 ? 1 : -1;
}

// Calls fn(subset) for every k-subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_subset(int n, int k, Fn&& fn)
{
    if (k > n || k < 0) return;
    std::vector<int> s(static_cast<std::size_t>(k));
    std::iota(s.begin(), s.end(), 0);
    while (true) {
        fn(std::span<const int>(s));
        int i = k - 1;
        while (i >= 0 && s[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) return;
        ++s[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
    }
}

void check_distinct(std::span<const std::uint32_t> v, const PrimeField& field, const char* what)
{
    std::vector<std::uint32_t> r;
    for (auto x : v) r.push_back(field.reduce(x));
    std::sort(r.begin(), r.end());
    if (std::adjacent_find(r.begin(), r.end()) != r.end()) throw ApolarError(std::string(what) + ": repeated parameter");
}

// Adds sign * det[X_{row0 + t + cols[pi(t)]}] over permutations pi to `out`
// (row offsets r = row0 + t, column c contributes variable index r + c).
void add_variable_minor(std::span<const int> cols, std::uint32_t scale, int n, const PrimeField& field,
                        std::vector<std::uint32_t>& out)
{
    const std::size_t k = cols.size();
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::uint8_t> e(static_cast<std::size_t>(n));
    do {
        std::fill(e.begin(), e.end(), 0);
        for (std::size_t t = 0; t < k; ++t) ++e[t + static_cast<std::size_t>(cols[static_cast<std::size_t>(perm[t])])];
        const auto c = permutation_sign(perm) > 0 ? scale : field.neg(scale);
        auto& slot = out[monomial_rank(e)];
        slot = field.add(slot, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

} // namespace

GradedForm hankel_form(int n, const PrimeField& field)
{
    if (n < 1 || n % 2 == 0) throw ApolarError("hankel_form needs odd n, got " + std::to_string(n));
    const int k = (n + 1) / 2;
    std::vector<std::uint32_t> out(static_cast<std::size_t>(monomial_count(n, k)), 0);
    std::vector<int> cols(static_cast<std::size_t>(k));
    std::iota(cols.begin(), cols.end(), 0);
    add_variable_minor(cols, 1, n, field, out);
    return GradedForm::from_dense(n, k, out, field);
}

GradedForm mixed_form(int n, int k, std::span<const std::uint32_t> alphas, const PrimeField& field)
{
    if (n < 1 || k < 1 || 2 * k > n + 1)
        throw ApolarError("mixed_form needs 0 < k <= (n+1)/2, got n=" + std::to_string(n) + ", k=" + std::to_string(k));
    const int V = n - 2 * k + 1;
    if (static_cast<int>(alphas.size()) != V)
        throw ApolarError("mixed_form(n=" + std::to_string(n) + ", k=" + std::to_string(k) + ") needs " +
                          std::to_string(V) + " parameters, got " + std::to_string(alphas.size()));
    check_distinct(alphas, field, "mixed_form");
    const int N = n - k + 1;   // matrix size; columns 0..N-1
    std::vector<std::uint32_t> out(static_cast<std::size_t>(monomial_count(n, k)), 0);
    // Laplace expansion along the k variable rows (rows V..N-1).
    std::int64_t row_sum = 0;
    for (int r = V; r < N; ++r) row_sum += r + 1;
    std::vector<int> rest;
    for_each_subset(N, k, [&](std::span<const int> cols) {
        std::int64_t col_sum = 0;
        for (int c : cols) col_sum += c + 1;
        rest.clear();
        for (int c = 0, t = 0; c < N; ++c) {
            if (t < k && cols[static_cast<std::size_t>(t)] == c)
                ++t;
            else
                rest.push_back(c);
        }
        std::vector<std::vector<std::uint32_t>> minor(static_cast<std::size_t>(V));
        for (int i = 0; i < V; ++i) {
            for (int c : rest) minor[static_cast<std::size_t>(i)].push_back(field.pow(field.reduce(alphas[static_cast<std::size_t>(i)]), static_cast<std::uint64_t>(c)));
        }
        std::uint32_t scale = V == 0 ? 1 : determinant(std::move(minor), field);
        if (scale == 0) return;
        if ((row_sum + col_sum) % 2 != 0) scale = field.neg(scale);
        add_variable_minor(cols, scale, n, field, out);
    });
    return GradedForm::from_dense(n, k, out, field);
}

GradedForm general_position_form(int n, std::span<const std::uint32_t> a, const PrimeField& field)
{
    if (n < 1 || n % 2 == 0) throw ApolarError("general_position_form needs odd n");
    if (static_cast<int>(a.size()) != n) throw ApolarError("general_position_form needs n parameters");
    check_distinct(a, field, "general_position_form");
    const int k = (n + 1) / 2;
    std::vector<std::uint32_t> out(static_cast<std::size_t>(monomial_count(n, k)), 0);
    const std::int64_t col_sum = static_cast<std::int64_t>(k) * (k + 1) / 2;
    std::vector<std::uint8_t> e(static_cast<std::size_t>(n));
    for_each_subset(n, k, [&](std::span<const int> rows) {
        std::vector<std::vector<std::uint32_t>> top, bottom;
        std::int64_t row_sum = 0;
        std::fill(e.begin(), e.end(), 0);
        for (int i = 0, t = 0; i < n; ++i) {
            const auto ai = field.reduce(a[static_cast<std::size_t>(i)]);
            if (t < k && rows[static_cast<std::size_t>(t)] == i) {
                ++t;
                row_sum += i + 1;
                e[static_cast<std::size_t>(i)] = 1;
                std::vector<std::uint32_t> r;
                for (int c = 0; c < k; ++c) r.push_back(field.pow(ai, static_cast<std::uint64_t>(c)));
                top.push_back(std::move(r));
            } else {
                std::vector<std::uint32_t> r;
                for (int c = 1; c < k; ++c) r.push_back(field.pow(ai, static_cast<std::uint64_t>(c)));
                bottom.push_back(std::move(r));
            }
        }
        auto c = field.mul(determinant(std::move(top), field), determinant(std::move(bottom), field));
        if ((row_sum + col_sum) % 2 != 0) c = field.neg(c);
        auto& slot = out[monomial_rank(e)];
        slot = field.add(slot, c);
    });
    return GradedForm::from_dense(n, k, out, field);
}

GradedForm general_position_form_sum(int n, std::span<const std::uint32_t> a, const PrimeField& field)
{
    if (n < 1 || n % 2 == 0) throw ApolarError("general_position_form needs odd n");
    if (static_cast<int>(a.size()) != n) throw ApolarError("general_position_form needs n parameters");
    check_distinct(a, field, "general_position_form");
    const int k = (n + 1) / 2;
    auto vandermonde = [&](std::span<const int> idx) {
        std::uint32_t v = 1;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            for (std::size_t j = i + 1; j < idx.size(); ++j)
                v = field.mul(v, field.sub(field.reduce(a[static_cast<std::size_t>(idx[j])]),
                                           field.reduce(a[static_cast<std::size_t>(idx[i])])));
        }
        return v;
    };
    std::vector<std::uint32_t> out(static_cast<std::size_t>(monomial_count(n, k)), 0);
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<std::uint8_t> e(static_cast<std::size_t>(n));
    const std::span<const int> s(sigma);
    do {
        auto c = field.mul(vandermonde(s.first(static_cast<std::size_t>(k))), vandermonde(s.subspan(static_cast<std::size_t>(k))));
        for (int j = k; j < n; ++j) c = field.mul(c, field.reduce(a[static_cast<std::size_t>(sigma[static_cast<std::size_t>(j)])]));
        if (permutation_sign(sigma) < 0) c = field.neg(c);
        std::fill(e.begin(), e.end(), 0);
        for (int j = 0; j < k; ++j) e[static_cast<std::size_t>(sigma[static_cast<std::size_t>(j)])] = 1;
        auto& slot = out[monomial_rank(e)];
        slot = field.add(slot, c);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    std::uint32_t norm = 1;
    for (int i = 2; i <= k; ++i) norm = field.mul(norm, static_cast<std::uint32_t>(i));
    for (int i = 2; i <= k - 1; ++i) norm = field.mul(norm, static_cast<std::uint32_t>(i));
    return GradedForm::from_dense(n, k, out, field).scaled(field.inv(norm));
}

} // namespace wlp
