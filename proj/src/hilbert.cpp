#include <wlp/hilbert.hpp>
#include <wlp/series.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace wlp {

std::string to_string(Provenance p)
{
    switch (p) {
    case Provenance::MomentCurve: return "moment";
    case Provenance::Random: return "random";
    case Provenance::Cyclic: return "cyclic";
    }
    return "?";
}

Provenance provenance_from_string(const std::string& s)
{
    if (s == "moment") return Provenance::MomentCurve;
    if (s == "random") return Provenance::Random;
    if (s == "cyclic") return Provenance::Cyclic;
    throw SpecError("unknown spec provenance '" + s + "'");
}

namespace {

void check_shape(int n, int m, int d)
{
    if (n < 1 || n > 64) throw SpecError("n must lie in [1, 64]");
    if (m < 1) throw SpecError("m must be positive");
    if (d < 1 || d > 60) throw SpecError("d must lie in [1, 60]");
}

} // namespace

IdealSpec IdealSpec::moment(int n, int m, int d, std::vector<std::int64_t> alphas)
{
    check_shape(n, m, d);
    if (alphas.empty())
        for (int i = 0; i < m; ++i) alphas.push_back(i);
    if (static_cast<int>(alphas.size()) != m) throw SpecError("need one alpha per form");
    if (std::set(alphas.begin(), alphas.end()).size() != alphas.size()) throw SpecError("alphas must be distinct");
    IdealSpec s;
    s.n = n;
    s.m = m;
    s.d = d;
    s.provenance = Provenance::MomentCurve;
    s.alphas = std::move(alphas);
    return s;
}

IdealSpec IdealSpec::random(int n, int m, int d, Seed seed)
{
    check_shape(n, m, d);
    IdealSpec s;
    s.n = n;
    s.m = m;
    s.d = d;
    s.provenance = Provenance::Random;
    s.seed = seed;
    return s;
}

IdealSpec IdealSpec::cyclic(int n, int d)
{
    if (n < 2) throw SpecError("cyclic spec needs n >= 2");
    check_shape(n, n + 2, d);
    IdealSpec s;
    s.n = n;
    s.m = n + 2;
    s.d = d;
    s.provenance = Provenance::Cyclic;
    return s;
}

std::vector<LinearForm> IdealSpec::forms(const PrimeField& field) const
{
    check_shape(n, m, d);
    std::vector<std::vector<std::uint32_t>> raw;
    switch (provenance) {
    case Provenance::MomentCurve: {
        if (static_cast<int>(alphas.size()) != m) throw SpecError("need one alpha per form");
        std::set<std::uint32_t> seen;
        for (auto a : alphas) {
            const auto x = field.from_int(a);
            if (!seen.insert(x).second) throw SpecError("alphas coincide modulo the prime");
            std::vector<std::uint32_t> c(static_cast<std::size_t>(n));
            std::uint32_t pw = 1;
            for (auto& v : c) {
                v = pw;
                pw = field.mul(pw, x);
            }
            raw.push_back(std::move(c));
        }
        break;
    }
    case Provenance::Random: {
        Rng rng(seed, field.modulus());
        for (int i = 0; i < m; ++i) {
            std::vector<std::uint32_t> c(static_cast<std::size_t>(n));
            for (auto& v : c) v = static_cast<std::uint32_t>(rng.below(field.modulus()));
            raw.push_back(std::move(c));
        }
        break;
    }
    case Provenance::Cyclic: {
        if (m != n + 2) throw SpecError("cyclic spec has n+2 forms");
        const auto zeta = field.root_of_unity(static_cast<std::uint32_t>(n));
        for (int i = 0; i < n; ++i) {
            std::vector<std::uint32_t> c(static_cast<std::size_t>(n), 0);
            c[static_cast<std::size_t>(i)] = 1;
            raw.push_back(std::move(c));
        }
        raw.emplace_back(static_cast<std::size_t>(n), 1u);
        std::vector<std::uint32_t> c(static_cast<std::size_t>(n));
        std::uint32_t pw = 1;
        for (auto& v : c) {
            v = pw;
            pw = field.mul(pw, zeta);
        }
        raw.push_back(std::move(c));
        break;
    }
    }

    // Pairwise non-proportional: compare normalised representatives.
    std::set<std::vector<std::uint32_t>> normalised;
    std::vector<LinearForm> out;
    for (auto& c : raw) {
        auto lead = std::find_if(c.begin(), c.end(), [](auto v) { return v != 0; });
        if (lead == c.end()) throw SpecError("zero linear form in " + describe());
        const auto inv = field.inv(*lead);
        std::vector<std::uint32_t> norm(c.size());
        std::transform(c.begin(), c.end(), norm.begin(), [&](auto v) { return field.mul(v, inv); });
        if (!normalised.insert(std::move(norm)).second) throw SpecError("proportional forms in " + describe());
        out.emplace_back(std::move(c), field);
    }
    return out;
}

std::string IdealSpec::describe() const
{
    std::ostringstream os;
    os << to_string(provenance) << "(n=" << n << ", m=" << m << ", d=" << d;
    if (provenance == Provenance::MomentCurve) {
        os << ", alpha=[";
        for (std::size_t i = 0; i < alphas.size(); ++i) os << (i ? "," : "") << alphas[i];
        os << "]";
    } else if (provenance == Provenance::Random) {
        os << ", seed=" << seed.value;
    }
    os << ")";
    return os.str();
}

std::string IdealSpec::digest() const
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto feed = [&](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001b3ull;
        }
    };
    feed(describe());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------

ResultCache::ResultCache(std::filesystem::path path) : path_(std::move(path))
{
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            Key k{j.at("kind").get<std::string>(), j.at("n").get<int>(), j.at("m").get<int>(), j.at("d").get<int>(),
                  j.at("j").get<int>(), j.at("prime").get<std::uint32_t>(), j.at("spec").get<std::string>()};
            entries_[k] = j.at("value").get<std::int64_t>();
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error(path_.string() + ":" + std::to_string(lineno) + ": bad cache record: " + e.what());
        }
    }
}

std::optional<std::int64_t> ResultCache::lookup(const Key& k) const
{
    std::lock_guard lock(mu_);
    auto it = entries_.find(k);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ResultCache::store(const Key& k, std::int64_t value)
{
    std::lock_guard lock(mu_);
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("cannot append to cache file " + path_.string());
    out << encode(k, value) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("write failed on cache file " + path_.string());
    entries_[k] = value;
}

std::size_t ResultCache::size() const
{
    std::lock_guard lock(mu_);
    return entries_.size();
}

std::string ResultCache::encode(const Key& k, std::int64_t value)
{
    nlohmann::ordered_json j;
    j["kind"] = k.kind;
    j["n"] = k.n;
    j["m"] = k.m;
    j["d"] = k.d;
    j["j"] = k.j;
    j["prime"] = k.prime;
    j["spec"] = k.spec;
    j["value"] = value;
    return j.dump();
}

// ---------------------------------------------------------------------------

namespace detail {

std::uint64_t box_count(int n, int cap, int j)
{
    if (n < 0 || j < 0) return 0;
    // dp over variables, saturating.
    std::vector<std::uint64_t> cur(static_cast<std::size_t>(j) + 1, 0), next;
    cur[0] = 1;
    for (int k = 0; k < n; ++k) {
        next.assign(cur.size(), 0);
        for (int r = 0; r <= j; ++r) {
            std::uint64_t s = 0;
            for (int v = 0; v <= std::min(cap, r); ++v) {
                const auto add = cur[static_cast<std::size_t>(r - v)];
                s = (s > UINT64_MAX - add) ? UINT64_MAX : s + add;
            }
            next[static_cast<std::size_t>(r)] = s;
        }
        cur.swap(next);
    }
    return cur[static_cast<std::size_t>(j)];
}

BoxBasis::BoxBasis(int n, int cap, int j) : n_(n), cap_(std::min(cap, j)), j_(j)
{
    if (n < 1 || j < 0 || cap < 0 || j > 255) throw ApolarError("box basis needs n >= 1, cap >= 0 and 0 <= j <= 255");
    const auto stride = static_cast<std::size_t>(j) + 1;
    count_.assign((static_cast<std::size_t>(n) + 1) * stride, 0);
    count_[0] = 1;
    for (int k = 1; k <= n; ++k)
        for (int r = 0; r <= j; ++r) {
            std::uint64_t s = 0;
            for (int v = 0; v <= std::min(cap_, r); ++v) s += count_[static_cast<std::size_t>(k - 1) * stride + static_cast<std::size_t>(r - v)];
            count_[static_cast<std::size_t>(k) * stride + static_cast<std::size_t>(r)] = s;
        }
    const auto total = count_[static_cast<std::size_t>(n) * stride + static_cast<std::size_t>(j)];
    if (total > (1ull << 28)) throw ApolarError("box basis too large");
    size_ = static_cast<std::size_t>(total);
    exps_.assign(size_ * static_cast<std::size_t>(n), 0);

    std::vector<std::uint8_t> cur(static_cast<std::size_t>(n), 0);
    std::size_t pos = 0;
    auto rec = [&](auto&& self, int k, int rem) -> void {
        if (k == 1) {
            if (rem > cap_) return;
            cur[0] = static_cast<std::uint8_t>(rem);
            std::copy(cur.begin(), cur.end(), exps_.begin() + static_cast<std::ptrdiff_t>(pos * cur.size()));
            ++pos;
            return;
        }
        for (int e = 0; e <= std::min(cap_, rem); ++e) {
            if (count_[static_cast<std::size_t>(k - 1) * stride + static_cast<std::size_t>(rem - e)] == 0) continue;
            cur[static_cast<std::size_t>(k - 1)] = static_cast<std::uint8_t>(e);
            self(self, k - 1, rem - e);
        }
        cur[static_cast<std::size_t>(k - 1)] = 0;
    };
    rec(rec, n, j);
}

std::size_t BoxBasis::rank(std::span<const std::uint8_t> e) const noexcept
{
    const auto stride = static_cast<std::size_t>(j_) + 1;
    int rem = j_;
    std::size_t r = 0;
    for (int k = n_; k >= 2; --k) {
        const int ek = e[static_cast<std::size_t>(k - 1)];
        if (ek > cap_ || ek > rem) return SIZE_MAX;
        for (int v = 0; v < ek; ++v) r += count_[static_cast<std::size_t>(k - 1) * stride + static_cast<std::size_t>(rem - v)];
        rem -= ek;
    }
    if (e[0] != rem || rem > cap_) return SIZE_MAX;
    return r;
}

} // namespace detail

// ---------------------------------------------------------------------------

namespace {

using detail::BoxBasis;
using Vec = std::vector<std::uint32_t>;

/// Solves A^T X = B for square invertible A (rows of A given); B is a list of
/// right-hand sides. Returns nullopt if A is singular.
std::optional<std::vector<Vec>> solve_transposed(const std::vector<Vec>& a, const std::vector<Vec>& rhs,
                                                 const PrimeField& f)
{
    const std::size_t n = a.size();
    const std::size_t k = rhs.size();
    // Augmented [A^T | B^T].
    std::vector<Vec> m(n, Vec(n + k, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a[j][i];
    for (std::size_t t = 0; t < k; ++t)
        for (std::size_t i = 0; i < n; ++i) m[i][n + t] = rhs[t][i];
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return std::nullopt;
        std::swap(m[p], m[c]);
        const auto inv = f.inv(m[c][c]);
        for (auto& v : m[c]) v = f.mul(v, inv);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m[i][c] == 0) continue;
            const auto s = f.neg(m[i][c]);
            for (std::size_t j = c; j < n + k; ++j) m[i][j] = f.add(m[i][j], f.mul(s, m[c][j]));
        }
    }
    std::vector<Vec> out(k, Vec(n));
    for (std::size_t t = 0; t < k; ++t)
        for (std::size_t i = 0; i < n; ++i) out[t][i] = m[i][n + t];
    return out;
}

struct PowerTerm {
    std::vector<std::uint8_t> e;
    std::uint32_t coeff;
};

/// Terms of (sum u_i y_i)^d with every exponent <= cap.
std::vector<PowerTerm> power_terms(const Vec& u, int d, int cap, const PrimeField& f)
{
    const int n = static_cast<int>(u.size());
    std::vector<std::uint32_t> fact(static_cast<std::size_t>(d) + 1, 1);
    for (int i = 1; i <= d; ++i) fact[static_cast<std::size_t>(i)] = f.mul(fact[static_cast<std::size_t>(i - 1)], static_cast<std::uint32_t>(i));
    BoxBasis b(n, cap, d);
    std::vector<PowerTerm> out;
    for (std::size_t i = 0; i < b.size(); ++i) {
        auto e = b.exps(i);
        std::uint32_t c = fact[static_cast<std::size_t>(d)];
        for (int k = 0; k < n && c != 0; ++k) {
            const auto ek = e[static_cast<std::size_t>(k)];
            if (ek == 0) continue;
            c = f.mul(c, f.inv(fact[ek]));
            c = f.mul(c, f.pow(u[static_cast<std::size_t>(k)], ek));
        }
        if (c != 0) out.push_back({{e.begin(), e.end()}, c});
    }
    return out;
}

/// Coordinates for the computation. In the box model y_1..y_n are n of the
/// forms, their d-th powers are built into the basis (exponents <= d-1) and
/// only the remaining forms contribute relations.
struct Setting {
    int n = 0;
    int d = 0;
    bool box = false;
    bool cyclic = false;
    std::vector<Vec> ops;   // relation forms in y coordinates
    std::vector<Vec> basis_rows;   // chosen forms (box) for coordinate changes

    int cap(int j) const { return box ? std::min(d - 1, j) : j; }

    Vec to_local(const Vec& x_coeffs, const PrimeField& f) const
    {
        if (!box) return x_coeffs;
        return (*solve_transposed(basis_rows, {x_coeffs}, f))[0];
    }
};

Setting make_setting(const IdealSpec& spec, const PrimeField& f, Model model)
{
    const auto forms = spec.forms(f);
    Setting s;
    s.n = spec.n;
    s.d = spec.d;
    if (model == Model::Full || (model == Model::Auto && spec.m < spec.n)) {
        for (const auto& l : forms) s.ops.push_back(l.coeffs());
        return s;
    }
    // Greedy independent subset in form order.
    EchelonBasis eb(static_cast<std::size_t>(spec.n), f);
    std::vector<std::size_t> chosen, rest;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (static_cast<int>(chosen.size()) < spec.n && eb.insert(forms[i].coeffs()))
            chosen.push_back(i);
        else
            rest.push_back(i);
    }
    if (static_cast<int>(chosen.size()) < spec.n) {
        if (model == Model::Box) throw SpecError("box model needs n independent forms: " + spec.describe());
        for (const auto& l : forms) s.ops.push_back(l.coeffs());
        return s;
    }
    s.box = true;
    for (auto i : chosen) s.basis_rows.push_back(forms[i].coeffs());
    std::vector<Vec> rhs;
    for (auto i : rest) rhs.push_back(forms[i].coeffs());
    if (!rhs.empty()) s.ops = *solve_transposed(s.basis_rows, rhs, f);
    // The cyclic spec lists x_1..x_n first, so y = x and shifting variables
    // permutes the relation forms up to scalars.
    s.cyclic = model == Model::Auto && spec.provenance == Provenance::Cyclic;
    return s;
}

/// Rows {b * l^d : b in basis(j-d)} restricted to the basis of degree j.
void add_macaulay_rows(SparseMatrix& m, const Setting& s, const Vec& u, int power, int j, const BoxBasis& target,
                       const PrimeField& f)
{
    if (j < power) return;
    const auto terms = power_terms(u, power, s.box ? s.d - 1 : power, f);
    BoxBasis src(s.n, s.cap(j - power), j - power);
    std::vector<std::uint8_t> a(static_cast<std::size_t>(s.n));
    for (std::size_t i = 0; i < src.size(); ++i) {
        auto b = src.exps(i);
        SparseRow row;
        row.reserve(terms.size());
        for (const auto& t : terms) {
            for (int k = 0; k < s.n; ++k) a[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(b[static_cast<std::size_t>(k)] + t.e[static_cast<std::size_t>(k)]);
            const auto col = target.rank(a);
            if (col != SIZE_MAX) row.push_back({static_cast<std::uint32_t>(col), t.coeff});
        }
        std::sort(row.begin(), row.end(), [](auto x, auto y) { return x.col < y.col; });
        m.add_normalized_row(std::move(row));
    }
}

std::int64_t plain_quotient(const Setting& s, int j, const PrimeField& f, const RankOptions& ro)
{
    BoxBasis target(s.n, s.cap(j), j);
    if (target.size() == 0) return 0;
    SparseMatrix m(target.size());
    for (const auto& u : s.ops) add_macaulay_rows(m, s, u, s.d, j, target, f);
    return static_cast<std::int64_t>(target.size() - rank(m, f, ro));
}

std::int64_t plain_inverse(const Setting& s, int j, const PrimeField& f, const RankOptions& ro)
{
    BoxBasis space(s.n, s.cap(j), j);
    if (space.size() == 0) return 0;
    if (j < s.d) return static_cast<std::int64_t>(space.size());
    std::vector<std::uint32_t> fact(static_cast<std::size_t>(j) + 1, 1);
    for (int i = 1; i <= j; ++i) fact[static_cast<std::size_t>(i)] = f.mul(fact[static_cast<std::size_t>(i - 1)], static_cast<std::uint32_t>(i));
    std::vector<std::uint32_t> inv_fact(fact.size());
    for (std::size_t i = 0; i < fact.size(); ++i) inv_fact[i] = f.inv(fact[i]);

    BoxBasis out(s.n, s.cap(j - s.d), j - s.d);
    SparseMatrix m(space.size());
    std::vector<std::uint8_t> a(static_cast<std::size_t>(s.n));
    for (const auto& u : s.ops) {
        const auto terms = power_terms(u, s.d, s.box ? s.d - 1 : s.d, f);
        // Coefficient of y^c in l^d o F: sum_t coeff_t * F_{c+e_t} * (c+e_t)!/c!.
        for (std::size_t i = 0; i < out.size(); ++i) {
            auto c = out.exps(i);
            SparseRow row;
            for (const auto& t : terms) {
                std::uint32_t w = t.coeff;
                for (int k = 0; k < s.n; ++k) {
                    const auto ck = c[static_cast<std::size_t>(k)], ak = static_cast<std::uint8_t>(ck + t.e[static_cast<std::size_t>(k)]);
                    a[static_cast<std::size_t>(k)] = ak;
                    if (ak != ck) w = f.mul(w, f.mul(fact[ak], inv_fact[ck]));
                }
                const auto col = space.rank(a);
                if (col != SIZE_MAX) row.push_back({static_cast<std::uint32_t>(col), w});
            }
            m.add_row(std::move(row), f);
        }
    }
    return static_cast<std::int64_t>(space.size() - rank(m, f, ro));
}

/// Orbit data of the cyclic shift y_k -> y_{k+1} on a monomial basis.
struct Orbits {
    std::vector<std::uint32_t> rep;     // index of the orbit representative (smallest index)
    std::vector<std::uint8_t> shift;    // t with sigma^t(b) = rep(b)
    std::vector<std::uint8_t> size;     // orbit length
};

Orbits orbits_of(const BoxBasis& b)
{
    const int n = b.nvars();
    Orbits o;
    o.rep.resize(b.size());
    o.shift.resize(b.size());
    o.size.resize(b.size());
    std::vector<std::uint8_t> rot(static_cast<std::size_t>(n));
    std::vector<std::size_t> idx(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < b.size(); ++i) {
        auto e = b.exps(i);
        int len = n;
        for (int t = 0; t < n; ++t) {
            for (int k = 0; k < n; ++k) rot[static_cast<std::size_t>((k + t) % n)] = e[static_cast<std::size_t>(k)];
            idx[static_cast<std::size_t>(t)] = b.rank(rot);
            if (t > 0 && idx[static_cast<std::size_t>(t)] == i && len == n) len = t;
        }
        const auto best = std::min_element(idx.begin(), idx.begin() + len) - idx.begin();
        o.rep[i] = static_cast<std::uint32_t>(idx[static_cast<std::size_t>(best)]);
        o.shift[i] = static_cast<std::uint8_t>(best);
        o.size[i] = static_cast<std::uint8_t>(len);
    }
    return o;
}

/// Quotient dimension of the cyclic spec, one shift eigenspace at a time.
/// The relation forms are x_1+..+x_n (fixed by the shift) and
/// sum zeta^{k-1} x_k (scaled by zeta^{-1}); eigenspace r is spanned by
/// v_{O,r} = sum_t zeta^{-rt} sigma^t(m_O) over orbits O with r|O| = 0 mod n,
/// with coordinates read at the orbit representatives.
std::int64_t cyclic_quotient(const Setting& s, int j, const PrimeField& f, const RankOptions& ro)
{
    const int n = s.n;
    BoxBasis target(n, s.cap(j), j);
    if (target.size() == 0) return 0;
    const auto to = orbits_of(target);
    std::vector<std::uint32_t> reps;
    for (std::size_t i = 0; i < target.size(); ++i)
        if (to.rep[i] == i) reps.push_back(static_cast<std::uint32_t>(i));

    auto valid = [n](int r, int len) { return (r * len) % n == 0; };
    // col[r][i] for representative i.
    std::vector<std::vector<std::uint32_t>> col(static_cast<std::size_t>(n), std::vector<std::uint32_t>(target.size(), UINT32_MAX));
    std::vector<std::size_t> width(static_cast<std::size_t>(n), 0);
    for (int r = 0; r < n; ++r)
        for (auto i : reps)
            if (valid(r, to.size[i])) col[static_cast<std::size_t>(r)][i] = static_cast<std::uint32_t>(width[static_cast<std::size_t>(r)]++);

    std::vector<SparseMatrix> blocks;
    for (int r = 0; r < n; ++r) blocks.emplace_back(width[static_cast<std::size_t>(r)]);

    if (j >= s.d) {
        const auto zeta = f.root_of_unity(static_cast<std::uint32_t>(n));
        std::vector<std::uint32_t> zpow(static_cast<std::size_t>(n));
        zpow[0] = 1;
        for (int k = 1; k < n; ++k) zpow[static_cast<std::size_t>(k)] = f.mul(zpow[static_cast<std::size_t>(k - 1)], zeta);
        auto zinv = [&](long long e) { return zpow[static_cast<std::size_t>(((-e) % n + n) % n)]; };

        BoxBasis src(n, s.cap(j - s.d), j - s.d);
        const auto so = orbits_of(src);
        std::vector<std::uint8_t> a(static_cast<std::size_t>(n));
        std::vector<std::uint32_t> acc(target.size(), 0);
        std::vector<std::uint32_t> touched;
        struct Hit {
            std::uint32_t idx;
            std::uint32_t coeff;
        };
        std::vector<Hit> h0;
        for (std::size_t op = 0; op < s.ops.size(); ++op) {
            // Shift eigenvalue exponent of the operator: sigma(l^d) = zeta^{-lambda} l^d.
            const int lambda = op == 0 ? 0 : s.d % n;
            const auto terms = power_terms(s.ops[op], s.d, s.d - 1, f);
            for (std::size_t i = 0; i < src.size(); ++i) {
                if (so.rep[i] != i) continue;
                auto b = src.exps(i);
                h0.clear();
                for (const auto& t : terms) {
                    for (int k = 0; k < n; ++k) a[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(b[static_cast<std::size_t>(k)] + t.e[static_cast<std::size_t>(k)]);
                    const auto c = target.rank(a);
                    if (c != SIZE_MAX) h0.push_back({static_cast<std::uint32_t>(c), t.coeff});
                }
                for (int r = 0; r < n; ++r) {
                    // Source eigenspace r + lambda must contain v_{O',.}.
                    if (!valid((r + lambda) % n, so.size[i])) continue;
                    touched.clear();
                    for (const auto& hit : h0) {
                        const auto rp = to.rep[hit.idx];
                        const auto cc = col[static_cast<std::size_t>(r)][rp];
                        if (cc == UINT32_MAX) continue;
                        // Full-orbit sum: weight zeta^{-r t_b} * n/|O_b|.
                        auto w = f.mul(hit.coeff, zinv(static_cast<long long>(r) * to.shift[hit.idx]));
                        w = f.mul(w, static_cast<std::uint32_t>(n / to.size[hit.idx]));
                        if (acc[cc] == 0) touched.push_back(cc);
                        acc[cc] = f.add(acc[cc], w);
                    }
                    SparseRow row;
                    std::sort(touched.begin(), touched.end());
                    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
                    for (auto cc : touched) {
                        if (acc[cc] != 0) row.push_back({cc, acc[cc]});
                        acc[cc] = 0;
                    }
                    blocks[static_cast<std::size_t>(r)].add_normalized_row(std::move(row));
                }
            }
        }
    }
    std::int64_t total = 0;
    for (int r = 0; r < n; ++r) {
        const auto& m = blocks[static_cast<std::size_t>(r)];
        total += static_cast<std::int64_t>(width[static_cast<std::size_t>(r)]) - static_cast<std::int64_t>(m.nrows() ? rank(m, f, ro) : 0);
    }
    return total;
}

std::int64_t cached(const EngineOptions& opt, const char* kind, const IdealSpec& spec, int j, const PrimeField& f,
                    auto&& compute)
{
    ResultCache::Key key{kind, spec.n, spec.m, spec.d, j, f.modulus(), opt.cache ? spec.digest() : std::string{}};
    if (opt.cache)
        if (auto hit = opt.cache->lookup(key)) return *hit;
    const std::int64_t v = compute();
    if (opt.cache) opt.cache->store(key, v);
    return v;
}

} // namespace

std::int64_t quotient_dim(const IdealSpec& spec, int j, const PrimeField& field, const EngineOptions& opt)
{
    if (j < 0) throw SpecError("degree must be nonnegative");
    return cached(opt, "quotient", spec, j, field, [&] {
        const auto s = make_setting(spec, field, opt.model);
        return s.cyclic ? cyclic_quotient(s, j, field, opt.rank) : plain_quotient(s, j, field, opt.rank);
    });
}

std::int64_t inverse_dim(const IdealSpec& spec, int j, const PrimeField& field, const EngineOptions& opt)
{
    if (j < 0) throw SpecError("degree must be nonnegative");
    return cached(opt, "inverse", spec, j, field, [&] {
        const auto s = make_setting(spec, field, opt.model);
        return plain_inverse(s, j, field, opt.rank);
    });
}

std::vector<std::int64_t> hilbert_series_of(const IdealSpec& spec, const PrimeField& field, const EngineOptions& opt)
{
    const auto cap = 3 * s_formula(spec.n, spec.d) + 3;
    std::vector<std::int64_t> out;
    for (int j = 0; j <= cap; ++j) {
        const auto v = quotient_dim(spec, j, field, opt);
        if (v == 0) return out;
        out.push_back(v);
    }
    throw NotArtinian("no vanishing degree up to " + std::to_string(cap) + " for " + spec.describe());
}

RankProfile wlp_rank_profile(const IdealSpec& spec, const PrimeField& field, Seed seed, const EngineOptions& opt)
{
    if (spec.m != spec.n + 1) throw SpecError("rank profile needs m = n+1 forms");
    auto s = make_setting(spec, field, opt.model == Model::Full ? Model::Full : Model::Box);
    // Own stream, so equal seeds for spec and multiplier do not give l = l_1.
    Rng rng(seed, field.modulus() + (std::uint64_t{1} << 32));
    Vec ell(static_cast<std::size_t>(spec.n));
    for (auto& v : ell) v = static_cast<std::uint32_t>(rng.below(field.modulus()));
    ell = s.to_local(ell, field);

    // rank(x l : A_i -> A_{i+1}) = rank [I_{i+1}; l B_i] - rank I_{i+1}.
    auto ideal_rows = [&](int j, const BoxBasis& t) {
        SparseMatrix m(t.size());
        for (const auto& u : s.ops) add_macaulay_rows(m, s, u, s.d, j, t, field);
        return m;
    };
    RankProfile prof;
    std::int64_t dim_i = 1;
    for (int i = 0; dim_i > 0; ++i) {
        BoxBasis t(s.n, s.cap(i + 1), i + 1);
        auto m = ideal_rows(i + 1, t);
        const auto r_ideal = static_cast<std::int64_t>(t.size() ? rank(m, field, opt.rank) : 0);
        const auto dim_next = static_cast<std::int64_t>(t.size()) - r_ideal;
        std::int64_t r = 0;
        if (dim_next > 0) {
            add_macaulay_rows(m, s, ell, 1, i + 1, t, field);
            r = static_cast<std::int64_t>(rank(m, field, opt.rank)) - r_ideal;
        }
        const bool maximal = r == std::min(dim_i, dim_next);
        prof.rows.push_back({i, dim_i, dim_next, r, maximal});
        if (!maximal) prof.deficient.push_back(i);
        dim_i = dim_next;
    }
    return prof;
}

GenericEstimate generic_dim_estimate(int n, int m, int d, int j, int trials, std::span<const std::uint32_t> primes,
                                     Seed seed, const EngineOptions& opt)
{
    if (trials < 1) throw SpecError("trials must be positive");
    if (primes.empty()) throw SpecError("need at least one prime");
    GenericEstimate est{std::numeric_limits<std::int64_t>::max(), false, {}};
    for (auto p : primes) {
        const PrimeField f(p);
        for (int t = 0; t < trials; ++t) {
            const auto spec = IdealSpec::random(n, m, d, Seed{seed.value + static_cast<std::uint64_t>(t)});
            const auto v = quotient_dim(spec, j, f, opt);
            est.samples.push_back(v);
            est.value = std::min(est.value, v);
        }
    }
    est.rerun_advised = std::any_of(est.samples.begin(), est.samples.end(), [&](auto v) { return v != est.value; });
    return est;
}

} // namespace wlp
