#ifndef WLP_HILBERT_HPP
#define WLP_HILBERT_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <wlp/apolar.hpp>
#include <wlp/field.hpp>
#include <wlp/linalg.hpp>
#include <wlp/random.hpp>

namespace wlp {

class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Provenance {
    /// l_i = sum_j alpha_i^{j-1} x_j.
    MomentCurve,
    /// Coefficients drawn uniformly from the field with a seeded stream.
    Random,
    /// x_1..x_n, x_1+..+x_n and sum_k zeta^{k-1} x_k for a primitive n-th
    /// root of unity zeta (m = n+2). Invariant under cyclic shift of the
    /// variables up to scalars, which splits every degree into n blocks.
    Cyclic,
};

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// m linear forms in n variables and a uniform power d. The forms are
/// materialised for a given prime field.
struct IdealSpec {
    int n = 0;
    int m = 0;
    int d = 0;
    Provenance provenance = Provenance::MomentCurve;
    std::vector<std::int64_t> alphas;   // MomentCurve
    Seed seed;                          // Random

    /// alpha_i = i-1 unless given.
    static IdealSpec moment(int n, int m, int d, std::vector<std::int64_t> alphas = {});
    static IdealSpec random(int n, int m, int d, Seed seed);
    static IdealSpec cyclic(int n, int d);

    /// Throws SpecError if the forms are not pairwise non-proportional mod p
    /// or the parameters are invalid.
    std::vector<LinearForm> forms(const PrimeField& field) const;

    std::string describe() const;
    /// FNV-1a digest of everything that determines the forms.
    std::string digest() const;
};

/// Append-only newline-delimited JSON records:
///   {"kind":"quotient","n":..,"m":..,"d":..,"j":..,"prime":..,"spec":"<digest>","value":..}
/// Later records for the same key win. Writes are serialised.
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path path);

    struct Key {
        std::string kind;
        int n, m, d, j;
        std::uint32_t prime;
        std::string spec;
        auto operator<=>(const Key&) const = default;
    };

    std::optional<std::int64_t> lookup(const Key& k) const;
    void store(const Key& k, std::int64_t value);
    std::size_t size() const;
    const std::filesystem::path& path() const noexcept { return path_; }

    static std::string encode(const Key& k, std::int64_t value);

private:
    std::filesystem::path path_;
    mutable std::mutex mu_;
    std::map<Key, std::int64_t> entries_;
};

enum class Model {
    Auto,    ///< box coordinates when m >= n, cyclic blocks for Cyclic specs
    Full,    ///< all monomials of k[x_1..x_n]
    Box,     ///< k[y]/(y_1^d..y_n^d) with y = n of the forms
};

struct EngineOptions {
    Model model = Model::Auto;
    RankOptions rank;
    ResultCache* cache = nullptr;
};

/// dim (R/I)_j from the row space of {monomial * l_i^d}.
std::int64_t quotient_dim(const IdealSpec& spec, int j, const PrimeField& field, const EngineOptions& opt = {});
/// dim of {F of degree j : l_i^d o F = 0 for all i}.
std::int64_t inverse_dim(const IdealSpec& spec, int j, const PrimeField& field, const EngineOptions& opt = {});

class NotArtinian : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hilbert function degree by degree until it vanishes. Gives up after
/// 3 s(n,d) + 3 degrees.
std::vector<std::int64_t> hilbert_series_of(const IdealSpec& spec, const PrimeField& field,
                                            const EngineOptions& opt = {});

struct RankRow {
    int degree;
    std::int64_t dim_source, dim_target, rank;
    bool maximal;
};

struct RankProfile {
    std::vector<RankRow> rows;
    std::vector<int> deficient;   // degrees where the rank is not maximal
    bool all_maximal() const noexcept { return deficient.empty(); }
};

/// Ranks of multiplication by a seeded random linear form on R = k[x]/I for
/// a spec with m = n+1 forms.
RankProfile wlp_rank_profile(const IdealSpec& spec, const PrimeField& field, Seed seed, const EngineOptions& opt = {});

struct GenericEstimate {
    std::int64_t value;
    /// Specialisations disagreed; the minimum is reported.
    bool rerun_advised;
    std::vector<std::int64_t> samples;
};

/// Minimum of quotient_dim over `trials` random specialisations at each prime.
/// An upper bound for the generic value, exact with high probability.
GenericEstimate generic_dim_estimate(int n, int m, int d, int j, int trials, std::span<const std::uint32_t> primes,
                                     Seed seed = Seed{1}, const EngineOptions& opt = {});

namespace detail {

/// Monomials of degree j in n variables with every exponent <= cap, ordered
/// like MonomialBasis (last exponent first).
class BoxBasis {
public:
    BoxBasis(int n, int cap, int j);
    std::size_t size() const noexcept { return size_; }
    int nvars() const noexcept { return n_; }
    std::span<const std::uint8_t> exps(std::size_t i) const noexcept
    {
        return {exps_.data() + i * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
    }
    /// Index of e, or SIZE_MAX if some exponent exceeds the cap.
    std::size_t rank(std::span<const std::uint8_t> e) const noexcept;

private:
    int n_, cap_, j_;
    std::size_t size_;
    std::vector<std::uint64_t> count_;   // count_[k * (j+1) + r]: k variables, degree r
    std::vector<std::uint8_t> exps_;
};

/// Number of box monomials of degree j (exponents <= cap).
std::uint64_t box_count(int n, int cap, int j);

} // namespace detail

} // namespace wlp

#endif
