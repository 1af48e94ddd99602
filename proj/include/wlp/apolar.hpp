#ifndef WLP_APOLAR_HPP
#define WLP_APOLAR_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <wlp/field.hpp>

namespace wlp {

class ApolarError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t binomial(std::int64_t n, std::int64_t k) noexcept;

/// Number of monomials of degree j in n variables.
std::uint64_t monomial_count(int n, int j) noexcept;

/// Monomials of a fixed degree in graded reverse lexicographic order,
/// largest first (for n = 3, j = 2: X1^2, X1X2, X2^2, X1X3, X2X3, X3^2).
/// The index of a monomial is its position in this list.
class MonomialBasis {
public:
    MonomialBasis(int n, int j);

    int nvars() const noexcept { return n_; }
    int degree() const noexcept { return j_; }
    std::size_t size() const noexcept { return size_; }

    /// Exponent vector of the monomial at `index`.
    std::span<const std::uint8_t> exps(std::size_t index) const noexcept
    {
        return {exps_.data() + index * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
    }

    /// Index of an exponent vector of this degree.
    std::size_t rank(std::span<const std::uint8_t> e) const noexcept;

private:
    int n_, j_;
    std::size_t size_;
    std::vector<std::uint8_t> exps_;
};

/// Shared, lazily built basis for (n, j). Thread safe.
std::shared_ptr<const MonomialBasis> monomial_basis(int n, int j);

/// Index of an exponent vector within its degree.
std::size_t monomial_rank(std::span<const std::uint8_t> e) noexcept;
std::vector<std::uint8_t> monomial_unrank(int n, int j, std::size_t index);

struct Term {
    std::uint32_t index;
    std::uint32_t coeff;
    bool operator==(const Term&) const = default;
};

/// Homogeneous form in X_1..X_n over a prime field, stored sparsely as
/// (monomial index, coefficient) pairs sorted by index, without zeros.
class GradedForm {
public:
    GradedForm(int n, int degree, const PrimeField& field);

    static GradedForm constant(int n, std::uint32_t c, const PrimeField& field);
    static GradedForm monomial(std::span<const std::uint8_t> exps, std::uint32_t c, const PrimeField& field);
    /// Coefficient vector indexed by monomial index.
    static GradedForm from_dense(int n, int degree, std::span<const std::uint32_t> coeffs, const PrimeField& field);

    int nvars() const noexcept { return n_; }
    int degree() const noexcept { return degree_; }
    const PrimeField& field() const noexcept { return field_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::uint32_t coeff(std::size_t index) const noexcept;
    std::vector<std::uint32_t> to_dense() const;

    GradedForm operator+(const GradedForm& o) const;
    GradedForm operator-(const GradedForm& o) const;
    GradedForm scaled(std::uint32_t c) const;

    bool operator==(const GradedForm& o) const noexcept
    {
        return n_ == o.n_ && degree_ == o.degree_ && field_ == o.field_ && terms_ == o.terms_;
    }

    /// e.g. "X1*X3 - X2^2"; coefficients above p/2 print as negatives.
    std::string to_string() const;

private:
    int n_;
    int degree_;
    PrimeField field_;
    std::vector<Term> terms_;
};

/// Linear form sum l_i x_i acting on the dual ring by x_i = d/dX_i.
class LinearForm {
public:
    LinearForm(std::vector<std::uint32_t> coeffs, const PrimeField& field);
    const std::vector<std::uint32_t>& coeffs() const noexcept { return coeffs_; }
    int nvars() const noexcept { return static_cast<int>(coeffs_.size()); }
    bool operator==(const LinearForm&) const = default;

private:
    std::vector<std::uint32_t> coeffs_;
};

/// (1, alpha, alpha^2, ..., alpha^{n-1}).
LinearForm moment_form(int n, std::uint32_t alpha, const PrimeField& field);

/// l^e o F. Zero (of degree 0) when e exceeds deg F.
GradedForm contract(const LinearForm& l, int e, const GradedForm& f);
/// x^a o F for a monomial operator x^a.
GradedForm contract_monomial(std::span<const std::uint8_t> a, const GradedForm& f);

GradedForm multiply(const GradedForm& f, const GradedForm& g);
GradedForm power(const GradedForm& f, int k);

/// det [X_{i+j-1}]_{i,j=1..k} for n = 2k-1.
GradedForm hankel_form(int n, const PrimeField& field);

/// Determinant with n-2k+1 rows (1, a, ..., a^{n-k}) for a in `alphas`
/// followed by the k rows (X_r, ..., X_{r+n-k}), r = 1..k. Degree k.
/// Annihilated by the moment forms at `alphas` and by the squares of all
/// other moment forms. Returns the zero form for degenerate parameters.
GradedForm mixed_form(int n, int k, std::span<const std::uint32_t> alphas, const PrimeField& field);

/// Square-free form of degree k = (n+1)/2 annihilated by the squares of
/// x_1..x_n, x_1+..+x_n and a_1x_1+..+a_nx_n, evaluated as the n x n
/// determinant by Laplace expansion over its first k columns.
GradedForm general_position_form(int n, std::span<const std::uint32_t> a, const PrimeField& field);
/// Same form from the signed sum over all permutations of the products of
/// two Vandermonde determinants, divided by k!(k-1)!.
GradedForm general_position_form_sum(int n, std::span<const std::uint32_t> a, const PrimeField& field);

/// Determinant of a small square matrix over the field.
std::uint32_t determinant(std::vector<std::vector<std::uint32_t>> m, const PrimeField& field);

} // namespace wlp

#endif
