#ifndef WLP_SERIES_HPP
#define WLP_SERIES_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace wlp {

using BigInt = boost::multiprecision::cpp_int;

class SeriesError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Exact half-integer, stored doubled.
class HalfInt {
public:
    constexpr HalfInt() = default;
    static constexpr HalfInt from_doubled(std::int64_t doubled) { return HalfInt(doubled); }
    static constexpr HalfInt integer(std::int64_t v) { return HalfInt(2 * v); }

    constexpr std::int64_t doubled() const noexcept { return doubled_; }
    constexpr bool is_integer() const noexcept { return doubled_ % 2 == 0; }
    /// Floor of the value.
    constexpr std::int64_t floor() const noexcept { return doubled_ >= 0 ? doubled_ / 2 : -((-doubled_ + 1) / 2); }
    constexpr std::int64_t ceil() const noexcept { return -HalfInt(-doubled_).floor(); }

    std::string to_string() const;

    constexpr HalfInt operator+(HalfInt o) const noexcept { return HalfInt(doubled_ + o.doubled_); }
    constexpr HalfInt operator-(HalfInt o) const noexcept { return HalfInt(doubled_ - o.doubled_); }
    constexpr auto operator<=>(const HalfInt&) const = default;

private:
    constexpr explicit HalfInt(std::int64_t d) : doubled_(d) {}
    std::int64_t doubled_ = 0;
};

/// Integer sequence that is zero outside [offset, offset + size).
class IntSeq {
public:
    IntSeq() = default;
    explicit IntSeq(std::vector<BigInt> values, std::int64_t offset = 0) : values_(std::move(values)), offset_(offset) {}

    const BigInt& operator[](std::int64_t i) const noexcept;
    std::int64_t offset() const noexcept { return offset_; }
    std::int64_t end() const noexcept { return offset_ + static_cast<std::int64_t>(values_.size()); }
    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<BigInt>& values() const noexcept { return values_; }

    bool operator==(const IntSeq& o) const;

private:
    std::vector<BigInt> values_;
    std::int64_t offset_ = 0;
};

/// Coefficients in degrees 0..D. `truncated` is set when the list was cut at
/// a non-positive coefficient by the bracket.
class TruncatedSeries {
public:
    TruncatedSeries() = default;
    TruncatedSeries(std::vector<BigInt> coeffs, bool truncated) : coeffs_(std::move(coeffs)), truncated_(truncated) {}

    const std::vector<BigInt>& coeffs() const noexcept { return coeffs_; }
    bool truncated() const noexcept { return truncated_; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    const BigInt& operator[](std::size_t i) const { return coeffs_.at(i); }
    /// Zero beyond the stored range.
    BigInt at(std::int64_t i) const;

    bool operator==(const TruncatedSeries&) const = default;

private:
    std::vector<BigInt> coeffs_;
    bool truncated_ = false;
};

/// Coefficients of prod(1 - t^{d_i}) / (1 - t)^n in degrees 0..cap.
IntSeq raw_product(int n, std::span<const int> degrees, int cap);

/// Cuts a sequence (starting at index 0) before its first non-positive entry.
TruncatedSeries bracket(const IntSeq& seq);

/// [prod(1 - t^{d_i}) / (1 - t)^n]. Without a cap the expansion runs until the
/// first non-positive coefficient, which requires more forms than variables.
TruncatedSeries froberg_bracket(int n, std::span<const int> degrees, std::optional<int> cap = std::nullopt);

/// [(1 - t^d) S].
TruncatedSeries series_quotient_by_form(const TruncatedSeries& s, int d);

/// Socle degree of n+2 general d-th powers in n variables.
std::int64_t s_formula(int n, int d);

/// a_0, a_1 - a_0, ..., -a_last, i.e. the coefficients of (1 - t) sum a_i t^i.
IntSeq delta_seq(const IntSeq& a);

/// Index of the last stored coefficient.
int series_degree(const TruncatedSeries& s);

/// Lexicographic comparison of coefficient lists, missing entries read as 0.
std::strong_ordering lex_compare(std::span<const BigInt> a, std::span<const BigInt> b);

std::vector<BigInt> to_bigints(std::span<const std::int64_t> v);

} // namespace wlp

#endif
