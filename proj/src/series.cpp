#include <wlp/series.hpp>

#include <algorithm>
#include <numeric>

namespace wlp {

std::string HalfInt::to_string() const
{
    if (is_integer()) return std::to_string(doubled_ / 2);
    return std::to_string(doubled_) + "/2";
}

const BigInt& IntSeq::operator[](std::int64_t i) const noexcept
{
    static const BigInt zero = 0;
    if (i < offset_ || i >= end()) return zero;
    return values_[static_cast<std::size_t>(i - offset_)];
}

bool IntSeq::operator==(const IntSeq& o) const
{
    const auto lo = std::min(offset_, o.offset_);
    const auto hi = std::max(end(), o.end());
    for (auto i = lo; i < hi; ++i) {
        if ((*this)[i] != o[i]) return false;
    }
    return true;
}

BigInt TruncatedSeries::at(std::int64_t i) const
{
    if (i < 0 || i >= static_cast<std::int64_t>(coeffs_.size())) return 0;
    return coeffs_[static_cast<std::size_t>(i)];
}

IntSeq raw_product(int n, std::span<const int> degrees, int cap)
{
    if (n < 1) throw SeriesError("raw_product: need at least one variable");
    if (cap < 0) throw SeriesError("raw_product: negative cap");
    const auto len = static_cast<std::size_t>(cap) + 1;
    std::vector<BigInt> c(len, 0);
    c[0] = 1;
    for (int d : degrees) {
        if (d < 1) throw SeriesError("raw_product: degrees must be positive");
        for (std::size_t i = len; i-- > static_cast<std::size_t>(d);) c[i] -= c[i - static_cast<std::size_t>(d)];
    }
    for (int k = 0; k < n; ++k) {
        for (std::size_t i = 1; i < len; ++i) c[i] += c[i - 1];
    }
    return IntSeq(std::move(c));
}

TruncatedSeries bracket(const IntSeq& seq)
{
    std::vector<BigInt> out;
    for (std::int64_t i = 0; i < seq.end(); ++i) {
        if (seq[i] <= 0) return TruncatedSeries(std::move(out), true);
        out.push_back(seq[i]);
    }
    // Everything after the stored range is zero.
    return TruncatedSeries(std::move(out), true);
}

TruncatedSeries froberg_bracket(int n, std::span<const int> degrees, std::optional<int> cap)
{
    if (cap) {
        auto raw = raw_product(n, degrees, *cap);
        std::vector<BigInt> out;
        for (int i = 0; i <= *cap; ++i) {
            if (raw[i] <= 0) return TruncatedSeries(std::move(out), true);
            out.push_back(raw[i]);
        }
        return TruncatedSeries(std::move(out), false);
    }
    if (degrees.size() <= static_cast<std::size_t>(n))
        throw SeriesError("froberg_bracket: series is not bounded (" + std::to_string(degrees.size()) +
                          " forms in " + std::to_string(n) + " variables) and no cap given");
    // With more forms than variables the expansion is a polynomial of degree
    // below sum(d_i), and it vanishes at t = 1, so a non-positive entry exists.
    const int bound = std::accumulate(degrees.begin(), degrees.end(), 0);
    return bracket(raw_product(n, degrees, bound));
}

TruncatedSeries series_quotient_by_form(const TruncatedSeries& s, int d)
{
    if (d < 1) throw SeriesError("series_quotient_by_form: degree must be positive");
    const auto len = s.size() + static_cast<std::size_t>(d);
    std::vector<BigInt> c(len, 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        c[i] += s[i];
        c[i + static_cast<std::size_t>(d)] -= s[i];
    }
    return bracket(IntSeq(std::move(c)));
}

std::int64_t s_formula(int n, int d)
{
    if (n < 1 || d < 1) throw SeriesError("s_formula: need n >= 1 and d >= 1");
    const std::int64_t N = n, D = d;
    if (n % 2 == 1) return (N + 1) * (D - 1) / 2;
    return N * (N + 2) * (D - 1) / (2 * (N + 1));
}

IntSeq delta_seq(const IntSeq& a)
{
    if (a.size() == 0) return IntSeq({}, a.offset());
    std::vector<BigInt> out;
    out.reserve(a.size() + 1);
    for (std::int64_t i = a.offset(); i <= a.end(); ++i) out.push_back(a[i] - a[i - 1]);
    return IntSeq(std::move(out), a.offset());
}

int series_degree(const TruncatedSeries& s)
{
    if (s.size() == 0) throw SeriesError("series_degree: zero series");
    return static_cast<int>(s.size()) - 1;
}

std::strong_ordering lex_compare(std::span<const BigInt> a, std::span<const BigInt> b)
{
    const auto len = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < len; ++i) {
        const BigInt x = i < a.size() ? a[i] : BigInt(0);
        const BigInt y = i < b.size() ? b[i] : BigInt(0);
        if (x < y) return std::strong_ordering::less;
        if (x > y) return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

std::vector<BigInt> to_bigints(std::span<const std::int64_t> v)
{
    return std::vector<BigInt>(v.begin(), v.end());
}

} // namespace wlp
