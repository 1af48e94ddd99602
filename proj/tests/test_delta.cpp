#include <doctest.h>

#include <wlp/delta.hpp>

#include <set>
#include <utility>
#include <vector>

using namespace wlp;

namespace {

std::vector<BigInt> big(std::initializer_list<long long> v) { return std::vector<BigInt>(v.begin(), v.end()); }

HalfInt half(std::int64_t doubled) { return HalfInt::from_doubled(doubled); }

} // namespace

TEST_CASE("power_sum_coeffs")
{
    CHECK(power_sum_coeffs(2, 2) == IntSeq(big({1, 2, 1})));
    CHECK(power_sum_coeffs(4, 2) == IntSeq(big({1, 4, 6, 4, 1})));
    // (1+t+t^2)^3 by hand: 1,3,6,7,6,3,1
    CHECK(power_sum_coeffs(3, 3) == IntSeq(big({1, 3, 6, 7, 6, 3, 1})));
    CHECK(power_sum_coeffs(0, 5) == IntSeq(big({1})));
    for (int p = 1; p <= 7; ++p) {
        for (int d = 1; d <= 6; ++d) {
            auto a = power_sum_coeffs(p, d);
            const auto top = static_cast<std::int64_t>(p) * (d - 1);
            for (std::int64_t i = 0; i <= top; ++i) CHECK(a[i] == a[top - i]);
            for (std::int64_t i = 0; 2 * i < top; ++i) CHECK(a[i] <= a[i + 1]);
        }
    }
}

TEST_CASE("check_lemma1_hypotheses examples")
{
    for (int d = 2; d <= 40; ++d) CHECK(check_lemma1_hypotheses(4, d, HalfInt::integer(4 * (d - 1) / 3)).ok());

    // The scan for stilde(5, 2) runs on the power-7 sequence.
    CHECK(check_lemma1_hypotheses(7, 2, HalfInt::integer(2)).ok());
    auto r = check_lemma1_hypotheses(7, 2, half(3));
    CHECK_FALSE(r.ok());
    CHECK(r.first_violation.has_value());

    for (int n = 1; n <= 6; ++n) CHECK(check_lemma1_hypotheses(n, 1, HalfInt::integer(0)).ok());

    auto out_of_range = check_lemma1_hypotheses(4, 3, HalfInt::integer(4));
    CHECK_FALSE(out_of_range.range_ok);
    CHECK(out_of_range.first_violation->kind == HypothesisKind::Range);
}

TEST_CASE("stilde")
{
    CHECK(stilde(5, 2) == HalfInt::integer(2));
    CHECK(stilde(6, 5) == HalfInt::integer(12));
    CHECK(stilde(12, 2) == HalfInt::integer(5));
    CHECK(stilde(12, 3) == HalfInt::integer(11));
    // Half-integer minima exist; the integer variant rounds up to a passing s.
    CHECK(stilde(4, 5) == half(17));
    CHECK(stilde_integer(4, 5) == 9);
    CHECK(check_lemma1_hypotheses(6, 5, HalfInt::integer(9)).ok());
    CHECK_THROWS_AS(stilde(0, 2), SeriesError);
}

TEST_CASE("lemma2_g")
{
    for (int d = 2; d <= 10; ++d) {
        const std::int64_t c = static_cast<std::int64_t>(d + 1) * d / 2;
        CHECK(lemma2_g(d, d - 1) == c);
    }
    CHECK(lemma2_g(3, 3) == 6);
    // Symmetry about (8d/3 - 3)/2 where g is the quadratic, i.e. j >= d-2.
    for (int d = 3; d <= 30; d += 3) {
        const std::int64_t m = 8 * d / 3 - 3;
        for (std::int64_t j = d - 2; j <= m - (d - 2); ++j) CHECK(lemma2_g(d, j) == lemma2_g(d, m - j));
    }
    CHECK_THROWS_AS(lemma2_g(1, 0), SeriesError);
}

TEST_CASE("prop2_bound")
{
    for (int d = 1; d <= 12; ++d) CHECK(prop2_bound(2, d) == HalfInt::integer(4 * (d - 1) / 3));
    CHECK(prop2_bound(4, 2) == HalfInt::integer(2));
    CHECK(series_degree(froberg_bracket(4, std::vector<int>(6, 2))) == 2);
    CHECK(prop2_bound(3, 7) == HalfInt::integer(11));
    CHECK(prop2_bound(3, 2) == half(3));
}

TEST_CASE("induction step of the hypothesis check")
{
    for (int n = 4; n <= 8; ++n) {
        for (int d = 2; d <= 8; ++d) {
            const std::int64_t top = static_cast<std::int64_t>(n) * (d - 1);
            for (std::int64_t S = 0; S <= top; ++S) {
                if (!check_lemma1_hypotheses(n, d, half(S)).ok()) continue;
                CHECK(check_lemma1_hypotheses(n + 1, d, half(S + d - 1)).ok());
            }
        }
    }
}

TEST_CASE("base case d <= 100")
{
    for (int d = 2; d <= 100; ++d) {
        CAPTURE(d);
        CHECK(check_lemma1_hypotheses(4, d, HalfInt::integer(4 * (d - 1) / 3)).ok());
    }
}

TEST_CASE("difference sequence identities")
{
    for (int n = 2; n <= 8; ++n) {
        for (int d = 2; d <= 8; ++d) {
            auto a = power_sum_coeffs(n, d);
            auto da = delta_seq(a);
            const auto top = static_cast<std::int64_t>(n) * (d - 1);
            for (std::int64_t i = -2; i <= top + 3; ++i) CHECK(da[i] == -da[top + 1 - i]);
            // b = power n+1, Delta(b)_i = a_i - a_{i-d}
            auto db = delta_seq(power_sum_coeffs(n + 1, d));
            for (std::int64_t i = -2; i <= top + d + 3; ++i) CHECK(db[i] == a[i] - a[i - d]);
        }
    }
}

TEST_CASE("socle degree bound")
{
    // The degree is an integer, so a half-integer bound b only gives
    // deg <= ceil(b); the literal inequality misses by 1/2 in three cells.
    const std::set<std::pair<int, int>> half_short{{3, 2}, {3, 6}, {3, 12}};
    std::set<std::pair<int, int>> literal_failures;
    for (int n = 2; n <= 10; ++n) {
        for (int d = 2; d <= 12; ++d) {
            const std::vector<int> degs(static_cast<std::size_t>(n) + 2, d);
            const auto deg = series_degree(froberg_bracket(n, degs));
            const auto bound = prop2_bound(n, d);
            CHECK(deg <= bound.ceil());
            if (2 * deg > bound.doubled()) literal_failures.insert({n, d});
        }
    }
    CHECK(literal_failures == half_short);
}

TEST_CASE("fails_by_lemma3")
{
    auto e = fails_by_lemma3(12, 2);
    REQUIRE(e.has_value());
    CHECK(e->kind == EvidenceKind::LemmaFamily);
    CHECK(e->base_pair == std::pair{5, 2});
    CHECK(stilde_integer(5, 2) < s_formula(5, 2));

    auto seven_five = fails_by_lemma3(7, 5);
    REQUIRE(seven_five.has_value());
    CHECK(seven_five->base_pair == std::pair{6, 5});

    CHECK_FALSE(fails_by_lemma3(5, 2).has_value());
    CHECK_FALSE(fails_by_lemma3(6, 1).has_value());
    CHECK_THROWS_AS(fails_by_lemma3(3, 2), SeriesError);
}

TEST_CASE("almost_classification grid")
{
    const std::set<std::pair<int, int>> expected{{4, 2}, {5, 2}, {5, 3}, {5, 5}, {7, 2},
                                                 {7, 3}, {9, 2}, {9, 3}, {11, 2}, {11, 3}};
    std::set<std::pair<int, int>> got;
    for (int N = 4; N <= 13; ++N)
        for (int d = 2; d <= 40; ++d)
            if (almost_classification(N, d) == AlmostVerdict::PossibleException) got.insert({N, d});
    CHECK(got == expected);
    CHECK(almost_classification(9, 4) == AlmostVerdict::FailsByBound);
    CHECK(almost_classification(4, 3) == AlmostVerdict::FailsByBound);
    CHECK(almost_classification(5, 5) == AlmostVerdict::PossibleException);
}

TEST_CASE("evidence kind names round trip")
{
    for (auto k : {EvidenceKind::LemmaFamily, EvidenceKind::SporadicCertificate, EvidenceKind::KnownResult,
                   EvidenceKind::RankWitness})
        CHECK(evidence_kind_from_string(to_string(k)) == k);
    CHECK_THROWS(evidence_kind_from_string("Nope"));
}
