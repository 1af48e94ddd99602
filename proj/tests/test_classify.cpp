#include <doctest.h>

#include <wlp/classify.hpp>
#include <wlp/series.hpp>

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

using namespace wlp;

namespace {

const PrimeField F(kDefaultPrimes[0]);

using Family = std::vector<std::vector<int>>;

std::vector<std::vector<int>> subsets_of_size(int m, int s)
{
    std::vector<std::vector<int>> out;
    for (unsigned b = 0; b < (1u << m); ++b) {
        if (__builtin_popcount(b) != s) continue;
        std::vector<int> v;
        for (int e = 0; e < m; ++e)
            if (b >> e & 1u) v.push_back(e);
        out.push_back(v);
    }
    return out;
}

// Every tuple of subsets with the given sizes, filtered by the multiplicity
// condition and canonicalised by sorting equal-size runs.
std::set<Family> brute_force_covers(int m, std::vector<int> sizes, int mult)
{
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    std::set<Family> out;
    Family cur(sizes.size());
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == sizes.size()) {
            std::vector<int> cnt(static_cast<std::size_t>(m), 0);
            for (const auto& s : cur)
                for (auto e : s) ++cnt[static_cast<std::size_t>(e)];
            if (std::any_of(cnt.begin(), cnt.end(), [&](int c) { return c != mult; })) return;
            Family canon = cur;
            for (std::size_t a = 0; a < canon.size();) {
                std::size_t b = a;
                while (b < canon.size() && canon[b].size() == canon[a].size()) ++b;
                std::sort(canon.begin() + static_cast<std::ptrdiff_t>(a), canon.begin() + static_cast<std::ptrdiff_t>(b));
                a = b;
            }
            out.insert(canon);
            return;
        }
        for (const auto& s : subsets_of_size(m, sizes[i])) {
            cur[i] = s;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return out;
}

void check_covers(int m, const std::vector<int>& sizes, int mult)
{
    const auto got = enumerate_cover_families(m, sizes, mult);
    const auto want = brute_force_covers(m, sizes, mult);
    std::set<Family> seen;
    for (const auto& f : got) {
        CHECK(f.m == m);
        seen.insert(f.subsets);
    }
    CHECK(seen.size() == got.size());
    CHECK(seen == want);
}

// l^d o F through the multinomial expansion of l^d into monomial operators.
bool killed_by_power(const LinearForm& l, int d, const GradedForm& f)
{
    const int n = l.nvars();
    if (d > f.degree()) return true;
    const auto ops = monomial_basis(n, d);
    std::vector<std::uint32_t> acc(static_cast<std::size_t>(monomial_count(n, f.degree() - d)), 0);
    for (std::size_t i = 0; i < ops->size(); ++i) {
        const auto a = ops->exps(i);
        // d! / prod a_i! * prod l_i^{a_i}
        std::uint32_t c = 1;
        int used = 0;
        for (int v = 0; v < n; ++v)
            for (int r = 1; r <= a[static_cast<std::size_t>(v)]; ++r) {
                ++used;
                c = F.mul(c, F.mul(static_cast<std::uint32_t>(used), F.inv(static_cast<std::uint32_t>(r))));
                c = F.mul(c, l.coeffs()[static_cast<std::size_t>(v)]);
            }
        if (c == 0) continue;
        const auto part = contract_monomial(a, f);
        for (const auto& t : part.terms()) acc[t.index] = F.add(acc[t.index], F.mul(c, t.coeff));
    }
    return std::all_of(acc.begin(), acc.end(), [](std::uint32_t x) { return x == 0; });
}

ClassifyOptions quick()
{
    ClassifyOptions o;
    o.confirm = false;
    return o;
}

bool has_kind(const ClassificationRecord& r, EvidenceKind k)
{
    return std::any_of(r.evidence.begin(), r.evidence.end(), [&](const FailureEvidence& e) { return e.kind == k; });
}

} // namespace

TEST_CASE("cover families: small cases")
{
    auto a = enumerate_cover_families(2, {1, 1, 1, 1});
    REQUIRE(a.size() == 1);
    CHECK(a[0].subsets == Family{{0}, {0}, {1}, {1}});
    CHECK(a[0].to_string() == "{1}{1}{2}{2}");

    auto b = enumerate_cover_families(2, {2, 2});
    REQUIRE(b.size() == 1);
    CHECK(b[0].subsets == Family{{0, 1}, {0, 1}});
}

TEST_CASE("cover families agree with brute force")
{
    check_covers(6, {3, 3, 3, 1, 1, 1}, 2);
    check_covers(5, {3, 3, 2, 2}, 2);
    check_covers(6, {5, 5, 1, 1}, 2);
    check_covers(4, {1, 1, 1, 1, 2, 2}, 2);
    check_covers(8, {5, 3}, 1);
    check_covers(6, {3, 3}, 1);
}

TEST_CASE("cover families: errors and early stop")
{
    CHECK_THROWS_AS(enumerate_cover_families(3, {2, 2}), CoverError);
    CHECK_THROWS_AS(enumerate_cover_families(3, {4, 2}), CoverError);
    CHECK(enumerate_cover_families(10, {5, 5}, 1).size() == 126);
    int seen = 0;
    for_each_cover_family(12, {7, 7, 5, 5}, 2, [&](const CoverFamily&) { return ++seen < 10; });
    CHECK(seen == 10);
}

TEST_CASE("certificate forms")
{
    SUBCASE("n=8, d=2: two quintuples")
    {
        const auto spec = IdealSpec::moment(8, 10, 2);
        const CoverFamily fam{10, 1, {{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}}};
        const auto f = certificate_form(fam, spec, F);
        CHECK(f.degree() == 4);
        CHECK(!f.is_zero());
        for (const auto& l : spec.forms(F)) CHECK(killed_by_power(l, 2, f));
    }
    SUBCASE("n=4, d=5: three linear and three quadratic factors")
    {
        const auto spec = IdealSpec::moment(4, 6, 5);
        const auto fams = enumerate_cover_families(6, {3, 3, 3, 1, 1, 1});
        const auto f = certificate_form(fams.back(), spec, F);
        CHECK(f.degree() == 9);
        for (const auto& l : spec.forms(F)) CHECK(killed_by_power(l, 5, f));
        // Four factors miss each form, so fourth powers need not vanish.
        CHECK_THROWS_AS(certificate_form(fams.back(), IdealSpec::moment(4, 6, 4), F), VerificationFailure);
    }
    SUBCASE("n=10, d=3")
    {
        const auto spec = IdealSpec::moment(10, 12, 3);
        CoverFamily fam;
        for_each_cover_family(12, {5, 5, 7, 7}, 2, [&](const CoverFamily& c) {
            fam = c;
            return false;
        });
        CHECK(certificate_form(fam, spec, F).degree() == 10);
    }
    SUBCASE("parity and universe errors")
    {
        const CoverFamily even{10, 1, {{0, 1, 2, 3}, {4, 5, 6, 7, 8, 9}}};
        CHECK_THROWS_AS(certificate_form(even, IdealSpec::moment(8, 10, 2), F), CoverError);
        const CoverFamily small{2, 2, {{0, 1}, {0, 1}}};
        CHECK_THROWS_AS(certificate_form(small, IdealSpec::moment(8, 10, 2), F), CoverError);
        const CoverFamily fam{10, 1, {{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}}};
        CHECK_THROWS_AS(certificate_form(fam, IdealSpec::random(8, 10, 2, Seed{1}), F), CoverError);
    }
}

TEST_CASE("sporadic cases table")
{
    REQUIRE(sporadic_cases().size() == 6);
    for (const auto& c : sporadic_cases()) {
        int total = 0, deg = 0;
        for (auto s : c.sizes) {
            total += s;
            deg += (c.n + 1 - s) / 2;
        }
        CHECK(total == c.multiplicity * c.m);
        CHECK(deg == c.socle);
        CHECK(c.m == c.n + 2);
        CHECK(c.decides_n == c.n + 1);
    }
    CHECK(sporadic_case(10, 12, 3).target == 683);
    CHECK_THROWS(sporadic_case(9, 11, 3));
}

TEST_CASE("sporadic spans")
{
    for (const auto& c : sporadic_cases()) {
        if (c.n == 10 && c.d == 3) continue;   // acceptance run
        CAPTURE(c.n);
        CAPTURE(c.d);
        SporadicOptions opt;
        opt.full_check = c.n <= 8;
        const auto r = sporadic_certificate(c, F, opt);
        CHECK(r.matched);
        CHECK(r.span_dim == c.target);
        CHECK(r.families_used == static_cast<std::size_t>(r.span_dim));
        // The span sits inside the inverse system in the socle degree.
        if (c.n <= 8) CHECK(inverse_dim(IdealSpec::moment(c.n, c.m, c.d), c.socle, F) == r.span_dim);
    }
}

TEST_CASE("sporadic span: exhaustive, order and reporting a miss")
{
    const auto& c = sporadic_case(8, 10, 2);
    SporadicOptions ex;
    ex.exhaustive = true;
    const auto all = sporadic_certificate(c, F, ex);
    CHECK(all.families_tried == 126);
    CHECK(all.span_dim == 16);

    SporadicOptions other;
    other.order_seed = 99;
    CHECK(sporadic_certificate(c, F, other).span_dim == 16);

    SporadicOptions high;
    high.target = 17;
    const auto miss = sporadic_certificate(c, F, high);
    CHECK(!miss.matched);
    CHECK(miss.span_dim == 16);
    CHECK(miss.target == 17);
}

TEST_CASE("sporadic span cache")
{
    const auto path = std::filesystem::temp_directory_path() / "wlp_span_cache_test.ndjson";
    std::filesystem::remove(path);
    const auto& c = sporadic_case(6, 8, 3);
    {
        ResultCache cache(path);
        SporadicOptions opt;
        opt.cache = &cache;
        const auto cold = sporadic_certificate(c, F, opt);
        CHECK(cold.families_tried > 0);
        const auto warm = sporadic_certificate(c, F, opt);
        CHECK(warm.span_dim == cold.span_dim);
        CHECK(warm.families_tried == 0);
    }
    ResultCache reread(path);
    CHECK(reread.size() == 1);
    std::filesystem::remove(path);
}

TEST_CASE("degree witness examples")
{
    const auto w32 = degree_witness(3, 2, F);
    CHECK(w32.form == hankel_form(3, F));
    CHECK(w32.report.degree == 2);

    const auto w54 = degree_witness(5, 4, F);
    CHECK(w54.report.degree == 9);
    CHECK(w54.form == power(hankel_form(5, F), 3));
    for (std::uint32_t a = 0; a < 7; ++a) CHECK(killed_by_power(moment_form(5, a, F), 4, w54.form));

    const auto w65 = degree_witness(6, 5, F);
    CHECK(w65.report.degree == 13);
    CHECK(w65.report.verified);
    for (std::uint32_t a = 0; a < 8; ++a) CHECK(killed_by_power(moment_form(6, a, F), 5, w65.form));
}

TEST_CASE("degree witness grid")
{
    for (int n = 1; n <= 6; ++n)
        for (int d = 1; d <= 6; ++d) {
            CAPTURE(n);
            CAPTURE(d);
            const auto w = degree_witness(n, d, F);
            CHECK(w.report.degree == s_formula(n, d));
            CHECK(!w.form.is_zero());
            if (n >= 2 && n <= 4 && d <= 4)
                CHECK(inverse_dim(IdealSpec::moment(n, n + 2, d), static_cast<int>(s_formula(n, d)) + 1, F) == 0);
        }
    // Another specialisation of the parameters.
    const auto w = degree_witness(4, 5, F, {1, 4, 9, 16, 25, 36});
    CHECK(w.report.degree == s_formula(4, 5));
    CHECK_THROWS_AS(degree_witness(4, 5, F, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("kernel witness agrees in degree")
{
    for (int n = 2; n <= 4; ++n)
        for (int d = 2; d <= 4; ++d) {
            const auto k = kernel_witness(n, d, F);
            CHECK(k.report.degree == s_formula(n, d));
            for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(n + 2); ++a)
                CHECK(killed_by_power(moment_form(n, a, F), d, k.form));
        }
}

TEST_CASE("classify examples")
{
    const auto h = classify(4, 2, quick());
    CHECK(h.verdict == Verdict::Holds);
    CHECK(has_kind(h, EvidenceKind::RankWitness));

    const auto lf = classify(10, 4, quick());
    CHECK(lf.verdict == Verdict::Fails);
    CHECK(lf.confirmed);
    CHECK(has_kind(lf, EvidenceKind::LemmaFamily));

    const auto sp = classify(9, 3);
    CHECK(sp.verdict == Verdict::Fails);
    CHECK(sp.confirmed);
    REQUIRE(has_kind(sp, EvidenceKind::SporadicCertificate));
    CHECK(sp.evidence.size() == 4);
    CHECK(sp.evidence.front().base_pair == std::pair{8, 3});
    CHECK(sp.evidence.front().detail.find("171") != std::string::npos);
    CHECK(sp.evidence.front().detail.find("135") != std::string::npos);

    const auto one = classify(1, 7, quick());
    CHECK(one.verdict == Verdict::Holds);
    CHECK(has_kind(one, EvidenceKind::KnownResult));

    CHECK_THROWS_AS(classify(0, 2), std::invalid_argument);
}

TEST_CASE("classify small grid matches expectation")
{
    ClassifyOptions o = quick();
    o.jobs = 2;
    const auto recs = classify_grid(8, 3, o);
    REQUIRE(recs.size() == 24);
    for (const auto& r : recs) {
        CAPTURE(r.n);
        CAPTURE(r.d);
        CHECK(r.verdict == expected_verdict(r.n, r.d));
        if (r.verdict == Verdict::Fails) CHECK(!r.evidence.empty());
        if (r.verdict == Verdict::Holds && r.n >= 2) CHECK(has_kind(r, EvidenceKind::RankWitness));
    }
}

TEST_CASE("expected verdicts")
{
    int holds = 0;
    for (int n = 1; n <= 11; ++n)
        for (int d = 1; d <= 6; ++d) holds += expected_verdict(n, d) == Verdict::Holds;
    CHECK(holds == 3 * 6 + 8 + 4);
    CHECK(verdict_from_string(to_string(Verdict::Undetermined)) == Verdict::Undetermined);
    CHECK_THROWS(verdict_from_string("maybe"));
}

TEST_CASE("reports")
{
    ClassificationRecord r{9, 3, Verdict::Fails, {{EvidenceKind::SporadicCertificate, {8, 3}, "span 171"}}, true, 1.5};
    const auto line = record_to_json(r);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(record_from_json(line) == r);

    ClassificationRecord h{4, 2, Verdict::Holds, {}, true, 0.25};
    std::istringstream in(report({r, h}, ReportFormat::Json));
    CHECK(parse_json_report(in) == std::vector<ClassificationRecord>{r, h});

    const auto md = report({r, h}, ReportFormat::Markdown);
    CHECK(std::count(md.begin(), md.end(), '\n') == 4);
    CHECK(md.find("| 9 | 3 | Fails | yes |") != std::string::npos);

    CHECK(report({}, ReportFormat::Json).empty());
    const auto empty_md = report({}, ReportFormat::Markdown);
    CHECK(std::count(empty_md.begin(), empty_md.end(), '\n') == 2);

    CHECK(report_format_from_string("markdown") == ReportFormat::Markdown);
    CHECK_THROWS(report_format_from_string("xml"));
    CHECK_THROWS_AS(record_from_json("{\"n\":1}"), std::invalid_argument);
}
