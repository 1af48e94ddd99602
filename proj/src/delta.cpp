#include <wlp/delta.hpp>

#include <stdexcept>

namespace wlp {

IntSeq power_sum_coeffs(int p, int d)
{
    if (p < 0 || d < 1) throw SeriesError("power_sum_coeffs: need p >= 0 and d >= 1");
    std::vector<BigInt> c{1};
    for (int k = 0; k < p; ++k) {
        std::vector<BigInt> next(c.size() + static_cast<std::size_t>(d) - 1, 0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            for (int t = 0; t < d; ++t) next[i + static_cast<std::size_t>(t)] += c[i];
        }
        c = std::move(next);
    }
    return IntSeq(std::move(c));
}

namespace {

// All index arithmetic is in doubled units: S = 2s, and the top index of the
// power sequence is p(d-1).
LemmaHypothesisReport check_on(int p, int d, HalfInt s, const IntSeq& delta)
{
    LemmaHypothesisReport r;
    r.p = p;
    r.d = d;
    r.s = s;
    const std::int64_t S = s.doubled();
    const std::int64_t top = static_cast<std::int64_t>(p) * (d - 1);

    r.range_ok = S >= 0 && top - S >= d - 1;
    if (!r.range_ok) r.first_violation = HypothesisViolation{HypothesisKind::Range, 0, 0};

    r.eq_one_ok = true;
    const std::int64_t lo = (S + 1) / 2;
    const std::int64_t hi = (2 * top - S) >= 0 ? (2 * top - S) / 2 : -1;
    for (std::int64_t i = lo; i <= hi; ++i) {
        if (delta[i] < delta[i + 1]) {
            r.eq_one_ok = false;
            if (!r.first_violation) r.first_violation = HypothesisViolation{HypothesisKind::Monotone, i, i + 1};
            break;
        }
    }

    r.eq_two_ok = true;
    for (std::int64_t J = 0; J <= S; ++J) {
        if ((S - J) % 2 != 0) continue;
        const std::int64_t i = (S - J) / 2;
        const std::int64_t j = (S + J) / 2 + 1;
        if (delta[i] < delta[j]) {
            r.eq_two_ok = false;
            if (!r.first_violation) r.first_violation = HypothesisViolation{HypothesisKind::Symmetric, i, j};
            break;
        }
    }
    return r;
}

} // namespace

LemmaHypothesisReport check_lemma1_hypotheses(int p, int d, HalfInt s)
{
    if (p < 1 || d < 1) throw SeriesError("check_lemma1_hypotheses: need p >= 1 and d >= 1");
    return check_on(p, d, s, delta_seq(power_sum_coeffs(p, d)));
}

namespace {

std::int64_t scan(int n, int d, std::int64_t step)
{
    if (n < 1 || d < 1) throw SeriesError("stilde: need n >= 1 and d >= 1");
    const int p = n + 2;
    const std::int64_t bound = static_cast<std::int64_t>(p) * (d - 1);
    const IntSeq delta = delta_seq(power_sum_coeffs(p, d));
    for (std::int64_t S = 0; S <= bound; S += step) {
        if (check_on(p, d, HalfInt::from_doubled(S), delta).ok()) return S;
    }
    throw NoValidS("no s satisfies the hypotheses for (n, d) = (" + std::to_string(n) + ", " + std::to_string(d) + ")");
}

std::int64_t choose2(std::int64_t m) { return m < 2 ? 0 : m * (m - 1) / 2; }

} // namespace

HalfInt stilde(int n, int d) { return HalfInt::from_doubled(scan(n, d, 1)); }

std::int64_t stilde_integer(int n, int d) { return scan(n, d, 2) / 2; }

std::int64_t lemma2_g(int d, std::int64_t j)
{
    if (d < 2) throw SeriesError("lemma2_g: need d >= 2");
    return choose2(j + 2) - 4 * choose2(j + 2 - d);
}

HalfInt prop2_bound(int n, int d)
{
    if (n < 2 || d < 1) throw SeriesError("prop2_bound: need n >= 2 and d >= 1");
    const std::int64_t base = 4 * static_cast<std::int64_t>(d - 1) / 3;
    return HalfInt::from_doubled(2 * base + static_cast<std::int64_t>(n - 2) * (d - 1));
}

std::string to_string(EvidenceKind k)
{
    switch (k) {
    case EvidenceKind::LemmaFamily: return "LemmaFamily";
    case EvidenceKind::SporadicCertificate: return "SporadicCertificate";
    case EvidenceKind::KnownResult: return "KnownResult";
    case EvidenceKind::RankWitness: return "RankWitness";
    }
    return "?";
}

EvidenceKind evidence_kind_from_string(const std::string& s)
{
    for (auto k : {EvidenceKind::LemmaFamily, EvidenceKind::SporadicCertificate, EvidenceKind::KnownResult,
                   EvidenceKind::RankWitness}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument("unknown evidence kind: " + s);
}

std::optional<FailureEvidence> fails_by_lemma3(int N, int d)
{
    if (N < 4 || d < 1) throw SeriesError("fails_by_lemma3: need N >= 4 and d >= 1");
    if (d == 1) return std::nullopt;
    for (int n0 = (N - 1) % 2 == 0 ? 2 : 3; n0 <= N - 1; n0 += 2) {
        std::int64_t st;
        try {
            st = stilde_integer(n0, d);
        } catch (const NoValidS&) {
            continue;
        }
        const auto s = s_formula(n0, d);
        if (st < s) {
            FailureEvidence e;
            e.kind = EvidenceKind::LemmaFamily;
            e.base_pair = {n0, d};
            e.detail = "stilde(" + std::to_string(n0) + "," + std::to_string(d) + ")=" + std::to_string(st) +
                       " < s(" + std::to_string(n0) + "," + std::to_string(d) + ")=" + std::to_string(s) +
                       "; fails for R_{" + std::to_string(n0 + 1) + "+k," + std::to_string(n0 + 2) +
                       "+k,d}, k even";
            return e;
        }
    }
    return std::nullopt;
}

AlmostVerdict almost_classification(int N, int d)
{
    if (N < 4 || d < 2) throw SeriesError("almost_classification: need N >= 4 and d >= 2");
    return fails_by_lemma3(N, d) ? AlmostVerdict::FailsByBound : AlmostVerdict::PossibleException;
}

} // namespace wlp
