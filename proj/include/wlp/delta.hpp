#ifndef WLP_DELTA_HPP
#define WLP_DELTA_HPP

#include <optional>
#include <string>
#include <utility>

#include <wlp/series.hpp>

namespace wlp {

/// Coefficients of (1 + t + ... + t^{d-1})^p.
IntSeq power_sum_coeffs(int p, int d);

enum class HypothesisKind { Range, Monotone, Symmetric };

struct HypothesisViolation {
    HypothesisKind kind;
    /// Monotone: Delta_i < Delta_{i+1}.  Symmetric: Delta_i < Delta_j.
    /// Range: both zero.
    std::int64_t i = 0;
    std::int64_t j = 0;
};

/// Hypothesis check of the difference-sequence induction for the sequence
/// a = power_sum_coeffs(p, d) at the half-integer s:
///   range:     p(d-1)/2 - s >= (d-1)/2
///   monotone:  Delta_i >= Delta_{i+1} for integers s <= i <= p(d-1) - s
///   symmetric: Delta_{s-j} >= Delta_{s+j+1} for half-integers 0 <= j <= s
///              with both indices integral.
struct LemmaHypothesisReport {
    int p = 0;
    int d = 0;
    HalfInt s;
    bool range_ok = false;
    bool eq_one_ok = false;
    bool eq_two_ok = false;
    std::optional<HypothesisViolation> first_violation;

    bool ok() const noexcept { return range_ok && eq_one_ok && eq_two_ok; }
};

LemmaHypothesisReport check_lemma1_hypotheses(int p, int d, HalfInt s);

class NoValidS : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Smallest half-integer s passing the hypotheses for the power n+2.
HalfInt stilde(int n, int d);
/// Smallest integer s passing the hypotheses for the power n+2.
std::int64_t stilde_integer(int n, int d);

/// C(j+2, 2) - 4 C(j+2-d, 2), with C(m, 2) = 0 for m < 2.
std::int64_t lemma2_g(int d, std::int64_t j);

/// floor(4(d-1)/3) + (n-2)(d-1)/2.
HalfInt prop2_bound(int n, int d);

enum class EvidenceKind { LemmaFamily, SporadicCertificate, KnownResult, RankWitness };

struct FailureEvidence {
    EvidenceKind kind = EvidenceKind::LemmaFamily;
    std::pair<int, int> base_pair{0, 0};
    std::string detail;

    bool operator==(const FailureEvidence&) const = default;
};

std::string to_string(EvidenceKind k);
EvidenceKind evidence_kind_from_string(const std::string& s);

/// Failure of R_{N,N+1,d} propagated from a smaller case: some n0 <= N-1 with
/// n0 = N-1 (mod 2) has stilde_integer(n0, d) < s(n0, d). The reported base
/// pair is (n0, d) for the smallest such n0.
std::optional<FailureEvidence> fails_by_lemma3(int N, int d);

enum class AlmostVerdict { FailsByBound, PossibleException };

AlmostVerdict almost_classification(int N, int d);

} // namespace wlp

#endif
