#ifndef WLP_CLASSIFY_HPP
#define WLP_CLASSIFY_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <wlp/apolar.hpp>
#include <wlp/delta.hpp>
#include <wlp/hilbert.hpp>

namespace wlp {

/// A constructed form failed its own annihilation or degree check.
class VerificationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CoverError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Subsets of {0..m-1} in which every element occurs exactly `multiplicity`
/// times. Subsets are sorted; the list is ordered by decreasing size and, within
/// one size, nondecreasing lexicographically.
struct CoverFamily {
    int m = 0;
    int multiplicity = 2;
    std::vector<std::vector<int>> subsets;

    bool operator==(const CoverFamily&) const = default;
    /// 1-based, e.g. "{1,2,3}{4,5,6}".
    std::string to_string() const;
};

/// Visits every family in deterministic order until `visit` returns false.
/// Requires sum(sizes) = multiplicity * m.
void for_each_cover_family(int m, std::vector<int> sizes, int multiplicity,
                           const std::function<bool(const CoverFamily&)>& visit);
std::vector<CoverFamily> enumerate_cover_families(int m, std::vector<int> sizes, int multiplicity = 2);

/// Product of F_S over the family, where F_S is the mixed form of degree
/// (n+1-|S|)/2 vanishing under the forms indexed by S. Checks that every
/// form of the spec kills the product with its d-th power.
GradedForm certificate_form(const CoverFamily& family, const IdealSpec& spec, const PrimeField& field);

struct SporadicCase {
    int n, m, d;
    int socle;                    // degree of the certificate forms
    std::int64_t target;          // expected span dimension
    std::vector<int> sizes;
    int multiplicity;
    int decides_n;                // R_{n+1,n+2,d} is the WLP case it settles
};

/// The six cases (4,6,5), (6,8,3), (8,10,2), (8,10,3), (10,12,2), (10,12,3).
const std::vector<SporadicCase>& sporadic_cases();
const SporadicCase& sporadic_case(int n, int m, int d);

struct SporadicOptions {
    /// Moment parameters; empty means alpha_i = i-1.
    std::vector<std::int64_t> alphas;
    /// Stop at this span dimension instead of the case target.
    std::optional<std::int64_t> target;
    /// Keep enumerating after the target is reached.
    bool exhaustive = false;
    /// Families are tried in a permutation drawn from this seed.
    std::uint64_t order_seed = 1;
    /// Contract every used product with l_i^d. Otherwise only the first one is
    /// contracted; the rest follow from the checked factor annihilators.
    bool full_check = false;
    ResultCache* cache = nullptr;
};

struct SporadicResult {
    int n, m, d, socle;
    std::int64_t span_dim;
    std::int64_t target;
    bool matched;                 // span_dim == target
    std::size_t families_tried;
    std::size_t families_used;    // families whose form enlarged the span
    double seconds;
};

SporadicResult sporadic_certificate(const SporadicCase& c, const PrimeField& field, const SporadicOptions& opt = {});

struct WitnessReport {
    int n, d;
    std::int64_t s;
    std::string construction;
    int degree;
    std::size_t terms;
    bool verified;
    double seconds;
};

struct Witness {
    GradedForm form;
    WitnessReport report;
};

/// Nonzero form of degree s(n,d) killed by l_i^d for the n+2 moment forms at
/// `alphas` (default 0..n+1). Built from Hankel and mixed forms; degree and
/// annihilation are checked before returning.
Witness degree_witness(int n, int d, const PrimeField& field, std::vector<std::int64_t> alphas = {});

/// Same contract, read off a kernel vector of the contraction constraints.
/// Only for small monomial spaces.
Witness kernel_witness(int n, int d, const PrimeField& field, std::vector<std::int64_t> alphas = {});

enum class Verdict { Holds, Fails, Undetermined };
std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct ClassificationRecord {
    int n = 0, d = 0;
    Verdict verdict = Verdict::Undetermined;
    std::vector<FailureEvidence> evidence;
    /// Fails: settled by theory, or recomputed at two primes and two
    /// specialisations. Holds: always true.
    bool confirmed = false;
    double seconds = 0;

    bool operator==(const ClassificationRecord&) const = default;
};

struct ClassifyOptions {
    std::vector<std::uint32_t> primes{kDefaultPrimes.begin(), kDefaultPrimes.end()};
    Seed seed{1};
    bool confirm = true;
    int jobs = 1;
    EngineOptions engine;
    /// Called once per finished cell of classify_grid, never concurrently.
    std::function<void(const ClassificationRecord&)> on_record;
};

ClassificationRecord classify(int n, int d, const ClassifyOptions& opt = {});
std::vector<ClassificationRecord> classify_grid(int n_max, int d_max, const ClassifyOptions& opt = {});

/// Reference table: holds iff n <= 3, d = 1 or (n,d) in
/// {(4,2), (5,2), (5,3), (7,2)}.
Verdict expected_verdict(int n, int d);

enum class ReportFormat { Json, Markdown };
ReportFormat report_format_from_string(const std::string& s);

/// Json: one object per line. Markdown: one table row per record.
std::string report(const std::vector<ClassificationRecord>& records, ReportFormat format);
std::string record_to_json(const ClassificationRecord& r);
ClassificationRecord record_from_json(const std::string& line);
std::vector<ClassificationRecord> parse_json_report(std::istream& in);

} // namespace wlp

#endif
