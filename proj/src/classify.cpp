#include <wlp/classify.hpp>
#include <wlp/series.hpp>

#include <cstdio>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <exception>
#include <istream>
#include <numeric>
#include <random>
#include <unordered_map>
#include <sstream>

namespace wlp {

namespace {

double since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::uint32_t> field_alphas(const std::vector<std::int64_t>& alphas, const PrimeField& f)
{
    std::vector<std::uint32_t> out;
    for (auto a : alphas) out.push_back(f.from_int(a));
    return out;
}

std::vector<std::int64_t> default_alphas(int count)
{
    std::vector<std::int64_t> a(static_cast<std::size_t>(count));
    std::iota(a.begin(), a.end(), 0);
    return a;
}

} // namespace

// ---------------------------------------------------------------------------

std::string CoverFamily::to_string() const
{
    std::string s;
    for (const auto& sub : subsets) {
        s += '{';
        for (std::size_t i = 0; i < sub.size(); ++i) s += (i ? "," : "") + std::to_string(sub[i] + 1);
        s += '}';
    }
    return s;
}

void for_each_cover_family(int m, std::vector<int> sizes, int multiplicity,
                           const std::function<bool(const CoverFamily&)>& visit)
{
    if (m < 1 || multiplicity < 1) throw CoverError("cover family needs m >= 1 and multiplicity >= 1");
    for (auto s : sizes)
        if (s < 1 || s > m) throw CoverError("subset sizes must lie in [1, m]");
    if (std::accumulate(sizes.begin(), sizes.end(), 0) != multiplicity * m)
        throw CoverError("subset sizes must sum to " + std::to_string(multiplicity * m));
    std::sort(sizes.begin(), sizes.end(), std::greater<>());

    CoverFamily fam;
    fam.m = m;
    fam.multiplicity = multiplicity;
    fam.subsets.resize(sizes.size());
    std::vector<int> count(static_cast<std::size_t>(m), 0);
    bool stop = false;

    // Subset idx is built position by position; `tight` means the prefix so
    // far equals the lower bound (previous subset of the same size).
    auto place = [&](auto&& self, std::size_t idx) -> void {
        if (stop) return;
        if (idx == sizes.size()) {
            if (!visit(fam)) stop = true;
            return;
        }
        const int s = sizes[idx];
        const std::vector<int>* lower = (idx > 0 && sizes[idx - 1] == s) ? &fam.subsets[idx - 1] : nullptr;
        const int remaining_after = static_cast<int>(sizes.size() - idx - 1);
        auto& cur = fam.subsets[idx];
        cur.assign(static_cast<std::size_t>(s), 0);

        auto choose = [&](auto&& rec, int pos, int start, bool tight) -> void {
            if (stop) return;
            if (pos == s) {
                for (int e = 0; e < m; ++e)
                    if (multiplicity - count[static_cast<std::size_t>(e)] > remaining_after) return;
                self(self, idx + 1);
                return;
            }
            int from = start;
            if (tight && lower) from = std::max(from, (*lower)[static_cast<std::size_t>(pos)]);
            for (int e = from; e <= m - (s - pos); ++e) {
                if (count[static_cast<std::size_t>(e)] >= multiplicity) continue;
                cur[static_cast<std::size_t>(pos)] = e;
                ++count[static_cast<std::size_t>(e)];
                rec(rec, pos + 1, e + 1, tight && lower && e == (*lower)[static_cast<std::size_t>(pos)]);
                --count[static_cast<std::size_t>(e)];
                if (stop) return;
            }
        };
        choose(choose, 0, 0, true);
    };
    place(place, 0);
}

std::vector<CoverFamily> enumerate_cover_families(int m, std::vector<int> sizes, int multiplicity)
{
    std::vector<CoverFamily> out;
    for_each_cover_family(m, std::move(sizes), multiplicity, [&](const CoverFamily& f) {
        out.push_back(f);
        return true;
    });
    return out;
}

GradedForm certificate_form(const CoverFamily& family, const IdealSpec& spec, const PrimeField& field)
{
    if (spec.provenance != Provenance::MomentCurve) throw CoverError("certificate forms need a moment-curve spec");
    if (family.m != spec.m) throw CoverError("family universe does not match the number of forms");
    const auto alphas = field_alphas(spec.alphas, field);
    const int n = spec.n;
    GradedForm product = GradedForm::constant(n, 1, field);
    for (const auto& sub : family.subsets) {
        const int size = static_cast<int>(sub.size());
        if ((n + 1 - size) % 2 != 0 || n + 1 - size < 2)
            throw CoverError("subset of size " + std::to_string(size) + " gives no mixed form in " + std::to_string(n) +
                             " variables");
        const int k = (n + 1 - size) / 2;
        std::vector<std::uint32_t> a;
        for (auto i : sub) a.push_back(alphas.at(static_cast<std::size_t>(i)));
        product = multiply(product, mixed_form(n, k, a, field));
    }
    for (const auto& l : spec.forms(field))
        if (!contract(l, spec.d, product).is_zero())
            throw VerificationFailure("certificate " + family.to_string() + " is not annihilated in " + spec.describe());
    return product;
}

// ---------------------------------------------------------------------------

const std::vector<SporadicCase>& sporadic_cases()
{
    static const std::vector<SporadicCase> cases{
        {4, 6, 5, 9, 14, {3, 3, 3, 1, 1, 1}, 2, 5},  {6, 8, 3, 6, 43, {5, 5, 3, 3}, 2, 7},
        {8, 10, 2, 4, 16, {5, 5}, 1, 9},             {8, 10, 3, 8, 171, {5, 5, 5, 5}, 2, 9},
        {10, 12, 2, 5, 32, {7, 5}, 1, 11},           {10, 12, 3, 10, 683, {7, 7, 5, 5}, 2, 11},
    };
    return cases;
}

const SporadicCase& sporadic_case(int n, int m, int d)
{
    for (const auto& c : sporadic_cases())
        if (c.n == n && c.m == m && c.d == d) return c;
    throw std::invalid_argument("(" + std::to_string(n) + "," + std::to_string(m) + "," + std::to_string(d) +
                                ") is not a sporadic case");
}

SporadicResult sporadic_certificate(const SporadicCase& c, const PrimeField& field, const SporadicOptions& opt)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = IdealSpec::moment(c.n, c.m, c.d, opt.alphas.empty() ? default_alphas(c.m) : opt.alphas);
    const auto target = opt.target.value_or(c.target);
    SporadicResult res{c.n, c.m, c.d, c.socle, 0, target, false, 0, 0, 0};

    const ResultCache::Key key{opt.exhaustive ? std::string("span") : "span<=" + std::to_string(target), c.n, c.m, c.d,
                               c.socle, field.modulus(), spec.digest()};
    if (opt.cache)
        if (auto hit = opt.cache->lookup(key)) {
            res.span_dim = *hit;
            res.matched = res.span_dim == target;
            res.seconds = since(t0);
            return res;
        }

    if (c.m > 16) throw CoverError("sporadic families are stored as 16-bit masks");
    const std::size_t k = c.sizes.size();
    std::vector<std::uint16_t> masks;
    for_each_cover_family(c.m, c.sizes, c.multiplicity, [&](const CoverFamily& fam) {
        for (const auto& sub : fam.subsets) {
            std::uint16_t b = 0;
            for (auto e : sub) b = static_cast<std::uint16_t>(b | (1u << e));
            masks.push_back(b);
        }
        return true;
    });
    const std::size_t total = masks.size() / k;
    // Neighbouring families in lexicographic order share most factors, so
    // the span grows far faster along a seeded permutation.
    std::vector<std::uint32_t> order(total);
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), std::mt19937_64(opt.order_seed));

    const auto alphas = field_alphas(spec.alphas, field);
    const auto forms = spec.forms(field);
    std::unordered_map<std::uint16_t, GradedForm> factor;
    auto factor_of = [&](std::uint16_t b) -> const GradedForm& {
        auto it = factor.find(b);
        if (it != factor.end()) return it->second;
        std::vector<std::uint32_t> a;
        for (int e = 0; e < c.m; ++e)
            if (b >> e & 1u) a.push_back(alphas[static_cast<std::size_t>(e)]);
        const int kk = (c.n + 1 - static_cast<int>(a.size())) / 2;
        auto f = mixed_form(c.n, kk, a, field);
        for (int e = 0; e < c.m; ++e) {
            const int power = (b >> e & 1u) ? 1 : 2;
            if (!contract(forms[static_cast<std::size_t>(e)], power, f).is_zero())
                throw VerificationFailure("mixed factor is not annihilated by form " + std::to_string(e + 1));
        }
        return factor.emplace(b, std::move(f)).first->second;
    };
    // By the Leibniz rule l_i^d kills a product of factors when fewer than d
    // of them miss i.
    if (c.d <= static_cast<int>(k) - c.multiplicity)
        throw CoverError("factor annihilation does not imply annihilation of the product");

    EchelonBasis basis(static_cast<std::size_t>(monomial_count(c.n, c.socle)), field);
    for (auto idx : order) {
        if (!opt.exhaustive && static_cast<std::int64_t>(basis.size()) >= target) break;
        ++res.families_tried;
        GradedForm f = factor_of(masks[idx * k]);
        for (std::size_t i = 1; i < k; ++i) f = multiply(f, factor_of(masks[idx * k + i]));
        if (f.is_zero()) continue;
        if (f.degree() != c.socle) throw VerificationFailure("certificate degree " + std::to_string(f.degree()));
        if (!basis.insert(f.to_dense())) continue;
        if (++res.families_used > 1 && !opt.full_check) continue;
        for (const auto& l : forms)
            if (!contract(l, c.d, f).is_zero())
                throw VerificationFailure("certificate family " + std::to_string(idx) + " is not annihilated in " +
                                          spec.describe());
    }
    res.span_dim = static_cast<std::int64_t>(basis.size());
    res.matched = res.span_dim == target;
    if (opt.cache) opt.cache->store(key, res.span_dim);
    res.seconds = since(t0);
    return res;
}

// ---------------------------------------------------------------------------

namespace {

struct WitnessBuilder {
    int n;
    const PrimeField& field;
    std::vector<std::uint32_t> alphas;   // n+2 of them

    // Killed by l_i and by every square (even n).
    GradedForm single(std::size_t i) const
    {
        const std::uint32_t a[] = {alphas[i]};
        return mixed_form(n, n / 2, a, field);
    }

    GradedForm build(int d, std::string& how) const
    {
        if (d == 1) {
            how = "1";
            return GradedForm::constant(n, 1, field);
        }
        if (n % 2 == 1) {
            how = "H^" + std::to_string(d - 1) + " (Hankel, k=" + std::to_string((n + 1) / 2) + ")";
            return power(hankel_form(n, field), d - 1);
        }
        if (d == 2) {
            how = "F_1";
            return single(0);
        }
        if (d == 3) {
            how = "F_1^2";
            return power(single(0), 2);
        }
        if (d <= n + 1) {
            // G: linear annihilators l_d..l_{n+2}, plus l_{d-1} when d is odd.
            const int k = static_cast<int>(s_formula(d - 3, 2));
            std::vector<std::uint32_t> sub;
            if (d % 2 == 1) sub.push_back(alphas[static_cast<std::size_t>(d - 2)]);
            for (int i = d - 1; i < n + 2; ++i) sub.push_back(alphas[static_cast<std::size_t>(i)]);
            GradedForm f = mixed_form(n, k, sub, field);
            for (int i = 0; i < d - 1; ++i) f = multiply(f, single(static_cast<std::size_t>(i)));
            how = "G*F_1*..*F_" + std::to_string(d - 1) + " (G: k=" + std::to_string(k) + ", " +
                  std::to_string(sub.size()) + " linear)";
            return f;
        }
        const int c = (d - 1) % (n + 1) + 1;
        const int a = (d - c) / (n + 1);
        std::string inner;
        GradedForm f = build(c, inner);
        GradedForm all = GradedForm::constant(n, 1, field);
        for (int i = 0; i < n + 2; ++i) all = multiply(all, single(static_cast<std::size_t>(i)));
        f = multiply(f, power(all, a));
        how = "[" + inner + "]*(F_1*..*F_" + std::to_string(n + 2) + ")^" + std::to_string(a);
        return f;
    }
};

std::vector<std::int64_t> witness_alphas(int n, std::vector<std::int64_t> alphas)
{
    if (alphas.empty()) alphas = default_alphas(n + 2);
    if (static_cast<int>(alphas.size()) != n + 2) throw std::invalid_argument("degree witness needs n+2 parameters");
    return alphas;
}

void verify_witness(Witness& w, int n, int d, const std::vector<std::uint32_t>& alphas, const PrimeField& field)
{
    w.report.degree = w.form.degree();
    w.report.terms = w.form.terms().size();
    if (w.form.is_zero() || w.form.degree() != w.report.s)
        throw VerificationFailure("witness for (" + std::to_string(n) + "," + std::to_string(d) + ") has degree " +
                                  std::to_string(w.form.degree()) + (w.form.is_zero() ? " and is zero" : ""));
    for (auto a : alphas)
        if (!contract(moment_form(n, a, field), d, w.form).is_zero())
            throw VerificationFailure("witness for (" + std::to_string(n) + "," + std::to_string(d) +
                                      ") is not annihilated");
    w.report.verified = true;
}

} // namespace

Witness degree_witness(int n, int d, const PrimeField& field, std::vector<std::int64_t> alphas)
{
    if (n < 1 || d < 1) throw std::invalid_argument("degree witness needs n, d >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    const auto fa = field_alphas(witness_alphas(n, std::move(alphas)), field);
    WitnessBuilder b{n, field, fa};
    std::string how;
    Witness w{b.build(d, how), {n, d, s_formula(n, d), how, 0, 0, false, 0}};
    verify_witness(w, n, d, fa, field);
    w.report.seconds = since(t0);
    return w;
}

Witness kernel_witness(int n, int d, const PrimeField& field, std::vector<std::int64_t> alphas)
{
    if (n < 1 || d < 1) throw std::invalid_argument("kernel witness needs n, d >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    const auto fa = field_alphas(witness_alphas(n, std::move(alphas)), field);
    const auto s = static_cast<int>(s_formula(n, d));
    const auto basis = monomial_basis(n, s);
    if (basis->size() > 4000) throw std::invalid_argument("kernel witness: monomial space too large");
    const std::size_t out = s >= d ? static_cast<std::size_t>(monomial_count(n, s - d)) : 0;
    DenseMatrix m(out * fa.size(), basis->size());
    if (out > 0)
        for (std::size_t col = 0; col < basis->size(); ++col)
            for (std::size_t i = 0; i < fa.size(); ++i) {
                const auto img = contract(moment_form(n, fa[i], field), d, GradedForm::monomial(basis->exps(col), 1, field));
                for (const auto& t : img.terms()) m(i * out + t.index, col) = t.coeff;
            }
    auto ker = kernel_basis(std::move(m), field);
    if (ker.empty()) throw VerificationFailure("kernel witness: no kernel in degree " + std::to_string(s));
    Witness w{GradedForm::from_dense(n, s, ker.front(), field), {n, d, s, "kernel vector", 0, 0, false, 0}};
    verify_witness(w, n, d, fa, field);
    w.report.seconds = since(t0);
    return w;
}

// ---------------------------------------------------------------------------

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Holds: return "Holds";
    case Verdict::Fails: return "Fails";
    case Verdict::Undetermined: return "Undetermined";
    }
    return "?";
}

Verdict verdict_from_string(const std::string& s)
{
    if (s == "Holds") return Verdict::Holds;
    if (s == "Fails") return Verdict::Fails;
    if (s == "Undetermined") return Verdict::Undetermined;
    throw std::invalid_argument("unknown verdict '" + s + "'");
}

Verdict expected_verdict(int n, int d)
{
    if (n <= 3 || d == 1) return Verdict::Holds;
    const std::pair<int, int> c{n, d};
    for (auto e : {std::pair{4, 2}, {5, 2}, {5, 3}, {7, 2}})
        if (c == e) return Verdict::Holds;
    return Verdict::Fails;
}

namespace {

std::optional<FailureEvidence> rank_evidence(int n, int d, const ClassifyOptions& opt)
{
    const PrimeField f(opt.primes.front());
    const auto prof = wlp_rank_profile(IdealSpec::random(n, n + 1, d, opt.seed), f, opt.seed, opt.engine);
    if (!prof.all_maximal()) return std::nullopt;
    std::ostringstream os;
    os << "multiplication by a random form has maximal rank in degrees 0.." << prof.rows.back().degree
       << " (p=" << f.modulus() << ", seed=" << opt.seed.value << ")";
    return FailureEvidence{EvidenceKind::RankWitness, {n, d}, os.str()};
}

struct Sandwich {
    bool ok;
    std::string detail;
};

Sandwich sandwich(const SporadicCase& c, std::uint32_t prime, const std::vector<std::int64_t>& alphas,
                  const ClassifyOptions& opt)
{
    const PrimeField f(prime);
    const auto spec = IdealSpec::moment(c.n, c.m, c.d, alphas);
    const auto upper = quotient_dim(spec, c.socle, f, opt.engine);
    SporadicOptions so;
    so.alphas = alphas;
    so.target = upper;
    so.cache = opt.engine.cache;
    const auto lower = sporadic_certificate(c, f, so);
    const auto br = froberg_bracket(c.n, std::vector<int>(static_cast<std::size_t>(c.m), c.d));
    const BigInt expected = br.at(c.socle);
    std::ostringstream os;
    os << "R_{" << c.n << "," << c.m << "," << c.d << "} degree " << c.socle << ": certificate span " << lower.span_dim
       << ", quotient " << upper << ", bracket " << expected << " (p=" << prime << ", alpha=" << alphas.front() << ".."
       << alphas.back() << ")";
    return {lower.span_dim == upper && BigInt(upper) != expected, os.str()};
}

} // namespace

ClassificationRecord classify(int n, int d, const ClassifyOptions& opt)
{
    if (n < 1 || d < 1) throw std::invalid_argument("classify needs n, d >= 1");
    if (opt.primes.empty()) throw std::invalid_argument("classify needs at least one prime");
    const auto t0 = std::chrono::steady_clock::now();
    ClassificationRecord r;
    r.n = n;
    r.d = d;

    if (n <= 3 || d == 1) {
        r.verdict = Verdict::Holds;
        r.confirmed = true;
        const char* why = d == 1 ? "d = 1: the quotient is the field"
                          : n == 1 ? "n = 1: k[x]/(x^d) has the WLP"
                                   : "n = 2, 3: the WLP holds for all powers of linear forms";
        r.evidence.push_back({EvidenceKind::KnownResult, {n, d}, why});
        if (n >= 2)
            if (auto e = rank_evidence(n, d, opt)) r.evidence.push_back(*e);
    } else if (auto e = fails_by_lemma3(n, d)) {
        r.verdict = Verdict::Fails;
        r.confirmed = true;
        r.evidence.push_back(*e);
    } else if (auto it = std::find_if(sporadic_cases().begin(), sporadic_cases().end(),
                                      [&](const SporadicCase& c) { return c.decides_n == n && c.d == d; });
               it != sporadic_cases().end()) {
        std::vector<std::vector<std::int64_t>> specs{default_alphas(it->m)};
        std::vector<std::uint32_t> primes{opt.primes.front()};
        if (opt.confirm) {
            std::vector<std::int64_t> squares;
            for (int i = 1; i <= it->m; ++i) squares.push_back(static_cast<std::int64_t>(i) * i);
            specs.push_back(squares);
            primes = opt.primes;
        }
        bool all = true, first = true;
        for (auto p : primes)
            for (const auto& a : specs) {
                auto s = sandwich(*it, p, a, opt);
                if (first && !s.ok) {
                    r.verdict = Verdict::Undetermined;
                    r.seconds = since(t0);
                    return r;
                }
                first = false;
                all = all && s.ok;
                if (s.ok) r.evidence.push_back({EvidenceKind::SporadicCertificate, {it->n, d}, s.detail});
            }
        r.verdict = Verdict::Fails;
        r.confirmed = all && primes.size() >= 2 && specs.size() >= 2;
    } else if (auto e = rank_evidence(n, d, opt)) {
        r.verdict = Verdict::Holds;
        r.confirmed = true;
        r.evidence.push_back(*e);
    }
    r.seconds = since(t0);
    return r;
}

std::vector<ClassificationRecord> classify_grid(int n_max, int d_max, const ClassifyOptions& opt)
{
    std::vector<std::pair<int, int>> cells;
    for (int n = 1; n <= n_max; ++n)
        for (int d = 1; d <= d_max; ++d) cells.emplace_back(n, d);
    std::vector<ClassificationRecord> out(cells.size());
    std::exception_ptr err;
    const int jobs = std::max(1, opt.jobs);
#pragma omp parallel for schedule(dynamic) num_threads(jobs) if (jobs > 1)
    for (std::size_t i = 0; i < cells.size(); ++i) {
        try {
            out[i] = classify(cells[i].first, cells[i].second, opt);
            if (opt.on_record) {
#pragma omp critical(wlp_on_record)
                opt.on_record(out[i]);
            }
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return out;
}

// ---------------------------------------------------------------------------

ReportFormat report_format_from_string(const std::string& s)
{
    if (s == "json") return ReportFormat::Json;
    if (s == "markdown") return ReportFormat::Markdown;
    throw std::invalid_argument("unknown report format '" + s + "'");
}

std::string record_to_json(const ClassificationRecord& r)
{
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["d"] = r.d;
    j["verdict"] = to_string(r.verdict);
    j["confirmed"] = r.confirmed;
    j["seconds"] = r.seconds;
    j["evidence"] = nlohmann::ordered_json::array();
    for (const auto& e : r.evidence) {
        nlohmann::ordered_json ej;
        ej["kind"] = to_string(e.kind);
        ej["base"] = {e.base_pair.first, e.base_pair.second};
        ej["detail"] = e.detail;
        j["evidence"].push_back(ej);
    }
    return j.dump();
}

ClassificationRecord record_from_json(const std::string& line)
{
    try {
        const auto j = nlohmann::json::parse(line);
        ClassificationRecord r;
        r.n = j.at("n").get<int>();
        r.d = j.at("d").get<int>();
        r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
        r.confirmed = j.value("confirmed", false);
        r.seconds = j.value("seconds", 0.0);
        for (const auto& ej : j.value("evidence", nlohmann::json::array())) {
            FailureEvidence e;
            e.kind = evidence_kind_from_string(ej.at("kind").get<std::string>());
            e.base_pair = {ej.at("base").at(0).get<int>(), ej.at("base").at(1).get<int>()};
            e.detail = ej.value("detail", "");
            r.evidence.push_back(std::move(e));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad classification record: ") + e.what());
    }
}

std::vector<ClassificationRecord> parse_json_report(std::istream& in)
{
    std::vector<ClassificationRecord> out;
    std::string line;
    while (std::getline(in, line))
        if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(record_from_json(line));
    return out;
}

std::string report(const std::vector<ClassificationRecord>& records, ReportFormat format)
{
    std::ostringstream os;
    if (format == ReportFormat::Json) {
        for (const auto& r : records) os << record_to_json(r) << '\n';
        return os.str();
    }
    os << "| n | d | verdict | confirmed | evidence | seconds |\n";
    os << "|---|---|---------|-----------|----------|---------|\n";
    for (const auto& r : records) {
        os << "| " << r.n << " | " << r.d << " | " << to_string(r.verdict) << " | " << (r.confirmed ? "yes" : "no")
           << " | ";
        for (std::size_t i = 0; i < r.evidence.size(); ++i) {
            const auto& e = r.evidence[i];
            os << (i ? "; " : "") << to_string(e.kind) << " (" << e.base_pair.first << "," << e.base_pair.second
               << "): " << e.detail;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", r.seconds);
        os << " | " << buf << " |\n";
    }
    return os.str();
}

} // namespace wlp
