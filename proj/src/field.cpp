#include <wlp/field.hpp>

#include <vector>

namespace wlp {

namespace {

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, a, m);
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace

// Deterministic Miller-Rabin; this witness set is exact below 2^64.
bool is_prime(std::uint64_t n) noexcept
{
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(0)
{
    if (p <= 1'000'000 || p >= (1ull << 30))
        throw FieldError("prime modulus must lie in (10^6, 2^30), got " + std::to_string(p));
    if (!is_prime(p)) throw FieldError("modulus is not prime: " + std::to_string(p));
    p_ = static_cast<std::uint32_t>(p);
}

PrimeField::Element PrimeField::pow(Element a, std::uint64_t e) const noexcept
{
    return static_cast<Element>(powmod64(a, e, p_));
}

PrimeField::Element PrimeField::inv(Element a) const
{
    if (a == 0) throw std::domain_error("inverse of zero");
    return pow(a, p_ - 2);
}

PrimeField::Element PrimeField::root_of_unity(std::uint32_t order) const
{
    if (order == 0 || (p_ - 1) % order != 0)
        throw FieldError("no root of unity of order " + std::to_string(order) + " mod " + std::to_string(p_));
    std::vector<std::uint32_t> factors;
    std::uint32_t m = p_ - 1;
    for (std::uint32_t q = 2; q * q <= m; ++q) {
        if (m % q == 0) {
            factors.push_back(q);
            while (m % q == 0) m /= q;
        }
    }
    if (m > 1) factors.push_back(m);
    for (Element g = 2; g < p_; ++g) {
        bool generator = true;
        for (auto q : factors) {
            if (pow(g, (p_ - 1) / q) == 1) {
                generator = false;
                break;
            }
        }
        if (generator) return pow(g, (p_ - 1) / order);
    }
    throw FieldError("no generator found");
}

} // namespace wlp
