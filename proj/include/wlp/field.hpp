#ifndef WLP_FIELD_HPP
#define WLP_FIELD_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wlp {

/// Arithmetic in Z/pZ for a word-sized prime p with 2^20 < p < 2^30.
///
/// Elements are stored as reduced uint32 values. Products of two elements
/// fit in 60 bits, which leaves room for the delayed reductions used by the
/// elimination kernels (see linalg.cpp).
class PrimeField {
public:
    using Element = std::uint32_t;

    explicit PrimeField(std::uint64_t p);

    std::uint32_t modulus() const noexcept { return p_; }

    Element reduce(std::uint64_t x) const noexcept { return static_cast<Element>(x % p_); }
    Element from_int(std::int64_t x) const noexcept
    {
        std::int64_t r = x % static_cast<std::int64_t>(p_);
        return static_cast<Element>(r < 0 ? r + p_ : r);
    }

    Element add(Element a, Element b) const noexcept
    {
        Element s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Element sub(Element a, Element b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    Element neg(Element a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Element mul(Element a, Element b) const noexcept
    {
        return static_cast<Element>(static_cast<std::uint64_t>(a) * b % p_);
    }
    Element pow(Element a, std::uint64_t e) const noexcept;
    /// Throws std::domain_error on zero.
    Element inv(Element a) const;

    /// Root of unity of order exactly `order`; throws if order does not divide p-1.
    Element root_of_unity(std::uint32_t order) const;

    bool operator==(const PrimeField& o) const noexcept { return p_ == o.p_; }

private:
    std::uint32_t p_;
};

/// Two fixed 30-bit primes, both 1 mod 27720 so that roots of unity of every
/// order up to 12 exist.
inline constexpr std::array<std::uint32_t, 2> kDefaultPrimes = {1073734201u, 1073567881u};

bool is_prime(std::uint64_t n) noexcept;

class FieldError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace wlp

#endif
