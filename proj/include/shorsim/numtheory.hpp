#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace shorsim::numtheory {

using u64 = std::uint64_t;
using i64 = std::int64_t;

struct Fraction {
    u64 num = 0;
    u64 den = 1;

    friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Continued-fraction expansion of c/q together with all of its convergents.
///
/// Convergents are kept in lowest terms; after the first one their
/// denominators strictly increase and the last convergent is c/q reduced.
struct ConvergentSequence {
    u64 numerator_c = 0;
    u64 denominator_q = 1;
    std::vector<u64> partial_quotients;
    std::vector<Fraction> convergents;
};

u64 gcd(u64 a, u64 b) noexcept;

/// base^exponent mod modulus by square-and-multiply. Throws InvalidModulus if modulus < 2.
u64 mod_pow(u64 base, u64 exponent, u64 modulus);

/// Least r >= 1 with x^r = 1 (mod n), by successive multiplication.
///
/// This is deliberately the slow route: it is the reference that every
/// continued-fraction recovery is checked against.
u64 order_oracle(u64 x, u64 n);

/// Euler's totient by trial division. Throws InvalidArgument for r = 0.
u64 euler_phi(u64 r);

/// Representative of v mod q in the half-open interval (-q/2, q/2].
i64 signed_residue(i64 v, u64 q);

/// {a*b}_q without overflow; used for the {rc}_q terms.
i64 signed_residue_of_product(u64 a, u64 b, u64 q);

ConvergentSequence continued_fraction(u64 c, u64 q);

/// Convergent d/r of c/q with the largest r <= denominator_bound such that
/// |c/q - d/r| <= 1/(2q), compared as 2|c*r - d*q| <= r in integers.
std::optional<Fraction> recover_rational(u64 c, u64 q, u64 denominator_bound);

/// n = p^k for a prime p and k >= 1 (primes included).
bool is_prime_power(u64 n);

/// ceil(log2 n) for n >= 1.
unsigned ceil_log2(u64 n) noexcept;

} // namespace shorsim::numtheory
