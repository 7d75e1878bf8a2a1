#include "shorsim/numtheory.hpp"

#include "shorsim/errors.hpp"

#include <bit>
#include <string>

namespace shorsim::numtheory {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

u64 mul_mod(u64 a, u64 b, u64 m) noexcept {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

} // namespace

u64 gcd(u64 a, u64 b) noexcept {
    while (b != 0) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

u64 mod_pow(u64 base, u64 exponent, u64 modulus) {
    if (modulus < 2)
        throw InvalidModulus("modulus must be >= 2, got " + std::to_string(modulus));
    u64 result = 1;
    base %= modulus;
    while (exponent != 0) {
        if (exponent & 1)
            result = mul_mod(result, base, modulus);
        base = mul_mod(base, base, modulus);
        exponent >>= 1;
    }
    return result;
}

u64 order_oracle(u64 x, u64 n) {
    if (n < 2)
        throw InvalidModulus("modulus must be >= 2, got " + std::to_string(n));
    if (x == 0 || x >= n)
        throw OutOfRange("order_oracle expects 1 <= x < n");
    if (const u64 g = gcd(x, n); g != 1)
        throw NotAUnit(x, n, g);
    u64 r = 1;
    u64 acc = x;
    while (acc != 1) {
        acc = mul_mod(acc, x, n);
        ++r;
    }
    return r;
}

u64 euler_phi(u64 r) {
    if (r == 0)
        throw InvalidArgument("euler_phi is undefined at 0");
    u64 result = r;
    u64 rest = r;
    for (u64 p = 2; p * p <= rest; ++p) {
        if (rest % p != 0)
            continue;
        while (rest % p == 0)
            rest /= p;
        result -= result / p;
    }
    if (rest > 1)
        result -= result / rest;
    return result;
}

i64 signed_residue(i64 v, u64 q) {
    if (q < 2)
        throw InvalidArgument("signed_residue needs q >= 2");
    const i128 m = static_cast<i128>(q);
    i128 t = static_cast<i128>(v) % m;
    if (t < 0)
        t += m;
    // (-q/2, q/2]: anything strictly above q/2 wraps down.
    if (2 * t > m)
        t -= m;
    return static_cast<i64>(t);
}

i64 signed_residue_of_product(u64 a, u64 b, u64 q) {
    if (q < 2)
        throw InvalidArgument("signed_residue needs q >= 2");
    const u128 t = static_cast<u128>(a) * b % q;
    if (2 * t > q)
        return -static_cast<i64>(q - static_cast<u64>(t));
    return static_cast<i64>(t);
}

ConvergentSequence continued_fraction(u64 c, u64 q) {
    if (q == 0)
        throw InvalidArgument("continued_fraction needs q >= 1");
    if (c >= q)
        throw OutOfRange("continued_fraction expects c < q, got c = " + std::to_string(c) +
                         ", q = " + std::to_string(q));

    ConvergentSequence seq;
    seq.numerator_c = c;
    seq.denominator_q = q;

    // h_{-1}/k_{-1} = 1/0, h_{-2}/k_{-2} = 0/1
    u64 h_prev = 1, h_prev2 = 0;
    u64 k_prev = 0, k_prev2 = 1;
    u64 num = c, den = q;
    while (true) {
        const u64 a = num / den;
        const u64 rem = num % den;
        seq.partial_quotients.push_back(a);
        const u64 h = a * h_prev + h_prev2;
        const u64 k = a * k_prev + k_prev2;
        seq.convergents.push_back({h, k});
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
        if (rem == 0)
            break;
        num = den;
        den = rem;
    }
    return seq;
}

std::optional<Fraction> recover_rational(u64 c, u64 q, u64 denominator_bound) {
    if (q == 0 || c >= q || denominator_bound == 0)
        return std::nullopt;
    const ConvergentSequence seq = continued_fraction(c, q);
    std::optional<Fraction> best;
    for (const Fraction& f : seq.convergents) {
        if (f.den > denominator_bound)
            break;
        const i128 diff = static_cast<i128>(c) * f.den - static_cast<i128>(f.num) * q;
        const i128 abs_diff = diff < 0 ? -diff : diff;
        if (2 * abs_diff <= static_cast<i128>(f.den))
            best = f;
    }
    return best;
}

bool is_prime_power(u64 n) {
    if (n < 2)
        return false;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p != 0)
            continue;
        while (n % p == 0)
            n /= p;
        return n == 1;
    }
    return true;
}

unsigned ceil_log2(u64 n) noexcept {
    if (n <= 1)
        return 0;
    return static_cast<unsigned>(std::bit_width(n - 1));
}

} // namespace shorsim::numtheory
