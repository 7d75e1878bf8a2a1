#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace shorsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidModulus : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

/// gcd(x, n) != 1 where a unit of Z/nZ was required.
class NotAUnit : public Error {
public:
    NotAUnit(std::uint64_t x, std::uint64_t n, std::uint64_t g)
        : Error("x = " + std::to_string(x) + " is not a unit modulo " + std::to_string(n) +
                " (gcd = " + std::to_string(g) + ")"),
          x_(x), n_(n), gcd_(g) {}

    std::uint64_t x() const noexcept { return x_; }
    std::uint64_t n() const noexcept { return n_; }
    std::uint64_t gcd() const noexcept { return gcd_; }

private:
    std::uint64_t x_;
    std::uint64_t n_;
    std::uint64_t gcd_;
};

/// The modulus is not something the factoring pipeline accepts (even, prime power, too small).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The chosen base already shares a factor with n. Not a failure of the
/// input, but the quantum step never runs, so it is reported separately.
class FactorRevealedByGcd : public Error {
public:
    FactorRevealedByGcd(std::uint64_t n, std::uint64_t x, std::uint64_t factor)
        : Error("gcd(" + std::to_string(x) + ", " + std::to_string(n) + ") = " +
                std::to_string(factor) + " already reveals a factor"),
          n_(n), x_(x), factor_(factor) {}

    std::uint64_t n() const noexcept { return n_; }
    std::uint64_t x() const noexcept { return x_; }
    std::uint64_t factor() const noexcept { return factor_; }

private:
    std::uint64_t n_;
    std::uint64_t x_;
    std::uint64_t factor_;
};

} // namespace shorsim
