#pragma once

#include "shorsim/numtheory.hpp"
#include "shorsim/spectrum.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

namespace shorsim {

/// Default master seed used whenever the caller does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 20151017;

enum class FailureReason {
    bad_c_no_recovery,
    d_r_not_coprime_understates_r,
    order_check_failed,
    odd_order,
    x_pow_half_r_is_minus_one,
    trivial_gcd,
};

std::string_view to_string(FailureReason reason) noexcept;

struct RegisterChoice {
    unsigned s = 0;
    u64 q = 0;

    friend bool operator==(const RegisterChoice&, const RegisterChoice&) = default;
};

struct Measurement {
    u64 c = 0;
    u64 k = 0;
};

struct RunTrace {
    u64 n = 0;
    u64 x = 0;
    unsigned ell = 0;
    u64 r = 0; // true order, from the oracle
    u64 q = 0;
    std::uint64_t seed = 0;
    u64 sampled_c = 0;
    u64 sampled_k = 0;
    std::optional<numtheory::Fraction> recovered; // (d, r_candidate)
    bool order_verified = false;
    std::optional<std::pair<u64, u64>> factors;
    std::optional<FailureReason> failure_reason;

    bool order_recovered() const noexcept { return order_verified && recovered && recovered->den == r; }
};

/// The unique power of two in [n^2, 2n^2).
RegisterChoice choose_q(u64 n);

/// Splitmix-style derivation of the seed for trial `index` from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Draws (c, k) with probability P(c, k): inverse CDF over the marginals,
/// then k from the exact conditional P(c, k) / P(c).
Measurement sample_measurement(const SpectrumTable& table, std::uint64_t seed);

/// Continued-fraction recovery with denominator bound n; c = 0 gives nothing.
std::optional<numtheory::Fraction> recover_order(u64 c, u64 q, u64 n);

/// phi(r) / (3r): r register-2 outcomes times phi(r) useful c times 1/(3r^2).
double success_bound(u64 r);

/// Rejects moduli the factoring step cannot handle and bases sharing a factor with n.
///
/// Throws PreconditionError for even n, prime powers, and n < 3 or >= 2^31;
/// OutOfRange for x outside [2, n-1]; FactorRevealedByGcd when gcd(x, n) > 1.
void check_factoring_input(u64 n, u64 x);

/// Holds everything that is fixed across runs for one (n, x): the instance,
/// the register choice and the materialized spectrum.
class Simulator {
public:
    Simulator(u64 n, u64 x);

    const FactoringInstance& instance() const noexcept { return instance_; }
    const RegisterChoice& registers() const noexcept { return registers_; }
    const SpectrumTable& spectrum() const noexcept { return spectrum_; }

    RunTrace run(std::uint64_t seed) const;

    /// Classical post-processing for an already measured outcome.
    RunTrace run_with_measurement(Measurement m, std::uint64_t seed = 0) const;

private:
    FactoringInstance instance_;
    RegisterChoice registers_;
    SpectrumTable spectrum_;
};

RunTrace run_once(u64 n, u64 x, std::uint64_t seed);

struct SuccessReport {
    u64 n = 0;
    u64 x = 0;
    u64 r = 0;
    u64 phi_r = 0;
    u64 q = 0;
    u64 trials = 0;
    u64 order_recoveries = 0;
    u64 factorizations = 0;
    double order_rate = 0.0;
    double factor_rate = 0.0;
    double bound = 0.0;
    double three_sigma_floor = 0.0; // bound - 3 * sqrt(bound (1 - bound) / trials)
    bool meets_bound = false;       // order_rate >= three_sigma_floor
    /// phi(r)/r * log log r, reported only for r >= 3 where log log r > 0.
    std::optional<double> phi_ratio_loglog;
};

SuccessReport estimate_success(u64 n, u64 x, u64 trials, std::uint64_t seed);
SuccessReport estimate_success(const Simulator& sim, u64 trials, std::uint64_t seed);

} // namespace shorsim
