#include "shorsim/pipeline.hpp"

#include "shorsim/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace shorsim {

namespace {

// Uniform double in [0, 1) from the top 53 bits; unlike
// std::uniform_real_distribution this is identical on every standard library.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

std::string_view to_string(FailureReason reason) noexcept {
    switch (reason) {
    case FailureReason::bad_c_no_recovery:
        return "bad_c_no_recovery";
    case FailureReason::d_r_not_coprime_understates_r:
        return "d_r_not_coprime_understates_r";
    case FailureReason::order_check_failed:
        return "order_check_failed";
    case FailureReason::odd_order:
        return "odd_order";
    case FailureReason::x_pow_half_r_is_minus_one:
        return "x_pow_half_r_is_minus_one";
    case FailureReason::trivial_gcd:
        return "trivial_gcd";
    }
    return "unknown";
}

RegisterChoice choose_q(u64 n) {
    if (n < 3)
        throw InvalidArgument("choose_q needs n >= 3");
    if (n >= (u64{1} << 31))
        throw InvalidArgument("choose_q needs n < 2^31");
    const u64 n2 = n * n;
    const unsigned s = static_cast<unsigned>(std::bit_width(n2 - 1));
    return {s, u64{1} << s};
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Measurement sample_measurement(const SpectrumTable& table, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::vector<double>& marginals = table.marginals();
    const std::vector<double>& blocks = table.block_cumulative();

    const double target = unit_uniform(rng) * blocks.back();
    auto it = std::upper_bound(blocks.begin(), blocks.end(), target);
    if (it == blocks.end())
        it = std::lower_bound(blocks.begin(), blocks.end(), blocks.back());
    const u64 block = static_cast<u64>(it - blocks.begin());
    const u64 first = block * SpectrumTable::kBlockSize;
    const u64 last = std::min(first + SpectrumTable::kBlockSize, table.q());

    double acc = block == 0 ? 0.0 : blocks[block - 1];
    u64 c = first;
    u64 fallback = first;
    for (; c < last; ++c) {
        if (marginals[c] > 0.0)
            fallback = c;
        acc += marginals[c];
        if (target < acc && marginals[c] > 0.0)
            break;
    }
    // Rounding can leave target just past the block's running sum.
    if (c == last)
        c = fallback;

    // k given c: long residue classes share one weight, short ones another.
    const u64 r = table.r();
    const u64 long_classes = table.long_classes();
    const u64 short_classes = r - long_classes;
    const double w_long = long_classes ? geometric_probability(table.q(), r, c, table.long_count()) : 0.0;
    const double w_short = short_classes ? geometric_probability(table.q(), r, c, table.short_count()) : 0.0;
    const double mass_long = static_cast<double>(long_classes) * w_long;
    const double mass = mass_long + static_cast<double>(short_classes) * w_short;

    u64 k = 0;
    const double v = unit_uniform(rng) * mass;
    if (mass > 0.0) {
        if (v < mass_long || w_short == 0.0) {
            k = std::min(static_cast<u64>(v / w_long), long_classes - 1);
        } else {
            k = long_classes + std::min(static_cast<u64>((v - mass_long) / w_short), short_classes - 1);
        }
    }
    return {c, k};
}

std::optional<numtheory::Fraction> recover_order(u64 c, u64 q, u64 n) {
    if (c == 0 || c >= q)
        return std::nullopt;
    return numtheory::recover_rational(c, q, n);
}

double success_bound(u64 r) {
    return static_cast<double>(numtheory::euler_phi(r)) / (3.0 * static_cast<double>(r));
}

void check_factoring_input(u64 n, u64 x) {
    if (n < 3)
        throw PreconditionError("n must be >= 3, got " + std::to_string(n));
    if (n >= (u64{1} << 31))
        throw PreconditionError("n must be below 2^31");
    if (n % 2 == 0)
        throw PreconditionError("n = " + std::to_string(n) + " is even; 2 is a factor");
    if (numtheory::is_prime_power(n))
        throw PreconditionError("n = " + std::to_string(n) + " is a prime power");
    if (x < 2 || x >= n)
        throw OutOfRange("x must lie in [2, n-1], got " + std::to_string(x));
    if (const u64 g = numtheory::gcd(x, n); g != 1)
        throw FactorRevealedByGcd(n, x, g);
}

Simulator::Simulator(u64 n, u64 x)
    : instance_((check_factoring_input(n, x), FactoringInstance(n, x))),
      registers_(choose_q(n)),
      spectrum_(build_spectrum(instance_, registers_.q)) {}

RunTrace Simulator::run(std::uint64_t seed) const {
    return run_with_measurement(sample_measurement(spectrum_, seed), seed);
}

RunTrace Simulator::run_with_measurement(Measurement m, std::uint64_t seed) const {
    const u64 n = instance_.n();
    const u64 x = instance_.x();
    const u64 r = instance_.r();

    RunTrace t;
    t.n = n;
    t.x = x;
    t.ell = instance_.ell();
    t.r = r;
    t.q = registers_.q;
    t.seed = seed;
    t.sampled_c = m.c;
    t.sampled_k = m.k;

    t.recovered = recover_order(m.c, registers_.q, n);
    if (!t.recovered) {
        t.failure_reason = FailureReason::bad_c_no_recovery;
        return t;
    }
    const u64 candidate = t.recovered->den;
    if (numtheory::mod_pow(x, candidate, n) != 1) {
        // A proper divisor of r means d and r shared a factor that the
        // reduced convergent divided out.
        t.failure_reason = candidate < r && r % candidate == 0 ? FailureReason::d_r_not_coprime_understates_r
                                                               : FailureReason::order_check_failed;
        return t;
    }
    t.order_verified = true;
    if (candidate % 2 != 0) {
        t.failure_reason = FailureReason::odd_order;
        return t;
    }
    const u64 y = numtheory::mod_pow(x, candidate / 2, n);
    if (y == n - 1) {
        t.failure_reason = FailureReason::x_pow_half_r_is_minus_one;
        return t;
    }
    const u64 f1 = numtheory::gcd((y + n - 1) % n, n);
    const u64 f2 = numtheory::gcd((y + 1) % n, n);
    if (f1 <= 1 || f1 >= n || f2 <= 1 || f2 >= n) {
        t.failure_reason = FailureReason::trivial_gcd;
        return t;
    }
    t.factors = std::pair{f1, f2};
    return t;
}

RunTrace run_once(u64 n, u64 x, std::uint64_t seed) {
    return Simulator(n, x).run(seed);
}

SuccessReport estimate_success(u64 n, u64 x, u64 trials, std::uint64_t seed) {
    if (trials == 0)
        throw InvalidArgument("trials must be >= 1");
    return estimate_success(Simulator(n, x), trials, seed);
}

SuccessReport estimate_success(const Simulator& sim, u64 trials, std::uint64_t seed) {
    if (trials == 0)
        throw InvalidArgument("trials must be >= 1");

    struct Counts {
        u64 orders = 0;
        u64 factors = 0;
    };
    const u64 workers = std::clamp<u64>(std::thread::hardware_concurrency(), 1, 8);
    const u64 chunks = std::min(workers, std::max<u64>(1, trials / 256));
    std::vector<Counts> partial(chunks);
    {
        std::vector<std::jthread> pool;
        for (u64 w = 0; w < chunks; ++w) {
            pool.emplace_back([&, w] {
                Counts counts;
                for (u64 i = w; i < trials; i += chunks) {
                    const RunTrace t = sim.run(derive_seed(seed, i));
                    counts.orders += t.order_recovered();
                    counts.factors += t.factors.has_value();
                }
                partial[w] = counts;
            });
        }
    }

    SuccessReport rep;
    rep.n = sim.instance().n();
    rep.x = sim.instance().x();
    rep.r = sim.instance().r();
    rep.phi_r = numtheory::euler_phi(rep.r);
    rep.q = sim.registers().q;
    rep.trials = trials;
    for (const Counts& c : partial) {
        rep.order_recoveries += c.orders;
        rep.factorizations += c.factors;
    }
    const double td = static_cast<double>(trials);
    rep.order_rate = static_cast<double>(rep.order_recoveries) / td;
    rep.factor_rate = static_cast<double>(rep.factorizations) / td;
    rep.bound = success_bound(rep.r);
    rep.three_sigma_floor = rep.bound - 3.0 * std::sqrt(rep.bound * (1.0 - rep.bound) / td);
    rep.meets_bound = rep.order_rate >= rep.three_sigma_floor;
    if (rep.r >= 3) {
        const double rd = static_cast<double>(rep.r);
        rep.phi_ratio_loglog = static_cast<double>(rep.phi_r) / rd * std::log(std::log(rd));
    }
    return rep;
}

} // namespace shorsim
