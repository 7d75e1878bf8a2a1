#include "oracles.hpp"

#include "shorsim/errors.hpp"
#include "shorsim/pipeline.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

using namespace shorsim;
using numtheory::Fraction;

namespace {

// First seed whose sampled outcome is c; searching keeps the tests
// independent of the particular bit stream the sampler consumes.
std::uint64_t seed_hitting(const Simulator& sim, u64 c) {
    for (std::uint64_t seed = 0; seed < 100'000; ++seed)
        if (sample_measurement(sim.spectrum(), seed).c == c)
            return seed;
    FAIL("no seed reaches c = " << c);
    return 0;
}

bool same_trace(const RunTrace& a, const RunTrace& b) {
    return a.n == b.n && a.x == b.x && a.q == b.q && a.seed == b.seed && a.sampled_c == b.sampled_c &&
           a.sampled_k == b.sampled_k && a.recovered == b.recovered && a.order_verified == b.order_verified &&
           a.factors == b.factors && a.failure_reason == b.failure_reason;
}

} // namespace

TEST_CASE("choose_q") {
    CHECK(choose_q(15) == RegisterChoice{8, 256});
    CHECK(choose_q(21) == RegisterChoice{9, 512});
    CHECK(choose_q(3) == RegisterChoice{4, 16});
    CHECK(choose_q(4) == RegisterChoice{4, 16});
    CHECK_THROWS_AS(choose_q(2), InvalidArgument);
    for (u64 n = 3; n < 5000; ++n) {
        const RegisterChoice rc = choose_q(n);
        REQUIRE(rc.q == (u64{1} << rc.s));
        REQUIRE(n * n <= rc.q);
        REQUIRE(rc.q < 2 * n * n);
    }
}

TEST_CASE("sample_measurement") {
    const Simulator sim(15, 7);
    SUBCASE("support is the good set when r | q") {
        for (std::uint64_t seed = 0; seed < 2000; ++seed) {
            const Measurement m = sample_measurement(sim.spectrum(), seed);
            REQUIRE((m.c == 0 || m.c == 64 || m.c == 128 || m.c == 192));
            REQUIRE(m.k < 4);
        }
    }
    SUBCASE("deterministic per seed") {
        for (std::uint64_t seed : {0ULL, 1ULL, 99ULL, ~0ULL}) {
            const Measurement a = sample_measurement(sim.spectrum(), seed);
            const Measurement b = sample_measurement(sim.spectrum(), seed);
            CHECK(a.c == b.c);
            CHECK(a.k == b.k);
        }
    }
    SUBCASE("degenerate single-point table") {
        const SpectrumTable table(4, 2, {0.0, 0.0, 1.0, 0.0});
        for (std::uint64_t seed = 0; seed < 200; ++seed)
            REQUIRE(sample_measurement(table, seed).c == 2);
    }
    SUBCASE("10^6 draws land on each peak a quarter of the time") {
        std::array<u64, 4> peaks{};
        std::array<u64, 4> ks{};
        constexpr u64 draws = 1'000'000;
        for (u64 i = 0; i < draws; ++i) {
            const Measurement m = sample_measurement(sim.spectrum(), derive_seed(42, i));
            ++peaks[m.c / 64];
            ++ks[m.k];
        }
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(static_cast<double>(peaks[i]) / draws - 0.25) < 0.005);
            CHECK(std::abs(static_cast<double>(ks[i]) / draws - 0.25) < 0.005);
        }
    }
    SUBCASE("joint frequencies follow P(c, k) when r does not divide q") {
        const Simulator s21(21, 2); // r = 6, q = 512: classes k = 0, 1 have one more term
        constexpr u64 draws = 400'000;
        std::vector<u64> by_c(512, 0);
        std::array<u64, 6> by_k{};
        for (u64 i = 0; i < draws; ++i) {
            const Measurement m = sample_measurement(s21.spectrum(), derive_seed(7, i));
            ++by_c[m.c];
            ++by_k[m.k];
        }
        for (u64 k = 0; k < 6; ++k) {
            const double p = static_cast<double>(term_count(512, 6, k)) / 512.0; // sum over c of P(c, k)
            const double sigma = std::sqrt(p * (1 - p) / draws);
            CHECK(std::abs(static_cast<double>(by_k[k]) / draws - p) < 5 * sigma);
        }
        for (u64 c = 0; c < 512; ++c) {
            const double p = s21.spectrum().marginals()[c];
            const double sigma = std::sqrt(p * (1 - p) / draws);
            REQUIRE(std::abs(static_cast<double>(by_c[c]) / draws - p) < 5 * sigma + 1e-5);
        }
    }
}

TEST_CASE("recover_order") {
    CHECK(recover_order(192, 256, 15) == Fraction{3, 4});
    CHECK_FALSE(recover_order(0, 256, 15).has_value());
    CHECK(recover_order(128, 256, 15) == Fraction{1, 2});
    CHECK(recover_order(64, 256, 15) == Fraction{1, 4});
}

TEST_CASE("success_bound") {
    CHECK(success_bound(4) == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(success_bound(1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(success_bound(12) == doctest::Approx(1.0 / 9).epsilon(1e-15));
}

TEST_CASE("input checks") {
    CHECK_THROWS_AS(run_once(9, 2, 0), PreconditionError);
    CHECK_THROWS_AS(run_once(14, 3, 0), PreconditionError);
    CHECK_THROWS_AS(run_once(13, 2, 0), PreconditionError);
    CHECK_THROWS_AS(run_once(15, 1, 0), OutOfRange);
    CHECK_THROWS_AS(run_once(15, 15, 0), OutOfRange);
    try {
        run_once(15, 5, 0);
        FAIL("expected FactorRevealedByGcd");
    } catch (const FactorRevealedByGcd& e) {
        CHECK(e.factor() == 5);
    }
}

TEST_CASE("run_with_measurement outcomes") {
    const Simulator sim7(15, 7);
    SUBCASE("c = 192 factors 15") {
        const RunTrace t = sim7.run_with_measurement({192, 0});
        CHECK(t.recovered == Fraction{3, 4});
        CHECK(t.order_verified);
        REQUIRE(t.factors.has_value());
        CHECK(t.factors->first == 3);
        CHECK(t.factors->second == 5);
        CHECK_FALSE(t.failure_reason.has_value());
        CHECK(t.order_recovered());
    }
    SUBCASE("c = 0") {
        const RunTrace t = sim7.run_with_measurement({0, 1});
        CHECK(t.failure_reason == FailureReason::bad_c_no_recovery);
        CHECK_FALSE(t.recovered.has_value());
    }
    SUBCASE("c = 128 understates the order") {
        const RunTrace t = sim7.run_with_measurement({128, 0});
        CHECK(t.recovered == Fraction{1, 2});
        CHECK_FALSE(t.order_verified);
        CHECK(t.failure_reason == FailureReason::d_r_not_coprime_understates_r);
    }
    SUBCASE("x^(r/2) = -1") {
        const Simulator sim14(15, 14);
        const RunTrace t = sim14.run_with_measurement({128, 0});
        CHECK(t.recovered == Fraction{1, 2});
        CHECK(t.order_verified);
        CHECK(t.failure_reason == FailureReason::x_pow_half_r_is_minus_one);
        CHECK_FALSE(t.factors.has_value());
    }
    SUBCASE("odd order") {
        const Simulator sim(21, 4); // 4 has order 3 mod 21
        REQUIRE(sim.instance().r() == 3);
        const u64 c = good_c_set(3, sim.registers().q)[1];
        const RunTrace t = sim.run_with_measurement({c, 0});
        CHECK(t.order_verified);
        CHECK(t.failure_reason == FailureReason::odd_order);
    }
    SUBCASE("c outside the good set fails the order check") {
        const Simulator sim(21, 2);
        const RunTrace t = sim.run_with_measurement({1, 0});
        CHECK_FALSE(t.order_verified);
        CHECK(t.failure_reason.has_value());
    }
}

TEST_CASE("run_once") {
    const Simulator sim(15, 7);
    SUBCASE("seed forcing c = 192") {
        const std::uint64_t seed = seed_hitting(sim, 192);
        const RunTrace t = run_once(15, 7, seed);
        CHECK(t.sampled_c == 192);
        REQUIRE(t.factors.has_value());
        CHECK(std::pair{t.factors->first, t.factors->second} == std::pair<u64, u64>{3, 5});
    }
    SUBCASE("seed forcing c = 0") {
        CHECK(run_once(15, 7, seed_hitting(sim, 0)).failure_reason == FailureReason::bad_c_no_recovery);
    }
    SUBCASE("order-two base reaching c = 128") {
        const Simulator sim14(15, 14);
        const RunTrace t = run_once(15, 14, seed_hitting(sim14, 128));
        CHECK(t.failure_reason == FailureReason::x_pow_half_r_is_minus_one);
    }
    SUBCASE("identical seeds give identical traces") {
        for (std::uint64_t seed = 0; seed < 50; ++seed)
            REQUIRE(same_trace(run_once(21, 5, seed), run_once(21, 5, seed)));
    }
}

TEST_CASE("good outcomes with coprime numerator recover the exact order") {
    for (auto [n, x] : std::vector<std::pair<u64, u64>>{{15, 7}, {21, 2}, {33, 5}, {35, 3}, {55, 2}, {91, 3}}) {
        const Simulator sim(n, x);
        const u64 q = sim.registers().q;
        const u64 r = sim.instance().r();
        for (u64 c : good_c_set(r, q)) {
            const u64 d = (2 * c * r + q) / (2 * q) % r; // nearest d with |rc - dq| <= r/2
            if (c == 0 || numtheory::gcd(d, r) != 1)
                continue;
            const RunTrace t = sim.run_with_measurement({c, 0});
            REQUIRE(t.recovered.has_value());
            REQUIRE(t.recovered->den == r);
            REQUIRE(t.order_verified);
        }
    }
}

TEST_CASE("emitted factors always split n") {
    for (u64 n : {15ULL, 21ULL, 33ULL, 35ULL, 39ULL, 51ULL, 55ULL, 65ULL, 77ULL}) {
        for (u64 x = 2; x < n; ++x) {
            if (numtheory::gcd(x, n) != 1)
                continue;
            const Simulator sim(n, x);
            for (u64 c : good_c_set(sim.instance().r(), sim.registers().q)) {
                const RunTrace t = sim.run_with_measurement({c, 0});
                if (!t.factors)
                    continue;
                for (u64 f : {t.factors->first, t.factors->second}) {
                    REQUIRE(f > 1);
                    REQUIRE(f < n);
                    REQUIRE(n % f == 0);
                    REQUIRE(f * (n / f) == n);
                }
            }
        }
    }
}

TEST_CASE("estimate_success") {
    SUBCASE("15, 7") {
        const SuccessReport rep = estimate_success(15, 7, 10'000, kDefaultSeed);
        CHECK(rep.r == 4);
        CHECK(rep.phi_r == 2);
        CHECK(rep.order_rate >= 0.48);
        CHECK(rep.order_rate <= 0.52);
        CHECK(rep.bound == doctest::Approx(1.0 / 6));
        CHECK(rep.meets_bound);
        // every order recovery factors 15 for this base
        CHECK(rep.factor_rate == rep.order_rate);
    }
    SUBCASE("15, 14") {
        const SuccessReport rep = estimate_success(15, 14, 10'000, kDefaultSeed);
        CHECK(std::abs(rep.order_rate - 0.5) < 0.02);
        CHECK(rep.factor_rate == 0.0);
        CHECK_FALSE(rep.phi_ratio_loglog.has_value());
    }
    SUBCASE("single trial") {
        const SuccessReport rep = estimate_success(21, 2, 1, 3);
        CHECK(rep.trials == 1);
        CHECK(rep.order_recoveries <= 1);
        CHECK(rep.phi_ratio_loglog.has_value());
    }
    SUBCASE("reproducible and independent of thread partitioning") {
        const SuccessReport a = estimate_success(35, 3, 3000, 99);
        const SuccessReport b = estimate_success(35, 3, 3000, 99);
        CHECK(a.order_recoveries == b.order_recoveries);
        CHECK(a.factorizations == b.factorizations);
        u64 serial = 0;
        const Simulator sim(35, 3);
        for (u64 i = 0; i < 3000; ++i)
            serial += sim.run(derive_seed(99, i)).order_recovered();
        CHECK(serial == a.order_recoveries);
    }
    CHECK_THROWS_AS(estimate_success(15, 7, 0, 1), InvalidArgument);
}

TEST_CASE("empirical order recovery beats phi(r)/(3r)") {
    for (u64 n : {15ULL, 21ULL, 33ULL, 35ULL}) {
        for (u64 x = 2; x < n; ++x) {
            if (numtheory::gcd(x, n) != 1)
                continue;
            const SuccessReport rep = estimate_success(n, x, 2000, derive_seed(n, x));
            REQUIRE(rep.meets_bound);
        }
    }
}
