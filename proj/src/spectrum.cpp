#include "shorsim/spectrum.hpp"

#include "shorsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace shorsim {

namespace {

using u128 = unsigned __int128;

void require_power_of_two(u64 q) {
    if (!is_power_of_two(q) || q < 2)
        throw InvalidArgument("q must be a power of two >= 2, got " + std::to_string(q));
}

// sin(pi * v / q) with v folded into (-q/2, q/2] first, so the argument
// stays small and the result keeps full relative precision near zeros.
double sin_pi_fraction(i64 folded, u64 q) {
    return std::sin(std::numbers::pi * static_cast<double>(folded) / static_cast<double>(q));
}

} // namespace

FactoringInstance::FactoringInstance(u64 n, u64 x) : n_(n), x_(x) {
    if (n < 3)
        throw InvalidArgument("n must be >= 3, got " + std::to_string(n));
    if (n >= (u64{1} << 31))
        throw InvalidArgument("n must be below 2^31 so that n^2 fits the register arithmetic");
    if (x < 2 || x >= n)
        throw OutOfRange("x must lie in [2, n-1], got " + std::to_string(x));
    if (const u64 g = numtheory::gcd(x, n); g != 1)
        throw NotAUnit(x, n, g);
    ell_ = numtheory::ceil_log2(n);
    r_ = numtheory::order_oracle(x, n);
    if (r_ == 1)
        throw InvalidArgument("order of x is 1; no period to find");
}

bool is_power_of_two(u64 q) noexcept { return q != 0 && (q & (q - 1)) == 0; }

u64 term_count(u64 q, u64 r, u64 k) noexcept {
    if (k >= q)
        return 0;
    return (q - k - 1) / r + 1;
}

double geometric_probability(u64 q, u64 r, u64 c, u64 m) {
    if (m == 0)
        return 0.0;
    const double qd = static_cast<double>(q);
    const u64 t = static_cast<u64>(static_cast<u128>(r) * c % q);
    if (t == 0) {
        const double amp = static_cast<double>(m) / qd;
        return amp * amp;
    }
    const i64 folded_t = numtheory::signed_residue_of_product(r, c, q);
    const i64 folded_mt = numtheory::signed_residue_of_product(m, t, q);
    const double ratio = sin_pi_fraction(folded_mt, q) / sin_pi_fraction(folded_t, q);
    return ratio * ratio / (qd * qd);
}

double joint_probability(const FactoringInstance& instance, u64 q, u64 c, u64 k) {
    require_power_of_two(q);
    if (c >= q)
        throw OutOfRange("c must be < q");
    if (k >= instance.r())
        throw OutOfRange("k must be < r = " + std::to_string(instance.r()));
    return geometric_probability(q, instance.r(), c, term_count(q, instance.r(), k));
}

SpectrumTable::SpectrumTable(u64 q, u64 r, std::vector<double> marginals)
    : q_(q), r_(r), long_classes_(r > q ? q : q % r), marginals_(std::move(marginals)) {
    require_power_of_two(q_);
    if (r_ == 0)
        throw InvalidArgument("r must be >= 1");
    if (marginals_.size() != q_)
        throw InvalidArgument("spectrum needs exactly q marginals");

    block_cumulative_.reserve((q_ + kBlockSize - 1) / kBlockSize);
    double acc = 0.0;
    // Neumaier-compensated total; the block CDF only drives sampling.
    double sum = 0.0, carry = 0.0;
    for (u64 c = 0; c < q_; ++c) {
        const double p = marginals_[c];
        acc += p;
        if ((c + 1) % kBlockSize == 0 || c + 1 == q_)
            block_cumulative_.push_back(acc);
        const double t = sum + p;
        carry += std::abs(sum) >= std::abs(p) ? (sum - t) + p : (p - t) + sum;
        sum = t;
    }
    total_ = sum + carry;
}

SpectrumRow SpectrumTable::row(u64 c) const {
    if (c >= q_)
        throw OutOfRange("c must be < q");
    SpectrumRow out;
    out.c = c;
    out.marginal_probability = marginals_[c];
    out.signed_residue = numtheory::signed_residue_of_product(r_, c, q_);
    const u64 mag = static_cast<u64>(out.signed_residue < 0 ? -out.signed_residue : out.signed_residue);
    out.good = 2 * mag <= r_;
    return out;
}

double SpectrumTable::joint(u64 c, u64 k) const {
    if (c >= q_)
        throw OutOfRange("c must be < q");
    if (k >= r_)
        throw OutOfRange("k must be < r");
    return geometric_probability(q_, r_, c, term_count(q_, r_, k));
}

SpectrumTable build_spectrum(const FactoringInstance& instance, u64 q) {
    require_power_of_two(q);
    if (q > SpectrumTable::kMaxQ)
        throw InvalidArgument("q = " + std::to_string(q) + " exceeds the materializable limit 2^27");
    const u64 r = instance.r();
    const u64 long_m = q / r + 1;
    const u64 short_m = q / r;
    const u64 long_classes = r > q ? q : q % r;
    const u64 short_classes = r > q ? 0 : r - long_classes;

    std::vector<double> marginals(q);
    for (u64 c = 0; c < q; ++c) {
        double p = 0.0;
        if (long_classes != 0)
            p += static_cast<double>(long_classes) * geometric_probability(q, r, c, long_m);
        if (short_classes != 0)
            p += static_cast<double>(short_classes) * geometric_probability(q, r, c, short_m);
        marginals[c] = p;
    }
    return SpectrumTable(q, r, std::move(marginals));
}

std::vector<u64> good_c_set(u64 r, u64 q) {
    if (r == 0)
        throw InvalidArgument("r must be >= 1");
    require_power_of_two(q);
    auto is_good = [&](u64 c) {
        const i64 t = numtheory::signed_residue_of_product(r, c, q);
        return 2 * static_cast<u64>(t < 0 ? -t : t) <= r;
    };

    std::vector<u64> out;
    if (q <= 2 * r) {
        for (u64 c = 0; c < q; ++c)
            if (is_good(c))
                out.push_back(c);
        return out;
    }
    // Otherwise each good c sits within 1/2 of some d*q/r, so only the two
    // integers around each of those points need testing.
    for (u64 d = 0; d < r; ++d) {
        const u64 lo = static_cast<u64>(static_cast<u128>(d) * q / r);
        for (u64 c : {lo, (lo + 1) % q})
            if (is_good(c))
                out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double sinc_pi(double theta) {
    if (theta == 0.0)
        return 1.0;
    const double x = std::numbers::pi * theta;
    return std::sin(x) / x;
}

double integral_approximation(double theta, u64 r) {
    return std::abs(sinc_pi(theta)) / static_cast<double>(r);
}

BoundReport verify_bounds(const FactoringInstance& instance, u64 q) {
    require_power_of_two(q);
    const u64 n = instance.n();
    const u64 r = instance.r();
    const double rd = static_cast<double>(r);

    BoundReport rep;
    rep.q = q;
    rep.r = r;
    rep.q_in_shor_range = n * n <= q && q < 2 * n * n;
    rep.one_third_r2 = 1.0 / (3.0 * rd * rd);
    rep.four_pi2_r2 = 4.0 / (std::numbers::pi * std::numbers::pi * rd * rd);
    rep.p_min = std::numeric_limits<double>::infinity();
    rep.min_integral_term = std::numeric_limits<double>::infinity();

    const std::vector<u64> good = good_c_set(r, q);
    rep.good_count = good.size();
    // k only matters through m_k, so one representative k per distinct m_k suffices.
    std::vector<u64> ks;
    const u64 long_classes = r > q ? q : q % r;
    if (long_classes != 0)
        ks.push_back(0);
    if (long_classes != r)
        ks.push_back(r - 1);

    for (u64 c : good) {
        const double theta = static_cast<double>(numtheory::signed_residue_of_product(r, c, q)) / rd;
        const double term = integral_approximation(theta, r);
        rep.min_integral_term = std::min(rep.min_integral_term, term);
        for (u64 k : ks) {
            const double p = geometric_probability(q, r, c, term_count(q, r, k));
            if (p < rep.p_min) {
                rep.p_min = p;
                rep.p_min_c = c;
                rep.p_min_k = k;
            }
            rep.max_gap = std::max(rep.max_gap, std::abs(std::sqrt(p) - term));
        }
    }
    if (good.empty()) {
        rep.p_min = 0.0;
        rep.min_integral_term = 0.0;
    }

    const double shortfall = std::clamp(1.0 - rep.max_gap * std::numbers::pi * rd / 2.0, 0.0, 1.0);
    rep.epsilon = 1.0 - shortfall * shortfall;
    rep.exceeds_one_third = rep.p_min > rep.one_third_r2;
    rep.meets_sinc_bound = rep.p_min >= rep.four_pi2_r2 * (1.0 - rep.epsilon);
    return rep;
}

} // namespace shorsim
