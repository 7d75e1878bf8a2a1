#pragma once

#include "shorsim/numtheory.hpp"

#include <cstdint>
#include <vector>

namespace shorsim {

using numtheory::i64;
using numtheory::u64;

/// n to factor, base x, register-2 width ell = ceil(log2 n), and the true order r of x.
class FactoringInstance {
public:
    /// Computes r with the brute-force oracle. Throws for n < 3, x outside
    /// [2, n-1], gcd(x, n) != 1, or order 1.
    FactoringInstance(u64 n, u64 x);

    u64 n() const noexcept { return n_; }
    u64 x() const noexcept { return x_; }
    unsigned ell() const noexcept { return ell_; }
    u64 r() const noexcept { return r_; }

private:
    u64 n_;
    u64 x_;
    unsigned ell_;
    u64 r_;
};

bool is_power_of_two(u64 q) noexcept;

/// Number of a in [0, q) with a = k (mod r).
u64 term_count(u64 q, u64 r, u64 k) noexcept;

/// |(1/q) sum_{b<m} exp(2 pi i b t / q)|^2 where t = r*c mod q, i.e. the
/// probability of one (c, k) outcome whose residue class has m terms.
double geometric_probability(u64 q, u64 r, u64 c, u64 m);

/// P(c, k) after the Fourier transform on register 1.
double joint_probability(const FactoringInstance& instance, u64 q, u64 c, u64 k);

struct SpectrumRow {
    u64 c = 0;
    double marginal_probability = 0.0;
    i64 signed_residue = 0;
    bool good = false;
};

/// Exact marginals P(c) for all c in [0, q).
///
/// The joint probability depends on k only through m_k, and writing
/// q = A*r + B there are B classes with m_k = A + 1 and r - B with m_k = A.
/// That is what lets a whole table be built in O(q). Only the marginals are
/// stored; the residue and good-flag of a row are recomputed on access.
class SpectrumTable {
public:
    static constexpr u64 kMaxQ = u64{1} << 27;
    static constexpr u64 kBlockSize = 1024;

    SpectrumTable(u64 q, u64 r, std::vector<double> marginals);

    u64 q() const noexcept { return q_; }
    u64 r() const noexcept { return r_; }
    const std::vector<double>& marginals() const noexcept { return marginals_; }
    SpectrumRow row(u64 c) const;

    /// P(c, k); throws OutOfRange if c >= q or k >= r.
    double joint(u64 c, u64 k) const;

    /// Residue classes k < long_classes() have long_count() terms, the rest short_count().
    u64 long_classes() const noexcept { return long_classes_; }
    u64 long_count() const noexcept { return q_ / r_ + 1; }
    u64 short_count() const noexcept { return q_ / r_; }

    double total_probability() const noexcept { return total_; }

    /// Running sums over blocks of kBlockSize consecutive c values.
    const std::vector<double>& block_cumulative() const noexcept { return block_cumulative_; }

private:
    u64 q_;
    u64 r_;
    u64 long_classes_;
    std::vector<double> marginals_;
    std::vector<double> block_cumulative_;
    double total_ = 0.0;
};

/// Throws InvalidArgument unless q is a power of two in [2, SpectrumTable::kMaxQ].
SpectrumTable build_spectrum(const FactoringInstance& instance, u64 q);

/// All c in [0, q) with |{rc}_q| <= r/2, ascending.
std::vector<u64> good_c_set(u64 r, u64 q);

/// (1/r) |int_0^1 exp(2 pi i u theta) du| = |sin(pi theta) / (pi theta)| / r.
double integral_approximation(double theta, u64 r);

/// sin(pi theta)/(pi theta) with the limit 1 at theta = 0.
double sinc_pi(double theta);

struct BoundReport {
    u64 q = 0;
    u64 r = 0;
    bool q_in_shor_range = false;   // n^2 <= q < 2n^2; otherwise the report is advisory
    u64 good_count = 0;
    double p_min = 0.0;             // min P(c, k) over good c, all k
    u64 p_min_c = 0;
    u64 p_min_k = 0;
    double one_third_r2 = 0.0;      // 1/(3r^2)
    double four_pi2_r2 = 0.0;       // 4/(pi^2 r^2)
    double min_integral_term = 0.0; // smallest (1/r)|sinc(theta)| over good c
    double max_gap = 0.0;           // max | sqrt(P(c,k)) - integral term |
    double epsilon = 0.0;
    bool exceeds_one_third = false; // p_min > 1/(3r^2)
    bool meets_sinc_bound = false;  // p_min >= 4/(pi^2 r^2) * (1 - epsilon)
};

/// Checks the good-outcome lower bound and the integral approximation behind it.
///
/// epsilon is derived from the observed gap: an amplitude can sit at most
/// max_gap below its integral term, whose minimum is 2/(pi r), so
/// epsilon = 1 - (1 - max_gap * pi * r / 2)^2 (clamped to [0, 1]).
BoundReport verify_bounds(const FactoringInstance& instance, u64 q);

} // namespace shorsim
