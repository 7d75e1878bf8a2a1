#pragma once

#include "shorsim/numtheory.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace shorsim::cli {

using numtheory::u64;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNonCompliant = 2;

struct SweepRow {
    u64 n = 0;
    u64 x = 0;
    u64 r = 0;
    u64 phi_r = 0;
    double success_bound = 0.0;
    double order_rate = 0.0;
    double factor_rate = 0.0;
    double p_min = 0.0;
    double one_third_r2 = 0.0;
};

/// One row per (n, x); bases default to every unit x in [2, n-1].
std::vector<SweepRow> run_sweep(const std::vector<u64>& n_list, const std::vector<u64>& bases, u64 trials,
                                std::uint64_t seed);

/// Entry point for the shorsim executable. Exit status is 0 on success or
/// a compliant audit, 1 on usage errors, 2 on a non-compliant audit.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace shorsim::cli
