#pragma once

#include "shorsim/numtheory.hpp"
#include "shorsim/spectrum.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shorsim {

/// A demonstration's register layout: register 1 has s qubits (q = 2^s).
struct RegisterConfig {
    u64 n = 0;
    unsigned register1_qubits = 0;
    unsigned register2_qubits = 0;
    std::optional<u64> base_x;

    u64 q() const noexcept { return u64{1} << register1_qubits; }
};

namespace condition {
inline constexpr std::string_view q_ge_n2 = "COND_Q_GE_N2";
inline constexpr std::string_view q_lt_2n2 = "COND_Q_LT_2N2";
inline constexpr std::string_view cfe_distinguish = "COND_CFE_DISTINGUISH";
inline constexpr std::string_view reg2_width = "COND_REG2_WIDTH";
inline constexpr std::string_view total_qubits = "COND_TOTAL_QUBITS";
} // namespace condition

enum class Severity { hard, advisory };
enum class Verdict { compliant, non_compliant };

std::string_view to_string(Severity s) noexcept;
std::string_view to_string(Verdict v) noexcept;

/// Named exact-integer evidence; absent values are recorded explicitly.
struct Evidence {
    std::string name;
    std::optional<u64> value;
};

struct Check {
    std::string condition_id;
    std::string description;
    Severity severity = Severity::hard;
    std::vector<Evidence> evidence;
    bool passed = false;
};

struct AuditReport {
    RegisterConfig config;
    std::vector<Check> checks;
    Verdict verdict = Verdict::compliant;
    std::vector<std::string> narrative; // failed condition ids, in check order
    std::vector<std::string> notes;

    const Check& check(std::string_view id) const;
};

/// Fractions d/r in [0, 1) with r < n that land on the same rounded
/// register value c = round(d q / r) mod q as some other such fraction,
/// counted as unordered colliding pairs. Enumerates O(n^2) fractions.
u64 indistinguishable_pairs(u64 n, u64 q);

/// Largest n for which the audit enumerates indistinguishable pairs.
inline constexpr u64 kPairCountLimit = 4096;

/// Throws InvalidArgument if n < 3, n >= 2^31, s outside [1, 62] or register2_qubits == 0.
AuditReport audit(const RegisterConfig& config);

struct ApplicabilityReport {
    u64 n = 0;
    u64 x = 0;
    u64 q = 0;
    u64 r = 0;
    bool applicable = false;
    /// r/q as an exact ratio when the argument does not apply.
    std::pair<u64, u64> r_over_q{0, 1};
    std::optional<BoundReport> bounds;
    std::string explanation;
};

/// Whether the integral-approximation lower bound can be used at this register size.
ApplicabilityReport bound_argument_applicability(const RegisterConfig& config, u64 x);

} // namespace shorsim
