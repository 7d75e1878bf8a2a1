#include "shorsim/auditor.hpp"

#include "shorsim/errors.hpp"

#include <algorithm>
#include <string>

namespace shorsim {

namespace {

// Shown on every single-qubit register-1 report. The per-base circuits of
// such demonstrations cannot be checked from a register layout alone.
constexpr std::string_view kSingleQubitNote =
    "register 1 holds a single qubit; the modular exponentiation in such demonstrations is "
    "wired separately for particular bases rather than computed by one circuit valid for "
    "every base, which this audit does not model";

void validate(const RegisterConfig& config) {
    if (config.n < 3)
        throw InvalidArgument("n must be >= 3, got " + std::to_string(config.n));
    if (config.n >= (u64{1} << 31))
        throw InvalidArgument("n must be below 2^31");
    if (config.register1_qubits < 1 || config.register1_qubits > 62)
        throw InvalidArgument("register-1 width s must lie in [1, 62], got " +
                              std::to_string(config.register1_qubits));
    if (config.register2_qubits < 1)
        throw InvalidArgument("register-2 width must be >= 1");
}

Check make_check(std::string_view id, std::string description, Severity severity, bool passed,
                 std::vector<Evidence> evidence) {
    return Check{std::string(id), std::move(description), severity, std::move(evidence), passed};
}

} // namespace

std::string_view to_string(Severity s) noexcept {
    return s == Severity::hard ? "hard" : "advisory";
}

std::string_view to_string(Verdict v) noexcept {
    return v == Verdict::compliant ? "compliant" : "non_compliant";
}

const Check& AuditReport::check(std::string_view id) const {
    auto it = std::find_if(checks.begin(), checks.end(), [&](const Check& c) { return c.condition_id == id; });
    if (it == checks.end())
        throw OutOfRange("no check named " + std::string(id));
    return *it;
}

u64 indistinguishable_pairs(u64 n, u64 q) {
    if (q == 0)
        throw InvalidArgument("q must be >= 1");
    std::vector<u64> values;
    for (u64 r = 1; r < n; ++r) {
        for (u64 d = 0; d < r; ++d) {
            if (numtheory::gcd(d, r) != 1)
                continue;
            const unsigned __int128 twice = static_cast<unsigned __int128>(2) * d * q + r;
            values.push_back(static_cast<u64>(twice / (2 * r) % q));
        }
    }
    std::sort(values.begin(), values.end());
    u64 pairs = 0;
    for (std::size_t i = 0; i < values.size();) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i])
            ++j;
        const u64 m = j - i;
        pairs += m * (m - 1) / 2;
        i = j;
    }
    return pairs;
}

AuditReport audit(const RegisterConfig& config) {
    validate(config);
    const u64 n = config.n;
    const u64 n2 = n * n;
    const u64 q = config.q();
    const unsigned ell = numtheory::ceil_log2(n);
    const u64 total = u64{config.register1_qubits} + config.register2_qubits;

    AuditReport rep;
    rep.config = config;

    const bool q_ge_n2 = q >= n2;
    rep.checks.push_back(make_check(condition::q_ge_n2,
                                    "register-1 dimension q reaches n^2, so continued fractions can recover d/r",
                                    Severity::hard, q_ge_n2, {{"q", q}, {"n_squared", n2}}));

    rep.checks.push_back(make_check(condition::q_lt_2n2,
                                    "q stays below 2n^2 (the smallest admissible power of two)",
                                    Severity::advisory, q < 2 * n2, {{"q", q}, {"two_n_squared", 2 * n2}}));

    std::optional<u64> pairs;
    if (!q_ge_n2 && n <= kPairCountLimit)
        pairs = indistinguishable_pairs(n, q);
    else if (q_ge_n2)
        pairs = 0;
    rep.checks.push_back(make_check(condition::cfe_distinguish,
                                    "observable values c/q separate every fraction d/r with r < n",
                                    Severity::hard, q_ge_n2,
                                    {{"observable_c_values", q},
                                     {"n_squared", n2},
                                     {"indistinguishable_pairs", pairs}}));

    rep.checks.push_back(make_check(condition::reg2_width, "register 2 can hold every residue modulo n",
                                    Severity::hard, config.register2_qubits >= ell,
                                    {{"register2_qubits", config.register2_qubits}, {"ell", ell}}));

    rep.checks.push_back(make_check(condition::total_qubits, "at least 3*ell qubits in total",
                                    Severity::advisory, total >= 3 * u64{ell},
                                    {{"total_qubits", total}, {"three_ell", 3 * u64{ell}}}));

    rep.verdict = Verdict::compliant;
    for (const Check& c : rep.checks) {
        if (c.passed)
            continue;
        rep.narrative.push_back(c.condition_id);
        if (c.severity == Severity::hard)
            rep.verdict = Verdict::non_compliant;
    }
    if (config.register1_qubits == 1)
        rep.notes.emplace_back(kSingleQubitNote);
    return rep;
}

ApplicabilityReport bound_argument_applicability(const RegisterConfig& config, u64 x) {
    validate(config);
    const u64 n = config.n;
    if (x == 0 || x >= n)
        throw OutOfRange("x must lie in [1, n-1], got " + std::to_string(x));
    if (const u64 g = numtheory::gcd(x, n); g != 1)
        throw NotAUnit(x, n, g);

    ApplicabilityReport rep;
    rep.n = n;
    rep.x = x;
    rep.q = config.q();
    rep.r = numtheory::order_oracle(x, n);
    rep.r_over_q = {rep.r, rep.q};

    if (rep.q < n * n) {
        rep.applicable = false;
        rep.explanation = "q < n^2: replacing the sum over b by an integral over [0, 1] needs r much "
                          "smaller than q, and here r/q = " +
                          std::to_string(rep.r) + "/" + std::to_string(rep.q);
        return rep;
    }
    rep.applicable = true;
    rep.bounds = verify_bounds(FactoringInstance(n, x), rep.q);
    rep.explanation = "q >= n^2: the lower bound on good outcomes is checked directly";
    return rep;
}

} // namespace shorsim
