#pragma once

#include "shorsim/auditor.hpp"
#include "shorsim/pipeline.hpp"
#include "shorsim/spectrum.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shorsim::io {

enum class Format { human, delimited_table, structured_record };

/// Accepts "human", "delimited-table", "structured-record".
std::optional<Format> parse_format(std::string_view name);
std::string_view to_string(Format f) noexcept;

/// 12 significant digits, shortest form ("%.12g").
std::string format_probability(double p);

/// Column order of the spectrum dump.
inline const std::vector<std::string> kSpectrumColumns = {"c", "marginal_probability", "signed_residue",
                                                          "good_flag"};

/// One row per c in [0, q), followed by a trailer with the normalization
/// sum and the minimum joint probability over good outcomes.
void write_spectrum(std::ostream& out, const SpectrumTable& table, const BoundReport& bounds, Format format);

inline const std::vector<std::string> kRunTraceFields = {
    "n",         "x",           "ell",         "r",           "q",        "seed",     "sampled_c",
    "sampled_k", "recovered_d", "recovered_r", "order_verified", "factor_1", "factor_2", "failure_reason"};

/// Traces as one flat record each; absent optionals print as "none" (table/human) or null (records).
void write_traces(std::ostream& out, const std::vector<RunTrace>& traces, Format format);

inline const std::vector<std::string> kSuccessFields = {
    "n",           "x",           "r",     "phi_r",             "q",           "trials",
    "order_rate",  "factor_rate", "bound", "three_sigma_floor", "meets_bound", "phi_ratio_loglog"};

void write_success(std::ostream& out, const SuccessReport& report, Format format);

void write_audit(std::ostream& out, const AuditReport& report, const std::optional<ApplicabilityReport>& applicability,
                 Format format);

void write_bounds(std::ostream& out, u64 n, u64 x, const BoundReport& report, Format format);

/// Splits one comma-separated line; no quoting is ever emitted, so none is parsed.
std::vector<std::string> split_delimited(std::string_view line);

} // namespace shorsim::io
