#include "shorsim/report_io.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <ostream>

namespace shorsim::io {

namespace {

using nlohmann::ordered_json;

std::string opt_text(const std::optional<u64>& v) {
    return v ? std::to_string(*v) : "none";
}

ordered_json opt_json(const std::optional<u64>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string bool_text(bool b) {
    return b ? "true" : "false";
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            out << ',';
        out << cells[i];
    }
    out << '\n';
}

// Probabilities go into records as their 12-digit decimal text reparsed,
// so every format carries the same value.
double rounded(double p) {
    return std::stod(format_probability(p));
}

std::vector<std::string> trace_cells(const RunTrace& t) {
    std::optional<u64> d, rc, f1, f2;
    if (t.recovered) {
        d = t.recovered->num;
        rc = t.recovered->den;
    }
    if (t.factors) {
        f1 = t.factors->first;
        f2 = t.factors->second;
    }
    return {std::to_string(t.n),
            std::to_string(t.x),
            std::to_string(t.ell),
            std::to_string(t.r),
            std::to_string(t.q),
            std::to_string(t.seed),
            std::to_string(t.sampled_c),
            std::to_string(t.sampled_k),
            opt_text(d),
            opt_text(rc),
            bool_text(t.order_verified),
            opt_text(f1),
            opt_text(f2),
            t.failure_reason ? std::string(to_string(*t.failure_reason)) : "none"};
}

ordered_json trace_json(const RunTrace& t) {
    ordered_json j;
    j["record"] = "run_trace";
    j["n"] = t.n;
    j["x"] = t.x;
    j["ell"] = t.ell;
    j["r"] = t.r;
    j["q"] = t.q;
    j["seed"] = t.seed;
    j["sampled_c"] = t.sampled_c;
    j["sampled_k"] = t.sampled_k;
    j["recovered_d"] = t.recovered ? ordered_json(t.recovered->num) : ordered_json(nullptr);
    j["recovered_r"] = t.recovered ? ordered_json(t.recovered->den) : ordered_json(nullptr);
    j["order_verified"] = t.order_verified;
    j["factor_1"] = t.factors ? ordered_json(t.factors->first) : ordered_json(nullptr);
    j["factor_2"] = t.factors ? ordered_json(t.factors->second) : ordered_json(nullptr);
    j["failure_reason"] =
        t.failure_reason ? ordered_json(std::string(to_string(*t.failure_reason))) : ordered_json(nullptr);
    return j;
}

void write_aligned(std::ostream& out, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t i = 0; i < header.size(); ++i)
        width[i] = header[i].size();
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            width[i] = std::max(width[i], row[i].size());
    auto emit = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                line += "  ";
            line += fmt::format("{:>{}}", cells[i], width[i]);
        }
        out << line << '\n';
    };
    emit(header);
    for (const auto& row : rows)
        emit(row);
}

} // namespace

std::optional<Format> parse_format(std::string_view name) {
    if (name == "human")
        return Format::human;
    if (name == "delimited-table")
        return Format::delimited_table;
    if (name == "structured-record")
        return Format::structured_record;
    return std::nullopt;
}

std::string_view to_string(Format f) noexcept {
    switch (f) {
    case Format::human:
        return "human";
    case Format::delimited_table:
        return "delimited-table";
    case Format::structured_record:
        return "structured-record";
    }
    return "human";
}

std::string format_probability(double p) {
    return fmt::format("{:.12g}", p);
}

std::vector<std::string> split_delimited(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            return out;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

void write_spectrum(std::ostream& out, const SpectrumTable& table, const BoundReport& bounds, Format format) {
    const u64 q = table.q();
    const double total = table.total_probability();
    switch (format) {
    case Format::delimited_table: {
        write_csv_row(out, kSpectrumColumns);
        for (u64 c = 0; c < q; ++c) {
            const SpectrumRow row = table.row(c);
            write_csv_row(out, {std::to_string(c), format_probability(row.marginal_probability),
                                std::to_string(row.signed_residue), row.good ? "1" : "0"});
        }
        out << "# normalization," << format_probability(total) << '\n';
        out << "# p_min_good," << format_probability(bounds.p_min) << '\n';
        break;
    }
    case Format::structured_record: {
        for (u64 c = 0; c < q; ++c) {
            const SpectrumRow row = table.row(c);
            ordered_json j;
            j["record"] = "spectrum_row";
            j["c"] = c;
            j["marginal_probability"] = rounded(row.marginal_probability);
            j["signed_residue"] = row.signed_residue;
            j["good_flag"] = row.good;
            out << j.dump() << '\n';
        }
        ordered_json t;
        t["record"] = "spectrum_trailer";
        t["q"] = q;
        t["r"] = table.r();
        t["normalization"] = rounded(total);
        t["p_min_good"] = rounded(bounds.p_min);
        t["one_third_r2"] = rounded(bounds.one_third_r2);
        out << t.dump() << '\n';
        break;
    }
    case Format::human: {
        std::vector<std::vector<std::string>> rows;
        rows.reserve(q);
        for (u64 c = 0; c < q; ++c) {
            const SpectrumRow row = table.row(c);
            rows.push_back({std::to_string(c), format_probability(row.marginal_probability),
                            std::to_string(row.signed_residue), row.good ? "good" : "-"});
        }
        write_aligned(out, kSpectrumColumns, rows);
        out << "q = " << q << ", r = " << table.r() << '\n';
        out << "normalization = " << format_probability(total) << '\n';
        out << "p_min over good (c, k) = " << format_probability(bounds.p_min)
            << "  (1/(3r^2) = " << format_probability(bounds.one_third_r2) << ")\n";
        break;
    }
    }
}

void write_traces(std::ostream& out, const std::vector<RunTrace>& traces, Format format) {
    switch (format) {
    case Format::delimited_table:
        write_csv_row(out, kRunTraceFields);
        for (const RunTrace& t : traces)
            write_csv_row(out, trace_cells(t));
        break;
    case Format::structured_record:
        for (const RunTrace& t : traces)
            out << trace_json(t).dump() << '\n';
        break;
    case Format::human: {
        std::vector<std::vector<std::string>> rows;
        for (const RunTrace& t : traces)
            rows.push_back(trace_cells(t));
        write_aligned(out, kRunTraceFields, rows);
        break;
    }
    }
}

void write_success(std::ostream& out, const SuccessReport& rep, Format format) {
    const std::string loglog = rep.phi_ratio_loglog ? format_probability(*rep.phi_ratio_loglog) : "none";
    switch (format) {
    case Format::delimited_table:
        write_csv_row(out, kSuccessFields);
        write_csv_row(out, {std::to_string(rep.n), std::to_string(rep.x), std::to_string(rep.r),
                            std::to_string(rep.phi_r), std::to_string(rep.q), std::to_string(rep.trials),
                            format_probability(rep.order_rate), format_probability(rep.factor_rate),
                            format_probability(rep.bound), format_probability(rep.three_sigma_floor),
                            bool_text(rep.meets_bound), loglog});
        break;
    case Format::structured_record: {
        ordered_json j;
        j["record"] = "success_estimate";
        j["n"] = rep.n;
        j["x"] = rep.x;
        j["r"] = rep.r;
        j["phi_r"] = rep.phi_r;
        j["q"] = rep.q;
        j["trials"] = rep.trials;
        j["order_rate"] = rounded(rep.order_rate);
        j["factor_rate"] = rounded(rep.factor_rate);
        j["bound"] = rounded(rep.bound);
        j["three_sigma_floor"] = rounded(rep.three_sigma_floor);
        j["meets_bound"] = rep.meets_bound;
        j["phi_ratio_loglog"] =
            rep.phi_ratio_loglog ? ordered_json(rounded(*rep.phi_ratio_loglog)) : ordered_json(nullptr);
        out << j.dump() << '\n';
        break;
    }
    case Format::human:
        out << fmt::format("n = {}, x = {}, r = {}, phi(r) = {}, q = {}\n", rep.n, rep.x, rep.r, rep.phi_r, rep.q);
        out << fmt::format("trials                 {}\n", rep.trials);
        out << fmt::format("order recovered        {} ({})\n", rep.order_recoveries, format_probability(rep.order_rate));
        out << fmt::format("nontrivial factors     {} ({})\n", rep.factorizations, format_probability(rep.factor_rate));
        out << fmt::format("bound phi(r)/(3r)      {}\n", format_probability(rep.bound));
        out << fmt::format("3-sigma floor          {}\n", format_probability(rep.three_sigma_floor));
        out << fmt::format("meets bound            {}\n", bool_text(rep.meets_bound));
        out << fmt::format("phi(r)/r * loglog r    {}\n", loglog);
        break;
    }
}

void write_audit(std::ostream& out, const AuditReport& rep, const std::optional<ApplicabilityReport>& app,
                 Format format) {
    const RegisterConfig& cfg = rep.config;
    if (format == Format::human) {
        out << fmt::format("audit n = {}, register-1 = {} qubits (q = {}), register-2 = {} qubits\n", cfg.n,
                           cfg.register1_qubits, cfg.q(), cfg.register2_qubits);
        for (const Check& c : rep.checks) {
            std::string ev;
            for (const Evidence& e : c.evidence)
                ev += fmt::format(" {}={}", e.name, opt_text(e.value));
            out << fmt::format("  [{}] {:<22} {:<8}{}\n", c.passed ? "pass" : "FAIL", c.condition_id,
                               to_string(c.severity), ev);
        }
        out << "verdict: " << to_string(rep.verdict) << '\n';
        for (const std::string& note : rep.notes)
            out << "note: " << note << '\n';
        if (app) {
            out << fmt::format("bound argument (x = {}, r = {}): {}\n", app->x, app->r,
                               app->applicable ? "applicable" : "inapplicable");
            if (app->bounds)
                out << fmt::format("  p_min = {} vs 1/(3r^2) = {}\n", format_probability(app->bounds->p_min),
                                   format_probability(app->bounds->one_third_r2));
            out << "  " << app->explanation << '\n';
        }
        return;
    }

    // Audits always serialize as one structured document; a table would flatten the evidence lists.
    ordered_json j;
    j["record"] = "audit_report";
    j["config"] = {{"n", cfg.n},
                   {"register1_qubits", cfg.register1_qubits},
                   {"register2_qubits", cfg.register2_qubits},
                   {"q", cfg.q()},
                   {"base_x", opt_json(cfg.base_x)}};
    ordered_json checks = ordered_json::array();
    for (const Check& c : rep.checks) {
        ordered_json ev = ordered_json::object();
        for (const Evidence& e : c.evidence)
            ev[e.name] = opt_json(e.value);
        checks.push_back({{"condition_id", c.condition_id},
                          {"description", c.description},
                          {"severity", std::string(to_string(c.severity))},
                          {"evidence", ev},
                          {"passed", c.passed}});
    }
    j["checks"] = checks;
    j["verdict"] = std::string(to_string(rep.verdict));
    j["narrative"] = rep.narrative;
    j["notes"] = rep.notes;
    if (app) {
        ordered_json a;
        a["x"] = app->x;
        a["r"] = app->r;
        a["q"] = app->q;
        a["applicable"] = app->applicable;
        a["r_over_q"] = {app->r_over_q.first, app->r_over_q.second};
        a["p_min"] = app->bounds ? ordered_json(rounded(app->bounds->p_min)) : ordered_json(nullptr);
        a["one_third_r2"] = app->bounds ? ordered_json(rounded(app->bounds->one_third_r2)) : ordered_json(nullptr);
        a["explanation"] = app->explanation;
        j["bound_argument"] = a;
    }
    out << j.dump(2) << '\n';
}

void write_bounds(std::ostream& out, u64 n, u64 x, const BoundReport& rep, Format format) {
    if (format == Format::human) {
        out << fmt::format("n = {}, x = {}, q = {}, r = {}{}\n", n, x, rep.q, rep.r,
                           rep.q_in_shor_range ? "" : "  (advisory: q outside [n^2, 2n^2))");
        out << fmt::format("good outcomes             {}\n", rep.good_count);
        out << fmt::format("p_min                     {}  at c = {}, k = {}\n", format_probability(rep.p_min),
                           rep.p_min_c, rep.p_min_k);
        out << fmt::format("1/(3r^2)                  {}\n", format_probability(rep.one_third_r2));
        out << fmt::format("4/(pi^2 r^2)              {}\n", format_probability(rep.four_pi2_r2));
        out << fmt::format("min integral term         {}\n", format_probability(rep.min_integral_term));
        out << fmt::format("max amplitude gap         {}  (x r = {})\n", format_probability(rep.max_gap),
                           format_probability(rep.max_gap * static_cast<double>(rep.r)));
        out << fmt::format("epsilon                   {}\n", format_probability(rep.epsilon));
        out << fmt::format("p_min > 1/(3r^2)          {}\n", bool_text(rep.exceeds_one_third));
        out << fmt::format("p_min >= 4/(pi^2 r^2)(1-e) {}\n", bool_text(rep.meets_sinc_bound));
        return;
    }
    const std::vector<std::string> header = {"n",      "x",          "q",          "r",
                                             "q_in_shor_range", "good_count", "p_min", "one_third_r2",
                                             "four_pi2_r2", "min_integral_term", "max_gap", "epsilon",
                                             "exceeds_one_third", "meets_sinc_bound"};
    const std::vector<std::string> cells = {std::to_string(n),
                                            std::to_string(x),
                                            std::to_string(rep.q),
                                            std::to_string(rep.r),
                                            bool_text(rep.q_in_shor_range),
                                            std::to_string(rep.good_count),
                                            format_probability(rep.p_min),
                                            format_probability(rep.one_third_r2),
                                            format_probability(rep.four_pi2_r2),
                                            format_probability(rep.min_integral_term),
                                            format_probability(rep.max_gap),
                                            format_probability(rep.epsilon),
                                            bool_text(rep.exceeds_one_third),
                                            bool_text(rep.meets_sinc_bound)};
    if (format == Format::delimited_table) {
        write_csv_row(out, header);
        write_csv_row(out, cells);
        return;
    }
    ordered_json j;
    j["record"] = "bound_report";
    j["n"] = n;
    j["x"] = x;
    j["q"] = rep.q;
    j["r"] = rep.r;
    j["q_in_shor_range"] = rep.q_in_shor_range;
    j["good_count"] = rep.good_count;
    j["p_min"] = rounded(rep.p_min);
    j["one_third_r2"] = rounded(rep.one_third_r2);
    j["four_pi2_r2"] = rounded(rep.four_pi2_r2);
    j["min_integral_term"] = rounded(rep.min_integral_term);
    j["max_gap"] = rounded(rep.max_gap);
    j["epsilon"] = rounded(rep.epsilon);
    j["exceeds_one_third"] = rep.exceeds_one_third;
    j["meets_sinc_bound"] = rep.meets_sinc_bound;
    out << j.dump() << '\n';
}

} // namespace shorsim::io
