#include "shorsim/cli.hpp"

#include "shorsim/auditor.hpp"
#include "shorsim/errors.hpp"
#include "shorsim/pipeline.hpp"
#include "shorsim/report_io.hpp"
#include "shorsim/spectrum.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <ostream>
#include <string>

namespace shorsim::cli {

namespace {

constexpr u64 kMaxTracedTrials = 20;

struct UsageError : Error {
    using Error::Error;
};

io::Format require_format(const std::string& name) {
    if (auto f = io::parse_format(name))
        return *f;
    throw UsageError("unknown --format '" + name + "' (human, delimited-table, structured-record)");
}

void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "n,x,r,phi_r,success_bound,order_rate,factor_rate,p_min,one_third_r2\n";
    for (const SweepRow& row : rows)
        out << fmt::format("{},{},{},{},{},{},{},{},{}\n", row.n, row.x, row.r, row.phi_r,
                           io::format_probability(row.success_bound), io::format_probability(row.order_rate),
                           io::format_probability(row.factor_rate), io::format_probability(row.p_min),
                           io::format_probability(row.one_third_r2));
}

int cmd_simulate(u64 n, u64 x, u64 trials, std::uint64_t seed, io::Format format, std::ostream& out) {
    if (trials == 0)
        throw UsageError("--trials must be >= 1");
    std::optional<Simulator> sim;
    try {
        sim.emplace(n, x);
    } catch (const FactorRevealedByGcd& e) {
        out << e.what() << "; the period-finding step is not needed\n";
        return kExitOk;
    }
    if (trials <= kMaxTracedTrials) {
        std::vector<RunTrace> traces;
        for (u64 i = 0; i < trials; ++i)
            traces.push_back(sim->run(derive_seed(seed, i)));
        io::write_traces(out, traces, format);
    } else {
        io::write_success(out, estimate_success(*sim, trials, seed), format);
    }
    return kExitOk;
}

int cmd_audit(u64 n, unsigned s, unsigned reg2, std::optional<u64> x, std::ostream& out) {
    RegisterConfig config{n, s, reg2, x};
    const AuditReport report = audit(config);
    std::optional<ApplicabilityReport> app;
    if (x)
        app = bound_argument_applicability(config, *x);
    io::write_audit(out, report, app, io::Format::structured_record);
    return report.verdict == Verdict::compliant ? kExitOk : kExitNonCompliant;
}

int cmd_spectrum(u64 n, u64 x, std::optional<u64> q, io::Format format, std::ostream& out) {
    const FactoringInstance instance(n, x);
    const u64 chosen = q ? *q : choose_q(n).q;
    if (!is_power_of_two(chosen) || chosen < 2)
        throw UsageError("--q must be a power of two >= 2, got " + std::to_string(chosen));
    const SpectrumTable table = build_spectrum(instance, chosen);
    io::write_spectrum(out, table, verify_bounds(instance, chosen), format);
    return kExitOk;
}

int cmd_verify_bounds(u64 n, u64 x, std::ostream& out) {
    const FactoringInstance instance(n, x);
    io::write_bounds(out, n, x, verify_bounds(instance, choose_q(n).q), io::Format::human);
    return kExitOk;
}

} // namespace

std::vector<SweepRow> run_sweep(const std::vector<u64>& n_list, const std::vector<u64>& bases, u64 trials,
                                std::uint64_t seed) {
    if (n_list.empty())
        throw InvalidArgument("sweep needs at least one n");
    if (trials == 0)
        throw InvalidArgument("trials must be >= 1");
    for (u64 n : n_list)
        check_factoring_input(n, 2);

    std::vector<SweepRow> rows;
    for (u64 n : n_list) {
        std::vector<u64> xs;
        if (bases.empty()) {
            for (u64 x = 2; x < n; ++x)
                xs.push_back(x);
        } else {
            xs = bases;
        }
        for (u64 x : xs) {
            // Bases that are not units of Z/nZ have no order to find.
            if (x < 2 || x >= n || numtheory::gcd(x, n) != 1)
                continue;
            const Simulator sim(n, x);
            const SuccessReport rep = estimate_success(sim, trials, derive_seed(derive_seed(seed, n), x));
            const BoundReport bounds = verify_bounds(sim.instance(), sim.registers().q);
            rows.push_back({n, x, rep.r, rep.phi_r, rep.bound, rep.order_rate, rep.factor_rate, bounds.p_min,
                            bounds.one_third_r2});
        }
    }
    return rows;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact classical simulation and register audit of Shor order finding", "shorsim"};
    app.require_subcommand(1);

    u64 n = 0, x = 0, trials = 1;
    std::uint64_t seed = kDefaultSeed;
    std::string format = "human";
    unsigned s = 0, reg2 = 0;
    std::optional<u64> audit_x, spectrum_q;
    std::vector<u64> n_list, bases;
    u64 sweep_trials = 2000;

    auto* simulate = app.add_subcommand("simulate", "Run the full order-finding pipeline on sampled measurements");
    simulate->add_option("--n", n, "Odd composite, not a prime power")->required();
    simulate->add_option("--x", x, "Base, a unit modulo n")->required();
    simulate->add_option("--trials", trials, "Traces are printed for up to 20 trials, an aggregate above that");
    simulate->add_option("--seed", seed, "Master seed")->capture_default_str();
    simulate->add_option("--format", format, "human | delimited-table | structured-record")->capture_default_str();

    auto* audit_cmd = app.add_subcommand("audit", "Check a register layout against the conditions order finding needs");
    audit_cmd->add_option("--n", n, "Modulus")->required();
    audit_cmd->add_option("--s", s, "Register-1 qubits (q = 2^s)")->required();
    audit_cmd->add_option("--reg2", reg2, "Register-2 qubits")->required();
    audit_cmd->add_option("--x", audit_x, "Base; adds the lower-bound applicability analysis");

    auto* spectrum = app.add_subcommand("spectrum", "Dump the exact measurement distribution of register 1");
    spectrum->add_option("--n", n, "Modulus")->required();
    spectrum->add_option("--x", x, "Base")->required();
    spectrum->add_option("--q", spectrum_q, "Register-1 dimension, a power of two (default: smallest >= n^2)");
    spectrum->add_option("--format", format, "human | delimited-table | structured-record")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Empirical success rates against the lower bounds across instances");
    sweep->add_option("--n-list", n_list, "Comma-separated moduli")->delimiter(',')->required();
    sweep->add_option("--bases", bases, "Comma-separated bases (default: every unit)")->delimiter(',');
    sweep->add_option("--trials", sweep_trials, "Trials per (n, x)")->capture_default_str();
    sweep->add_option("--seed", seed, "Master seed")->capture_default_str();

    auto* verify = app.add_subcommand("verify-bounds", "Check the good-outcome probability bound at q = choose_q(n)");
    verify->add_option("--n", n, "Modulus")->required();
    verify->add_option("--x", x, "Base")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*simulate)
            return cmd_simulate(n, x, trials, seed, require_format(format), out);
        if (*audit_cmd)
            return cmd_audit(n, s, reg2, audit_x, out);
        if (*spectrum)
            return cmd_spectrum(n, x, spectrum_q, require_format(format), out);
        if (*sweep) {
            write_sweep(out, run_sweep(n_list, bases, sweep_trials, seed));
            return kExitOk;
        }
        if (*verify)
            return cmd_verify_bounds(n, x, out);
    } catch (const Error& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace shorsim::cli
