#include "shorsim/cli.hpp"
#include "shorsim/report_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

using namespace shorsim;

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "shorsim");
    std::vector<const char*> argv;
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("simulate") {
    SUBCASE("aggregate report") {
        const Result r = invoke({"simulate", "--n", "15", "--x", "7", "--trials", "10000", "--format",
                                 "structured-record"});
        REQUIRE(r.status == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["record"] == "success_estimate");
        CHECK(j["order_rate"].get<double>() == doctest::Approx(0.5).epsilon(0.04));
        CHECK(j["bound"].get<double>() == doctest::Approx(1.0 / 6).epsilon(1e-11));
        CHECK(j["meets_bound"] == true);
    }
    SUBCASE("single trace is byte-identical across runs") {
        const std::vector<std::string> args = {"simulate", "--n", "15", "--x", "7", "--trials", "1", "--seed", "12345",
                                               "--format", "delimited-table"};
        const Result a = invoke(args);
        const Result b = invoke(args);
        CHECK(a.status == 0);
        CHECK(a.out == b.out);
        const auto rows = lines(a.out);
        REQUIRE(rows.size() == 2);
        CHECK(io::split_delimited(rows[0]) == io::kRunTraceFields);
        CHECK(io::split_delimited(rows[1]).size() == io::kRunTraceFields.size());
    }
    SUBCASE("default seed is fixed") {
        CHECK(invoke({"simulate", "--n", "21", "--x", "2", "--trials", "5"}).out ==
              invoke({"simulate", "--n", "21", "--x", "2", "--trials", "5"}).out);
    }
    SUBCASE("structured traces mark absent fields as null") {
        const Result r = invoke({"simulate", "--n", "15", "--x", "14", "--trials", "20", "--format",
                                 "structured-record"});
        REQUIRE(r.status == 0);
        const auto rows = lines(r.out);
        CHECK(rows.size() == 20);
        for (const std::string& row : rows) {
            const auto j = nlohmann::json::parse(row);
            CHECK(j.contains("factor_1"));
            CHECK(j["factor_1"].is_null()); // 14 never factors 15
        }
    }
    SUBCASE("prime power") {
        const Result r = invoke({"simulate", "--n", "9", "--x", "2"});
        CHECK(r.status == 1);
        CHECK(r.err.find("prime power") != std::string::npos);
    }
    SUBCASE("shared factor is reported, not rejected") {
        const Result r = invoke({"simulate", "--n", "15", "--x", "6"});
        CHECK(r.status == 0);
        CHECK(r.out.find("reveals a factor") != std::string::npos);
    }
    CHECK(invoke({"simulate", "--n", "15"}).status == 1);
    CHECK(invoke({"simulate", "--n", "15", "--x", "7", "--format", "xml"}).status == 1);
    CHECK(invoke({"simulate", "--n", "15", "--x", "7", "--trials", "0"}).status == 1);
    CHECK(invoke({"simulate", "--n", "abc", "--x", "7"}).status == 1);
}

TEST_CASE("audit") {
    SUBCASE("single qubit") {
        const Result r = invoke({"audit", "--n", "15", "--s", "1", "--reg2", "4"});
        CHECK(r.status == 2);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["verdict"] == "non_compliant");
        CHECK(j["checks"][0]["condition_id"] == "COND_Q_GE_N2");
        CHECK(j["checks"][0]["passed"] == false);
        CHECK(j["checks"][0]["evidence"]["q"] == 2);
        CHECK(j["checks"][0]["evidence"]["n_squared"] == 225);
    }
    SUBCASE("compliant") {
        CHECK(invoke({"audit", "--n", "15", "--s", "8", "--reg2", "4"}).status == 0);
    }
    SUBCASE("narrow register 2") {
        const Result r = invoke({"audit", "--n", "15", "--s", "8", "--reg2", "2"});
        CHECK(r.status == 2);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["narrative"] == nlohmann::json::array({"COND_REG2_WIDTH", "COND_TOTAL_QUBITS"}));
    }
    SUBCASE("with a base") {
        const Result r = invoke({"audit", "--n", "15", "--s", "1", "--reg2", "4", "--x", "7"});
        CHECK(r.status == 2);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["bound_argument"]["applicable"] == false);
        CHECK(j["bound_argument"]["r_over_q"] == nlohmann::json::array({4, 2}));
        CHECK(invoke({"audit", "--n", "15", "--s", "8", "--reg2", "4", "--x", "5"}).status == 1);
    }
    CHECK(invoke({"audit", "--n", "15", "--s", "0", "--reg2", "4"}).status == 1);
    CHECK(invoke({"audit", "--n", "15", "--reg2", "4"}).status == 1);
}

TEST_CASE("spectrum") {
    SUBCASE("default q") {
        const Result r = invoke({"spectrum", "--n", "15", "--x", "7", "--format", "delimited-table"});
        REQUIRE(r.status == 0);
        const auto rows = lines(r.out);
        REQUIRE(rows.size() == 1 + 256 + 2);
        CHECK(rows[0] == "c,marginal_probability,signed_residue,good_flag");
        std::vector<u64> nonzero;
        for (std::size_t i = 1; i <= 256; ++i) {
            const auto cells = io::split_delimited(rows[i]);
            REQUIRE(cells.size() == 4);
            if (std::stod(cells[1]) != 0.0) {
                nonzero.push_back(std::stoull(cells[0]));
                CHECK(cells[1] == "0.25");
            }
        }
        CHECK(nonzero == std::vector<u64>{0, 64, 128, 192});
        CHECK(rows[257] == "# normalization,1");
        CHECK(rows[258] == "# p_min_good,0.0625");
    }
    SUBCASE("q = 2 exposes only two outcomes") {
        const Result r = invoke({"spectrum", "--n", "15", "--x", "7", "--q", "2", "--format", "structured-record"});
        REQUIRE(r.status == 0);
        const auto rows = lines(r.out);
        REQUIRE(rows.size() == 3);
        CHECK(nlohmann::json::parse(rows[0])["c"] == 0);
        CHECK(nlohmann::json::parse(rows[1])["c"] == 1);
        const auto trailer = nlohmann::json::parse(rows[2]);
        CHECK(trailer["record"] == "spectrum_trailer");
        CHECK(std::abs(trailer["normalization"].get<double>() - 1.0) < 1e-12);
    }
    SUBCASE("table values round-trip at 12 significant digits") {
        const Result r = invoke({"spectrum", "--n", "21", "--x", "2", "--format", "delimited-table"});
        REQUIRE(r.status == 0);
        const SpectrumTable table = build_spectrum(FactoringInstance(21, 2), 512);
        const auto rows = lines(r.out);
        for (u64 c = 0; c < 512; ++c) {
            const auto cells = io::split_delimited(rows[c + 1]);
            const double parsed = std::stod(cells[1]);
            const double exact = table.marginals()[c];
            REQUIRE(io::format_probability(parsed) == cells[1]);
            REQUIRE(std::abs(parsed - exact) <= 5e-12 * std::abs(exact));
            REQUIRE(std::stoll(cells[2]) == table.row(c).signed_residue);
            REQUIRE((cells[3] == "1") == table.row(c).good);
        }
    }
    SUBCASE("human format") {
        const Result r = invoke({"spectrum", "--n", "15", "--x", "7", "--format", "human"});
        CHECK(r.status == 0);
        CHECK(r.out.find("normalization = 1") != std::string::npos);
    }
    CHECK(invoke({"spectrum", "--n", "15", "--x", "7", "--q", "100"}).status == 1);
    CHECK(invoke({"spectrum", "--n", "15", "--x", "5"}).status == 1);
}

TEST_CASE("sweep") {
    SUBCASE("several moduli") {
        const Result r = invoke({"sweep", "--n-list", "15,21,35", "--trials", "2000"});
        REQUIRE(r.status == 0);
        const auto rows = lines(r.out);
        CHECK(rows[0] == "n,x,r,phi_r,success_bound,order_rate,factor_rate,p_min,one_third_r2");
        CHECK(rows.size() > 10);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto cells = io::split_delimited(rows[i]);
            REQUIRE(cells.size() == 9);
            CHECK(std::stod(cells[5]) >= std::stod(cells[4]));
            CHECK(std::stod(cells[7]) > std::stod(cells[8]));
        }
    }
    SUBCASE("bases for 15") {
        const Result r = invoke({"sweep", "--n-list", "15", "--bases", "2,7,8,13", "--trials", "500"});
        REQUIRE(r.status == 0);
        const auto rows = lines(r.out);
        REQUIRE(rows.size() == 5);
        for (std::size_t i = 1; i < rows.size(); ++i)
            CHECK(std::stod(io::split_delimited(rows[i])[6]) > 0.0);
    }
    SUBCASE("deterministic") {
        const std::vector<std::string> args = {"sweep", "--n-list", "21", "--trials", "300", "--seed", "5"};
        CHECK(invoke(args).out == invoke(args).out);
    }
    CHECK(invoke({"sweep", "--n-list", "15", "--trials", "0"}).status == 1);
    CHECK(invoke({"sweep", "--trials", "10"}).status == 1);
    CHECK(invoke({"sweep", "--n-list", "9"}).status == 1);
}

TEST_CASE("verify-bounds and dispatch") {
    const Result r = invoke({"verify-bounds", "--n", "15", "--x", "7"});
    CHECK(r.status == 0);
    CHECK(r.out.find("p_min > 1/(3r^2)          true") != std::string::npos);
    CHECK(invoke({}).status == 1);
    CHECK(invoke({"frobnicate"}).status == 1);
    CHECK(invoke({"--help"}).status == 0);
}
