#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "mplab/cli.hpp"

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = mplab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(Cli, ArithmeticVerbs) {
    EXPECT_EQ(run({"abundancy", "672"}).out, "3/1\n");
    EXPECT_EQ(run({"sigma", "120"}).out, "360\n");
    EXPECT_EQ(run({"rad", "8128"}).out, "254\n");
    EXPECT_EQ(run({"factor", "523776"}).out, "2^9 * 3 * 11 * 31\n");
    EXPECT_EQ(run({"factor", "18446744073709551617"}).out, "274177 * 67280421310721\n");
    EXPECT_EQ(run({"--json", "abundancy", "672"}).out, "{\"abundancy\":\"3/1\"}\n");
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"sigma"}).code, 2);
    EXPECT_EQ(run({"sigma", "12", "--bogus"}).code, 2);
    EXPECT_EQ(run({"factorial"}).code, 2);
    EXPECT_EQ(run({"factorial", "--scan", "3", "--monotonicity", "4"}).code, 2);
    EXPECT_EQ(run({"lemma-check", "loopy", "--variant", "other"}).code, 2);

    const auto bad = run({"sigma", "-5"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("error"), std::string::npos);
    EXPECT_EQ(run({"sigma", "0"}).code, 1);
    EXPECT_EQ(run({"abc-quality", "--a", "2", "--b", "4"}).code, 1);
    EXPECT_EQ(run({"ingest", "--db", "/nonexistent/file.mpdb"}).code, 1);
    EXPECT_EQ(run({"lemma-check", "loopy", "--e-max", "9"}).code, 1);
}

TEST(Cli, IncompleteFactorizationReportsCofactor) {
    const auto r = run({"--effort-seconds", "0.01", "factor", "10000000000000000000000000069800000000000000000000000120901"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("cofactor"), std::string::npos);
}

TEST(Cli, HelpForEverySubcommand) {
    for (std::vector<std::string> args :
         {std::vector<std::string>{"--help"}, {"factor", "--help"}, {"sigma", "--help"}, {"abundancy", "--help"},
          {"rad", "--help"}, {"search", "--help"}, {"verify-bound", "--help"}, {"lemma-check", "--help"},
          {"lemma-check", "valuation", "--help"}, {"lemma-check", "mixed-square", "--help"},
          {"lemma-check", "odd-chain", "--help"}, {"lemma-check", "loopy", "--help"},
          {"lemma-check", "euler-log", "--help"}, {"repdigit", "--help"}, {"factorial", "--help"},
          {"abc-quality", "--help"}, {"ingest", "--help"}}) {
        const auto r = run(args);
        EXPECT_EQ(r.code, 0) << args[0];
        EXPECT_NE(r.out.find("Usage"), std::string::npos) << args[0];
    }
}

TEST(Cli, Search) {
    const auto r = run({"search", "--limit", "10000", "--k", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "k\tm\n2\t6\n2\t28\n2\t496\n2\t8128\n");
    EXPECT_EQ(run({"search", "--limit", "1000000", "--k", "5"}).out, "k\tm\n");
    EXPECT_EQ(run({"search", "--limit", "1"}).code, 1);
}

TEST(Cli, SearchPersist) {
    const auto path = std::filesystem::temp_directory_path() / "mplab_cli_persist.mpdb";
    std::filesystem::remove(path);
    EXPECT_EQ(run({"search", "--limit", "1000", "--persist", path.string()}).code, 0);
    const auto again = run({"search", "--limit", "1000", "--persist", path.string()});
    EXPECT_NE(again.err.find("0 record(s) appended"), std::string::npos);
    const auto ingest = run({"ingest", "--db", path.string()});
    EXPECT_EQ(ingest.code, 0);
    EXPECT_EQ(lines(ingest.out).size(), 1u + 5u);  // 6, 28, 120, 496, 672
    std::filesystem::remove(path);
}

TEST(Cli, VerifyBoundOnSeed) {
    const auto r = run({"verify-bound", "--db", MPLAB_SEED_DB});
    EXPECT_EQ(r.code, 0);
    const auto rows = lines(r.out);
    ASSERT_GE(rows.size(), 19u);
    EXPECT_EQ(rows[0], "k\tm\tbeta\trad\tverdict");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const bool six = rows[i].rfind("2\t6\t", 0) == 0;
        EXPECT_NE(rows[i].find(six ? "\tboundary" : "\tholds"), std::string::npos) << rows[i];
    }
}

TEST(Cli, LemmaChecks) {
    EXPECT_EQ(run({"lemma-check", "loopy", "--e-max", "3", "--k-max", "4", "--margin", "200"}).out,
              "0 counterexamples\n");
    const auto gap = run({"lemma-check", "loopy", "--e-max", "3", "--k-max", "4", "--margin", "0", "--gap"});
    EXPECT_EQ(gap.out, "0 counterexamples\n");
    EXPECT_EQ(gap.err, "gap\tproof\t2\t4\ngap\tproof\t2,2\t10\ngap\tproof\t2,2,2\t22\n");
    EXPECT_EQ(run({"lemma-check", "valuation"}).out, "0 counterexamples\n");
    EXPECT_EQ(run({"lemma-check", "mixed-square", "--samples", "200"}).out, "0 counterexamples\n");
    EXPECT_EQ(run({"lemma-check", "mixed-square", "--primes", "5", "--samples", "200"}).out, "0 counterexamples\n");
    EXPECT_EQ(run({"lemma-check", "mixed-square", "--tuple", "3,5,7,11"}).out, "0 counterexamples\n");
    EXPECT_EQ(run({"lemma-check", "odd-chain", "--samples", "200"}).out, "0 counterexamples\n");
    const auto euler = lines(run({"lemma-check", "euler-log"}).out);
    ASSERT_EQ(euler.size(), 3u);
    EXPECT_EQ(euler[2], "0 counterexamples");
}

TEST(Cli, RepdigitAndFactorial) {
    EXPECT_EQ(run({"repdigit", "--base", "2", "--d-max", "10", "--s-max", "2"}).out,
              "D\ts\tk\tstatus\n2\t1\t2\tmultiperfect\n8\t2\t3\tmultiperfect\n");
    EXPECT_EQ(run({"repdigit", "--base", "2", "--d-max", "10", "--s-max", "2", "--pow2-only"}).out,
              "D\ts\tk\tstatus\n2\t1\t2\tmultiperfect\n");
    EXPECT_EQ(run({"repdigit", "--base", "2", "--s-max", "3", "--chain"}).out,
              "s\tU\tratio\n0\t1\t1/1\n1\t3\t4/3\n2\t15\t8/5\n3\t255\t144/85\n");
    EXPECT_EQ(run({"factorial", "--scan", "30"}).out, "n\n3\n");
    EXPECT_EQ(run({"factorial", "--monotonicity", "100"}).out, "true\n");
    EXPECT_EQ(run({"factorial", "--abundancy", "5"}).out, "3/1\n");
    const auto plus = lines(run({"factorial", "--plus-one", "15"}).out);
    ASSERT_EQ(plus.size(), 16u);
    EXPECT_EQ(plus[4], "4\t25\tnot-multiperfect\t");
    EXPECT_EQ(plus[11], "11\t39916801\tprime\t");
}

TEST(Cli, AbcQuality) {
    EXPECT_EQ(run({"abc-quality", "--a", "1", "--b", "8"}).out, "a\tb\tc\trad\tquality\n1\t8\t9\t6\t1.22629438553\n");
    EXPECT_EQ(run({"abc-quality", "--x", "9", "--y", "1"}).out, "a\tb\tc\trad\tquality\n1\t8\t9\t6\t1.22629438553\n");
    const auto poly = lines(run({"abc-quality", "--poly", "1,0,1", "--range", "2:5"}).out);
    ASSERT_EQ(poly.size(), 5u);
    EXPECT_EQ(poly[1].substr(0, 6), "2\t5\t5\t");
    EXPECT_EQ(run({"abc-quality", "--poly", "1,-2,1", "--range", "2:5"}).code, 1);
    EXPECT_EQ(run({"abc-quality", "--poly", "1,0,1"}).code, 2);
    EXPECT_EQ(lines(run({"abc-quality", "--form", "1,0,1", "--max", "3"}).out).size(), 1u + 7u);
}

TEST(Cli, JsonLinesParse) {
    const auto r = run({"--json", "verify-bound", "--db", MPLAB_SEED_DB});
    ASSERT_EQ(r.code, 0);
    for (const auto& l : lines(r.out)) {
        const auto obj = nlohmann::json::parse(l);
        EXPECT_TRUE(obj.contains("verdict"));
        EXPECT_TRUE(obj.contains("beta"));
    }
    EXPECT_EQ(run({"--json", "lemma-check", "valuation"}).out, "{\"counterexamples\":0}\n");
}

TEST(Cli, ByteIdenticalAcrossRuns) {
    const std::vector<std::vector<std::string>> cases{
        {"--workers", "2", "search", "--limit", "200000"},
        {"--workers", "2", "factorial", "--plus-one", "18"},
        {"--workers", "2", "repdigit", "--base", "3", "--d-max", "50"},
        {"--workers", "2", "lemma-check", "odd-chain", "--samples", "100"}};
    for (const auto& args : cases) EXPECT_EQ(run(args).out, run(args).out);
    EXPECT_EQ(run({"--workers", "1", "search", "--limit", "100000"}).out,
              run({"--workers", "8", "search", "--limit", "100000"}).out);
}
