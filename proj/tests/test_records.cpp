#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mplab/records.hpp"

using namespace mplab;
namespace fs = std::filesystem;

namespace {

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("mplab_records_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

RecordError parse_error(std::string_view line) {
    try {
        parse_record(line);
    } catch (const RecordError& e) {
        return e;
    }
    ADD_FAILURE() << "no error for: " << line;
    return RecordError(RecordError::Kind::syntax, 0, "");
}

}  // namespace

TEST(ParseRecord, ValidForms) {
    auto r = parse_record("k=2; m=2 * 3");
    EXPECT_EQ(r.k, 2);
    EXPECT_EQ(r.m.value(), 6);
    EXPECT_TRUE(r.source.empty());

    r = parse_record("k=3; m=2^5 * 3 * 7; src=Carmichael 1907");
    EXPECT_EQ(r.m.value(), 672);
    EXPECT_EQ(r.source, "Carmichael 1907");

    EXPECT_EQ(parse_record("k=4;m=2^5*3^3*5*7").m.value(), 30240);
    EXPECT_EQ(parse_record("  k=3; m=5 * 2^3 * 3 ").m.value(), 120);
}

TEST(ParseRecord, SyntaxErrorsCarryColumn) {
    auto e = parse_error("k=2 m=2 * 3");
    EXPECT_EQ(e.kind(), RecordError::Kind::syntax);
    EXPECT_EQ(e.column(), 4u);

    e = parse_error("k=2; m=2 * ");
    EXPECT_EQ(e.kind(), RecordError::Kind::syntax);
    EXPECT_EQ(e.column(), 11u);  // trailing blanks are trimmed

    e = parse_error("k=2; m=2 ** 3");
    EXPECT_EQ(e.kind(), RecordError::Kind::syntax);
    EXPECT_EQ(e.column(), 11u);

    e = parse_error("k=2; m=2^0 * 3");
    EXPECT_EQ(e.kind(), RecordError::Kind::syntax);
    EXPECT_EQ(e.column(), 10u);

    EXPECT_EQ(parse_error("k=two; m=2 * 3").column(), 3u);
    EXPECT_EQ(parse_error("k=2; m=2 * 3; source=x").kind(), RecordError::Kind::syntax);
}

TEST(ParseRecord, CompositePrimeToken) {
    const auto e = parse_error("k=2; m=4 * 7");
    EXPECT_EQ(e.kind(), RecordError::Kind::composite_prime);
    EXPECT_EQ(e.column(), 8u);
    EXPECT_NE(std::string(e.what()).find("4"), std::string::npos);
}

TEST(ParseRecord, ValidationFailure) {
    const auto e = parse_error("k=2; m=2 * 5");
    EXPECT_EQ(e.kind(), RecordError::Kind::validation);
    EXPECT_NE(std::string(e.what()).find("sigma(m) = 18 != k*m = 20"), std::string::npos);
    EXPECT_EQ(parse_error("k=1; m=2").kind(), RecordError::Kind::validation);
}

TEST(FormatRecord, Canonical) {
    EXPECT_EQ(format_record(parse_record("k=2;m=3*2; src=x")), "k=2; m=2 * 3; src=x");
    EXPECT_EQ(format_record(parse_record("k=2; m=2^2*7")), "k=2; m=2^2 * 7");
}

TEST_F(TempDir, LoadsValidFile) {
    const auto p = write("three.mpdb", "# comment\nk=2; m=2 * 3\n\nk=2; m=2^2 * 7; src=Euclid\nk=3; m=2^3 * 3 * 5\n");
    const auto db = load_database(p);
    ASSERT_EQ(db.records.size(), 3u);
    EXPECT_EQ(db.records[0].line, 2u);
    EXPECT_EQ(db.records[1].line, 4u);
    EXPECT_EQ(db.records[2].m.value(), 120);
    EXPECT_TRUE(db.warnings.empty());
    for (const auto& r : db.records) EXPECT_EQ(sigma(r.m), r.k * r.m.value());
}

TEST_F(TempDir, EmptyFile) {
    EXPECT_TRUE(load_database(write("empty.mpdb", "")).records.empty());
}

TEST_F(TempDir, OneBadLineAbortsLoad) {
    std::string text;
    const char* good[] = {"k=2; m=2 * 3",           "k=2; m=2^2 * 7",     "k=2; m=2^4 * 31",
                          "k=2; m=2^6 * 127",       "k=3; m=2^3 * 3 * 5", "k=3; m=2^5 * 3 * 7",
                          "k=4; m=2^5 * 3^3 * 5 * 7", "k=3; m=2^9 * 3 * 11 * 31", "k=4; m=2^3 * 3^2 * 5 * 7 * 13"};
    for (int i = 0; i < 9; ++i) {
        text += good[i];
        text += '\n';
        if (i == 4) text += "k=2; m=2 * 5\n";  // line 6
    }
    try {
        load_database(write("ten.mpdb", text));
        FAIL() << "expected DatabaseError";
    } catch (const DatabaseError& e) {
        ASSERT_EQ(e.errors().size(), 1u);
        EXPECT_EQ(e.errors()[0].line, 6u);
    }
}

TEST_F(TempDir, DuplicatesCollapsedWithWarning) {
    const auto db = load_database(write("dup.mpdb", "k=2; m=2 * 3\nk=2; m=3 * 2; src=again\n"));
    EXPECT_EQ(db.records.size(), 1u);
    ASSERT_EQ(db.warnings.size(), 1u);
    EXPECT_NE(db.warnings[0].find("line 2"), std::string::npos);
}

TEST_F(TempDir, MissingFile) {
    EXPECT_THROW(load_database(dir_ / "absent.mpdb"), DomainError);
}

TEST_F(TempDir, PersistAppendsAndSkipsDuplicates) {
    const auto p = dir_ / "out.mpdb";
    std::vector<SearchHit> hits{{6, 2, 0}};
    EXPECT_EQ(persist_hits(hits, p).appended, 1u);
    EXPECT_EQ(slurp(p), "k=2; m=2 * 3; src=search\n");

    const auto again = persist_hits(hits, p);
    EXPECT_EQ(again.appended, 0u);
    EXPECT_EQ(again.notices.size(), 1u);
    EXPECT_EQ(slurp(p), "k=2; m=2 * 3; src=search\n");
}

TEST_F(TempDir, PersistNothingLeavesFileUntouched) {
    const auto p = write("keep.mpdb", "# header\n");
    EXPECT_EQ(persist_hits({}, p).appended, 0u);
    EXPECT_EQ(slurp(p), "# header\n");
    EXPECT_EQ(persist_hits({}, dir_ / "never.mpdb").appended, 0u);
    EXPECT_FALSE(fs::exists(dir_ / "never.mpdb"));
}

TEST_F(TempDir, PersistLoadRoundTrip) {
    const std::vector<SearchHit> hits{{6, 2, 0},       {28, 2, 0},        {120, 3, 0},       {672, 3, 0},
                                      {30240, 4, 0},   {32760, 4, 0},     {523776, 3, 0},    {2178540, 4, 0},
                                      {23569920, 4, 0}, {33550336, 2, 0}};
    const auto p = dir_ / "rt.mpdb";
    persist_hits(hits, p);
    const auto db = load_database(p);
    ASSERT_EQ(db.records.size(), hits.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
        EXPECT_EQ(db.records[i].m.value(), static_cast<unsigned long>(hits[i].m));
        EXPECT_EQ(db.records[i].k, static_cast<unsigned long>(hits[i].k));
        EXPECT_EQ(db.records[i].source, "search");
    }
}

TEST(SeedDatabase, LoadsAndValidates) {
    const auto db = load_database(MPLAB_SEED_DB);
    EXPECT_GE(db.records.size(), 18u);
    EXPECT_TRUE(db.warnings.empty());
    for (const auto& r : db.records) EXPECT_EQ(sigma(r.m), r.k * r.m.value());
}
