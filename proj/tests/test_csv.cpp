#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "fairens/csv.hpp"

using namespace fairens;

namespace {
struct TempFile {
    std::string path;
    explicit TempFile(const std::string& content) {
        path = "csv_test_" + std::to_string(std::rand()) + ".csv";
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};
}  // namespace

TEST_CASE("plain file reads into a rectangular table") {
    TempFile f("a,b\n1,x\n2,y");
    RawTable t = load_csv(f.path, true);
    REQUIRE(t.columns == std::vector<std::string>{"a", "b"});
    REQUIRE(t.n_rows() == 2);
    CHECK(t.cells[0] == std::vector<std::string>{"1", "x"});
    CHECK(t.cells[1] == std::vector<std::string>{"2", "y"});
}

TEST_CASE("ragged row error names the row") {
    TempFile f("a,b\n1,x\n2\n3,z");
    REQUIRE_THROWS_WITH(load_csv(f.path, true), Catch::Matchers::ContainsSubstring("row 2"));
}

TEST_CASE("quoted comma is preserved") {
    // expected cell value fixed by RFC-4180: quotes delimit, inner comma is data
    TempFile f("v,w\n\"1,5\",z");
    RawTable t = load_csv(f.path, true);
    REQUIRE(t.n_rows() == 1);
    CHECK(t.cells[0][0] == "1,5");
    CHECK(t.cells[0][1] == "z");
}

TEST_CASE("escaped quotes and CRLF line endings") {
    RawTable t = parse_csv_text("a,b\r\n\"he said \"\"hi\"\"\",2\r\n");
    REQUIRE(t.n_rows() == 1);
    CHECK(t.cells[0][0] == "he said \"hi\"");
}

TEST_CASE("empty file is an error") {
    TempFile f("");
    CHECK_THROWS_AS(load_csv(f.path, true), DataError);
}

TEST_CASE("missing file is an error") {
    CHECK_THROWS_AS(load_csv("definitely_not_here.csv", true), DataError);
}

TEST_CASE("headerless mode synthesizes column names") {
    RawTable t = parse_csv_text("1,2\n3,4", false);
    CHECK(t.columns == std::vector<std::string>{"c0", "c1"});
    CHECK(t.n_rows() == 2);
}

TEST_CASE("quoting round-trip through csv_quote") {
    for (const std::string s : {"plain", "with,comma", "with\"quote", "with\nnewline", ""}) {
        RawTable t = parse_csv_text("col\n" + csv_quote(s) + "\n");
        REQUIRE(t.n_rows() == 1);
        CHECK(t.cells[0][0] == s);
    }
}
