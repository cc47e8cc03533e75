#include <doctest.h>

#include <sstream>

#include "crimelab/common.hpp"
#include "crimelab/csv.hpp"
#include "helpers.hpp"

using namespace crimelab;

TEST_CASE("read_csv handles quoting, CRLF and BOM") {
    std::istringstream in(
        "\xEF\xBB\xBFname,note,count\r\n"
        "plain,\"a, b\",3\r\n"
        "\"quo\"\"ted\",\"line1\nline2\",4\n"
        ",,5\n");
    CsvTable t = read_csv(in);
    REQUIRE(t.header.size() == 3);
    CHECK(t.header[0] == "name");
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0][1] == "a, b");
    CHECK(t.rows[1][0] == "quo\"ted");
    CHECK(t.rows[1][1] == "line1\nline2");
    CHECK(t.rows[2][0] == "");
    CHECK(t.rows[2][2] == "5");
    CHECK(t.column("count") == 2);
    CHECK(t.column("absent") == -1);
}

TEST_CASE("ragged rows are rejected") {
    std::istringstream in("a,b\n1,2,3\n");
    CHECK_THROWS_AS(read_csv(in), DataError);
}

TEST_CASE("write then read round-trips awkward fields") {
    CsvTable t;
    t.header = {"x", "y"};
    t.rows.push_back({"comma, inside", "quote \" inside"});
    t.rows.push_back({"new\nline", "plain"});
    std::ostringstream out;
    write_csv(out, t);
    std::istringstream in(out.str());
    CsvTable back = read_csv(in);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
}

TEST_CASE("csv_escape only quotes when needed") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("a\"b") == "\"a\"\"b\"");
}

TEST_CASE("file round-trip") {
    testutil::TempDir dir("csv");
    CsvTable t;
    t.header = {"k", "v"};
    t.rows.push_back({"1", "one"});
    write_csv_file(dir.file("t.csv"), t);
    CsvTable back = read_csv_file(dir.file("t.csv"));
    CHECK(back.rows == t.rows);
    CHECK_THROWS_AS(read_csv_file(dir.file("missing.csv")), DataError);
}
