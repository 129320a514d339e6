#include <doctest.h>

#include "lecmeta/csv.hpp"
#include "lecmeta/errors.hpp"

using namespace lecmeta;

TEST_SUITE("csv") {

TEST_CASE("fields split on commas, rows on newlines") {
  auto rows = csv::parse("a,b,c\n1,2,3\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"a", "b", "c"});
  CHECK(rows[1] == std::vector<std::string>{"1", "2", "3"});
}

TEST_CASE("quoted fields keep commas, quotes and newlines") {
  auto rows = csv::parse("\"a,b\",\"say \"\"hi\"\"\",\"two\nlines\"\n");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][0] == "a,b");
  CHECK(rows[0][1] == "say \"hi\"");
  CHECK(rows[0][2] == "two\nlines");
}

TEST_CASE("CRLF and missing trailing newline both parse") {
  auto rows = csv::parse("a,b\r\nc,d");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == std::vector<std::string>{"c", "d"});
}

TEST_CASE("unterminated quote is an error") {
  CHECK_THROWS_AS(csv::parse("\"oops\n"), parse_error);
}

TEST_CASE("format_row quotes only when needed") {
  CHECK(csv::format_row({"a", "b"}) == "a,b\n");
  CHECK(csv::format_row({"a,b", "c\"d"}) == "\"a,b\",\"c\"\"d\"\n");
}

TEST_CASE("round-trip through parse") {
  std::vector<std::string> fields{"plain", "with,comma", "with\"quote", "multi\nline", ""};
  auto rows = csv::parse(csv::format_row(fields));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == fields);
}

}  // TEST_SUITE
