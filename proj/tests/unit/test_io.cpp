#include "tosi/error.hpp"
#include "tosi/io/csv.hpp"
#include "tosi/io/index_set.hpp"

#include <doctest.h>

#include <clocale>
#include <sstream>

using namespace tosi;

namespace {

CsvTable parse(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in, "t.csv");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

IndexSet sets(const std::string& text, Index p) {
  std::istringstream in(text);
  return read_index_set(in, p, "g.txt");
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("basic table") {
  const CsvTable t = parse("a,\"b c\",\"d\"\"q\"\r\n1,2.5,-3e-2\n+4, 5E1 ,6\n");
  CHECK(t.header == std::vector<std::string>{"a", "b c", "d\"q"});
  REQUIRE(t.values.rows() == 2);
  CHECK(t.values(0, 2) == -0.03);
  CHECK(t.values(1, 0) == 4.0);
  CHECK(t.values(1, 1) == 50.0);
  CHECK(t.column("b c") == 1);
  CHECK_THROWS_AS(t.column("zz"), InputError);
}

TEST_CASE("parsing ignores the C locale") {
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
  const CsvTable t = parse("x\n1.25\n");
  std::setlocale(LC_NUMERIC, saved.c_str());
  CHECK(t.values(0, 0) == 1.25);
  CHECK(error_of("x\n1,25\n").find("line 2") != std::string::npos);
}

TEST_CASE("errors name the location") {
  CHECK(error_of("a,b\n1,2\n3\n").find("line 3") != std::string::npos);
  const std::string missing = error_of("a,b\n1,\n");
  CHECK(missing.find("line 2, column 2") != std::string::npos);
  CHECK(missing.find("missing") != std::string::npos);
  CHECK(error_of("a,b\n1,nan\n").find("column 2") != std::string::npos);
  CHECK(error_of("a,b\n1,inf\n").find("column 2") != std::string::npos);
  CHECK(error_of("a,b\n1,x\n").find("not a number") != std::string::npos);
  CHECK(!error_of("").empty());
  CHECK(!error_of("a,b\n").empty());
  CHECK(!error_of("a,\"b\n1,2\n").empty());
}

TEST_CASE("digests") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  const CsvTable a = parse("x,y\n1,2\n3,4\n");
  const CsvTable b = parse("x,y\n1,2\n3,4.0000001\n");
  CHECK(matrix_digest(a.values) != matrix_digest(b.values));
  CHECK(row_digests(a.values)[0] == row_digests(b.values)[0]);
  CHECK(row_digests(a.values)[1] != row_digests(b.values)[1]);
}

TEST_CASE("index set files") {
  CHECK(sets("# zeros\n3\n\n1  # first\n", 5) == IndexSet{0, 2});
  CHECK_THROWS_AS(sets("0\n", 5), InputError);
  CHECK_THROWS_AS(sets("6\n", 5), InputError);
  CHECK_THROWS_AS(sets("2\n2\n", 5), InputError);
  CHECK_THROWS_AS(sets("1 2\n", 5), InputError);
  CHECK_THROWS_AS(sets("# nothing\n", 5), InputError);
  try {
    sets("1\nx\n", 5);
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

}
