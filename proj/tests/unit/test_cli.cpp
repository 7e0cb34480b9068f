#include "commands.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using tosi::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = "cli_unit_" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("grid parsing") {
  CHECK(tosi::cli::parse_grid("0.5, 0.1,0.2") == std::vector<double>{0.5, 0.1, 0.2});
  const auto g = tosi::cli::parse_grid("0.01:1:3");
  REQUIRE(g.size() == 3);
  CHECK(g[0] == doctest::Approx(1.0));
  CHECK(g[1] == doctest::Approx(0.1));
  CHECK(g[2] == doctest::Approx(0.01));
  CHECK(tosi::cli::parse_grid("0.2:0.2:1") == std::vector<double>{0.2});
  CHECK_THROWS(tosi::cli::parse_grid(""));
  CHECK_THROWS(tosi::cli::parse_grid("0.1:1:0"));
  CHECK_THROWS(tosi::cli::parse_grid("1:0.1:4"));
  CHECK_THROWS(tosi::cli::parse_grid("a,b"));
}

TEST_CASE("exit codes") {
  CHECK(call({}).code == 2);
  CHECK(call({"--help"}).code == 0);
  CHECK(call({"bogus"}).code == 2);
  CHECK(call({"simulate", "regression", "--reps", "0"}).code == 2);
  CHECK(call({"simulate", "nosuch"}).code == 2);
  CHECK(call({"test", "--data", "missing.csv", "--model", "mean", "--set", "x"}).code == 2);

  const std::string data = write_temp("c.csv", "a,b,c\n1,1,5\n2,2,5\n3,3,5\n4,4,5\n5,5,5\n6,6,5\n");
  const std::string set = write_temp("c.txt", "3\n");
  const Outcome o = call({"test", "--data", data, "--model", "mean", "--set", set, "--seed", "1"});
  CHECK(o.code == 3);
  CHECK(o.err.find("index 3") != std::string::npos);
  std::remove(data.c_str());
  std::remove(set.c_str());
}

TEST_CASE("report embeds an entropy seed") {
  const std::string data = write_temp("d.csv", "a,b\n1,0.5\n2,-0.1\n3,0.3\n2.5,0.2\n1.1,-0.4\n0.3,0.9\n");
  const std::string set = write_temp("d.txt", "2\n");
  const Outcome first = call({"test", "--data", data, "--model", "mean", "--set", set, "--splits", "2"});
  REQUIRE(first.code == 0);
  const auto j = nlohmann::json::parse(first.out);
  const auto cmd = j["command"].get<std::vector<std::string>>();
  CHECK(cmd[cmd.size() - 2] == "--seed");
  const std::vector<std::string> replay(cmd.begin() + 1, cmd.end());
  const Outcome second = call(replay);
  REQUIRE(second.code == 0);
  CHECK(nlohmann::json::parse(second.out)["results"] == j["results"]);
  std::remove(data.c_str());
  std::remove(set.c_str());
}

}
