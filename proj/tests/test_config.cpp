#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "nlkpp/config.hpp"
#include "nlkpp/errors.hpp"

using namespace nlkpp;

TEST_SUITE("config") {

TEST_CASE("parsing: comments, whitespace, later assignments win") {
  const ConfigMap cfg = ConfigMap::parse_string(
      "# full-line comment\n"
      "  kernel.family = keller_segel   # trailing comment\n"
      "kernel.chi=0.5\n"
      "\n"
      "sim.t_end = 10\n"
      "sim.t_end = 40\n"
      "u0.kind = indicator\n"
      "diag.levels = 0.1 0.5 0.9\n"
      "flag.empty =\n");
  CHECK(cfg.get_string("kernel.family") == "keller_segel");
  CHECK(cfg.get_double("kernel.chi") == 0.5);
  CHECK(cfg.get_double("sim.t_end") == 40.0);  // later wins
  CHECK(cfg.has("flag.empty"));
  CHECK(cfg.get_string("flag.empty").empty());
  const std::vector<double> levels = cfg.get_doubles("diag.levels");
  REQUIRE(levels.size() == 3);
  CHECK(levels[0] == 0.1);
  CHECK(levels[2] == 0.9);
}

TEST_CASE("values may contain '=' after the first one") {
  const ConfigMap cfg = ConfigMap::parse_string("note = a=b=c\n");
  CHECK(cfg.get_string("note") == "a=b=c");
}

TEST_CASE("malformed lines report the line number") {
  try {
    ConfigMap::parse_string("a = 1\nb = 2\nthis line has no equals\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(ConfigMap::parse_string(" = 1\n"), ConfigError);
}

TEST_CASE("typed getters validate their input") {
  const ConfigMap cfg = ConfigMap::parse_string(
      "num = 2.5\nint = 42\nbad = 2.5x\nwords = alpha beta\nempty =\n");
  CHECK(cfg.get_double("num") == 2.5);
  CHECK(cfg.get_long("int") == 42);
  CHECK_THROWS_AS(cfg.get_double("bad"), ConfigError);
  CHECK_THROWS_AS(cfg.get_long("num"), ConfigError);  // trailing ".5"
  CHECK_THROWS_AS(cfg.get_double("empty"), ConfigError);
  CHECK_THROWS_AS(cfg.get_double("missing"), ConfigError);
  CHECK_THROWS_AS(cfg.get_string("missing"), ConfigError);
  const std::vector<std::string> words = cfg.get_strings("words");
  REQUIRE(words.size() == 2);
  CHECK(words[0] == "alpha");
  CHECK(words[1] == "beta");
  CHECK_THROWS_AS(cfg.get_doubles("words"), ConfigError);
}

TEST_CASE("boolean literals") {
  const ConfigMap cfg = ConfigMap::parse_string(
      "a = true\nb = 1\nc = yes\nd = on\n"
      "e = false\nf = 0\ng = no\nh = off\ni = maybe\n");
  for (const char* k : {"a", "b", "c", "d"}) CHECK(cfg.get_bool(k));
  for (const char* k : {"e", "f", "g", "h"}) CHECK_FALSE(cfg.get_bool(k));
  CHECK_THROWS_AS(cfg.get_bool("i"), ConfigError);
}

TEST_CASE("fallback getters only engage for missing keys") {
  const ConfigMap cfg = ConfigMap::parse_string("x = 3\nb = off\nbad = zzz\n");
  CHECK(cfg.get_double("x", 7.0) == 3.0);
  CHECK(cfg.get_double("y", 7.0) == 7.0);
  CHECK(cfg.get_long("y", -2) == -2);
  CHECK(cfg.get_bool("b", true) == false);
  CHECK(cfg.get_bool("nope", true) == true);
  CHECK(cfg.get_string("nope", "dflt") == "dflt");
  // Present-but-malformed still throws even with a fallback.
  CHECK_THROWS_AS(cfg.get_double("bad", 1.0), ConfigError);
}

TEST_CASE("prefix listing is sorted and exact") {
  ConfigMap cfg = ConfigMap::parse_string(
      "kernel.family = step\nkernel.k_inf = 0.25\nsim.dx = 0.1\n");
  cfg.set(" kernel.extra ", " 1 ");  // set() trims both parts
  const auto keys = cfg.keys_with_prefix("kernel.");
  REQUIRE(keys.size() == 3);
  CHECK(keys[0] == "kernel.extra");
  CHECK(keys[1] == "kernel.family");
  CHECK(keys[2] == "kernel.k_inf");
  CHECK(cfg.get_long("kernel.extra") == 1);
  CHECK(cfg.keys_with_prefix("nosuch.").empty());
}

TEST_CASE("file parsing: missing file and error context include the path") {
  CHECK_THROWS_AS(ConfigMap::parse_file("/nonexistent/nlkpp.conf"), ConfigError);

  const std::string path = "/tmp/nlkpp_test_config.conf";
  {
    std::ofstream out(path);
    out << "a = 1\nbroken line\n";
  }
  try {
    ConfigMap::parse_file(path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find(path) != std::string::npos);
    CHECK(msg.find("line 2") != std::string::npos);
  }
  std::remove(path.c_str());

  {
    std::ofstream out(path);
    out << "sim.dx = 0.05\n";
  }
  const ConfigMap cfg = ConfigMap::parse_file(path);
  CHECK(cfg.get_double("sim.dx") == 0.05);
  std::remove(path.c_str());
}

}  // TEST_SUITE
