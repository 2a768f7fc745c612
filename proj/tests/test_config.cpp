#include <cstdio>
#include <fstream>

#include "dctrack/config.hpp"
#include "dctrack/errors.hpp"
#include "doctest.h"

using namespace dctrack;

TEST_CASE("config parses keys, comments and blank lines") {
  const auto cfg = KeyValueConfig::fromString(
      "# comment\n"
      "\n"
      "b_field = 1.0\n"
      "  generate.events =  250 \n"
      "generate.category = close-by-two\n");
  CHECK(cfg.has("b_field"));
  CHECK(cfg.getDouble("b_field", 0.0) == doctest::Approx(1.0));
  CHECK(cfg.getLong("generate.events", 0) == 250);
  CHECK(cfg.getString("generate.category", "") == "close-by-two");
  CHECK(cfg.getString("missing", "fallback") == "fallback");
  CHECK(cfg.getLong("missing", 7) == 7);
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS(KeyValueConfig::fromString("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::fromString("= value\n"), ConfigError);
  const auto cfg = KeyValueConfig::fromString("x = not_a_number\n");
  CHECK_THROWS_AS(cfg.getDouble("x", 0.0), ConfigError);
  CHECK_THROWS_AS(cfg.getLong("x", 0), ConfigError);
  CHECK_THROWS_AS(cfg.requireString("absent"), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::fromFile("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("serialization is canonical and the hash is stable") {
  const auto a = KeyValueConfig::fromString("b = 2\na = 1\n");
  const auto b = KeyValueConfig::fromString("a = 1\nb = 2\n");
  CHECK(a.serialize() == "a = 1\nb = 2\n");
  CHECK(a.serialize() == b.serialize());
  CHECK(a.hash() == b.hash());
  auto c = a;
  c.set("a", "3");
  CHECK(c.hash() != a.hash());
}

TEST_CASE("double lists") {
  CHECK(parseDoubleList("1, 2.5,3") == std::vector<double>{1.0, 2.5, 3.0});
  CHECK(parseDoubleList("").empty());
  CHECK_THROWS_AS(parseDoubleList("1,x"), ConfigError);
  const auto cfg = KeyValueConfig::fromString("edges = 0.1,0.2\n");
  CHECK(cfg.getDoubleList("edges", {}) == std::vector<double>{0.1, 0.2});
  CHECK(cfg.getDoubleList("missing", {9.0}) == std::vector<double>{9.0});
}

TEST_CASE("config round-trips through a file") {
  const std::string path = "test_config_roundtrip.cfg";
  {
    std::ofstream out(path);
    out << "b_field = 0.9\ngenerate.seed = 42\n";
  }
  const auto cfg = KeyValueConfig::fromFile(path);
  CHECK(cfg.getDouble("b_field", 0) == doctest::Approx(0.9));
  CHECK(cfg.getLong("generate.seed", 0) == 42);
  std::remove(path.c_str());
}
