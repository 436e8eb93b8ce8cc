#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "tacsel/config.hpp"
#include "tacsel/errors.hpp"

using tacsel::Config;
using tacsel::ConfigError;

TEST_CASE("parses flat key = value pairs with dotted keys") {
    const Config cfg = Config::parse(
        "lk.max_points = 64\n"
        "model.dropout=0.2\n"
        "  strategy.iterations =  5  \n");
    CHECK(cfg.get_int("lk.max_points", 0) == 64);
    CHECK(cfg.get_double("model.dropout", 0.0) == doctest::Approx(0.2));
    CHECK(cfg.get_int("strategy.iterations", 0) == 5);
}

TEST_CASE("comments and blank lines are ignored") {
    const Config cfg = Config::parse(
        "# full-line comment\n"
        "\n"
        "a = 1 # trailing comment\n"
        "   \t  \n"
        "b = 2\n");
    CHECK(cfg.get_int("a", 0) == 1);
    CHECK(cfg.get_int("b", 0) == 2);
    CHECK(!cfg.has("# full-line comment"));
}

TEST_CASE("missing keys fall back") {
    const Config cfg = Config::parse("a = 1\n");
    CHECK(cfg.get_int("missing", 7) == 7);
    CHECK(cfg.get_double("missing", 2.5) == 2.5);
    CHECK(cfg.get_string("missing", "x") == "x");
    CHECK(cfg.get_bool("missing", true));
    CHECK(cfg.get_u64("missing", 11u) == 11u);
    CHECK(cfg.get_double_list("missing", {1.0, 2.0}) == std::vector<double>{1.0, 2.0});
}

TEST_CASE("later assignments win") {
    const Config cfg = Config::parse("a = 1\na = 2\n");
    CHECK(cfg.get_int("a", 0) == 2);
}

TEST_CASE("malformed lines are rejected with location") {
    CHECK_THROWS_AS(Config::parse("no equals sign\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("= 3\n"), ConfigError);
    try {
        Config::parse("ok = 1\nbroken line\n", "test.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("test.cfg:2") != std::string::npos);
    }
}

TEST_CASE("typed getters validate values") {
    const Config cfg = Config::parse(
        "num = 1.5\n"
        "word = hello\n"
        "flag1 = true\n"
        "flag0 = 0\n"
        "big = 18446744073709551615\n"
        "list = 0.05, 0.1,0.2\n");
    CHECK(cfg.get_double("num", 0.0) == 1.5);
    CHECK_THROWS_AS(cfg.get_int("num", 0), ConfigError);     // not integral
    CHECK_THROWS_AS(cfg.get_double("word", 0.0), ConfigError);
    CHECK_THROWS_AS(cfg.get_bool("word", false), ConfigError);
    CHECK(cfg.get_bool("flag1", false));
    CHECK(!cfg.get_bool("flag0", true));
    CHECK(cfg.get_u64("big", 0) == 18446744073709551615ull);
    const auto list = cfg.get_double_list("list", {});
    REQUIRE(list.size() == 3);
    CHECK(list[0] == 0.05);
    CHECK(list[1] == 0.1);
    CHECK(list[2] == 0.2);
    CHECK_THROWS_AS(cfg.get_double_list("word", {}), ConfigError);
}

TEST_CASE("set overrides and entries exposes the map") {
    Config cfg = Config::parse("a = 1\n");
    cfg.set("a", "3");
    cfg.set("b", "4");
    CHECK(cfg.get_int("a", 0) == 3);
    CHECK(cfg.entries().size() == 2);
}

TEST_CASE("load reads a file and rejects missing paths") {
    const std::string path = "test_config_tmp.cfg";
    {
        std::ofstream out(path);
        out << "x = 42\n";
    }
    const Config cfg = Config::load(path);
    CHECK(cfg.get_int("x", 0) == 42);
    std::remove(path.c_str());
    CHECK_THROWS_AS(Config::load("does_not_exist.cfg"), ConfigError);
}
