#include <doctest.h>

#include <string>

#include "tsc/tsfile.hpp"

using namespace tsc;

TEST_CASE("parses a mixed description") {
    const TimeScale ts = parse_timescale(
        "# mixed window\n"
        "window 0 3\n"
        "interval 0 2\n"
        "points 2.5 3\n"
        "tail uniform 0.5\n");
    CHECK(ts.window_start() == 0.0);
    CHECK(ts.window_end() == 3.0);
    CHECK(ts.contains(1.3));
    CHECK(ts.contains(2.5));
    CHECK(ts.contains(4.5));
    CHECK_FALSE(ts.contains(2.25));
    CHECK(ts.sigma(2.0) == 2.5);
}

TEST_CASE("tail kinds") {
    CHECK(parse_timescale("window 0 1\ninterval 0 1\ntail continuous\n").contains(42.0));
    CHECK(parse_timescale("window 1 1\npoints 1\ntail geometric 2\n").contains(64.0));
    CHECK_FALSE(parse_timescale("window 0 1\ninterval 0 1\ntail none\n").unbounded_above());
}

TEST_CASE("points lines are order-insensitive and repeatable") {
    const TimeScale ts = parse_timescale(
        "window 0 4\n"
        "points 2 0\n"
        "points 4\n"
        "points 1 3\n"
        "tail uniform 1\n");
    for (double t : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}) CHECK(ts.contains(t));
}

TEST_CASE("line-numbered rejection") {
    const auto check_fails_on_line = [](const std::string& text, const std::string& needle) {
        try {
            parse_timescale(text);
            FAIL_CHECK("expected a SyntaxError for:\n" << text);
        } catch (const SyntaxError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    check_fails_on_line("window 0 2\ninterval 0 1\ninterval 0.5 2\ntail none\n", "line 3");
    check_fails_on_line("window 0 2\ninterval 0 1\npoints 3\ntail none\n", "line 3");  // outside window
    check_fails_on_line("window 0 2\ninterval 0 1\npoints 1 2\ntail none\n", "line 3");  // overlap at 1
    check_fails_on_line("window 0 1\ninterval 0 1\nschmail none\n", "line 3");
    check_fails_on_line("window 0 1\ninterval 0 1\ntail uniform -2\n", "line 3");
    check_fails_on_line("window 0 1\ninterval 0 0.5\ntail none\n", "last segment");
    check_fails_on_line("window 0 1\ninterval 0.25 1\ntail none\n", "first segment");
    check_fails_on_line("window 0 1\ninterval 0 x\ntail none\n", "line 2");
}

TEST_CASE("missing sections") {
    CHECK_THROWS_AS(parse_timescale("interval 0 1\ntail none\n"), SyntaxError);
    CHECK_THROWS_AS(parse_timescale("window 0 1\ninterval 0 1\n"), SyntaxError);
    CHECK_THROWS_AS(parse_timescale("window 0 1\ntail none\n"), SyntaxError);
}

TEST_CASE("comments and blank lines are ignored") {
    const TimeScale ts = parse_timescale(
        "\n"
        "# integers\n"
        "window 0 0   # just the anchor\n"
        "points 0\n"
        "\n"
        "tail uniform 1  # Z\n");
    CHECK(ts.contains(17.0));
}
