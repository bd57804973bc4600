#include <doctest.h>

#include <sstream>
#include <vector>

#include "qac/source_io.hpp"

using namespace qac;

TEST_CASE("weight lists allow comments, blanks, and several values per line") {
  std::istringstream in(
      "# header comment\n"
      "0.5\n"
      "\n"
      "0.2 0.2   # two on one line\n"
      "0.1\n");
  auto w = load_weights<double>(in);
  CHECK(w == std::vector<double>{0.5, 0.2, 0.2, 0.1});
}

TEST_CASE("parse errors carry the offending line number") {
  std::istringstream bad("0.5\n0.x\n");
  try {
    load_weights<double>(bad);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  std::istringstream neg("0.5\n\n-0.1\n");
  try {
    load_weights<double>(neg);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("positive") != std::string::npos);
  }

  std::istringstream zero("0\n");
  CHECK_THROWS_AS(load_weights<double>(zero), InputError);
  std::istringstream empty("# nothing\n\n");
  CHECK_THROWS_AS(load_weights<double>(empty), InputError);
}

TEST_CASE("rational weights load exactly") {
  std::istringstream in("1/3 0.3\n2/5\n");
  auto w = load_weights<Rat>(in);
  REQUIRE(w.size() == 3);
  CHECK(w[0] == Rat(1, 3));
  CHECK(w[1] == Rat(3, 10));
  CHECK(w[2] == Rat(2, 5));
  // Leading zeros in decimals must not trip octal parsing.
  std::istringstream tricky("0.0625\n00.25\n");
  auto t = load_weights<Rat>(tricky);
  CHECK(t[0] == Rat(1, 16));
  CHECK(t[1] == Rat(1, 4));
}

TEST_CASE("fractions work in float mode too") {
  std::istringstream in("1/4 1/2 1/4\n");
  auto w = load_weights<double>(in);
  CHECK(w == std::vector<double>{0.25, 0.5, 0.25});
}

TEST_CASE("normalize_weights scales to unit sum") {
  std::vector<double> w{2.0, 1.0, 1.0};
  normalize_weights(w);
  CHECK(w == std::vector<double>{0.5, 0.25, 0.25});

  std::vector<Rat> r{Rat(2), Rat(1), Rat(1)};
  normalize_weights(r);
  CHECK(r == std::vector<Rat>{Rat(1, 2), Rat(1, 4), Rat(1, 4)});
  // Thirds stay exact.
  std::vector<Rat> thirds{Rat(1), Rat(1), Rat(1)};
  normalize_weights(thirds);
  CHECK(thirds == std::vector<Rat>(3, Rat(1, 3)));
}

TEST_CASE("missing files raise a plain error") {
  CHECK_THROWS_AS(load_weights_file<double>("/nonexistent/weights.txt"), Error);
}
