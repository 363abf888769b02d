#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>

#include "dancer/adapter.hpp"

using namespace dancer;
using namespace std::chrono_literals;

TEST_CASE("identity adapter echoes the source") {
  AdapterProcess process(IDENTITY_ADAPTER, 10000ms);
  CHECK(process.exchange("1", "the quick brown fox") == "the quick brown fox");
  CHECK(process.exchange("2", "") == "");
  CHECK(process.exchange("3", "unicode \xc3\xa9 and \"quotes\" survive") ==
        "unicode \xc3\xa9 and \"quotes\" survive");
  CHECK(process.close() == 0);
}

TEST_CASE("one process answers a long request stream in order") {
  AdapterProcess process(TAG_ADAPTER, 10000ms);
  for (int i = 0; i < 100; ++i) {
    const std::string id = "req-" + std::to_string(i);
    const std::string summary = process.exchange(id, "payload " + std::to_string(i));
    // response carries the request id and the adapter-side sequence number
    CHECK(summary == id + "|" + std::to_string(i) + "|payload " + std::to_string(i));
  }
  CHECK(process.close() == 0);
}

TEST_CASE("a crashing adapter reports instead of hanging") {
  AdapterProcess process(CRASH_ADAPTER, 5000ms);
  CHECK_THROWS_WITH_AS(process.exchange("1", "hello"),
                       doctest::Contains("before responding"), AdapterError);
}

TEST_CASE("a malformed response line is rejected with its content") {
  AdapterProcess process(GARBAGE_ADAPTER, 5000ms);
  CHECK_THROWS_WITH_AS(process.exchange("1", "hello"),
                       doctest::Contains("this is not json"), AdapterError);
}

TEST_CASE("a stalled adapter times out") {
  AdapterProcess process(SLOW_ADAPTER, 300ms);
  const auto start = std::chrono::steady_clock::now();
  CHECK_THROWS_WITH_AS(process.exchange("1", "hello"), doctest::Contains("timed out"),
                       AdapterError);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(elapsed < 5s);
  CHECK_FALSE(process.running());
}

TEST_CASE("a missing command surfaces as a spawn-path failure") {
  AdapterProcess process("/nonexistent/binary/for/sure", 5000ms);
  try {
    process.exchange("1", "hello");
    FAIL("expected AdapterError");
  } catch (const AdapterError& e) {
    // the shell exits 127 when the command cannot be found
    CHECK(std::string(e.what()).find("127") != std::string::npos);
  }
}

TEST_CASE("exchange after close is an error") {
  AdapterProcess process(IDENTITY_ADAPTER, 5000ms);
  CHECK(process.exchange("1", "x") == "x");
  process.close();
  CHECK_THROWS_AS(process.exchange("2", "y"), AdapterError);
}

TEST_CASE("run_external performs a one-shot exchange") {
  CHECK(run_external("just once", IDENTITY_ADAPTER, 10000ms) == "just once");
  CHECK_THROWS_AS(run_external("x", CRASH_ADAPTER, 5000ms), AdapterError);
}

TEST_CASE("a response with the wrong id is rejected") {
  // the tag adapter echoes ids correctly; simulate a mismatch with a shell
  // one-liner that answers with a fixed id
  const std::string fixed_id_adapter =
      R"(sh -c 'while read line; do echo "{\"id\":\"nope\",\"summary\":\"s\"}"; done')";
  AdapterProcess process(fixed_id_adapter, 5000ms);
  CHECK_THROWS_WITH_AS(process.exchange("real", "x"), doctest::Contains("id"), AdapterError);
}
