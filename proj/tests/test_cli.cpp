#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "designcount/cli.hpp"
#include "designcount/errors.hpp"
#include "json.hpp"

using namespace designcount;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("designcount-test-" + name);
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST_CASE("count output formats") {
  auto r = run({"count", "--object", "sts", "--n", "7"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["count"] == "30");
  CHECK(j["kind"] == "sts");
  CHECK(j["complete"] == true);
  CHECK(r.out == run({"count", "--object", "sts", "--n", "7", "--jobs", "8"}).out);

  r = run({"count", "--object", "1f", "--n", "6", "--labeled", "--format", "csv"});
  CHECK(r.out == "kind,n,labeled,count,complete,nodes\n" + std::string("1f,6,true,720,true,") +
                     r.out.substr(r.out.rfind(',') + 1));
  r = run({"count", "--object", "latin", "--n", "5", "--format", "text"});
  CHECK(r.out == "latin(5) = 161280\n");
  r = run({"count", "--object", "1f", "--n", "8", "--format", "text"});
  CHECK(r.out == "1f(8) unordered = 6240\n");
}

TEST_CASE("exit codes") {
  CHECK(run({"--version"}).code == 0);
  CHECK(run({"--version"}).out.find("0.1.0") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 1);
  CHECK(run({"count", "--object", "cube", "--n", "3"}).code == 1);
  CHECK(run({"count", "--object", "sts"}).code == 1);

  const auto partial = run({"count", "--object", "sts", "--n", "13", "--node-budget", "1000"});
  CHECK(partial.code == 2);
  CHECK(nlohmann::json::parse(partial.out)["complete"] == false);

  const auto bad = run({"bounds", "--n", "6", "--list", "cameron-lower"});
  CHECK(bad.code == 1);
  CHECK(bad.err.rfind("error: NotDivisibleBy4: ", 0) == 0);
  CHECK(run({"bounds", "--n", "6", "--list", "peel,nope"}).code == 1);
  CHECK(run({"verify", "--lemma", "exp-m", "--variant", "sts", "--n", "7"}).code == 1);
  CHECK(run({"verify", "--lemma", "dist-p", "--variant", "1f", "--n", "9"}).err.find("TooLarge") != std::string::npos);
}

TEST_CASE("bounds command") {
  const auto r = run({"bounds", "--n", "8", "--list", "peel,cameron-lower"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("name,n,log_value,magnitude\npeel,8,", 0) == 0);
  const auto j = run({"bounds", "--n", "9", "--list", "wilson-lower,wilson-upper", "--format", "json"});
  CHECK(j.code == 0);
  CHECK_FALSE(nlohmann::json::parse(j.out).is_null());
  const auto known = cameron_base_counts(8);
  CHECK(known.latin.at(4) == 576);
  CHECK(known.unordered_factorizations.at(4) == 1);
}

TEST_CASE("verify and entropy commands") {
  auto r = run({"verify", "--lemma", "dist-p-2", "--variant", "sts", "--n", "7"});
  CHECK(r.code == 0);
  CHECK(r.out.find("false") == std::string::npos);

  const std::vector<std::string> mc = {"verify", "--lemma", "n-law", "--variant", "sts", "--n",     "9",
                                       "--mode", "mc",      "--samples", "20000", "--seed", "3", "--format", "json"};
  auto a = mc, b = mc;
  a.insert(a.end(), {"--jobs", "1"});
  b.insert(b.end(), {"--jobs", "8"});
  CHECK(run(a).out == run(b).out);

  r = run({"entropy", "--variant", "1f", "--n", "4", "--samples", "0"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["mode"] == "exact");
  r = run({"entropy", "--variant", "sts", "--n", "7", "--samples", "5000", "--seed", "2", "--format", "text"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("sts(7) mc: estimate ", 0) == 0);
  CHECK(run({"entropy", "--variant", "sts", "--n", "7"}).code == 1);
}

TEST_CASE("count cache") {
  const auto path = scratch("cache.jsonl");
  CHECK(run({"count", "--object", "sts", "--n", "7", "--cache", path.string()}).code == 0);
  CHECK(run({"count", "--object", "sts", "--n", "7", "--cache", path.string()}).code == 0);
  auto entries = read_cache(path.string());
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].count == "30");
  CHECK(entries[0].version == "0.1.0");
  CHECK_FALSE(entries[0].timestamp.empty());

  CacheEntry wrong = entries[0];
  wrong.count = "31";
  try {
    record_count(path.string(), wrong);
    FAIL("mismatch accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CacheMismatch);
  }
  CHECK(read_cache(path.string()).size() == 2);

  // Partial results never reach the cache.
  CHECK(run({"count", "--object", "sts", "--n", "13", "--node-budget", "500", "--cache", path.string()}).code == 2);
  CHECK(read_cache(path.string()).size() == 2);
  std::filesystem::remove(path);
}

TEST_CASE("installed binary") {
  const char* bin = std::getenv("DESIGNCOUNT_BIN");
  if (!bin) return;
  const std::string cmd = std::string(bin) + " count --object sts --n 9";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string text;
  char buf[256];
  while (std::fgets(buf, sizeof buf, pipe)) text += buf;
  CHECK(pclose(pipe) == 0);
  CHECK(nlohmann::json::parse(text)["count"] == "840");
}
