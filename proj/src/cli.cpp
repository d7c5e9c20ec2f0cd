#include "designcount/cli.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "designcount/bounds.hpp"
#include "designcount/entropy_lab.hpp"
#include "designcount/errors.hpp"
#include "designcount/io.hpp"

namespace designcount {

namespace {

class FileLock {
 public:
  explicit FileLock(const std::string& path) : fd_(::open(path.c_str(), O_RDWR | O_CREAT | O_APPEND, 0644)) {
    if (fd_ < 0) throw Error(ErrorCode::BadInput, "cannot open cache " + path + ": " + std::strerror(errno));
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw Error(ErrorCode::BadInput, "cannot lock cache " + path + ": " + std::strerror(errno));
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

  void append(const std::string& line) {
    std::size_t done = 0;
    while (done < line.size()) {
      const auto w = ::write(fd_, line.data() + done, line.size() - done);
      if (w < 0) {
        if (errno == EINTR) continue;
        throw Error(ErrorCode::BadInput, std::string("cache write failed: ") + std::strerror(errno));
      }
      done += static_cast<std::size_t>(w);
    }
  }

 private:
  int fd_;
};

Json entry_json(const CacheEntry& e) {
  Json j;
  j["kind"] = e.kind;
  j["n"] = e.n;
  j["labeled"] = e.labeled;
  j["count"] = e.count;
  j["version"] = e.version;
  j["timestamp"] = e.timestamp;
  j["runtime_seconds"] = e.runtime_seconds;
  j["nodes"] = e.nodes;
  return j;
}

std::vector<CacheEntry> parse_cache(const std::string& path) {
  std::vector<CacheEntry> out;
  std::ifstream in(path);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      CacheEntry e;
      e.kind = j.at("kind").get<std::string>();
      e.n = j.at("n").get<int>();
      e.labeled = j.at("labeled").get<bool>();
      e.count = j.at("count").get<std::string>();
      e.version = j.value("version", "");
      e.timestamp = j.value("timestamp", "");
      e.runtime_seconds = j.value("runtime_seconds", 0.0);
      e.nodes = j.value("nodes", std::uint64_t{0});
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::BadInput, path + ":" + std::to_string(number) + ": " + ex.what());
    }
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---------------------------------------------------------------------------

struct CountArgs {
  std::string object;
  int n = 0;
  bool labeled = false;
  int jobs = 1;
  std::uint64_t node_budget = 0;
  std::string format = "json";
  std::string cache;
};

int run_count(const CountArgs& a, bool has_budget, std::ostream& out) {
  SearchConfig config;
  config.jobs = a.jobs;
  if (has_budget) config.node_budget = a.node_budget;
  CountResult r;
  if (a.object == "sts")
    r = count_triple_systems(a.n, config);
  else if (a.object == "1f")
    r = count_one_factorizations(a.n, a.labeled, config);
  else
    r = count_latin_squares(a.n, config);

  const bool labeled = a.object == "1f" ? a.labeled : true;
  if (a.format == "json") {
    Json j;
    j["kind"] = a.object;
    j["n"] = a.n;
    j["labeled"] = labeled;
    j["count"] = to_decimal(r.count);
    j["complete"] = r.complete;
    j["nodes"] = r.nodes;
    out << j.dump() << '\n';
  } else if (a.format == "csv") {
    out << "kind,n,labeled,count,complete,nodes\n"
        << a.object << ',' << a.n << ',' << (labeled ? "true" : "false") << ',' << to_decimal(r.count) << ','
        << (r.complete ? "true" : "false") << ',' << r.nodes << '\n';
  } else {
    out << a.object << '(' << a.n << ')' << (a.object == "1f" ? (labeled ? " labeled" : " unordered") : "") << " = "
        << to_decimal(r.count);
    if (!r.complete) out << " (partial: node budget exhausted after " << r.nodes << " nodes)";
    out << '\n';
  }
  if (!r.complete) return 2;
  if (!a.cache.empty()) {
    CacheEntry e;
    e.kind = a.object;
    e.n = a.n;
    e.labeled = labeled;
    e.count = to_decimal(r.count);
    e.version = std::string(kVersion);
    e.timestamp = utc_timestamp();
    e.runtime_seconds = r.seconds;
    e.nodes = r.nodes;
    record_count(a.cache, e);
  }
  return 0;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

std::vector<CacheEntry> read_cache(const std::string& path) { return parse_cache(path); }

KnownCounts cameron_base_counts(int n) {
  KnownCounts known;
  // The recursion visits n/2, n/4, ... while the current order is divisible by 4.
  for (int m = n; m >= 4 && m % 4 == 0; m /= 2) {
    const int h = m / 2;
    if (h <= kMaxLatinPoolOrder) known.latin[h] = count_latin_squares(h).count;
    if (h <= kMaxNormalizedPoolOrder) known.unordered_factorizations[h] = count_one_factorizations(h, false).count;
  }
  return known;
}

void record_count(const std::string& path, const CacheEntry& entry) {
  FileLock lock(path);
  for (const auto& old : parse_cache(path)) {
    if (old.kind == entry.kind && old.n == entry.n && old.labeled == entry.labeled && old.count != entry.count)
      throw Error(ErrorCode::CacheMismatch, entry.kind + "(" + std::to_string(entry.n) + ") computed " + entry.count +
                                                " but the cache holds " + old.count);
  }
  lock.append(entry_json(entry).dump() + "\n");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact counts, bounds and reveal-order checks for block designs"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CountArgs count;
  auto* cmd_count = app.add_subcommand("count", "Exact count by backtracking");
  cmd_count->add_option("--object", count.object, "sts, 1f or latin")->required()->check(CLI::IsMember({"sts", "1f", "latin"}));
  cmd_count->add_option("--n", count.n, "Order")->required()->check(CLI::Range(1, 64));
  cmd_count->add_flag("--labeled", count.labeled, "Count every proper coloring (1f)");
  cmd_count->add_option("--jobs", count.jobs, "Worker threads")->check(CLI::Range(1, 1024));
  auto* budget = cmd_count->add_option("--node-budget", count.node_budget, "Stop after this many search nodes");
  cmd_count->add_option("--format", count.format)->check(CLI::IsMember({"json", "csv", "text"}));
  cmd_count->add_option("--cache", count.cache, "JSON-lines result cache");

  int bounds_n = 0;
  std::string bounds_list;
  std::string bounds_format = "csv";
  auto* cmd_bounds = app.add_subcommand("bounds", "Evaluate closed-form bounds (natural log)");
  cmd_bounds->add_option("--n", bounds_n)->required()->check(CLI::Range(1, 1 << 30));
  cmd_bounds->add_option("--list", bounds_list, "Comma-separated bound names")->required();
  cmd_bounds->add_option("--format", bounds_format)->check(CLI::IsMember({"json", "csv"}));

  std::string lemma, variant, mode = "exact", verify_format = "csv";
  int verify_n = 0, verify_jobs = 1;
  std::uint64_t verify_samples = 100000, verify_seed = 1;
  auto* cmd_verify = app.add_subcommand("verify", "Check a reveal-order lemma exactly or by sampling");
  cmd_verify->add_option("--lemma", lemma)->required()->check(
      CLI::IsMember({"dist-p", "exp-m", "dist-p-2", "exp-m-2", "q-law", "n-law"}));
  cmd_verify->add_option("--variant", variant)->required()->check(CLI::IsMember({"1f", "sts"}));
  cmd_verify->add_option("--n", verify_n)->required()->check(CLI::Range(1, 64));
  cmd_verify->add_option("--mode", mode)->check(CLI::IsMember({"exact", "mc"}));
  cmd_verify->add_option("--samples", verify_samples);
  cmd_verify->add_option("--seed", verify_seed);
  cmd_verify->add_option("--jobs", verify_jobs)->check(CLI::Range(1, 1024));
  cmd_verify->add_option("--format", verify_format)->check(CLI::IsMember({"json", "csv"}));

  std::string entropy_variant, entropy_format = "json";
  int entropy_n = 0, entropy_jobs = 1;
  std::uint64_t entropy_samples = 0, entropy_seed = 1;
  auto* cmd_entropy = app.add_subcommand("entropy", "Chain-rule upper estimate against the exact log-count");
  cmd_entropy->add_option("--variant", entropy_variant)->required()->check(CLI::IsMember({"1f", "sts"}));
  cmd_entropy->add_option("--n", entropy_n)->required()->check(CLI::Range(1, 64));
  cmd_entropy->add_option("--samples", entropy_samples, "0 enumerates exactly")->required();
  cmd_entropy->add_option("--seed", entropy_seed);
  cmd_entropy->add_option("--jobs", entropy_jobs)->check(CLI::Range(1, 1024));
  cmd_entropy->add_option("--format", entropy_format)->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (*cmd_count) return run_count(count, static_cast<bool>(*budget), out);

    if (*cmd_bounds) {
      const auto names = split_list(bounds_list);
      if (names.empty()) throw Error(ErrorCode::UnknownBound, "empty --list");
      KnownCounts known;
      for (const auto& name : names)
        if (name == "cameron-lower") known = cameron_base_counts(bounds_n);
      const BoundReport report = bound_report(bounds_n, names, known);
      out << (bounds_format == "json" ? report.to_json() : report.to_csv());
      return 0;
    }

    if (*cmd_verify) {
      VerifyOptions opt;
      opt.mode = mode == "exact" ? Mode::Exact : Mode::MonteCarlo;
      opt.samples = verify_samples;
      opt.seed = verify_seed;
      opt.jobs = verify_jobs;
      const auto rows = verify_lemma(parse_lemma(lemma), parse_variant(variant), verify_n, opt);
      out << (verify_format == "json" ? verdicts_to_json(rows) : verdicts_to_csv(rows));
      for (const auto& r : rows)
        if (!r.pass) return 1;
      return 0;
    }

    const auto est = entropy_upper_estimate(parse_variant(entropy_variant), entropy_n, entropy_samples, entropy_seed,
                                            entropy_jobs);
    if (entropy_format == "json") {
      out << est.to_json() << '\n';
    } else {
      char line[256];
      std::snprintf(line, sizeof line, "%s(%d) %s: estimate %.6f (se %.6f), log count %.6f: %s\n",
                    std::string(variant_name(est.variant)).c_str(), est.n, est.exact ? "exact" : "mc", est.estimate,
                    est.se, est.log_count, est.pass ? "PASS" : "FAIL");
      out << line;
    }
    return est.pass ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("designcount");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace designcount
