#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage, validation or
// failed check, 2 node budget exhausted.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "designcount/bounds.hpp"
#include "designcount/enumeration.hpp"

namespace designcount {

inline constexpr std::string_view kVersion = "0.1.0";

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Exact L(h) and unordered F(h) for the orders h the Cameron recursion
/// visits from n, where enumeration is cheap.
KnownCounts cameron_base_counts(int n);

/// One JSON-lines record of the count cache.
struct CacheEntry {
  std::string kind;
  int n = 0;
  bool labeled = false;
  std::string count;
  std::string version;
  std::string timestamp;
  double runtime_seconds = 0.0;
  std::uint64_t nodes = 0;
};

/// Appends `entry` under an exclusive lock after checking that every stored
/// entry with the same (kind, n, labeled) holds the same count; CacheMismatch
/// otherwise, in which case nothing is written.
void record_count(const std::string& path, const CacheEntry& entry);
std::vector<CacheEntry> read_cache(const std::string& path);

}  // namespace designcount
