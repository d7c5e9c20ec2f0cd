#pragma once

// Closed-form counting bounds, evaluated in natural-log space.
//
// Counts are never exponentiated: every bound is a LogScalar, the natural
// logarithm of the count it bounds, and comparisons happen between logs.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "designcount/numeric.hpp"

namespace designcount {

/// Natural logarithm of a positive count.
struct LogScalar {
  double value = 0.0;

  friend LogScalar operator+(LogScalar a, LogScalar b) { return {a.value + b.value}; }
  friend auto operator<=>(const LogScalar&, const LogScalar&) = default;
  /// "e^x" rendering of the count magnitude.
  std::string magnitude() const;
};

LogScalar log_count(const BigInt& count);

/// log(k!) by compensated summation of log t, t = 2..k.
LogScalar log_factorial(std::uint64_t k);

struct WilsonBounds {
  LogScalar lower;
  LogScalar upper;
};

/// (n / (e^2 3^{3/2}))^{n^2/6} <= STS(n) <= (n / e^{1/2})^{n^2/6}
WilsonBounds wilson_bounds(int n);

/// Perfect matchings of a graph with degrees r_i: at most prod (r_i!)^{1/(2 r_i)}.
LogScalar kahn_lovasz_log(std::span<const int> degrees);

/// Labeled 1-factorizations: F(n) <= prod_{d=1}^{n-1} (d!)^{n/(2d)}.
LogScalar peel_bound_log(int n);

/// L(n) >= (n!)^{2n} / n^{n^2}.
LogScalar vdw_latin_lower_log(int n);

/// Exact small values available to the Cameron recursion.
struct KnownCounts {
  std::map<int, BigInt> latin;                    // L(m)
  std::map<int, BigInt> unordered_factorizations;  // unordered F(m)
};

struct CameronBound {
  LogScalar value;
  /// How each base value was obtained, e.g. "L(4)=exact", "F(4)=cameron".
  std::vector<std::string> provenance;
};

/// log L(n/2) + 2 log F(n/2) for unordered F; n must be divisible by 4.
/// Exact bases are preferred; otherwise L falls back to the vdW form and F to
/// the same recursion (or to F >= 1 when n/2 is not divisible by 4).
CameronBound cameron_lower_log(int n, const KnownCounts& known = {});

/// (n^2 / k)(log n - 2), the conjectured rate with the o(1) dropped. k in {6, 2, 1}.
LogScalar conjectured_rate_log(double n, int k);

inline const std::vector<std::string>& bound_names() {
  static const std::vector<std::string> names = {
      "wilson-lower", "wilson-upper", "kahn-lovasz", "peel", "vdw-latin-lower",
      "cameron-lower", "conjecture-6", "conjecture-2", "conjecture-1"};
  return names;
}

struct BoundEntry {
  std::string name;
  LogScalar value;
  std::string note;
};

struct BoundReport {
  int n = 0;
  std::vector<BoundEntry> entries;

  std::string to_csv() const;
  std::string to_json() const;
};

/// Evaluates the named bounds at n. "kahn-lovasz" is taken on K_n, the
/// (n-1)-regular graph. Throws UnknownBound / OddN / NotDivisibleBy4.
BoundReport bound_report(int n, std::span<const std::string> names, const KnownCounts& known = {});

}  // namespace designcount
