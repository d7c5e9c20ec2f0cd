#include "designcount/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "designcount/errors.hpp"

namespace designcount {

namespace {

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

double log_of(const BigInt& v) {
  if (v <= 0) throw Error(ErrorCode::BadInput, "log of a non-positive count");
  const auto bits = boost::multiprecision::msb(v);
  if (bits < 52) return std::log(v.convert_to<double>());
  const unsigned shift = static_cast<unsigned>(bits) - 52;
  const BigInt top = v >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

std::string LogScalar::magnitude() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "e^%.6f", value);
  return buf;
}

LogScalar log_count(const BigInt& count) { return {log_of(count)}; }

LogScalar log_factorial(std::uint64_t k) {
  CompensatedSum sum;
  for (std::uint64_t t = 2; t <= k; ++t) sum.add(std::log(static_cast<double>(t)));
  return {sum.value()};
}

WilsonBounds wilson_bounds(int n) {
  if (n < 1) throw Error(ErrorCode::BadInput, "n must be positive");
  const double scale = static_cast<double>(n) * n / 6.0;
  const double ln = std::log(static_cast<double>(n));
  return {{scale * (ln - 2.0 - 1.5 * std::log(3.0))}, {scale * (ln - 0.5)}};
}

LogScalar kahn_lovasz_log(std::span<const int> degrees) {
  CompensatedSum sum;
  for (int r : degrees) {
    if (r < 1) throw Error(ErrorCode::ZeroDegree, "every degree must be at least 1");
    sum.add(log_factorial(static_cast<std::uint64_t>(r)).value / (2.0 * r));
  }
  return {sum.value()};
}

LogScalar peel_bound_log(int n) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::OddN, "peel bound needs even n >= 2, got " + std::to_string(n));
  // One pass accumulating log(d!) incrementally; each term is (n / 2d) log(d!).
  CompensatedSum sum;
  CompensatedSum log_fact;
  for (int d = 1; d <= n - 1; ++d) {
    log_fact.add(std::log(static_cast<double>(d)));
    sum.add(static_cast<double>(n) / (2.0 * d) * log_fact.value());
  }
  return {sum.value()};
}

LogScalar vdw_latin_lower_log(int n) {
  if (n < 1) throw Error(ErrorCode::BadInput, "n must be positive");
  const double dn = n;
  return {2.0 * dn * log_factorial(static_cast<std::uint64_t>(n)).value - dn * dn * std::log(dn)};
}

CameronBound cameron_lower_log(int n, const KnownCounts& known) {
  if (n < 4 || n % 4 != 0)
    throw Error(ErrorCode::NotDivisibleBy4, "Cameron recursion needs 4 | n, got " + std::to_string(n));
  const int half = n / 2;
  CameronBound out;
  const std::string m = std::to_string(half);

  double latin;
  if (auto it = known.latin.find(half); it != known.latin.end()) {
    latin = log_of(it->second);
    out.provenance.push_back("L(" + m + ")=exact");
  } else {
    latin = vdw_latin_lower_log(half).value;
    out.provenance.push_back("L(" + m + ")=explicit vdW form");
  }

  double factor;
  if (auto it = known.unordered_factorizations.find(half); it != known.unordered_factorizations.end()) {
    factor = log_of(it->second);
    out.provenance.push_back("F(" + m + ")=exact");
  } else if (half % 4 == 0) {
    auto inner = cameron_lower_log(half, known);
    factor = inner.value.value;
    out.provenance.push_back("F(" + m + ")=cameron");
    out.provenance.insert(out.provenance.end(), inner.provenance.begin(), inner.provenance.end());
  } else {
    factor = 0.0;
    out.provenance.push_back("F(" + m + ")>=1");
  }
  out.value = {latin + 2.0 * factor};
  return out;
}

LogScalar conjectured_rate_log(double n, int k) {
  if (k != 6 && k != 2 && k != 1) throw Error(ErrorCode::BadK, "k must be 6, 2 or 1, got " + std::to_string(k));
  if (!(n > 0)) throw Error(ErrorCode::BadInput, "n must be positive");
  return {n * n / k * (std::log(n) - 2.0)};
}

BoundReport bound_report(int n, std::span<const std::string> names, const KnownCounts& known) {
  BoundReport report;
  report.n = n;
  for (const std::string& name : names) {
    if (name == "wilson-lower") {
      report.entries.push_back({name, wilson_bounds(n).lower, ""});
    } else if (name == "wilson-upper") {
      report.entries.push_back({name, wilson_bounds(n).upper, ""});
    } else if (name == "kahn-lovasz") {
      if (n < 2) throw Error(ErrorCode::ZeroDegree, "K_1 has a vertex of degree 0");
      std::vector<int> degrees(static_cast<std::size_t>(n), n - 1);
      report.entries.push_back({name, kahn_lovasz_log(degrees), "perfect matchings of K_n"});
    } else if (name == "peel") {
      report.entries.push_back({name, peel_bound_log(n), "labeled 1-factorizations"});
    } else if (name == "vdw-latin-lower") {
      report.entries.push_back({name, vdw_latin_lower_log(n), "explicit vdW form"});
    } else if (name == "cameron-lower") {
      auto c = cameron_lower_log(n, known);
      std::string note = "unordered;";
      for (const auto& p : c.provenance) note += " " + p;
      report.entries.push_back({name, c.value, note});
    } else if (name.rfind("conjecture-", 0) == 0) {
      int k = 0;
      try {
        k = std::stoi(name.substr(11));
      } catch (const std::exception&) {
        throw Error(ErrorCode::UnknownBound, name);
      }
      if (name != "conjecture-" + std::to_string(k)) throw Error(ErrorCode::UnknownBound, name);
      report.entries.push_back({name, conjectured_rate_log(n, k), "o(1) dropped"});
    } else {
      throw Error(ErrorCode::UnknownBound, name);
    }
  }
  return report;
}

std::string BoundReport::to_csv() const {
  std::ostringstream out;
  out << "name,n,log_value,magnitude\n";
  for (const auto& e : entries)
    out << e.name << ',' << n << ',' << format_real(e.value.value) << ',' << e.value.magnitude() << '\n';
  return out.str();
}

std::string BoundReport::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["bounds"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json row;
    row["name"] = e.name;
    row["log_value"] = e.value.value;
    row["magnitude"] = e.value.magnitude();
    if (!e.note.empty()) row["note"] = e.note;
    j["bounds"].push_back(row);
  }
  return j.dump() + "\n";
}

}  // namespace designcount
