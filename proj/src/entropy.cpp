#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "designcount/entropy_lab.hpp"
#include "designcount/enumeration.hpp"
#include "designcount/errors.hpp"
#include "designcount/io.hpp"
#include "parallel.hpp"
#include "reveal_core.hpp"

namespace designcount {

namespace {

constexpr std::uint64_t kEntropyBlock = 1024;
constexpr double kExactEntropyLimit = 5e7;

std::vector<double> log_table(int n) {
  std::vector<double> t(static_cast<std::size_t>(n + 1), 0.0);
  for (int v = 1; v <= n; ++v) t[static_cast<std::size_t>(v)] = std::log(static_cast<double>(v));
  return t;
}

int n_value(const EdgeColoring& x, const RevealOrder& o, int i, int j) {
  return std::popcount(detail::availability_1f(x, o, i, j).n);
}

int n_value(const TripleSystem& x, const RevealOrder& o, int i, int j) {
  return std::popcount(detail::availability_sts(x, o, i, j).n);
}

/// sum over ordered pairs of log N_{i,j}; trivial pairs contribute log 1.
template <typename Design>
double log_n_total(const Design& x, const RevealOrder& o, const std::vector<double>& logs) {
  CompensatedSum s;
  const auto vertices = o.vertex_order();
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b)
      s.add(logs[static_cast<std::size_t>(n_value(x, o, vertices[a], vertices[b]))]);
  return s.value();
}

/// Exact expectation for one design, as weights w[v] = expected number of
/// ordered pairs with N = v. Relabeling vertices maps a uniform design to a
/// uniform design, so the vertex order can be fixed to 1..n; N_{i,j} depends
/// on the vertex order and on the order of E_i alone, so each star is
/// averaged separately.
template <typename Design>
std::vector<Rational> exact_design_weights(const Design& x) {
  const int n = x.order();
  std::vector<int> identity(static_cast<std::size_t>(n));
  std::iota(identity.begin(), identity.end(), 1);
  RevealOrder order = RevealOrder::with_sorted_stars(identity);
  std::vector<Rational> w(static_cast<std::size_t>(n + 1), 0);
  for (int i = 1; i < n; ++i) {
    std::vector<int> star(order.star(i).begin(), order.star(i).end());
    std::vector<std::uint64_t> hist(static_cast<std::size_t>(n + 1), 0);
    std::uint64_t orders = 0;
    do {
      order.set_star(i, star);
      for (int j : star) ++hist[static_cast<std::size_t>(n_value(x, order, i, j))];
      ++orders;
    } while (std::next_permutation(star.begin(), star.end()));
    std::sort(star.begin(), star.end());
    order.set_star(i, star);
    for (int v = 1; v <= n; ++v)
      if (hist[static_cast<std::size_t>(v)] != 0)
        w[static_cast<std::size_t>(v)] += Rational(BigInt(hist[static_cast<std::size_t>(v)])) / BigInt(orders);
  }
  return w;
}

/// sum_v w[v] log v >= log count, decided exactly: with D the common
/// denominator of the weights, compare prod v^{D w[v]} with count^D.
bool dominates(const std::vector<Rational>& w, const BigInt& count) {
  BigInt d = 1;
  for (const auto& r : w) d = boost::multiprecision::lcm(d, boost::multiprecision::denominator(r));
  const auto exponent = [&](const Rational& r) {
    return static_cast<unsigned>((boost::multiprecision::numerator(r) * (d / boost::multiprecision::denominator(r)))
                                     .convert_to<std::uint64_t>());
  };
  BigInt lhs = 1;
  for (std::size_t v = 2; v < w.size(); ++v)
    if (w[v] != 0) lhs *= boost::multiprecision::pow(BigInt(v), exponent(w[v]));
  return lhs >= boost::multiprecision::pow(count, d.convert_to<unsigned>());
}

double exact_work(std::size_t pool, int n) {
  double work = 0;
  double f = 1;
  for (int m = 1; m <= n - 1; ++m) {
    f *= m;
    work += f * m * n;
  }
  return work * static_cast<double>(pool);
}

template <typename Design>
void estimate_over_pool(const std::vector<Design>& pool, const BigInt& count, int n, std::uint64_t samples,
                        std::uint64_t seed, int jobs, EntropyEstimate& out) {
  const auto logs = log_table(n);
  if (samples == 0) {
    if (exact_work(pool.size(), n) > kExactEntropyLimit)
      throw Error(ErrorCode::TooLarge, "exact entropy bound at n = " + std::to_string(n) + " is too large; sample instead");
    std::vector<std::vector<Rational>> per_design(pool.size());
    detail::parallel_blocks(pool.size(), jobs, [&](std::size_t b) { per_design[b] = exact_design_weights(pool[b]); });
    std::vector<Rational> w(static_cast<std::size_t>(n + 1), 0);
    for (const auto& d : per_design)
      for (std::size_t v = 0; v < d.size(); ++v) w[v] += d[v];
    CompensatedSum s;
    for (std::size_t v = 1; v < w.size(); ++v) {
      w[v] /= BigInt(pool.size());
      s.add(w[v].convert_to<double>() * logs[v]);
    }
    out.exact = true;
    out.estimate = s.value();
    out.samples = pool.size();
    out.pass = dominates(w, count);
    return;
  }
  const std::uint64_t blocks = (samples + kEntropyBlock - 1) / kEntropyBlock;
  std::vector<RunningStats> stats(blocks);
  detail::parallel_blocks(blocks, jobs, [&](std::size_t b) {
    Rng rng(seed, b);
    const std::uint64_t here = std::min(kEntropyBlock, samples - b * kEntropyBlock);
    for (std::uint64_t s = 0; s < here; ++s) {
      const Design& x = pool[rng.below(pool.size())];
      stats[b].add(log_n_total(x, sample_reveal_order(n, rng), logs));
    }
  });
  RunningStats merged;
  for (const auto& s : stats) merged.merge(s);
  out.estimate = merged.mean();
  out.se = merged.standard_error();
  out.samples = samples;
  out.pass = out.estimate + 3 * out.se >= out.log_count;
}

}  // namespace

std::string EntropyEstimate::to_json() const {
  Json j;
  j["variant"] = std::string(variant_name(variant));
  j["n"] = n;
  j["mode"] = exact ? "exact" : "mc";
  j["samples"] = samples;
  j["seed"] = seed;
  j["estimate"] = estimate;
  j["se"] = se;
  j["log_count"] = log_count;
  if (log_unordered) j["log_unordered"] = *log_unordered;
  j["bound_holds"] = pass;
  return j.dump();
}

EntropyEstimate entropy_upper_estimate(Variant variant, int n, std::uint64_t samples, std::uint64_t seed, int jobs) {
  EntropyEstimate out;
  out.variant = variant;
  out.n = n;
  out.seed = seed;
  SearchConfig config;
  config.jobs = jobs;
  if (variant == Variant::Steiner) {
    const auto pool = enumerate_triple_systems(n, config);
    if (pool.items.empty()) throw Error(ErrorCode::EmptyPool, "no triple systems on " + std::to_string(n) + " points");
    const BigInt count = pool.items.size();
    out.log_count = log_of(count);
    estimate_over_pool(pool.items, count, n, samples, seed, jobs, out);
    return out;
  }
  // N only counts colors, so it is unchanged by recoloring; a uniform labeled
  // coloring is a uniform factorization with a uniform color assignment, and
  // the normalized pool stands in for the labeled one.
  const auto pool = enumerate_one_factorizations(n, false, config);
  if (pool.items.empty()) throw Error(ErrorCode::EmptyPool, "no 1-factorizations of K_" + std::to_string(n));
  const BigInt count = BigInt(pool.items.size()) * factorial(static_cast<unsigned>(n - 1));
  out.log_unordered = log_of(BigInt(pool.items.size()));
  out.log_count = log_of(count);
  estimate_over_pool(pool.items, count, n, samples, seed, jobs, out);
  return out;
}

FrequencyEstimate estimate_f_probability(const TripleSystem& x, int i, int j, std::uint64_t samples,
                                         std::uint64_t seed, int jobs) {
  const int n = x.order();
  if (i < 1 || i > n || j < 1 || j > n) throw Error(ErrorCode::BadVertex, "pair outside 1..n");
  if (i == j) throw Error(ErrorCode::SameVertex, "i and j must differ");
  if (samples == 0) throw Error(ErrorCode::BadInput, "samples must be positive");
  const std::uint64_t blocks = (samples + kEntropyBlock - 1) / kEntropyBlock;
  std::vector<std::uint64_t> hits(blocks, 0);
  detail::parallel_blocks(blocks, jobs, [&](std::size_t b) {
    Rng rng(seed, b);
    const std::uint64_t here = std::min(kEntropyBlock, samples - b * kEntropyBlock);
    for (std::uint64_t s = 0; s < here; ++s)
      if (detail::f_event_fast(x, sample_reveal_order(n, rng), i, j)) ++hits[b];
  });
  const std::uint64_t total = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
  FrequencyEstimate out;
  out.samples = samples;
  out.estimate = static_cast<double>(total) / static_cast<double>(samples);
  out.se = std::sqrt(out.estimate * (1 - out.estimate) / static_cast<double>(samples));
  return out;
}

FiniteSum finite_sum_rate(Variant variant, std::int64_t n) {
  if (n < 7) throw Error(ErrorCode::BadInput, "finite sums need n >= 7");
  const double nd = static_cast<double>(n);
  CompensatedSum s;
  if (variant == Variant::OneFactorization) {
    for (std::int64_t r = 1; r <= n - 2; ++r) {
      const double rd = static_cast<double>(r);
      s.add(rd * std::log1p(rd * (rd - 1) / (nd - 1)));
    }
    return {2 / (nd * (nd - 1)) * s.value(), std::log(nd) - 1};
  }
  const double den = (nd - 4) * (nd - 5);
  for (std::int64_t r = 2; r <= n - 1; ++r) {
    const double rd = static_cast<double>(r);
    s.add(rd * (rd - 1) * std::log1p((rd - 2) * (rd - 3) * (rd - 4) / den));
  }
  return {3 / (nd * (nd - 1) * (nd - 2)) * s.value(), std::log(nd) - 1};
}

}  // namespace designcount
