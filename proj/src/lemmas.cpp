#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "designcount/entropy_lab.hpp"
#include "designcount/enumeration.hpp"
#include "designcount/errors.hpp"
#include "designcount/io.hpp"
#include "parallel.hpp"
#include "reveal_core.hpp"

namespace designcount {

namespace {

using detail::Availability;

constexpr double kExactWorkLimit = 3e8;
constexpr std::uint64_t kBlockSize = 4096;
constexpr double kSigmas = 5.0;

Rational ratio(const BigInt& num, const BigInt& den) { return Rational(num) / Rational(den); }

// ---------------------------------------------------------------------------
// Closed forms

Rational dist_p_formula(int n, int p) { return ratio(2 * (n - p), n * (n - 1)); }

Rational dist_p2_formula(int n, int p) {
  return ratio(3 * (n - p) * (n - p - 1), n * (n - 1) * (n - 2));
}

Rational q_law_formula(int m, int q) { return ratio(2 * (m - q), m * (m - 1)); }

Rational exp_m_formula(int n, int p, int denominator) {
  const int num = (n - p - 1) * (n - p - 2);
  if (num == 0) return 1;
  return 1 + ratio(num, denominator);
}

Rational exp_m2_formula(int n, int p) {
  const int num = (n - p - 2) * (n - p - 3) * (n - p - 4);
  if (num == 0) return 1;
  return 1 + ratio(num, (n - 4) * (n - 5));
}

Rational n_expect_formula(int m, int q, int l) {
  const int num = (m - q - 1) * (m - q - 2);
  if (l == 1 || num == 0) return 1;
  return 1 + ratio(BigInt(num) * (l - 1), (m - 2) * (m - 3));
}

std::string str(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

// ---------------------------------------------------------------------------
// Permutation plumbing

/// Visits every order of 1..n whose first vertex is `first`.
template <typename F>
void for_each_order_starting_with(int n, int first, F&& fn) {
  std::vector<int> rest;
  for (int v = 1; v <= n; ++v)
    if (v != first) rest.push_back(v);
  std::vector<int> perm(static_cast<std::size_t>(n));
  perm[0] = first;
  do {
    std::copy(rest.begin(), rest.end(), perm.begin() + 1);
    fn(perm);
  } while (std::next_permutation(rest.begin(), rest.end()));
}

/// Orders of m items in which item 0 precedes item 1, counted by enumeration.
std::uint64_t orders_with_first_before_second(int m) {
  std::vector<int> items(static_cast<std::size_t>(m));
  std::iota(items.begin(), items.end(), 0);
  std::uint64_t hits = 0;
  do {
    const auto a = std::find(items.begin(), items.end(), 0);
    const auto b = std::find(items.begin(), items.end(), 1);
    if (a < b) ++hits;
  } while (std::next_permutation(items.begin(), items.end()));
  return hits;
}

double work_factorial(int k) {
  double f = 1;
  for (int t = 2; t <= k; ++t) f *= t;
  return f;
}

void require_exact(int n) {
  if (n > kMaxEnumerableOrder)
    throw Error(ErrorCode::TooLarge, "exact mode enumerates n! vertex orders; n = " + std::to_string(n) +
                                         " exceeds " + std::to_string(kMaxEnumerableOrder));
}

void require_budget(double work, const std::string& what) {
  if (work > kExactWorkLimit)
    throw Error(ErrorCode::TooLarge, what + " needs about " + std::to_string(static_cast<long long>(work)) +
                                         " evaluations; use --mode mc");
}

std::uint64_t block_count(std::uint64_t samples) { return (samples + kBlockSize - 1) / kBlockSize; }

std::uint64_t block_samples(std::uint64_t samples, std::uint64_t block) {
  return std::min(kBlockSize, samples - block * kBlockSize);
}

// ---------------------------------------------------------------------------
// Verdict helpers

LemmaVerdict exact_row(Lemma lemma, Variant variant, int n, std::string conditioning, Rational formula,
                       Rational observed, std::uint64_t samples) {
  LemmaVerdict v;
  v.lemma = std::string(lemma_name(lemma));
  v.variant = variant;
  v.n = n;
  v.conditioning = std::move(conditioning);
  v.pass = observed == formula;
  v.estimate = observed.convert_to<double>();
  v.formula = std::move(formula);
  v.observed = std::move(observed);
  v.samples = samples;
  return v;
}

/// Frequency row: two-sided binomial test of hits / trials against the formula.
LemmaVerdict frequency_row(Lemma lemma, Variant variant, int n, std::string conditioning, Rational formula,
                           std::uint64_t hits, std::uint64_t trials) {
  LemmaVerdict v;
  v.lemma = std::string(lemma_name(lemma));
  v.variant = variant;
  v.n = n;
  v.conditioning = std::move(conditioning);
  v.samples = trials;
  const double f = formula.convert_to<double>();
  v.formula = std::move(formula);
  if (trials == 0) {
    v.note = "no samples met the condition";
    return v;
  }
  const double est = static_cast<double>(hits) / static_cast<double>(trials);
  v.estimate = est;
  v.se = std::sqrt(est * (1 - est) / static_cast<double>(trials));
  const double null_se = std::sqrt(f * (1 - f) / static_cast<double>(trials));
  v.pass = null_se > 0 ? std::fabs(est - f) <= kSigmas * null_se : std::fabs(est - f) < 1e-12;
  return v;
}

/// Mean row: estimate within 5 standard errors of the formula.
LemmaVerdict mean_row(Lemma lemma, Variant variant, int n, std::string conditioning, Rational formula,
                      const RunningStats& stats) {
  LemmaVerdict v;
  v.lemma = std::string(lemma_name(lemma));
  v.variant = variant;
  v.n = n;
  v.conditioning = std::move(conditioning);
  v.samples = stats.count();
  const double f = formula.convert_to<double>();
  v.formula = std::move(formula);
  if (stats.count() == 0) {
    v.note = "no samples met the condition";
    return v;
  }
  v.estimate = stats.mean();
  v.se = stats.standard_error();
  v.pass = std::fabs(v.estimate - f) <= kSigmas * v.se + 1e-9;
  return v;
}

// ---------------------------------------------------------------------------
// Position laws

std::vector<LemmaVerdict> dist_p_exact(Lemma lemma, int n, int jobs) {
  // i = 1, j = 2 (and k = 3 for the triple-system law); the law is label-free.
  const bool sts = lemma == Lemma::DistP2;
  const int blocks = n;
  // Every vertex order carries the same number of star-order combinations,
  // but |E_1| = n - p varies, so a vertex order's weight is the fraction of
  // E_1 orders putting {1,2} ahead of {1,3}, scaled by (n-1)! to stay integral.
  std::vector<std::uint64_t> star_weight(static_cast<std::size_t>(n + 1), 0);
  if (sts)
    for (int m = 2; m <= n - 1; ++m)
      star_weight[static_cast<std::size_t>(m)] = orders_with_first_before_second(m) *
                                                 static_cast<std::uint64_t>(work_factorial(n - 1) / work_factorial(m));
  std::vector<std::vector<std::uint64_t>> weight(static_cast<std::size_t>(blocks),
                                                 std::vector<std::uint64_t>(static_cast<std::size_t>(n + 1), 0));
  detail::parallel_blocks(static_cast<std::size_t>(blocks), jobs, [&](std::size_t b) {
    auto& w = weight[b];
    for_each_order_starting_with(n, static_cast<int>(b) + 1, [&](const std::vector<int>& perm) {
      int pos[4] = {0, 0, 0, 0};
      for (int k = 0; k < n; ++k)
        if (perm[static_cast<std::size_t>(k)] <= 3) pos[perm[static_cast<std::size_t>(k)]] = k + 1;
      if (pos[1] > pos[2]) return;
      if (!sts) {
        ++w[static_cast<std::size_t>(pos[1])];
        return;
      }
      if (pos[1] > pos[3]) return;
      // Orders of E_1 (size n - p) with {1,2} ahead of {1,3}.
      w[static_cast<std::size_t>(pos[1])] += star_weight[static_cast<std::size_t>(n - pos[1])];
    });
  });
  std::vector<std::uint64_t> total(static_cast<std::size_t>(n + 1), 0);
  for (const auto& w : weight)
    for (int p = 1; p <= n; ++p) total[static_cast<std::size_t>(p)] += w[static_cast<std::size_t>(p)];
  const std::uint64_t all = std::accumulate(total.begin(), total.end(), std::uint64_t{0});
  std::vector<LemmaVerdict> rows;
  const int last = sts ? n - 2 : n - 1;
  for (int p = 1; p <= last; ++p) {
    const Rational formula = sts ? dist_p2_formula(n, p) : dist_p_formula(n, p);
    rows.push_back(exact_row(lemma, sts ? Variant::Steiner : Variant::OneFactorization, n,
                             "p=" + std::to_string(p), formula, ratio(total[static_cast<std::size_t>(p)], all), all));
  }
  return rows;
}

std::vector<LemmaVerdict> q_law_exact(int n) {
  std::vector<LemmaVerdict> rows;
  for (int m = 2; m <= n - 1; ++m) {
    std::vector<int> items(static_cast<std::size_t>(m));
    std::iota(items.begin(), items.end(), 0);
    std::vector<std::uint64_t> hits(static_cast<std::size_t>(m + 1), 0);
    std::uint64_t total = 0;
    do {
      const auto a = std::find(items.begin(), items.end(), 0) - items.begin();
      const auto b = std::find(items.begin(), items.end(), 1) - items.begin();
      if (a > b) continue;
      ++hits[static_cast<std::size_t>(a + 1)];
      ++total;
    } while (std::next_permutation(items.begin(), items.end()));
    for (int q = 1; q <= m - 1; ++q)
      rows.push_back(exact_row(Lemma::QLaw, Variant::Steiner, n, "m=" + std::to_string(m) + ";q=" + std::to_string(q),
                               q_law_formula(m, q), ratio(hits[static_cast<std::size_t>(q)], total), total));
  }
  return rows;
}

std::vector<LemmaVerdict> position_law_mc(Lemma lemma, int n, const VerifyOptions& opt) {
  // Tallies indexed [m][q] for the q-law, [p] otherwise (m = 0).
  using Tally = std::vector<std::vector<std::uint64_t>>;
  const auto blocks = block_count(opt.samples);
  std::vector<Tally> tallies(blocks, Tally(static_cast<std::size_t>(n + 1), std::vector<std::uint64_t>(static_cast<std::size_t>(n + 1), 0)));
  detail::parallel_blocks(blocks, opt.jobs, [&](std::size_t b) {
    Rng rng(opt.seed, b);
    auto& t = tallies[b];
    for (std::uint64_t s = 0; s < block_samples(opt.samples, b); ++s) {
      const RevealOrder order = sample_reveal_order(n, rng);
      if (!order.precedes(1, 2)) continue;
      if (lemma == Lemma::DistP) {
        ++t[0][static_cast<std::size_t>(order.position(1))];
        continue;
      }
      if (!order.precedes(1, 3) || order.star_rank(1, 2) > order.star_rank(1, 3)) continue;
      if (lemma == Lemma::DistP2)
        ++t[0][static_cast<std::size_t>(order.position(1))];
      else
        ++t[static_cast<std::size_t>(n - order.position(1))][static_cast<std::size_t>(order.star_rank(1, 2))];
    }
  });
  Tally sum(static_cast<std::size_t>(n + 1), std::vector<std::uint64_t>(static_cast<std::size_t>(n + 1), 0));
  for (const auto& t : tallies)
    for (int a = 0; a <= n; ++a)
      for (int c = 0; c <= n; ++c) sum[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] += t[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)];

  std::vector<LemmaVerdict> rows;
  if (lemma == Lemma::QLaw) {
    for (int m = 2; m <= n - 1; ++m) {
      const auto& row = sum[static_cast<std::size_t>(m)];
      const std::uint64_t trials = std::accumulate(row.begin(), row.end(), std::uint64_t{0});
      for (int q = 1; q <= m - 1; ++q)
        rows.push_back(frequency_row(lemma, Variant::Steiner, n, "m=" + std::to_string(m) + ";q=" + std::to_string(q),
                                     q_law_formula(m, q), row[static_cast<std::size_t>(q)], trials));
    }
    return rows;
  }
  const auto& row = sum[0];
  const std::uint64_t trials = std::accumulate(row.begin(), row.end(), std::uint64_t{0});
  const bool sts = lemma == Lemma::DistP2;
  for (int p = 1; p <= (sts ? n - 2 : n - 1); ++p)
    rows.push_back(frequency_row(lemma, sts ? Variant::Steiner : Variant::OneFactorization, n, "p=" + std::to_string(p),
                                 sts ? dist_p2_formula(n, p) : dist_p_formula(n, p), row[static_cast<std::size_t>(p)],
                                 trials));
  return rows;
}

// ---------------------------------------------------------------------------
// E[M | p]

struct MTally {
  std::vector<std::uint64_t> sum;
  std::vector<std::uint64_t> count;
  explicit MTally(int n) : sum(static_cast<std::size_t>(n + 1), 0), count(static_cast<std::size_t>(n + 1), 0) {}
  void merge(const MTally& o) {
    for (std::size_t p = 0; p < sum.size(); ++p) {
      sum[p] += o.sum[p];
      count[p] += o.count[p];
    }
  }
};

/// M at (i, j) when the condition holds (1F: i << j; STS: i << j, k); -1 otherwise.
/// The star-order half of F has probability 1/2 for every vertex order and M
/// ignores star orders, so conditioning on the vertex part alone gives the
/// same expectation at each p.
int conditioned_m(const EdgeColoring& x, const RevealOrder& order, int i, int j) {
  if (!order.precedes(i, j)) return -1;
  return std::popcount(detail::availability_1f(x, order, i, j).m);
}

int conditioned_m(const TripleSystem& x, const RevealOrder& order, int i, int j) {
  const int k = x.third(i, j);
  if (!order.precedes(i, j) || !order.precedes(i, k)) return -1;
  const int pi = order.position(i);
  int m = 0;
  for (int t = 1; t <= order.order(); ++t) {
    if (t == i || t == j) continue;
    if (order.position(t) >= pi && order.position(x.third(i, t)) >= pi && order.position(x.third(j, t)) >= pi) ++m;
  }
  return m;
}

int m_support_end(Variant variant, int n) { return variant == Variant::OneFactorization ? n - 1 : n - 2; }

Rational m_formula(Variant variant, int n, int p) {
  return variant == Variant::OneFactorization ? exp_m_formula(n, p, n - 3) : exp_m2_formula(n, p);
}

template <typename Design>
std::vector<LemmaVerdict> m_expectation_rows(const Design& x, Variant variant, int i, int j, const VerifyOptions& opt,
                                             std::optional<int> only_p) {
  const int n = x.order();
  if (i < 1 || i > n || j < 1 || j > n || i == j) throw Error(ErrorCode::BadVertex, "invalid ordered pair");
  const Lemma lemma = variant == Variant::OneFactorization ? Lemma::ExpM : Lemma::ExpM2;
  const int last = m_support_end(variant, n);
  if (only_p && (*only_p < 1 || *only_p > last))
    throw Error(ErrorCode::EmptyCondition, "no vertex order puts i at position " + std::to_string(*only_p) +
                                               " under the condition");
  std::vector<LemmaVerdict> rows;
  const int p_lo = only_p.value_or(1);
  const int p_hi = only_p.value_or(last);
  if (opt.mode == Mode::Exact) {
    require_exact(n);
    std::vector<MTally> tallies(static_cast<std::size_t>(n), MTally(n));
    detail::parallel_blocks(static_cast<std::size_t>(n), opt.jobs, [&](std::size_t b) {
      for_each_order_starting_with(n, static_cast<int>(b) + 1, [&](const std::vector<int>& perm) {
        const RevealOrder order = RevealOrder::with_sorted_stars(perm);
        const int m = conditioned_m(x, order, i, j);
        if (m < 0) return;
        const auto p = static_cast<std::size_t>(order.position(i));
        tallies[b].sum[p] += static_cast<std::uint64_t>(m);
        ++tallies[b].count[p];
      });
    });
    MTally total(n);
    for (const auto& t : tallies) total.merge(t);
    for (int p = p_lo; p <= p_hi; ++p) {
      const auto ps = static_cast<std::size_t>(p);
      if (total.count[ps] == 0) throw Error(ErrorCode::EmptyCondition, "p=" + std::to_string(p));
      auto row = exact_row(lemma, variant, n, "p=" + std::to_string(p), m_formula(variant, n, p),
                           ratio(total.sum[ps], total.count[ps]), total.count[ps]);
      if (variant == Variant::OneFactorization) row.alternative = exp_m_formula(n, p, n - 1);
      rows.push_back(std::move(row));
    }
    return rows;
  }
  const auto blocks = block_count(opt.samples);
  std::vector<std::vector<RunningStats>> stats(blocks, std::vector<RunningStats>(static_cast<std::size_t>(n + 1)));
  detail::parallel_blocks(blocks, opt.jobs, [&](std::size_t b) {
    Rng rng(opt.seed, b);
    for (std::uint64_t s = 0; s < block_samples(opt.samples, b); ++s) {
      const RevealOrder order = sample_reveal_order(n, rng);
      const int m = conditioned_m(x, order, i, j);
      if (m >= 0) stats[b][static_cast<std::size_t>(order.position(i))].add(m);
    }
  });
  for (int p = p_lo; p <= p_hi; ++p) {
    RunningStats merged;
    for (const auto& s : stats) merged.merge(s[static_cast<std::size_t>(p)]);
    auto row = mean_row(lemma, variant, n, "p=" + std::to_string(p), m_formula(variant, n, p), merged);
    if (variant == Variant::OneFactorization) row.alternative = exp_m_formula(n, p, n - 1);
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Reports which 1F closed form the oracle confirmed; the row formula
/// becomes the confirmed one and `alternative` the other.
void settle_exp_m_forms(std::vector<LemmaVerdict>& rows, int n, bool exact,
                        const std::vector<bool>* instance_pass_n3 = nullptr,
                        const std::vector<bool>* instance_pass_n1 = nullptr) {
  bool n3_all = true;
  bool n1_all = true;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (exact) {
      n3_all = n3_all && row.observed == row.formula && (!instance_pass_n3 || (*instance_pass_n3)[r]);
      n1_all = n1_all && row.observed == row.alternative && (!instance_pass_n1 || (*instance_pass_n1)[r]);
    } else {
      n3_all = n3_all && row.pass;
      n1_all = n1_all && std::fabs(row.estimate - row.alternative->convert_to<double>()) <= kSigmas * row.se + 1e-9;
    }
  }
  const std::string n3_text = "1+(n-p-1)(n-p-2)/(n-3)";
  const std::string n1_text = "1+(n-p-1)(n-p-2)/(n-1)";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto& row = rows[r];
    const Rational n1_form = *row.alternative;
    const int p = std::stoi(row.conditioning.substr(2));
    const bool n1_here = exact ? row.observed == n1_form
                                    : std::fabs(row.estimate - n1_form.convert_to<double>()) <= kSigmas * row.se + 1e-9;
    std::string detail = "n-1 form " + n1_text + " = " + str(n1_form) + (n1_here ? " (agrees)" : " (deviates)") +
                         "; n-3 form " + n3_text + " = " + str(exp_m_formula(n, p, n - 3));
    if (n3_all && !n1_all) {
      row.note = "oracle confirms " + n3_text + "; " + detail;
    } else if (n1_all && !n3_all) {
      row.formula = n1_form;
      row.alternative = exp_m_formula(n, p, n - 3);
      row.pass = n1_here && (!instance_pass_n1 || (*instance_pass_n1)[r]);
      row.note = "oracle confirms " + n1_text + "; " + detail;
    } else if (n3_all && n1_all) {
      row.note = "both closed forms agree at every p; " + detail;
    } else {
      row.pass = false;
      row.note = "oracle matches neither closed form; " + detail;
    }
  }
}

// ---------------------------------------------------------------------------
// N laws over orders of E_i

struct UniformTally {
  int M = 0;
  std::vector<std::uint64_t> counts;  // index v = 1..M
  std::uint64_t total = 0;
};

/// Orders of E_i enumerated or sampled; `order` is modified in place.
template <typename Visit>
void for_each_star_order(RevealOrder& order, int i, const VerifyOptions& opt, std::uint64_t stream, Visit&& visit) {
  std::vector<int> star(order.star(i).begin(), order.star(i).end());
  if (opt.mode == Mode::Exact) {
    if (star.size() > static_cast<std::size_t>(kMaxEnumerableOrder))
      throw Error(ErrorCode::TooLarge, "star of size " + std::to_string(star.size()) + " is too large to enumerate");
    std::sort(star.begin(), star.end());
    do {
      order.set_star(i, star);
      visit(order);
    } while (std::next_permutation(star.begin(), star.end()));
    return;
  }
  Rng rng(opt.seed, stream);
  for (std::uint64_t s = 0; s < opt.samples; ++s) {
    rng.shuffle(std::span<int>(star));
    order.set_star(i, star);
    visit(order);
  }
}

UniformTally tally_uniformity(const EdgeColoring& x, RevealOrder order, int i, int j, const VerifyOptions& opt,
                              std::uint64_t stream = 0) {
  if (!order.precedes(i, j)) throw Error(ErrorCode::EmptyCondition, "the N law conditions on i << j");
  UniformTally t;
  t.M = std::popcount(detail::availability_1f(x, order, i, j).m);
  t.counts.assign(static_cast<std::size_t>(t.M + 1), 0);
  for_each_star_order(order, i, opt, stream, [&](const RevealOrder& o) {
    const int n_val = std::popcount(detail::availability_1f(x, o, i, j).n);
    ++t.counts[static_cast<std::size_t>(n_val)];
    ++t.total;
  });
  return t;
}

bool is_uniform(const UniformTally& t) {
  for (int v = 1; v <= t.M; ++v)
    if (t.counts[static_cast<std::size_t>(v)] * static_cast<std::uint64_t>(t.M) != t.total) return false;
  return true;
}

struct ExpectTally {
  int l = 0;  // M
  int m = 0;  // |E_i|
  std::vector<std::uint64_t> sum;    // index q
  std::vector<std::uint64_t> count;  // index q
  std::vector<RunningStats> stats;   // MC
};

ExpectTally tally_expectation(const TripleSystem& x, RevealOrder order, int i, int j, const VerifyOptions& opt,
                              std::uint64_t stream = 0) {
  const int k = x.third(i, j);
  if (!order.precedes(i, j) || !order.precedes(i, k))
    throw Error(ErrorCode::EmptyCondition, "the N law conditions on i << j, k");
  ExpectTally t;
  t.m = order.order() - order.position(i);
  t.sum.assign(static_cast<std::size_t>(t.m + 1), 0);
  t.count.assign(static_cast<std::size_t>(t.m + 1), 0);
  t.stats.assign(static_cast<std::size_t>(t.m + 1), RunningStats{});
  t.l = -1;
  for_each_star_order(order, i, opt, stream, [&](const RevealOrder& o) {
    if (o.star_rank(i, j) > o.star_rank(i, k)) return;
    const Availability av = detail::availability_sts(x, o, i, j);
    const auto q = static_cast<std::size_t>(o.star_rank(i, j));
    const int n_val = std::popcount(av.n);
    t.l = std::popcount(av.m);
    t.sum[q] += static_cast<std::uint64_t>(n_val);
    ++t.count[q];
    t.stats[q].add(n_val);
  });
  return t;
}

/// Canonical vertex order for a before-set: earlier vertices ascending, then
/// i, then later vertices ascending. M depends only on the before-set.
RevealOrder order_for_split(int n, int i, std::uint32_t before_mask) {
  std::vector<int> perm;
  for (int v = 1; v <= n; ++v)
    if (before_mask & (1U << v)) perm.push_back(v);
  perm.push_back(i);
  for (int v = 1; v <= n; ++v)
    if (v != i && !(before_mask & (1U << v))) perm.push_back(v);
  return RevealOrder::with_sorted_stars(perm);
}

/// Before-sets of i drawn from V minus i and `keep` (vertices forced after i).
std::vector<std::uint32_t> before_sets(int n, int i, std::initializer_list<int> keep) {
  std::vector<int> free;
  for (int v = 1; v <= n; ++v)
    if (v != i && std::find(keep.begin(), keep.end(), v) == keep.end()) free.push_back(v);
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s < (1U << free.size()); ++s) {
    std::uint32_t mask = 0;
    for (std::size_t b = 0; b < free.size(); ++b)
      if (s & (1U << b)) mask |= 1U << free[b];
    out.push_back(mask);
  }
  return out;
}

double star_enumeration_work(int free_vertices, int forced) {
  double work = 0;
  for (int s = 0; s <= free_vertices; ++s) {
    double choose = 1;
    for (int t = 0; t < s; ++t) choose = choose * (free_vertices - t) / (t + 1);
    work += choose * work_factorial(s + forced);
  }
  return work;
}

std::vector<std::pair<int, int>> ordered_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) out.emplace_back(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Pool-wide drivers

template <typename Design>
std::vector<LemmaVerdict> exp_m_pool(const std::vector<Design>& pool, Variant variant, int n, const VerifyOptions& opt) {
  const Lemma lemma = variant == Variant::OneFactorization ? Lemma::ExpM : Lemma::ExpM2;
  const auto pairs = ordered_pairs(n);
  const int last = m_support_end(variant, n);
  std::vector<LemmaVerdict> rows;
  if (opt.mode == Mode::Exact) {
    require_exact(n);
    require_budget(static_cast<double>(pool.size()) * static_cast<double>(pairs.size()) * work_factorial(n),
                   "exact E[M] over the pool");
    const std::size_t instances = pool.size() * pairs.size();
    std::vector<std::vector<MTally>> tallies(static_cast<std::size_t>(n), std::vector<MTally>(instances, MTally(n)));
    detail::parallel_blocks(static_cast<std::size_t>(n), opt.jobs, [&](std::size_t b) {
      auto& mine = tallies[b];
      for_each_order_starting_with(n, static_cast<int>(b) + 1, [&](const std::vector<int>& perm) {
        const RevealOrder order = RevealOrder::with_sorted_stars(perm);
        for (std::size_t x = 0; x < pool.size(); ++x)
          for (std::size_t pr = 0; pr < pairs.size(); ++pr) {
            const auto [i, j] = pairs[pr];
            const int m = conditioned_m(pool[x], order, i, j);
            if (m < 0) continue;
            auto& t = mine[x * pairs.size() + pr];
            const auto p = static_cast<std::size_t>(order.position(i));
            t.sum[p] += static_cast<std::uint64_t>(m);
            ++t.count[p];
          }
      });
    });
    std::vector<MTally> per_instance(instances, MTally(n));
    for (const auto& block : tallies)
      for (std::size_t k = 0; k < instances; ++k) per_instance[k].merge(block[k]);
    std::vector<bool> n3_ok, n1_ok;
    for (int p = 1; p <= last; ++p) {
      const auto ps = static_cast<std::size_t>(p);
      const Rational formula = m_formula(variant, n, p);
      const Rational n1_form = exp_m_formula(n, p, n - 1);
      BigInt sum = 0, count = 0;
      bool all_formula = true, all_n1 = true;
      for (const auto& t : per_instance) {
        if (t.count[ps] == 0) throw Error(ErrorCode::EmptyCondition, "p=" + std::to_string(p));
        const Rational obs = ratio(t.sum[ps], t.count[ps]);
        all_formula = all_formula && obs == formula;
        all_n1 = all_n1 && obs == n1_form;
        sum += t.sum[ps];
        count += t.count[ps];
      }
      auto row = exact_row(lemma, variant, n, "p=" + std::to_string(p), formula, ratio(sum, count),
                           count.convert_to<std::uint64_t>());
      row.pass = all_formula;
      row.note = std::to_string(instances) + " instances";
      if (variant == Variant::OneFactorization) row.alternative = n1_form;
      n3_ok.push_back(all_formula);
      n1_ok.push_back(all_n1);
      rows.push_back(std::move(row));
    }
    if (variant == Variant::OneFactorization) settle_exp_m_forms(rows, n, true, &n3_ok, &n1_ok);
    return rows;
  }
  const auto blocks = block_count(opt.samples);
  std::vector<std::vector<RunningStats>> stats(blocks, std::vector<RunningStats>(static_cast<std::size_t>(n + 1)));
  detail::parallel_blocks(blocks, opt.jobs, [&](std::size_t b) {
    Rng rng(opt.seed, b);
    for (std::uint64_t s = 0; s < block_samples(opt.samples, b); ++s) {
      const auto& x = pool[rng.below(pool.size())];
      const auto [i, j] = pairs[rng.below(pairs.size())];
      const RevealOrder order = sample_reveal_order(n, rng);
      const int m = conditioned_m(x, order, i, j);
      if (m >= 0) stats[b][static_cast<std::size_t>(order.position(i))].add(m);
    }
  });
  for (int p = 1; p <= last; ++p) {
    RunningStats merged;
    for (const auto& s : stats) merged.merge(s[static_cast<std::size_t>(p)]);
    auto row = mean_row(lemma, variant, n, "p=" + std::to_string(p), m_formula(variant, n, p), merged);
    if (variant == Variant::OneFactorization) row.alternative = exp_m_formula(n, p, n - 1);
    rows.push_back(std::move(row));
  }
  if (variant == Variant::OneFactorization) settle_exp_m_forms(rows, n, false);
  return rows;
}

std::vector<LemmaVerdict> n_law_1f_pool(const std::vector<EdgeColoring>& pool, int n, const VerifyOptions& opt) {
  const auto pairs = ordered_pairs(n);
  // Aggregates keyed by l = M: hits per value v, trials, and instance health.
  struct Agg {
    std::map<int, std::vector<std::uint64_t>> hits;
    std::map<int, std::uint64_t> trials;
    std::map<int, std::uint64_t> instances;
    std::map<int, bool> ok;
  };
  auto add = [](Agg& a, const UniformTally& t, bool check) {
    auto& h = a.hits[t.M];
    h.resize(static_cast<std::size_t>(t.M + 1), 0);
    for (int v = 1; v <= t.M; ++v) h[static_cast<std::size_t>(v)] += t.counts[static_cast<std::size_t>(v)];
    a.trials[t.M] += t.total;
    a.instances[t.M] += 1;
    auto [it, inserted] = a.ok.emplace(t.M, true);
    if (check && !is_uniform(t)) it->second = false;
  };
  std::vector<Agg> per_block;
  if (opt.mode == Mode::Exact) {
    require_exact(n);
    require_budget(static_cast<double>(pool.size()) * static_cast<double>(pairs.size()) * star_enumeration_work(n - 2, 1),
                   "exact N law over the pool");
    per_block.resize(pool.size());
    detail::parallel_blocks(pool.size(), opt.jobs, [&](std::size_t b) {
      for (const auto& [i, j] : pairs)
        for (std::uint32_t before : before_sets(n, i, {j}))
          add(per_block[b], tally_uniformity(pool[b], order_for_split(n, i, before), i, j, opt), true);
    });
  } else {
    const auto blocks = block_count(opt.samples);
    per_block.resize(blocks);
    detail::parallel_blocks(blocks, opt.jobs, [&](std::size_t b) {
      Rng rng(opt.seed, b);
      for (std::uint64_t s = 0; s < block_samples(opt.samples, b); ++s) {
        const auto& x = pool[rng.below(pool.size())];
        const auto [i, j] = pairs[rng.below(pairs.size())];
        const RevealOrder order = sample_reveal_order(n, rng);
        if (!order.precedes(i, j)) continue;
        const Availability av = detail::availability_1f(x, order, i, j);
        UniformTally t;
        t.M = std::popcount(av.m);
        t.counts.assign(static_cast<std::size_t>(t.M + 1), 0);
        ++t.counts[static_cast<std::size_t>(std::popcount(av.n))];
        t.total = 1;
        add(per_block[b], t, false);
      }
    });
  }
  Agg total;
  for (const auto& a : per_block) {
    for (const auto& [l, h] : a.hits) {
      auto& th = total.hits[l];
      th.resize(h.size(), 0);
      for (std::size_t v = 0; v < h.size(); ++v) th[v] += h[v];
    }
    for (const auto& [l, c] : a.trials) total.trials[l] += c;
    for (const auto& [l, c] : a.instances) total.instances[l] += c;
    for (const auto& [l, ok] : a.ok) {
      auto [it, inserted] = total.ok.emplace(l, ok);
      if (!inserted) it->second = it->second && ok;
    }
  }
  std::vector<LemmaVerdict> rows;
  for (const auto& [l, h] : total.hits) {
    for (int v = 1; v <= l; ++v) {
      const std::string cond = "M=" + std::to_string(l) + ";N=" + std::to_string(v);
      const Rational formula = ratio(1, l);
      if (opt.mode == Mode::Exact) {
        auto row = exact_row(Lemma::NLaw, Variant::OneFactorization, n, cond, formula,
                             ratio(h[static_cast<std::size_t>(v)], total.trials[l]), total.trials[l]);
        row.pass = row.pass && total.ok[l];
        row.note = std::to_string(total.instances[l]) + " instances";
        rows.push_back(std::move(row));
      } else {
        rows.push_back(frequency_row(Lemma::NLaw, Variant::OneFactorization, n, cond, formula,
                                     h[static_cast<std::size_t>(v)], total.trials[l]));
      }
    }
  }
  return rows;
}

std::vector<LemmaVerdict> n_law_sts_pool(const std::vector<TripleSystem>& pool, int n, const VerifyOptions& opt) {
  const auto pairs = ordered_pairs(n);
  using Key = std::tuple<int, int, int>;  // m, q, l
  struct Agg {
    std::map<Key, std::pair<std::uint64_t, std::uint64_t>> exact;  // sum N, count
    std::map<Key, RunningStats> mc;
    std::map<Key, std::uint64_t> instances;
    std::map<Key, bool> ok;
  };
  std::vector<Agg> per_block;
  if (opt.mode == Mode::Exact) {
    require_exact(n);
    require_budget(static_cast<double>(pool.size()) * static_cast<double>(pairs.size()) * star_enumeration_work(n - 3, 2),
                   "exact N law over the pool");
    per_block.resize(pool.size());
    detail::parallel_blocks(pool.size(), opt.jobs, [&](std::size_t b) {
      const TripleSystem& x = pool[b];
      auto& agg = per_block[b];
      for (const auto& [i, j] : pairs) {
        const int k = x.third(i, j);
        for (std::uint32_t before : before_sets(n, i, {j, k})) {
          const ExpectTally t = tally_expectation(x, order_for_split(n, i, before), i, j, opt);
          for (int q = 1; q <= t.m - 1; ++q) {
            const auto qs = static_cast<std::size_t>(q);
            if (t.count[qs] == 0) continue;
            const Key key{t.m, q, t.l};
            auto& e = agg.exact[key];
            e.first += t.sum[qs];
            e.second += t.count[qs];
            agg.instances[key] += 1;
            const bool match = ratio(t.sum[qs], t.count[qs]) == n_expect_formula(t.m, q, t.l);
            auto [it, inserted] = agg.ok.emplace(key, match);
            if (!inserted) it->second = it->second && match;
          }
        }
      }
    });
  } else {
    const auto blocks = block_count(opt.samples);
    per_block.resize(blocks);
    detail::parallel_blocks(blocks, opt.jobs, [&](std::size_t b) {
      Rng rng(opt.seed, b);
      for (std::uint64_t s = 0; s < block_samples(opt.samples, b); ++s) {
        const auto& x = pool[rng.below(pool.size())];
        const auto [i, j] = pairs[rng.below(pairs.size())];
        const RevealOrder order = sample_reveal_order(n, rng);
        if (!detail::f_event_fast(x, order, i, j)) continue;
        const Availability av = detail::availability_sts(x, order, i, j);
        const Key key{n - order.position(i), order.star_rank(i, j), std::popcount(av.m)};
        per_block[b].mc[key].add(std::popcount(av.n));
      }
    });
  }
  Agg total;
  for (const auto& a : per_block) {
    for (const auto& [key, e] : a.exact) {
      total.exact[key].first += e.first;
      total.exact[key].second += e.second;
    }
    for (const auto& [key, s] : a.mc) total.mc[key].merge(s);
    for (const auto& [key, c] : a.instances) total.instances[key] += c;
    for (const auto& [key, ok] : a.ok) {
      auto [it, inserted] = total.ok.emplace(key, ok);
      if (!inserted) it->second = it->second && ok;
    }
  }
  std::vector<LemmaVerdict> rows;
  auto cond = [](const Key& k) {
    return "m=" + std::to_string(std::get<0>(k)) + ";q=" + std::to_string(std::get<1>(k)) +
           ";l=" + std::to_string(std::get<2>(k));
  };
  if (opt.mode == Mode::Exact) {
    for (const auto& [key, e] : total.exact) {
      const auto [m, q, l] = key;
      auto row = exact_row(Lemma::NLaw, Variant::Steiner, n, cond(key), n_expect_formula(m, q, l),
                           ratio(e.first, e.second), e.second);
      row.pass = row.pass && total.ok[key];
      row.note = std::to_string(total.instances[key]) + " instances";
      rows.push_back(std::move(row));
    }
  } else {
    for (const auto& [key, s] : total.mc) {
      const auto [m, q, l] = key;
      rows.push_back(mean_row(Lemma::NLaw, Variant::Steiner, n, cond(key), n_expect_formula(m, q, l), s));
    }
  }
  return rows;
}

void check_variant(Lemma lemma, Variant variant) {
  const bool ok = [&] {
    switch (lemma) {
      case Lemma::DistP:
      case Lemma::ExpM: return variant == Variant::OneFactorization;
      case Lemma::DistP2:
      case Lemma::ExpM2:
      case Lemma::QLaw: return variant == Variant::Steiner;
      case Lemma::NLaw: return true;
    }
    return false;
  }();
  if (!ok)
    throw Error(ErrorCode::BadInput, std::string(lemma_name(lemma)) + " does not apply to variant " +
                                         std::string(variant_name(variant)));
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string_view lemma_name(Lemma lemma) {
  switch (lemma) {
    case Lemma::DistP: return "dist-p";
    case Lemma::ExpM: return "exp-m";
    case Lemma::DistP2: return "dist-p-2";
    case Lemma::ExpM2: return "exp-m-2";
    case Lemma::QLaw: return "q-law";
    case Lemma::NLaw: return "n-law";
  }
  return "?";
}

Lemma parse_lemma(std::string_view name) {
  for (Lemma l : {Lemma::DistP, Lemma::ExpM, Lemma::DistP2, Lemma::ExpM2, Lemma::QLaw, Lemma::NLaw})
    if (lemma_name(l) == name) return l;
  throw Error(ErrorCode::BadInput, "unknown lemma '" + std::string(name) + "'");
}

std::vector<LemmaVerdict> verify_position_law(Lemma lemma, int n, const VerifyOptions& options) {
  if (lemma != Lemma::DistP && lemma != Lemma::DistP2 && lemma != Lemma::QLaw)
    throw Error(ErrorCode::BadInput, "not a position law: " + std::string(lemma_name(lemma)));
  const int min_n = lemma == Lemma::DistP ? 2 : 3;
  if (n < min_n) throw Error(ErrorCode::BadInput, "n too small for " + std::string(lemma_name(lemma)));
  if (options.mode == Mode::MonteCarlo) return position_law_mc(lemma, n, options);
  require_exact(n);
  return lemma == Lemma::QLaw ? q_law_exact(n) : dist_p_exact(lemma, n, options.jobs);
}

std::vector<LemmaVerdict> verify_M_expectation(const EdgeColoring& x, int i, int j, const VerifyOptions& options,
                                               std::optional<int> p) {
  return m_expectation_rows(x, Variant::OneFactorization, i, j, options, p);
}

std::vector<LemmaVerdict> verify_M_expectation(const TripleSystem& x, int i, int j, const VerifyOptions& options,
                                               std::optional<int> p) {
  return m_expectation_rows(x, Variant::Steiner, i, j, options, p);
}

std::vector<LemmaVerdict> verify_N_uniformity(const EdgeColoring& x, const RevealOrder& order, int i, int j,
                                              const VerifyOptions& options) {
  if (x.order() != order.order()) throw Error(ErrorCode::BadInput, "order size differs from the coloring");
  const UniformTally t = tally_uniformity(x, order, i, j, options);
  std::vector<LemmaVerdict> rows;
  const int n = x.order();
  for (int v = 1; v <= t.M; ++v) {
    const std::string cond = "M=" + std::to_string(t.M) + ";N=" + std::to_string(v);
    if (options.mode == Mode::Exact)
      rows.push_back(exact_row(Lemma::NLaw, Variant::OneFactorization, n, cond, ratio(1, t.M),
                               ratio(t.counts[static_cast<std::size_t>(v)], t.total), t.total));
    else
      rows.push_back(frequency_row(Lemma::NLaw, Variant::OneFactorization, n, cond, ratio(1, t.M),
                                   t.counts[static_cast<std::size_t>(v)], t.total));
  }
  return rows;
}

std::vector<LemmaVerdict> verify_N_expectation(const TripleSystem& x, const RevealOrder& order, int i, int j,
                                               const VerifyOptions& options) {
  if (x.order() != order.order()) throw Error(ErrorCode::BadInput, "order size differs from the triple system");
  const ExpectTally t = tally_expectation(x, order, i, j, options);
  std::vector<LemmaVerdict> rows;
  const int n = x.order();
  for (int q = 1; q <= t.m - 1; ++q) {
    const auto qs = static_cast<std::size_t>(q);
    const std::string cond = "m=" + std::to_string(t.m) + ";q=" + std::to_string(q) + ";l=" + std::to_string(t.l);
    const Rational formula = n_expect_formula(t.m, q, t.l);
    if (options.mode == Mode::Exact) {
      if (t.count[qs] == 0) continue;
      rows.push_back(exact_row(Lemma::NLaw, Variant::Steiner, n, cond, formula, ratio(t.sum[qs], t.count[qs]),
                               t.count[qs]));
    } else {
      rows.push_back(mean_row(Lemma::NLaw, Variant::Steiner, n, cond, formula, t.stats[qs]));
    }
  }
  return rows;
}

std::vector<LemmaVerdict> verify_lemma(Lemma lemma, Variant variant, int n, const VerifyOptions& options) {
  check_variant(lemma, variant);
  if (options.mode == Mode::MonteCarlo && options.samples == 0)
    throw Error(ErrorCode::BadInput, "Monte-Carlo mode needs samples > 0");
  switch (lemma) {
    case Lemma::DistP:
    case Lemma::DistP2:
    case Lemma::QLaw: return verify_position_law(lemma, n, options);
    default: break;
  }
  if (options.mode == Mode::Exact) require_exact(n);
  SearchConfig config;
  config.jobs = options.jobs;
  if (variant == Variant::OneFactorization) {
    const auto pool = enumerate_one_factorizations(n, false, config);
    if (pool.items.empty()) throw Error(ErrorCode::EmptyPool, "no 1-factorizations of K_" + std::to_string(n));
    return lemma == Lemma::ExpM ? exp_m_pool(pool.items, variant, n, options) : n_law_1f_pool(pool.items, n, options);
  }
  const auto pool = enumerate_triple_systems(n, config);
  if (pool.items.empty()) throw Error(ErrorCode::EmptyPool, "no triple systems on " + std::to_string(n) + " points");
  return lemma == Lemma::ExpM2 ? exp_m_pool(pool.items, variant, n, options) : n_law_sts_pool(pool.items, n, options);
}

std::string verdicts_to_csv(std::span<const LemmaVerdict> rows) {
  std::ostringstream out;
  out << "lemma,variant,n,conditioning,formula_num,formula_den,observed_num,observed_den,estimate,se,pass,samples,note\n";
  for (const auto& r : rows) {
    out << r.lemma << ',' << variant_name(r.variant) << ',' << r.n << ',' << r.conditioning << ','
        << boost::multiprecision::numerator(r.formula) << ',' << boost::multiprecision::denominator(r.formula) << ',';
    if (r.observed)
      out << boost::multiprecision::numerator(*r.observed) << ',' << boost::multiprecision::denominator(*r.observed);
    else
      out << ',';
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    out << ',' << format_real(r.estimate) << ',' << format_real(r.se) << ',' << (r.pass ? "true" : "false") << ','
        << r.samples << ',' << note << '\n';
  }
  return out.str();
}

std::string verdicts_to_json(std::span<const LemmaVerdict> rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["lemma"] = r.lemma;
    j["variant"] = std::string(variant_name(r.variant));
    j["n"] = r.n;
    j["conditioning"] = r.conditioning;
    j["formula"] = str(r.formula);
    if (r.observed) j["observed"] = str(*r.observed);
    j["estimate"] = r.estimate;
    j["se"] = r.se;
    j["pass"] = r.pass;
    j["samples"] = r.samples;
    if (r.alternative) j["alternative"] = str(*r.alternative);
    if (!r.note.empty()) j["note"] = r.note;
    arr.push_back(std::move(j));
  }
  return arr.dump() + "\n";
}

}  // namespace designcount
