#pragma once

// Random reveal orders, the per-pair availability sets they induce, and
// exact / Monte-Carlo checks of the counting lemmas built on them.
//
// A reveal order is a vertex order (<<) plus, for each vertex v, an order of
// its star E_v = { {v,u} : v << u }. Scanning vertices by << and each star in
// its own order gives the edge order (-<) in which values X_{i,j} are
// revealed. For an ordered pair (i, j):
//   A    values ruled out by edges at vertices earlier than i
//   M    values left after A
//   B    values ruled out by edges of E_i revealed before {i,j}
//   N    values left after A and B
// For 1-factorizations the values are colors 1..n-1 and X_{i,j} is the color
// of {i,j}; for triple systems the values are vertices and X_{i,j} is the
// third point of the triple through {i,j}.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "designcount/designs.hpp"
#include "designcount/numeric.hpp"
#include "designcount/rng.hpp"

namespace designcount {

enum class Variant { OneFactorization, Steiner };

std::string_view variant_name(Variant v);

class RevealOrder {
 public:
  /// vertex_order lists vertices first to last. stars[v] (index 1..n, entry 0
  /// ignored) lists the partners u of the edges {v,u} in E_v, in reveal order.
  RevealOrder(std::vector<int> vertex_order, std::vector<std::vector<int>> stars);

  /// Stars in ascending partner order.
  static RevealOrder with_sorted_stars(std::vector<int> vertex_order);

  int order() const { return n_; }
  std::span<const int> vertex_order() const { return vertex_order_; }
  std::span<const int> star(int v) const { return stars_[static_cast<std::size_t>(v)]; }
  /// 1-based position of v under <<.
  int position(int v) const { return pos_[static_cast<std::size_t>(v)]; }
  bool precedes(int a, int b) const { return position(a) < position(b); }
  /// 1-based rank of {v,u} within E_v; 0 when u does not follow v.
  int star_rank(int v, int u) const { return rank_[index(v, u)]; }
  /// The induced total order on edges.
  bool edge_precedes(Edge e, Edge f) const;
  std::vector<Edge> edge_sequence() const;

  /// Replaces the order of E_v; `partners` must be a permutation of it.
  void set_star(int v, std::span<const int> partners);

 private:
  std::size_t index(int v, int u) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(u);
  }
  Edge oriented(Edge e) const;

  int n_ = 0;
  std::vector<int> vertex_order_;
  std::vector<std::vector<int>> stars_;
  std::vector<int> pos_;
  std::vector<int> rank_;
};

/// Uniform vertex order, independently uniform star orders.
RevealOrder sample_reveal_order(int n, Rng& rng);
RevealOrder sample_reveal_order(int n, std::uint64_t seed);

inline constexpr int kMaxEnumerableOrder = 8;

/// All n! vertex orders in lexicographic order; TooLarge beyond n = 8.
std::vector<std::vector<int>> enumerate_vertex_orders(int n);

struct RevealSets {
  Variant variant = Variant::OneFactorization;
  int i = 0;
  int j = 0;
  int value = 0;  // X_{i,j}
  bool trivial = false;
  std::vector<int> A;
  std::vector<int> B;
  std::vector<int> Mset;
  std::vector<int> Nset;
  int M = 0;
  int N = 0;
  int p = 0;  // position of i under <<
  int q = 0;  // rank of {i,j} in E_i, 0 when j precedes i
  int m = 0;  // |E_i|
};

/// Trivial (j << i): N = M = 1 with Nset = Mset = {X_{i,j}} and A, B empty.
RevealSets reveal_sets_1f(const EdgeColoring& x, const RevealOrder& order, int i, int j);
/// Trivial unless i << j, i << k and {i,j} -< {i,k}, where k = X_{i,j}.
RevealSets reveal_sets_sts(const TripleSystem& x, const RevealOrder& order, int i, int j);

/// The F_{i,j} event for a triple system.
bool f_event(const TripleSystem& x, const RevealOrder& order, int i, int j);

// ---------------------------------------------------------------------------
// Lemma verification

enum class Lemma { DistP, ExpM, DistP2, ExpM2, QLaw, NLaw };

std::string_view lemma_name(Lemma lemma);
Lemma parse_lemma(std::string_view name);
Variant parse_variant(std::string_view name);

enum class Mode { Exact, MonteCarlo };

struct VerifyOptions {
  Mode mode = Mode::Exact;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct LemmaVerdict {
  std::string lemma;
  Variant variant = Variant::OneFactorization;
  int n = 0;
  std::string conditioning;
  Rational formula;
  /// Exact mode.
  std::optional<Rational> observed;
  /// Monte-Carlo mode.
  double estimate = 0.0;
  double se = 0.0;
  bool pass = false;
  /// Contributing observations (orders, or weighted order counts in exact mode).
  std::uint64_t samples = 0;
  /// Competing closed form, reported alongside when one exists.
  std::optional<Rational> alternative;
  std::string note;
};

/// Exact: conditional law of p (or q) as a rational over every order.
/// MC: frequency estimates from uniformly sampled orders.
std::vector<LemmaVerdict> verify_position_law(Lemma lemma, int n, const VerifyOptions& options);

/// E[M | p, condition] for one fixed design and ordered pair, every p in the
/// support (or only `p` when given; EmptyCondition outside the support).
/// For 1-factorizations `formula` holds the n-3 denominator form and
/// `alternative` the n-1 form.
std::vector<LemmaVerdict> verify_M_expectation(const EdgeColoring& x, int i, int j, const VerifyOptions& options,
                                               std::optional<int> p = std::nullopt);
std::vector<LemmaVerdict> verify_M_expectation(const TripleSystem& x, int i, int j, const VerifyOptions& options,
                                               std::optional<int> p = std::nullopt);

/// Law of N over the orders of E_i, with X and the vertex order fixed and
/// i << j: uniform on 1..M. One row per value v.
std::vector<LemmaVerdict> verify_N_uniformity(const EdgeColoring& x, const RevealOrder& order, int i, int j,
                                              const VerifyOptions& options);

/// E[N | q, F, M = l] over orders of E_i with X and the vertex order fixed
/// (so M = l) and i << j, k. One row per q.
std::vector<LemmaVerdict> verify_N_expectation(const TripleSystem& x, const RevealOrder& order, int i, int j,
                                               const VerifyOptions& options);

/// Whole-family check of one lemma at order n, as run by the CLI: every
/// design in the pool, every ordered pair, aggregated into one row per
/// conditioning value. A row passes only if every contributing instance does.
std::vector<LemmaVerdict> verify_lemma(Lemma lemma, Variant variant, int n, const VerifyOptions& options);

std::string verdicts_to_csv(std::span<const LemmaVerdict> rows);
std::string verdicts_to_json(std::span<const LemmaVerdict> rows);

// ---------------------------------------------------------------------------
// Chain-rule entropy bound and the finite sums

struct EntropyEstimate {
  Variant variant = Variant::OneFactorization;
  int n = 0;
  bool exact = false;
  double estimate = 0.0;
  double se = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  /// log of the pool size (labeled count for 1-factorizations).
  double log_count = 0.0;
  /// 1-factorizations only: log of the unordered count.
  std::optional<double> log_unordered;
  /// estimate >= log_count (exact), or estimate + 3 se >= log_count (MC).
  bool pass = false;

  std::string to_json() const;
};

/// Average over uniform X (from the complete pool) and uniform reveal orders
/// of sum_{(i,j) ordered} log N_{i,j}. samples == 0 requests full enumeration.
EntropyEstimate entropy_upper_estimate(Variant variant, int n, std::uint64_t samples, std::uint64_t seed,
                                       int jobs = 1);

struct FrequencyEstimate {
  double estimate = 0.0;
  double se = 0.0;
  std::uint64_t samples = 0;
};

/// Empirical frequency of F_{i,j} over uniformly sampled reveal orders.
FrequencyEstimate estimate_f_probability(const TripleSystem& x, int i, int j, std::uint64_t samples,
                                         std::uint64_t seed, int jobs = 1);

struct FiniteSum {
  double sum = 0.0;
  double target = 0.0;  // log n - 1
};

/// 1F: (2/(n(n-1))) sum_{r=1}^{n-2} r log(1 + r(r-1)/(n-1))
/// STS: (3/(n(n-1)(n-2))) sum_{r=2}^{n-1} r(r-1) log(1 + (r-2)(r-3)(r-4)/((n-4)(n-5)))
FiniteSum finite_sum_rate(Variant variant, std::int64_t n);

}  // namespace designcount
