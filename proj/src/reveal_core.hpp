#pragma once

// Bitmask evaluation of the availability sets; shared by the public
// RevealSets builders and the tight loops of the lemma checks.

#include <cstdint>

#include "designcount/designs.hpp"
#include "designcount/entropy_lab.hpp"

namespace designcount::detail {

struct Availability {
  bool trivial = false;
  int value = 0;
  std::uint32_t a = 0;  // bit v set <=> value v in the set
  std::uint32_t b = 0;
  std::uint32_t m = 0;
  std::uint32_t n = 0;
};

inline std::uint32_t bit(int v) { return 1U << v; }

inline Availability availability_1f(const EdgeColoring& x, const RevealOrder& order, int i, int j) {
  Availability out;
  out.value = x.color(i, j);
  if (order.precedes(j, i)) {
    out.trivial = true;
    out.m = out.n = bit(out.value);
    return out;
  }
  const int n = order.order();
  const int pi = order.position(i);
  const auto vertices = order.vertex_order();
  for (int pos = 0; pos + 1 < pi; ++pos) {
    const int t = vertices[static_cast<std::size_t>(pos)];
    out.a |= bit(x.color(t, i)) | bit(x.color(t, j));
  }
  std::uint32_t all = 0;
  for (int c = 1; c <= n - 1; ++c) all |= bit(c);
  out.m = all & ~out.a;
  const int qj = order.star_rank(i, j);
  for (int k : order.star(i))
    if (order.star_rank(i, k) < qj) out.b |= bit(x.color(i, k));
  out.n = out.m & ~out.b;
  return out;
}

inline bool f_event_fast(const TripleSystem& x, const RevealOrder& order, int i, int j) {
  const int k = x.third(i, j);
  return order.precedes(i, j) && order.precedes(i, k) && order.star_rank(i, j) < order.star_rank(i, k);
}

inline Availability availability_sts(const TripleSystem& x, const RevealOrder& order, int i, int j) {
  Availability out;
  out.value = x.third(i, j);
  if (!f_event_fast(x, order, i, j)) {
    out.trivial = true;
    out.m = out.n = bit(out.value);
    return out;
  }
  const int n = order.order();
  const int pi = order.position(i);
  for (int t = 1; t <= n; ++t) {
    if (t == i || t == j) continue;
    if (order.position(t) < pi || order.position(x.third(i, t)) < pi || order.position(x.third(j, t)) < pi)
      out.a |= bit(t);
    else
      out.m |= bit(t);
  }
  const int qj = order.star_rank(i, j);
  for (int t = 1; t <= n; ++t) {
    if (!(out.m & bit(t))) continue;
    // t and X_{i,t} both follow i here, so both edges lie in E_i.
    if (order.star_rank(i, t) < qj || order.star_rank(i, x.third(i, t)) < qj) out.b |= bit(t);
  }
  out.n = out.m & ~out.b;
  return out;
}

}  // namespace designcount::detail
