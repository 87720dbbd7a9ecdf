#include "membed/sssp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace membed {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool NearlyEqual(double a, double b) {
  return std::abs(a - b) <= kDistTol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool NearlyLeq(double a, double b) {
  return a <= b + kDistTol * std::max({1.0, std::abs(a), std::abs(b)});
}

static SsspResult Dijkstra(const WeightedGraph& g, const std::vector<SourceOffset>& sources,
                           const std::vector<char>* allowed) {
  const int n = g.NumVertices();
  if (sources.empty()) throw std::invalid_argument("sssp needs at least one source");
  SsspResult res;
  res.sources = sources;
  res.dist.assign(n, kInf);
  res.parent.assign(n, -1);
  res.parent_edge.assign(n, -1);
  res.parent_w.assign(n, 0.0);
  res.root.assign(n, -1);

  std::vector<double> offset(n, kInf);  // cheapest offset per source vertex
  for (const SourceOffset& s : sources) {
    if (s.vertex < 0 || s.vertex >= n) throw std::invalid_argument("source vertex out of range");
    if (s.offset < 0) throw std::invalid_argument("source offset must be nonnegative");
    if (allowed && !(*allowed)[s.vertex]) continue;
    offset[s.vertex] = std::min(offset[s.vertex], s.offset);
  }

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (int v = 0; v < n; ++v) {
    if (offset[v] < kInf) {
      res.dist[v] = offset[v];
      pq.emplace(offset[v], v);
    }
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d != res.dist[v]) continue;
    for (const AdjEntry& a : g.Neighbors(v)) {
      if (allowed && !(*allowed)[a.to]) continue;
      double nd = d + a.w;
      if (nd < res.dist[a.to]) {
        res.dist[a.to] = nd;
        pq.emplace(nd, a.to);
      }
    }
  }

  // Canonical predecessors: the super-source wins ties, then the smallest
  // neighbor id among equally short paths. Parents always have strictly
  // smaller distance (weights >= 1), so the result is a forest.
  for (int v = 0; v < n; ++v) {
    if (res.dist[v] == kInf) continue;
    if (NearlyEqual(res.dist[v], offset[v])) continue;  // root
    int best = -1, best_edge = -1;
    double best_w = 0;
    for (const AdjEntry& a : g.Neighbors(v)) {
      if (allowed && !(*allowed)[a.to]) continue;
      if (res.dist[a.to] == kInf) continue;
      if (NearlyEqual(res.dist[a.to] + a.w, res.dist[v]) && (best < 0 || a.to < best)) {
        best = a.to;
        best_edge = a.edge;
        best_w = a.w;
      }
    }
    if (best < 0) throw std::logic_error("sssp: settled vertex without predecessor");
    res.parent[v] = best;
    res.parent_edge[v] = best_edge;
    res.parent_w[v] = best_w;
  }

  // Roots propagate along parents in increasing-distance order.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&res](int a, int b) { return res.dist[a] < res.dist[b]; });
  for (int v : order) {
    if (res.dist[v] == kInf) continue;
    res.root[v] = res.parent[v] < 0 ? v : res.root[res.parent[v]];
  }
  return res;
}

SsspResult SsspExact(const WeightedGraph& g, const std::vector<SourceOffset>& sources) {
  return Dijkstra(g, sources, nullptr);
}

SsspResult SsspApprox(const WeightedGraph& g, const std::vector<SourceOffset>& sources,
                      double eps) {
  if (eps < 0) throw std::invalid_argument("approximation tolerance must be nonnegative");
  return Dijkstra(g, sources, nullptr);
}

SsspResult SsspExactMasked(const WeightedGraph& g, const std::vector<SourceOffset>& sources,
                           const std::vector<char>& allowed) {
  return Dijkstra(g, sources, &allowed);
}

}  // namespace membed
