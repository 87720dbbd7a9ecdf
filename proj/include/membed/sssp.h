#pragma once

#include <vector>

#include "membed/graph.h"

namespace membed {

constexpr double kDistTol = 1e-9;

// Tolerance comparison used for all distance arithmetic: absolute 1e-9
// scaled by the larger magnitude (floor 1, since nonzero distances are >= 1).
bool NearlyEqual(double a, double b);
bool NearlyLeq(double a, double b);

struct SourceOffset {
  int vertex = 0;
  double offset = 0;
};

// Shortest-path forest from a set of offset sources. dist(v) is the minimum
// over sources (s, o) of o + dist(s, v). parent[v] == -1 marks roots; every
// root is a source whose own offset attains its distance. Ties between
// equally short paths resolve toward the smallest predecessor id, with the
// implicit super-source preferred over any real predecessor, so cluster
// assignment downstream is deterministic.
struct SsspResult {
  std::vector<double> dist;
  std::vector<int> parent;        // -1 at roots
  std::vector<int> parent_edge;   // graph edge id of the parent edge, -1 at roots
  std::vector<double> parent_w;   // weight of the parent edge, 0 at roots
  std::vector<int> root;          // tree root reached by following parents
  std::vector<SourceOffset> sources;
};

SsspResult SsspExact(const WeightedGraph& g, const std::vector<SourceOffset>& sources);

// Contract: true <= dist <= (1+eps) * true, per-edge smoothness
// |dist(u) - dist(v)| <= 2 w(u,v), tree-consistent parents. Realized as a
// wrapper over the exact routine, which satisfies every (1+eps) contract;
// eps stays in the interface so a genuine approximate engine can slot in.
SsspResult SsspApprox(const WeightedGraph& g, const std::vector<SourceOffset>& sources,
                      double eps);

// Restricted variant: only vertices with allowed[v] != 0 are relaxed or
// settled. Excluded and unreached vertices keep dist = +infinity.
SsspResult SsspExactMasked(const WeightedGraph& g, const std::vector<SourceOffset>& sources,
                           const std::vector<char>& allowed);

}  // namespace membed
