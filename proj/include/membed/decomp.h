#pragma once

#include <vector>

#include "membed/graph.h"
#include "membed/rng.h"
#include "membed/sssp.h"

namespace membed {

constexpr int kUnclustered = -1;

// One level of a (sub)partition produced by a random-shift decomposition.
// The forest always spans the pre-shrink partition (the shortest-path tree of
// the shifted race with the super-source removed); `assignment` reflects the
// final clusters, which in approximate mode may leave vertices out after the
// boundary erosion. center_dist is the forest-path weight to the tree root,
// defined for every vertex.
struct Clustering {
  double scale = 1.0;
  std::vector<int> assignment;     // cluster id or kUnclustered
  std::vector<int> centers;        // cluster id -> center vertex
  std::vector<int> forest_parent;  // -1 at forest roots
  std::vector<int> forest_edge;    // graph edge id toward the parent, -1 at roots
  std::vector<double> forest_w;
  std::vector<double> center_dist;
  std::vector<int> forest_root;    // race winner per vertex (pre-shrink center)

  bool Clustered(int v) const { return assignment[v] != kUnclustered; }
  int NumClusters() const { return static_cast<int>(centers.size()); }
};

enum class DecompMode { kExact, kApprox };

// Clusters every vertex with the race winner u maximizing delta_u - dist(u, v),
// realized as one multi-source shortest-path computation with offsets
// max(delta) - delta_u. Centers are the forest roots.
Clustering RandomShiftDecompose(const WeightedGraph& g, double scale,
                                const ShiftVector& shifts);

// Randomized boundary erosion (the separation-safe grow step used by the
// approximate decomposition). Returns xhat >= x; each round contracts the
// current set, runs an approximate multi-source SSSP and absorbs everything
// within a uniformly drawn radius eps^i * scale / 64.
std::vector<char> Blur(const WeightedGraph& g, const std::vector<char>& x, double scale,
                       double eps, Rng& rng);

double DefaultBlurEps(int n);  // 1 / (40 ln n)

// Approximate-SSSP decomposition: the exact race run with the approximate
// engine, then each cluster shrunk by the blur of its complement. Result is a
// subpartition; shrunk-away vertices are unclustered.
Clustering ApproxRandomShiftDecompose(const WeightedGraph& g, double scale, double eps,
                                      Rng& rng);
Clustering ApproxDecomposeWithShifts(const WeightedGraph& g, double scale, double eps,
                                     const ShiftVector& shifts, Rng& blur_rng);

// Decomposition with the conditioning the hierarchy assumes made exact:
// shifts are resampled under the 9 ln(n) cap and the whole clustering is
// redrawn if any forest distance exceeds scale * 10 * ln(n).
Clustering BuildClusteringConditioned(const WeightedGraph& g, double scale, DecompMode mode,
                                      double eps, const Rng& base, int budget = 32);

// Dyadic hierarchy: levels[0] singletons, levels[L] all of V centered at
// vertex 0, levels in between drawn independently at scale 2^l.
struct Hierarchy {
  int L = 0;
  std::vector<Clustering> levels;  // size L + 1
};

Hierarchy BuildHierarchy(const WeightedGraph& g, DecompMode mode, const Rng& rng);

// Rebuilds one level from the same master stream (bit-exact with the
// corresponding level of BuildHierarchy).
Clustering BuildHierarchyLevel(const WeightedGraph& g, int level, DecompMode mode,
                               const Rng& rng);

Clustering SingletonClustering(const WeightedGraph& g);
// Single cluster covering V, centered at `root`, spanned by its exact
// shortest-path tree.
Clustering TopClustering(const WeightedGraph& g, int root, double scale);

// Nested partitions: parts[l] is the coarsest common refinement of levels
// l..L. Unclustered vertices at a level impose no constraint there; each
// block's projected center is the argmin over the block of the distance to
// the underlying center at the smallest level >= l where the block is
// clustered.
struct RefinedHierarchy {
  int L = 0;
  std::vector<std::vector<int>> parts;         // [l][v] -> block id (total)
  std::vector<std::vector<int>> centers;       // [l][block] -> projected center vertex
  std::vector<std::vector<int>> parent_block;  // [l][block] -> block at l+1 (l < L)
  std::vector<std::vector<int>> anchors;       // [l][block] -> projection anchor vertex

  int NumBlocks(int l) const { return static_cast<int>(centers[l].size()); }
};

RefinedHierarchy Refine(const Hierarchy& h, const WeightedGraph& g);

// Deterministic ball-growth bookkeeping for one vertex: r_0 = 1 and
// r_l = r_{l-1}/2 + delta_l + 2, where delta_l counts how far the ball can
// expand while its vertex count grows by e^{1/2} per unit. delta is found by
// a linear scan from 0 until the growth inequality first fails.
struct BallGrowthProfile {
  int vertex = 0;
  std::vector<double> r;    // r[0..L]
  std::vector<int> delta;   // delta[1..L]; delta[0] unused
};

BallGrowthProfile BallGrowth(const WeightedGraph& g, int v);

}  // namespace membed
