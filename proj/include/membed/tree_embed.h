#pragma once

#include <vector>

#include "membed/decomp.h"
#include "membed/graph.h"
#include "membed/rng.h"

namespace membed {

struct TreeNode {
  int level = 0;
  int block = 0;       // block id within its hierarchy level
  int center = 0;      // graph vertex anchoring this node
  int parent = -1;     // node id, -1 at the root
  double parent_w = 0;
};

// Rooted weighted tree over the blocks of a refined hierarchy. Leaves are the
// level-0 singletons, identified with graph vertices; each edge carries the
// exact graph distance between consecutive projected centers, which makes
// tree distances dominate graph distances. Immutable; distance queries are
// O(1) after the Euler-tour LCA index is built.
class TreeEmbedding {
 public:
  static TreeEmbedding Build(const RefinedHierarchy& rh, const WeightedGraph& g);
  static TreeEmbedding FromNodes(std::vector<TreeNode> nodes, std::vector<int> leaf_of);

  int NumNodes() const { return static_cast<int>(nodes_.size()); }
  const std::vector<TreeNode>& Nodes() const { return nodes_; }
  int Root() const { return root_; }
  int NumLeaves() const { return static_cast<int>(leaf_of_.size()); }
  int LeafOf(int v) const;
  double DepthWeight(int node) const { return depth_w_[node]; }

  int Lca(int a, int b) const;
  double NodeDistance(int a, int b) const;
  // Distance between graph vertices (their leaves).
  double Distance(int u, int v) const;

 private:
  std::vector<TreeNode> nodes_;
  std::vector<int> leaf_of_;
  int root_ = 0;
  std::vector<double> depth_w_;
  std::vector<int> depth_;
  std::vector<int> euler_;
  std::vector<int> first_pos_;
  std::vector<std::vector<int>> sparse_;
  std::vector<int> floor_log_;

  void BuildIndex();
};

// Merges every node that is an only child hanging on a zero-weight edge into
// its parent's slot. Leaf identities and all pairwise distances survive.
TreeEmbedding CompactTree(const TreeEmbedding& t);

struct StretchReport {
  int n = 0;
  int trials = 0;
  int pairs = 0;
  double max_mean_stretch = 0;
  double avg_mean_stretch = 0;
  long dominance_violations = 0;
  double log_n = 0;
  double measured_constant = 0;  // max_mean_stretch / ln n
};

// Builds `trials` independent embeddings and reports per-pair mean stretch
// over all pairs (n <= 256) or a fixed random sample.
StretchReport StretchStats(const WeightedGraph& g, int trials, DecompMode mode,
                           const Rng& rng);

}  // namespace membed
