#include "membed/tree_embed.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace membed {

TreeEmbedding TreeEmbedding::Build(const RefinedHierarchy& rh, const WeightedGraph& g) {
  const int n = g.NumVertices();
  const int L = rh.L;
  std::vector<int> offset(L + 2, 0);
  for (int l = 0; l <= L; ++l) offset[l + 1] = offset[l] + rh.NumBlocks(l);

  std::vector<std::vector<double>> dist_cache;
  std::vector<int> cache_slot(n, -1);
  auto dist_from = [&](int center) -> const std::vector<double>& {
    if (cache_slot[center] < 0) {
      cache_slot[center] = static_cast<int>(dist_cache.size());
      dist_cache.push_back(SsspExact(g, {{center, 0.0}}).dist);
    }
    return dist_cache[cache_slot[center]];
  };

  std::vector<TreeNode> nodes(offset[L + 1]);
  for (int l = 0; l <= L; ++l) {
    for (int b = 0; b < rh.NumBlocks(l); ++b) {
      TreeNode& node = nodes[offset[l] + b];
      node.level = l;
      node.block = b;
      node.center = rh.centers[l][b];
      if (l < L) {
        int up = rh.parent_block[l][b];
        node.parent = offset[l + 1] + up;
        node.parent_w = dist_from(rh.centers[l + 1][up])[node.center];
      }
    }
  }
  std::vector<int> leaf_of(n);
  for (int v = 0; v < n; ++v) leaf_of[v] = offset[0] + rh.parts[0][v];
  return FromNodes(std::move(nodes), std::move(leaf_of));
}

TreeEmbedding TreeEmbedding::FromNodes(std::vector<TreeNode> nodes,
                                       std::vector<int> leaf_of) {
  TreeEmbedding t;
  t.nodes_ = std::move(nodes);
  t.leaf_of_ = std::move(leaf_of);
  t.BuildIndex();
  return t;
}

void TreeEmbedding::BuildIndex() {
  const int m = NumNodes();
  if (m == 0) throw std::invalid_argument("tree needs at least one node");
  root_ = -1;
  std::vector<std::vector<int>> children(m);
  for (int i = 0; i < m; ++i) {
    if (nodes_[i].parent < 0) {
      if (root_ >= 0) throw std::invalid_argument("tree has two roots");
      root_ = i;
    } else {
      children[nodes_[i].parent].push_back(i);
    }
  }
  if (root_ < 0) throw std::invalid_argument("tree has no root");

  depth_w_.assign(m, 0.0);
  depth_.assign(m, 0);
  euler_.clear();
  euler_.reserve(2 * m);
  first_pos_.assign(m, -1);

  // Iterative Euler tour; the second stack entry marks the child cursor.
  std::vector<std::pair<int, size_t>> stack = {{root_, 0}};
  while (!stack.empty()) {
    auto& [node, cursor] = stack.back();
    if (cursor == 0) {
      first_pos_[node] = static_cast<int>(euler_.size());
      euler_.push_back(node);
    }
    if (cursor < children[node].size()) {
      int child = children[node][cursor];
      ++cursor;
      depth_w_[child] = depth_w_[node] + nodes_[child].parent_w;
      depth_[child] = depth_[node] + 1;
      stack.push_back({child, 0});
    } else {
      stack.pop_back();
      if (!stack.empty()) euler_.push_back(stack.back().first);
    }
  }

  const int e = static_cast<int>(euler_.size());
  floor_log_.assign(e + 1, 0);
  for (int i = 2; i <= e; ++i) floor_log_[i] = floor_log_[i / 2] + 1;
  int levels = floor_log_[e] + 1;
  sparse_.assign(levels, std::vector<int>(e));
  sparse_[0] = euler_;
  for (int k = 1; k < levels; ++k) {
    for (int i = 0; i + (1 << k) <= e; ++i) {
      int a = sparse_[k - 1][i];
      int b = sparse_[k - 1][i + (1 << (k - 1))];
      sparse_[k][i] = depth_[a] < depth_[b] ? a : b;
    }
  }
}

int TreeEmbedding::LeafOf(int v) const {
  if (v < 0 || v >= static_cast<int>(leaf_of_.size()))
    throw std::invalid_argument("unknown vertex id " + std::to_string(v + 1));
  return leaf_of_[v];
}

int TreeEmbedding::Lca(int a, int b) const {
  int i = first_pos_[a], j = first_pos_[b];
  if (i > j) std::swap(i, j);
  int k = floor_log_[j - i + 1];
  int x = sparse_[k][i];
  int y = sparse_[k][j - (1 << k) + 1];
  return depth_[x] < depth_[y] ? x : y;
}

double TreeEmbedding::NodeDistance(int a, int b) const {
  if (a == b) return 0.0;
  return depth_w_[a] + depth_w_[b] - 2.0 * depth_w_[Lca(a, b)];
}

double TreeEmbedding::Distance(int u, int v) const {
  return NodeDistance(LeafOf(u), LeafOf(v));
}

TreeEmbedding CompactTree(const TreeEmbedding& t) {
  const int m = t.NumNodes();
  const auto& nodes = t.Nodes();
  std::vector<int> child_count(m, 0);
  for (const TreeNode& n : nodes)
    if (n.parent >= 0) ++child_count[n.parent];

  // A node is absorbed by its only child when the connecting edge has weight
  // zero; the child takes over the parent's position in the tree.
  std::vector<char> removed(m, 0);
  for (int i = 0; i < m; ++i) {
    if (nodes[i].parent >= 0 && nodes[i].parent_w == 0.0 &&
        child_count[nodes[i].parent] == 1) {
      removed[nodes[i].parent] = 1;
    }
  }
  std::vector<int> new_id(m, -1);
  std::vector<TreeNode> out;
  for (int i = 0; i < m; ++i) {
    if (removed[i]) continue;
    new_id[i] = static_cast<int>(out.size());
    out.push_back(nodes[i]);
  }
  for (TreeNode& n : out) {
    int p = n.parent;
    double w = n.parent_w;
    while (p >= 0 && removed[p]) {
      w += nodes[p].parent_w;
      p = nodes[p].parent;
    }
    n.parent = p >= 0 ? new_id[p] : -1;
    n.parent_w = p >= 0 ? w : 0.0;
  }
  std::vector<int> leaf_of(t.NumLeaves());
  for (int v = 0; v < t.NumLeaves(); ++v) leaf_of[v] = new_id[t.LeafOf(v)];
  return TreeEmbedding::FromNodes(std::move(out), std::move(leaf_of));
}

StretchReport StretchStats(const WeightedGraph& g, int trials, DecompMode mode,
                           const Rng& rng) {
  if (trials < 1) throw std::invalid_argument("stretch needs at least one trial");
  const int n = g.NumVertices();
  StretchReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.log_n = std::log(static_cast<double>(n));

  std::vector<std::pair<int, int>> pair_list;
  if (n <= 256) {
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) pair_list.push_back({u, v});
  } else {
    Rng pick = rng.Substream(0);
    for (int i = 0; i < 20000; ++i) {
      int u = pick.UniformInt(0, n - 1);
      int v = pick.UniformInt(0, n - 1);
      if (u != v) pair_list.push_back({std::min(u, v), std::max(u, v)});
    }
    std::sort(pair_list.begin(), pair_list.end());
    pair_list.erase(std::unique(pair_list.begin(), pair_list.end()), pair_list.end());
  }
  rep.pairs = static_cast<int>(pair_list.size());
  if (pair_list.empty()) {
    rep.max_mean_stretch = 0;
    return rep;
  }

  std::vector<std::vector<double>> dist(n);
  std::vector<char> have(n, 0);
  for (auto [u, v] : pair_list) {
    if (!have[u]) {
      dist[u] = SsspExact(g, {{u, 0.0}}).dist;
      have[u] = 1;
    }
  }

  std::vector<double> sum_stretch(pair_list.size(), 0.0);
  for (int t = 0; t < trials; ++t) {
    Hierarchy h = BuildHierarchy(g, mode, rng.Substream(1, t));
    TreeEmbedding tree = TreeEmbedding::Build(Refine(h, g), g);
    for (size_t i = 0; i < pair_list.size(); ++i) {
      auto [u, v] = pair_list[i];
      double dg = dist[u][v];
      double dt = tree.Distance(u, v);
      if (dt < dg - kDistTol * std::max(1.0, dg)) ++rep.dominance_violations;
      sum_stretch[i] += dt / dg;
    }
  }
  double total = 0;
  for (double s : sum_stretch) {
    double mean = s / trials;
    total += mean;
    rep.max_mean_stretch = std::max(rep.max_mean_stretch, mean);
  }
  rep.avg_mean_stretch = total / static_cast<double>(pair_list.size());
  rep.measured_constant = rep.log_n > 0 ? rep.max_mean_stretch / rep.log_n : 0;
  return rep;
}

}  // namespace membed
