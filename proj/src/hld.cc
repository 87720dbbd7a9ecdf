#include "membed/hld.h"

#include <algorithm>
#include <stdexcept>

namespace membed {

namespace {

int CeilLog2(int x) {
  int s = 0;
  while ((1 << s) < x) ++s;
  return s;
}

}  // namespace

PathCollection PathCollection::Build(const WeightedGraph& g, const Clustering& forest) {
  const int n = g.NumVertices();
  PathCollection pc;
  pc.chain_of_.assign(n, -1);
  pc.pos_in_chain_.assign(n, 0);

  std::vector<std::vector<int>> children(n);
  std::vector<int> roots;
  for (int v = 0; v < n; ++v) {
    if (forest.forest_parent[v] < 0)
      roots.push_back(v);
    else
      children[forest.forest_parent[v]].push_back(v);
  }

  // Subtree sizes over a BFS order, then the heavy child per vertex
  // (largest subtree, ties to the smallest id; children are listed ascending).
  std::vector<int> bfs;
  bfs.reserve(n);
  for (int r : roots) bfs.push_back(r);
  for (size_t i = 0; i < bfs.size(); ++i)
    for (int c : children[bfs[i]]) bfs.push_back(c);
  std::vector<int> subtree(n, 1);
  for (size_t i = bfs.size(); i-- > 0;) {
    int v = bfs[i];
    if (forest.forest_parent[v] >= 0) subtree[forest.forest_parent[v]] += subtree[v];
  }
  std::vector<int> heavy(n, -1);
  for (int v = 0; v < n; ++v) {
    for (int c : children[v])
      if (heavy[v] < 0 || subtree[c] > subtree[heavy[v]]) heavy[v] = c;
  }

  // Chains: a head is a root or a non-heavy child; each chain runs down the
  // heavy edges and is prefixed with the head's parent so chains cover every
  // forest edge exactly once.
  for (int head : bfs) {
    int parent = forest.forest_parent[head];
    if (parent >= 0 && heavy[parent] == head) continue;
    Chain chain;
    chain.has_top = parent >= 0;
    if (chain.has_top) chain.verts.push_back(parent);
    for (int v = head; v >= 0; v = heavy[v]) {
      chain.verts.push_back(v);
      pc.chain_of_[v] = static_cast<int>(pc.chains_.size());
      pc.pos_in_chain_[v] = static_cast<int>(chain.verts.size());
    }
    int steps = static_cast<int>(chain.verts.size()) - 1;
    chain.prefix_w.assign(steps + 1, 0.0);
    for (int t = 0; t < steps; ++t) {
      int child = chain.verts[t + 1];  // edge (verts[t] -> child) is child's parent edge
      int e = forest.forest_edge[child];
      chain.edge_ids.push_back(e);
      chain.edge_sign.push_back(g.Edge(e).u == chain.verts[t] ? 1 : -1);
      chain.prefix_w[t + 1] = chain.prefix_w[t] + forest.forest_w[child];
    }
    int len = static_cast<int>(chain.verts.size());
    chain.max_scale = CeilLog2(len);
    chain.seg_offset.resize(chain.max_scale + 1);
    for (int i = 0; i <= chain.max_scale; ++i) {
      chain.seg_offset[i] = pc.num_segments_;
      int blocks = (len + (1 << i) - 1) >> i;
      for (int j = 0; j < blocks; ++j) {
        pc.segments_.push_back({static_cast<int>(pc.chains_.size()), j * (1 << i) + 1,
                                std::min((j + 1) * (1 << i), len)});
      }
      pc.num_segments_ += blocks;
    }
    pc.chains_.push_back(std::move(chain));
  }
  return pc;
}

int PathCollection::SegId(int chain, int scale, int block) const {
  return chains_[chain].seg_offset[scale] + block;
}

std::vector<std::pair<int, int8_t>> PathCollection::SegmentEdges(int s) const {
  const PathSegment& seg = segments_[s];
  const Chain& chain = chains_[seg.chain];
  std::vector<std::pair<int, int8_t>> out;
  int from = seg.first == 1 ? 1 : seg.first - 1;  // step entering position `first`
  for (int t = from; t <= seg.last - 1; ++t)
    out.push_back({chain.edge_ids[t - 1], chain.edge_sign[t - 1]});
  return out;
}

double PathCollection::SegmentWeight(int s) const {
  const PathSegment& seg = segments_[s];
  const Chain& chain = chains_[seg.chain];
  int from = seg.first == 1 ? 1 : seg.first - 1;
  return chain.prefix_w[seg.last - 1] - chain.prefix_w[from - 1];
}

void PathCollection::AppendPrefixTiles(int chain, int q, std::vector<SegmentRef>* out) const {
  // Binary decomposition of [1..q]: tile sizes are q's set bits, descending.
  // Every tile after the first carries its entering edge, so the expansion is
  // the gap-free walk from position 1 to q.
  if (q <= 1) return;
  int pos = 1;
  for (int bit = 30; bit >= 0; --bit) {
    if (!(q & (1 << bit))) continue;
    int size = 1 << bit;
    out->push_back({SegId(chain, bit, (pos - 1) >> bit), 1});
    pos += size;
  }
}

std::vector<SegmentRef> PathCollection::DecomposeRootPath(int v) const {
  std::vector<std::pair<int, int>> hops;  // (chain, position), collected bottom-up
  int c = chain_of_[v];
  int q = pos_in_chain_[v];
  while (true) {
    hops.push_back({c, q});
    if (!chains_[c].has_top) break;
    int up = chains_[c].verts[0];
    c = chain_of_[up];
    q = pos_in_chain_[up];
  }
  std::vector<SegmentRef> out;
  for (size_t i = hops.size(); i-- > 0;) AppendPrefixTiles(hops[i].first, hops[i].second, &out);
  return out;
}

int PathCollection::ChainsOnRootPath(int v) const {
  int count = 1;
  int c = chain_of_[v];
  while (chains_[c].has_top) {
    ++count;
    c = chain_of_[chains_[c].verts[0]];
  }
  return count;
}

std::vector<int> PathCollection::DecomposeInterval(int chain, int a, int b) const {
  const int len = ChainLen(chain);
  if (a < 1 || b > len || a > b) throw std::invalid_argument("bad interval");
  std::vector<int> out;
  int pos = a;
  while (pos <= b) {
    int best = 0;
    for (int i = 1; i <= chains_[chain].max_scale; ++i) {
      if ((pos - 1) % (1 << i) != 0) break;
      int end = std::min(pos + (1 << i) - 1, len);
      if (end > b) break;
      best = i;
    }
    out.push_back(SegId(chain, best, (pos - 1) >> best));
    pos = std::min(pos + (1 << best) - 1, len) + 1;
  }
  return out;
}

}  // namespace membed
