#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "membed/decomp.h"
#include "membed/graph.h"

namespace membed {

struct SegmentRef {
  int segment = 0;
  int8_t dir = 1;  // +1 walks the segment toward the leaves, -1 reversed
};

// One dyadic block of a heavy path: vertex positions [first..last] (1-based).
// Its edge run starts at the edge entering `first` (so adjacent blocks of a
// prefix concatenate into a gap-free walk) except when first == 1.
struct PathSegment {
  int chain = 0;
  int first = 0;
  int last = 0;
};

// Heavy-light decomposition of a clustering forest plus the dyadic segment
// index over its paths. Each heavy path starts at the parent of its chain
// head (when one exists), which makes the paths edge-disjoint and an exact
// cover of the forest. Any root-to-vertex walk crosses at most lg(n)+1 paths
// and decomposes into O(lg^2 n) indexed segments.
class PathCollection {
 public:
  PathCollection() = default;
  static PathCollection Build(const WeightedGraph& g, const Clustering& forest);

  int NumChains() const { return static_cast<int>(chains_.size()); }
  int NumSegments() const { return num_segments_; }
  const PathSegment& Segment(int s) const { return segments_[s]; }
  double SegmentWeight(int s) const;
  // (graph edge id, sign) per step of the segment's forward walk; sign is +1
  // when the walk traverses the edge from the low vertex id to the high one.
  std::vector<std::pair<int, int8_t>> SegmentEdges(int s) const;

  // Ordered signed segments whose forward concatenation is the forest walk
  // from v's root (its cluster center) down to v. Empty when v is a root.
  std::vector<SegmentRef> DecomposeRootPath(int v) const;

  // Aligned blocks whose vertex sets exactly tile positions [a..b] of a
  // chain; at most 2 ceil(lg |P|) + 2 of them.
  std::vector<int> DecomposeInterval(int chain, int a, int b) const;

  int ChainOf(int v) const { return chain_of_[v]; }
  int PosInChain(int v) const { return pos_in_chain_[v]; }
  int ChainLen(int c) const { return static_cast<int>(chains_[c].verts.size()); }
  const std::vector<int>& ChainVerts(int c) const { return chains_[c].verts; }
  // Number of heavy paths the root-to-v walk passes through.
  int ChainsOnRootPath(int v) const;

 private:
  struct Chain {
    std::vector<int> verts;        // [top, ...]; top = parent(head) when head != root
    std::vector<int> edge_ids;     // edge_ids[t] connects verts[t] and verts[t+1]
    std::vector<int8_t> edge_sign;
    std::vector<double> prefix_w;  // prefix_w[t] = weight of the first t steps
    std::vector<int> seg_offset;   // per scale, offset into global segment ids
    int max_scale = 0;
    bool has_top = false;          // verts[0] belongs to the chain above
  };

  int SegId(int chain, int scale, int block) const;
  void AppendPrefixTiles(int chain, int q, std::vector<SegmentRef>* out) const;

  std::vector<Chain> chains_;
  std::vector<int> chain_of_;
  std::vector<int> pos_in_chain_;  // 1-based position inside the own chain
  std::vector<PathSegment> segments_;
  int num_segments_ = 0;
};

}  // namespace membed
