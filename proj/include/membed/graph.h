#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace membed {

// One undirected edge, stored once with u < v.
struct GraphEdge {
  int u = 0;
  int v = 0;
  double w = 1.0;
};

struct AdjEntry {
  int to;
  int edge;  // index into Edges()
  double w;
};

// Undirected connected graph with edge weights in [1, W]. Vertices are
// 0-based internally; the file formats use 1-based ids. Parallel edges are
// collapsed to the minimum weight on construction; self-loops, weights below
// 1 and disconnected inputs are rejected. Immutable once built.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(int n, std::vector<GraphEdge> edges);

  int NumVertices() const { return n_; }
  int NumEdges() const { return static_cast<int>(edges_.size()); }
  double MaxWeight() const { return max_weight_; }
  const std::vector<GraphEdge>& Edges() const { return edges_; }
  const GraphEdge& Edge(int e) const { return edges_[e]; }
  const std::vector<AdjEntry>& Neighbors(int v) const { return adj_[v]; }

  // Number of dyadic scales: ceil(lg(n * W)), never negative.
  int LevelCount() const;

  // Stable content hash used to tag serialized artifacts.
  uint64_t Hash() const;

 private:
  int n_ = 0;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<AdjEntry>> adj_;
  double max_weight_ = 1.0;
};

bool IsConnected(int n, const std::vector<GraphEdge>& edges);

enum class GraphFormat { kEdgeList, kDimacs };

// Edge-list: first line "n m", then m lines "u v w". DIMACS shortest-path:
// "p sp n m" and "a u v w" lines, comments starting with 'c'; directed arcs
// are symmetrized. Malformed input raises std::invalid_argument naming the
// offending line.
WeightedGraph ParseGraph(std::istream& in, GraphFormat format = GraphFormat::kEdgeList);
WeightedGraph ParseGraphString(const std::string& text, GraphFormat format = GraphFormat::kEdgeList);
WeightedGraph ParseGraphFile(const std::string& path, GraphFormat format = GraphFormat::kEdgeList);

// Emits the canonical edge-list form (1-based ids, edges sorted by (u, v)).
std::string SerializeEdgeList(const WeightedGraph& g);

}  // namespace membed
