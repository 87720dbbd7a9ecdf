#include "membed/graph.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace membed {

namespace {

[[noreturn]] void Fail(const std::string& msg) { throw std::invalid_argument(msg); }

[[noreturn]] void FailAtLine(int line, const std::string& msg) {
  Fail("line " + std::to_string(line) + ": " + msg);
}

}  // namespace

WeightedGraph::WeightedGraph(int n, std::vector<GraphEdge> edges) : n_(n) {
  if (n <= 0) Fail("graph needs at least one vertex");
  std::map<std::pair<int, int>, double> collapsed;
  for (const GraphEdge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      Fail("edge endpoint out of range");
    if (e.u == e.v) Fail("self-loop at vertex " + std::to_string(e.u + 1));
    if (!(e.w >= 1.0))
      Fail("edge weight " + std::to_string(e.w) + " outside [1, W]");
    auto key = std::minmax(e.u, e.v);
    auto [it, fresh] = collapsed.emplace(key, e.w);
    if (!fresh) it->second = std::min(it->second, e.w);
  }
  edges_.reserve(collapsed.size());
  for (const auto& [key, w] : collapsed) {
    edges_.push_back({key.first, key.second, w});
    max_weight_ = std::max(max_weight_, w);
  }
  if (!IsConnected(n_, edges_)) Fail("graph is not connected");
  adj_.resize(n_);
  for (int e = 0; e < NumEdges(); ++e) {
    adj_[edges_[e].u].push_back({edges_[e].v, e, edges_[e].w});
    adj_[edges_[e].v].push_back({edges_[e].u, e, edges_[e].w});
  }
}

int WeightedGraph::LevelCount() const {
  double scaled = static_cast<double>(n_) * max_weight_;
  if (scaled <= 1.0) return 0;
  return std::max(0, static_cast<int>(std::ceil(std::log2(scaled) - 1e-12)));
}

uint64_t WeightedGraph::Hash() const {
  uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](uint64_t x) {
    h ^= x;
    h *= 0x100000001b3ull;
  };
  mix(static_cast<uint64_t>(n_));
  for (const GraphEdge& e : edges_) {
    mix(static_cast<uint64_t>(e.u));
    mix(static_cast<uint64_t>(e.v));
    uint64_t bits;
    static_assert(sizeof(bits) == sizeof(e.w));
    std::memcpy(&bits, &e.w, sizeof(bits));
    mix(bits);
  }
  return h;
}

bool IsConnected(int n, const std::vector<GraphEdge>& edges) {
  if (n <= 0) return false;
  std::vector<std::vector<int>> adj(n);
  for (const GraphEdge& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int to : adj[v]) {
      if (!seen[to]) {
        seen[to] = 1;
        ++reached;
        stack.push_back(to);
      }
    }
  }
  return reached == n;
}

namespace {

WeightedGraph ParseEdgeList(std::istream& in) {
  std::string line;
  int lineno = 0;
  int n = -1, m = -1;
  std::vector<GraphEdge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    if (line.empty() || line[0] == '#') continue;
    if (n < 0) {
      if (!(ls >> n >> m) || n <= 0 || m < 0)
        FailAtLine(lineno, "expected header \"n m\"");
      edges.reserve(m);
      continue;
    }
    int u, v;
    double w;
    if (!(ls >> u >> v >> w)) FailAtLine(lineno, "expected \"u v w\"");
    if (u < 1 || u > n || v < 1 || v > n)
      FailAtLine(lineno, "vertex id out of range");
    if (w < 1.0) FailAtLine(lineno, "edge weight below 1");
    edges.push_back({u - 1, v - 1, w});
  }
  if (n < 0) Fail("empty input");
  if (static_cast<int>(edges.size()) != m)
    Fail("header declared " + std::to_string(m) + " edges, found " +
         std::to_string(edges.size()));
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph ParseDimacs(std::istream& in) {
  std::string line;
  int lineno = 0;
  int n = -1, m = -1;
  std::vector<GraphEdge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    char tag;
    ls >> tag;
    if (tag == 'p') {
      std::string kind;
      if (!(ls >> kind >> n >> m) || kind != "sp" || n <= 0 || m < 0)
        FailAtLine(lineno, "expected \"p sp n m\"");
    } else if (tag == 'a') {
      if (n < 0) FailAtLine(lineno, "arc before problem line");
      int u, v;
      double w;
      if (!(ls >> u >> v >> w)) FailAtLine(lineno, "expected \"a u v w\"");
      if (u < 1 || u > n || v < 1 || v > n)
        FailAtLine(lineno, "vertex id out of range");
      if (w < 1.0) FailAtLine(lineno, "arc weight below 1");
      edges.push_back({u - 1, v - 1, w});
    } else {
      FailAtLine(lineno, std::string("unknown record type '") + tag + "'");
    }
  }
  if (n < 0) Fail("missing problem line");
  return WeightedGraph(n, std::move(edges));
}

}  // namespace

WeightedGraph ParseGraph(std::istream& in, GraphFormat format) {
  return format == GraphFormat::kEdgeList ? ParseEdgeList(in) : ParseDimacs(in);
}

WeightedGraph ParseGraphString(const std::string& text, GraphFormat format) {
  std::istringstream in(text);
  return ParseGraph(in, format);
}

WeightedGraph ParseGraphFile(const std::string& path, GraphFormat format) {
  std::ifstream in(path);
  if (!in) Fail("cannot open " + path);
  return ParseGraph(in, format);
}

std::string SerializeEdgeList(const WeightedGraph& g) {
  std::ostringstream out;
  out << g.NumVertices() << ' ' << g.NumEdges() << '\n';
  out.precision(17);
  for (const GraphEdge& e : g.Edges())
    out << e.u + 1 << ' ' << e.v + 1 << ' ' << e.w << '\n';
  return out.str();
}

}  // namespace membed
