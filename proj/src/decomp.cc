#include "membed/decomp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace membed {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

static Clustering ClusteringFromForest(const WeightedGraph& g, double scale,
                                       const SsspResult& sssp) {
  const int n = g.NumVertices();
  Clustering c;
  c.scale = scale;
  c.forest_parent = sssp.parent;
  c.forest_edge = sssp.parent_edge;
  c.forest_w = sssp.parent_w;
  c.forest_root = sssp.root;

  std::vector<int> cluster_of_root(n, kUnclustered);
  for (int v = 0; v < n; ++v) {
    if (sssp.parent[v] < 0 && cluster_of_root[v] == kUnclustered) {
      cluster_of_root[v] = static_cast<int>(c.centers.size());
      c.centers.push_back(v);
    }
  }
  c.assignment.resize(n);
  for (int v = 0; v < n; ++v) c.assignment[v] = cluster_of_root[sssp.root[v]];

  // Forest-path weights accumulate parent sums in increasing-depth order.
  c.center_dist.assign(n, 0.0);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&sssp](int a, int b) { return sssp.dist[a] < sssp.dist[b]; });
  for (int v : order) {
    if (sssp.parent[v] >= 0)
      c.center_dist[v] = c.center_dist[sssp.parent[v]] + sssp.parent_w[v];
  }
  return c;
}

static std::vector<SourceOffset> ShiftSources(const ShiftVector& shifts) {
  double max_shift = *std::max_element(shifts.delta.begin(), shifts.delta.end());
  std::vector<SourceOffset> sources;
  sources.reserve(shifts.delta.size());
  for (int v = 0; v < static_cast<int>(shifts.delta.size()); ++v)
    sources.push_back({v, max_shift - shifts.delta[v]});
  return sources;
}

Clustering RandomShiftDecompose(const WeightedGraph& g, double scale,
                                const ShiftVector& shifts) {
  if (static_cast<int>(shifts.delta.size()) != g.NumVertices())
    throw std::invalid_argument("shift vector length does not match vertex count");
  if (!(scale > 0)) throw std::invalid_argument("scale must be positive");
  return ClusteringFromForest(g, scale, SsspExact(g, ShiftSources(shifts)));
}

double DefaultBlurEps(int n) { return 1.0 / (40.0 * std::log(static_cast<double>(n))); }

std::vector<char> Blur(const WeightedGraph& g, const std::vector<char>& x, double scale,
                       double eps, Rng& rng) {
  const int n = g.NumVertices();
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("blur set size mismatch");
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("blur eps must lie in (0, 1)");
  int inside = 0;
  for (char b : x) inside += b ? 1 : 0;
  if (inside == 0) throw std::invalid_argument("blur set must be nonempty");
  if (inside == n) throw std::invalid_argument("blur set must be a proper subset");

  int rounds = 1;
  if (scale > 1.0)
    rounds += static_cast<int>(std::ceil(std::log(scale) / std::log(1.0 / eps)));

  std::vector<char> xhat = x;
  for (int i = 0; i < rounds; ++i) {
    double radius = rng.UniformReal(0.0, std::pow(eps, i) * scale / 64.0);
    std::vector<SourceOffset> sources;
    for (int v = 0; v < n; ++v)
      if (xhat[v]) sources.push_back({v, 0.0});
    SsspResult sp = SsspApprox(g, sources, eps * eps);
    for (int v = 0; v < n; ++v)
      if (!xhat[v] && sp.dist[v] <= radius) xhat[v] = 1;
  }
  return xhat;
}

Clustering ApproxDecomposeWithShifts(const WeightedGraph& g, double scale, double eps,
                                     const ShiftVector& shifts, Rng& blur_rng) {
  if (static_cast<int>(shifts.delta.size()) != g.NumVertices())
    throw std::invalid_argument("shift vector length does not match vertex count");
  const int n = g.NumVertices();
  Clustering base =
      ClusteringFromForest(g, scale, SsspApprox(g, ShiftSources(shifts), eps));
  if (base.NumClusters() <= 1) return base;  // empty complement, nothing to erode

  std::vector<int> assignment = base.assignment;
  for (int cid = 0; cid < base.NumClusters(); ++cid) {
    std::vector<char> complement(n);
    for (int v = 0; v < n; ++v) complement[v] = base.assignment[v] != cid;
    Rng cluster_rng = blur_rng.Substream(cid);
    std::vector<char> eroded = Blur(g, complement, scale, eps, cluster_rng);
    for (int v = 0; v < n; ++v)
      if (base.assignment[v] == cid && eroded[v]) assignment[v] = kUnclustered;
  }

  // Drop clusters erased entirely; survivors keep their centers even when the
  // center vertex itself fell to the erosion.
  std::vector<int> remap(base.NumClusters(), kUnclustered);
  Clustering out = base;
  out.centers.clear();
  for (int v = 0; v < n; ++v) {
    int cid = assignment[v];
    if (cid == kUnclustered) continue;
    if (remap[cid] == kUnclustered) {
      remap[cid] = static_cast<int>(out.centers.size());
      out.centers.push_back(base.centers[cid]);
    }
  }
  out.assignment.assign(n, kUnclustered);
  for (int v = 0; v < n; ++v)
    if (assignment[v] != kUnclustered) out.assignment[v] = remap[assignment[v]];
  return out;
}

Clustering ApproxRandomShiftDecompose(const WeightedGraph& g, double scale, double eps,
                                      Rng& rng) {
  if (!(eps > 0)) eps = DefaultBlurEps(g.NumVertices());
  Rng shift_rng = rng.Substream(0);
  Rng blur_rng = rng.Substream(1);
  ShiftVector shifts = SampleShiftsCapped(shift_rng, g.NumVertices(), scale);
  return ApproxDecomposeWithShifts(g, scale, eps, shifts, blur_rng);
}

Clustering BuildClusteringConditioned(const WeightedGraph& g, double scale, DecompMode mode,
                                      double eps, const Rng& base, int budget) {
  const int n = g.NumVertices();
  if (!(eps > 0)) eps = n >= 2 ? DefaultBlurEps(n) : 0.5;
  const double cap = scale * 10.0 * std::log(static_cast<double>(n));
  for (int attempt = 0; attempt < budget; ++attempt) {
    Rng at = base.Substream(attempt);
    Rng shift_rng = at.Substream(0);
    Rng blur_rng = at.Substream(1);
    ShiftVector shifts = SampleShiftsCapped(shift_rng, n, scale);
    Clustering c = mode == DecompMode::kExact
                       ? RandomShiftDecompose(g, scale, shifts)
                       : ApproxDecomposeWithShifts(g, scale, eps, shifts, blur_rng);
    bool ok = true;
    for (int v = 0; v < n && ok; ++v) ok = NearlyLeq(c.center_dist[v], cap);
    if (ok) return c;
  }
  throw std::runtime_error("clustering resample budget exhausted");
}

Clustering SingletonClustering(const WeightedGraph& g) {
  const int n = g.NumVertices();
  Clustering c;
  c.scale = 1.0;
  c.assignment.resize(n);
  std::iota(c.assignment.begin(), c.assignment.end(), 0);
  c.centers = c.assignment;
  c.forest_parent.assign(n, -1);
  c.forest_edge.assign(n, -1);
  c.forest_w.assign(n, 0.0);
  c.center_dist.assign(n, 0.0);
  c.forest_root = c.assignment;
  return c;
}

Clustering TopClustering(const WeightedGraph& g, int root, double scale) {
  SsspResult sp = SsspExact(g, {{root, 0.0}});
  Clustering c = ClusteringFromForest(g, scale, sp);
  return c;
}

Hierarchy BuildHierarchy(const WeightedGraph& g, DecompMode mode, const Rng& rng) {
  Hierarchy h;
  h.L = g.LevelCount();
  h.levels.reserve(h.L + 1);
  h.levels.push_back(SingletonClustering(g));
  for (int l = 1; l < h.L; ++l) h.levels.push_back(BuildHierarchyLevel(g, l, mode, rng));
  if (h.L >= 1) h.levels.push_back(TopClustering(g, 0, std::ldexp(1.0, h.L)));
  return h;
}

Clustering BuildHierarchyLevel(const WeightedGraph& g, int level, DecompMode mode,
                               const Rng& rng) {
  if (level <= 0 || level >= g.LevelCount())
    throw std::invalid_argument("only interior levels are sampled");
  return BuildClusteringConditioned(g, std::ldexp(1.0, level), mode, 0.0,
                                    rng.Substream(1, static_cast<uint64_t>(level)));
}

RefinedHierarchy Refine(const Hierarchy& h, const WeightedGraph& g) {
  const int n = g.NumVertices();
  const int L = h.L;
  RefinedHierarchy rh;
  rh.L = L;
  rh.parts.assign(L + 1, {});
  rh.centers.assign(L + 1, {});
  rh.anchors.assign(L + 1, {});
  rh.parent_block.assign(L + 1, {});

  rh.parts[L].assign(n, 0);
  int top_center = h.levels[L].centers.at(0);
  rh.anchors[L] = {top_center};
  rh.centers[L] = {top_center};

  // Memoized exact distances from each distinct anchor.
  std::vector<std::vector<double>> dist_cache;
  std::vector<int> cache_slot(n, -1);
  auto dist_from = [&](int anchor) -> const std::vector<double>& {
    if (cache_slot[anchor] < 0) {
      cache_slot[anchor] = static_cast<int>(dist_cache.size());
      dist_cache.push_back(SsspExact(g, {{anchor, 0.0}}).dist);
    }
    return dist_cache[cache_slot[anchor]];
  };

  for (int l = L - 1; l >= 0; --l) {
    const Clustering& cl = h.levels[l];
    // Block key: (containing block above, cluster here or blob). First-seen
    // order over ascending vertex ids fixes block numbering.
    std::vector<std::vector<std::pair<int, int>>> seen(rh.centers[l + 1].size());
    rh.parts[l].assign(n, -1);
    std::vector<std::vector<int>> members;
    for (int v = 0; v < n; ++v) {
      int up = rh.parts[l + 1][v];
      int key = cl.assignment[v];
      int block = -1;
      for (auto& [k, b] : seen[up]) {
        if (k == key) {
          block = b;
          break;
        }
      }
      if (block < 0) {
        block = static_cast<int>(members.size());
        seen[up].push_back({key, block});
        members.emplace_back();
        rh.parent_block[l].push_back(up);
        rh.anchors[l].push_back(key == kUnclustered ? rh.anchors[l + 1][up]
                                                    : cl.centers[key]);
      }
      rh.parts[l][v] = block;
      members[block].push_back(v);
    }
    rh.centers[l].resize(members.size());
    for (int b = 0; b < static_cast<int>(members.size()); ++b) {
      if (members[b].size() == 1) {
        rh.centers[l][b] = members[b][0];
        continue;
      }
      const std::vector<double>& d = dist_from(rh.anchors[l][b]);
      int best = members[b][0];
      for (int v : members[b])
        if (d[v] < d[best]) best = v;  // strict: ties keep the smallest id
      rh.centers[l][b] = best;
    }
  }
  return rh;
}

BallGrowthProfile BallGrowth(const WeightedGraph& g, int v) {
  const int n = g.NumVertices();
  if (v < 0 || v >= n) throw std::invalid_argument("vertex out of range");
  const int L = g.LevelCount();

  std::vector<double> ds = SsspExact(g, {{v, 0.0}}).dist;
  std::sort(ds.begin(), ds.end());
  auto ball = [&ds](double radius) -> long {
    double slack = radius + kDistTol * std::max(1.0, radius);
    return std::upper_bound(ds.begin(), ds.end(), slack) - ds.begin();
  };

  BallGrowthProfile prof;
  prof.vertex = v;
  prof.r.assign(L + 1, 0.0);
  prof.delta.assign(L + 1, 0);
  prof.r[0] = 1.0;
  const int xi_cap = static_cast<int>(2.0 * std::log(static_cast<double>(n))) + 2;
  for (int l = 1; l <= L; ++l) {
    double prev_radius = prof.r[l - 1] * std::ldexp(1.0, l - 1);
    long prev_count = ball(prev_radius);
    int delta = 0;
    while (delta < xi_cap) {
      int xi = delta + 1;
      double grown = (prof.r[l - 1] / 2.0 + xi + 2.0) * std::ldexp(1.0, l);
      if (static_cast<double>(ball(grown)) >=
          std::exp(xi / 2.0) * static_cast<double>(prev_count)) {
        delta = xi;
      } else {
        break;
      }
    }
    prof.delta[l] = delta;
    prof.r[l] = prof.r[l - 1] / 2.0 + delta + 2.0;
  }
  return prof;
}

}  // namespace membed
