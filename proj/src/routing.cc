#include "membed/routing.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace membed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCoeffPrune = 1e-15;

// 6 bits level | 13 bits copy a | 13 bits copy b | 16 bits cluster a | 16 bits cluster b
uint64_t PackKey(int l, int a, int b, int ca, int cb) {
  return (static_cast<uint64_t>(l) << 58) | (static_cast<uint64_t>(a) << 45) |
         (static_cast<uint64_t>(b) << 32) | (static_cast<uint64_t>(ca) << 16) |
         static_cast<uint64_t>(cb);
}

void UnpackKey(uint64_t key, int* l, int* a, int* b, int* ca, int* cb) {
  *l = static_cast<int>(key >> 58);
  *a = static_cast<int>((key >> 45) & 0x1fff);
  *b = static_cast<int>((key >> 32) & 0x1fff);
  *ca = static_cast<int>((key >> 16) & 0xffff);
  *cb = static_cast<int>(key & 0xffff);
}

}  // namespace

double L1Norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += std::abs(x);
  return s;
}

double FlowCost(const Flow& f) { return L1Norm(f.values); }

std::vector<double> Divergence(const WeightedGraph& g, const Flow& f) {
  std::vector<double> div(g.NumVertices(), 0.0);
  for (int e = 0; e < g.NumEdges(); ++e) {
    div[g.Edge(e).u] += f.values[e];
    div[g.Edge(e).v] -= f.values[e];
  }
  return div;
}

void CheckBalanced(const Demand& d) {
  double total = 0;
  for (double x : d.values) total += x;
  if (std::abs(total) > 1e-9 * std::max(1e-300, L1Norm(d.values)))
    throw std::invalid_argument("demand does not sum to zero");
}

PValues ComputePValues(const WeightedGraph& g, const Clustering& c, int level) {
  const int n = g.NumVertices();
  const double scale = std::ldexp(1.0, level);
  PValues out;
  out.boundary_dist.assign(n, 0.0);
  out.p.assign(n, 0.0);
  for (int cid = 0; cid < c.NumClusters(); ++cid) {
    std::vector<char> inside(n, 0);
    for (int v = 0; v < n; ++v) inside[v] = c.assignment[v] == cid;
    // The shortest path to the nearest outside vertex stays inside the
    // cluster until its final hop, so seeding the inside endpoints of cross
    // edges with the cheapest hop gives the exact boundary distance.
    std::vector<SourceOffset> seeds;
    for (int v = 0; v < n; ++v) {
      if (!inside[v]) continue;
      double best = kInf;
      for (const AdjEntry& a : g.Neighbors(v))
        if (!inside[a.to]) best = std::min(best, a.w);
      if (best < kInf) seeds.push_back({v, best});
    }
    if (seeds.empty()) {  // cluster covers V; the complement is empty
      for (int v = 0; v < n; ++v) {
        if (!inside[v]) continue;
        out.boundary_dist[v] = kInf;
        out.p[v] = 1.0;
      }
      continue;
    }
    SsspResult sp = SsspExactMasked(g, seeds, inside);
    for (int v = 0; v < n; ++v) {
      if (!inside[v]) continue;
      out.boundary_dist[v] = sp.dist[v];
      out.p[v] = std::min(1.0, sp.dist[v] / scale);
    }
  }
  return out;
}

int DcntFor(int n, bool base_lg) {
  double lg = base_lg ? std::log2(static_cast<double>(n)) : std::log(static_cast<double>(n));
  return std::max(1, static_cast<int>(std::ceil(36.0 * lg)));
}

int RoutingOperator::Copies(int level) const {
  return (level == 0 || level == L_) ? 1 : dcnt_;
}

const Clustering& RoutingOperator::LevelClustering(int level, int copy) const {
  return levels_[level][copy];
}

const PathCollection& RoutingOperator::Paths(int level, int copy) const {
  return paths_[level][copy];
}

double RoutingOperator::PValue(int level, int copy, int v) const {
  if (level == 0 || level == L_) return 1.0;
  return p_[level][copy][v];
}

double RoutingOperator::WValue(int level, int v) const {
  if (level == 0 || level == L_) return dcnt_;
  double w = 0;
  for (int d = 0; d < dcnt_; ++d) w += p_[level][d][v];
  return w;
}

double RoutingOperator::QValue(int level, int copy, int v) const {
  if (level == 0 || level == L_) return 1.0 / dcnt_;
  return q_[level][copy][v];
}

double RoutingOperator::CenterDist(int level, int copy, int v) const {
  if (level == 0) return 0.0;
  return levels_[level][copy].center_dist[v];
}

void RoutingOperator::EnumerateCoefficients(int v, const CoefficientFn& fn) const {
  for (int l = 0; l < L_; ++l) {
    double mult_a = (l == 0) ? dcnt_ : 1.0;
    double mult_b = (l + 1 == L_) ? dcnt_ : 1.0;
    for (int a = 0; a < Copies(l); ++a) {
      int ca = l == 0 ? v : levels_[l][a].assignment[v];
      if (ca == kUnclustered) continue;
      double qa = QValue(l, a, v);
      if (qa <= 0) continue;
      for (int b = 0; b < Copies(l + 1); ++b) {
        int cb = (l + 1 == L_) ? 0 : levels_[l + 1][b].assignment[v];
        if (cb == kUnclustered) continue;
        double qb = QValue(l + 1, b, v);
        if (qb <= 0) continue;
        fn(l, a, b, ca, cb, qa * qb, mult_a * mult_b);
      }
    }
  }
}

int RoutingOperator::FindTuple(uint64_t key) const {
  auto it = std::lower_bound(tuple_key_.begin(), tuple_key_.end(), key);
  if (it == tuple_key_.end() || *it != key)
    throw std::logic_error("routing tuple missing for enumerated coefficient");
  return static_cast<int>(it - tuple_key_.begin());
}

RoutingOperator::TupleView RoutingOperator::Tuple(int idx) const {
  TupleView t;
  UnpackKey(tuple_key_[idx], &t.l, &t.a, &t.b, &t.cluster_a, &t.cluster_b);
  t.witness = tuple_witness_[idx];
  t.weight = tuple_weight_[idx];
  return t;
}

std::vector<std::pair<int, int8_t>> RoutingOperator::ExpandTuple(int idx) const {
  TupleView t = Tuple(idx);
  std::vector<std::pair<int, int8_t>> walk;
  if (t.l >= 1) {
    const PathCollection& pc = paths_[t.l][t.a];
    for (const SegmentRef& sr : pc.DecomposeRootPath(t.witness))
      for (auto [e, sign] : pc.SegmentEdges(sr.segment)) walk.push_back({e, sign});
  }
  const PathCollection& up = (t.l + 1 == L_) ? paths_[L_][0] : paths_[t.l + 1][t.b];
  std::vector<std::pair<int, int8_t>> leg2;
  for (const SegmentRef& sr : up.DecomposeRootPath(t.witness))
    for (auto [e, sign] : up.SegmentEdges(sr.segment)) leg2.push_back({e, sign});
  for (size_t i = leg2.size(); i-- > 0;)
    walk.push_back({leg2[i].first, static_cast<int8_t>(-leg2[i].second)});
  return walk;
}

void RoutingOperator::BuildDerived() {
  const int n = graph_.NumVertices();
  if (n > 0xffff) throw std::invalid_argument("routing operator supports n <= 65535");
  if (L_ > 63 || dcnt_ > 0x1fff)
    throw std::invalid_argument("routing operator level/copy bounds exceeded");

  p_.assign(L_ + 1, {});
  q_.assign(L_ + 1, {});
  paths_.assign(L_ + 1, {});
  for (int l = 1; l < L_; ++l) {
    p_[l].resize(dcnt_);
    q_[l].resize(dcnt_);
    for (int d = 0; d < dcnt_; ++d) p_[l][d] = ComputePValues(graph_, levels_[l][d], l).p;
    for (int v = 0; v < n; ++v) {
      double w = 0;
      for (int d = 0; d < dcnt_; ++d) w += p_[l][d][v];
      if (!(w >= dcnt_ / 16.0 && w <= dcnt_ + 1e-9))
        throw std::runtime_error("level weight outside [Dcnt/16, Dcnt]");
    }
    for (int d = 0; d < dcnt_; ++d) {
      q_[l][d].assign(n, 0.0);
      for (int v = 0; v < n; ++v) {
        double w = WValue(l, v);
        q_[l][d][v] = p_[l][d][v] / w;
      }
    }
  }
  for (int l = 1; l <= L_; ++l) {
    paths_[l].resize(levels_[l].size());
    for (size_t d = 0; d < levels_[l].size(); ++d)
      paths_[l][d] = PathCollection::Build(graph_, levels_[l][d]);
  }

  // Witness per used (l, a, b, C, C'): the vertex minimizing the summed
  // forest distances to both centers, ties to the smallest id.
  std::unordered_map<uint64_t, std::pair<int, double>> best;
  for (int v = 0; v < n; ++v) {
    EnumerateCoefficients(v, [&](int l, int a, int b, int ca, int cb, double f, double mult) {
      if (f * mult < kCoeffPrune) return;
      double score = CenterDist(l, a, v) + CenterDist(l + 1, b, v);
      uint64_t key = PackKey(l, a, b, ca, cb);
      auto [it, fresh] = best.try_emplace(key, std::pair<int, double>{v, score});
      if (!fresh && score < it->second.second) it->second = {v, score};
    });
  }
  tuple_key_.clear();
  tuple_key_.reserve(best.size());
  for (const auto& [key, wv] : best) tuple_key_.push_back(key);
  std::sort(tuple_key_.begin(), tuple_key_.end());
  tuple_witness_.resize(tuple_key_.size());
  tuple_weight_.resize(tuple_key_.size());
  for (size_t i = 0; i < tuple_key_.size(); ++i) {
    const auto& wv = best.at(tuple_key_[i]);
    tuple_witness_[i] = wv.first;
    tuple_weight_[i] = wv.second;
  }
}

RoutingOperator BuildRoutingOperator(const WeightedGraph& g, DecompMode mode, const Rng& rng,
                                     const RoutingConfig& cfg) {
  const int n = g.NumVertices();
  RoutingOperator op;
  op.graph_ = g;
  op.L_ = g.LevelCount();
  op.dcnt_ = DcntFor(n, cfg.dcnt_base_lg);
  op.levels_.assign(op.L_ + 1, {});
  op.levels_[0] = {SingletonClustering(g)};
  if (op.L_ >= 1) op.levels_[op.L_] = {TopClustering(g, 0, std::ldexp(1.0, op.L_))};

  for (int l = 1; l < op.L_; ++l) {
    bool ok = false;
    for (int attempt = 0; attempt < cfg.level_resample_budget && !ok; ++attempt) {
      Rng level_rng = rng.Substream(2, static_cast<uint64_t>(l), attempt);
      std::vector<Clustering> copies;
      copies.reserve(op.dcnt_);
      for (int d = 0; d < op.dcnt_; ++d)
        copies.push_back(BuildClusteringConditioned(g, std::ldexp(1.0, l), mode, cfg.eps,
                                                    level_rng.Substream(d)));
      std::vector<double> w(n, 0.0);
      for (int d = 0; d < op.dcnt_; ++d) {
        PValues pv = ComputePValues(g, copies[d], l);
        for (int v = 0; v < n; ++v) w[v] += pv.p[v];
      }
      ok = true;
      for (int v = 0; v < n && ok; ++v)
        ok = w[v] >= op.dcnt_ / 16.0 && w[v] <= op.dcnt_ + 1e-9;
      if (ok) op.levels_[l] = std::move(copies);
    }
    if (!ok) throw std::runtime_error("routing level resample budget exhausted");
  }
  op.BuildDerived();
  return op;
}

RoutingOperator AssembleRoutingOperator(WeightedGraph g, int dcnt,
                                        std::vector<std::vector<Clustering>> levels) {
  RoutingOperator op;
  op.graph_ = std::move(g);
  op.L_ = static_cast<int>(levels.size()) - 1;
  if (op.L_ != op.graph_.LevelCount())
    throw std::invalid_argument("level count does not match the graph");
  op.dcnt_ = dcnt;
  op.levels_ = std::move(levels);
  op.BuildDerived();
  return op;
}

Flow RoutingOperator::Apply(const Demand& d) const {
  const int n = graph_.NumVertices();
  if (static_cast<int>(d.values.size()) != n)
    throw std::invalid_argument("demand size does not match vertex count");
  CheckBalanced(d);
  Flow f;
  f.values.assign(graph_.NumEdges(), 0.0);
  if (L_ == 0) return f;

  std::vector<double> tuple_flow(tuple_key_.size(), 0.0);
  std::vector<char> touched_flag(tuple_key_.size(), 0);
  std::vector<int> touched;
  for (int v = 0; v < n; ++v) {
    if (d.values[v] == 0.0) continue;
    EnumerateCoefficients(v, [&](int l, int a, int b, int ca, int cb, double fv, double mult) {
      if (fv * mult < kCoeffPrune) return;
      int idx = FindTuple(PackKey(l, a, b, ca, cb));
      if (!touched_flag[idx]) {
        touched_flag[idx] = 1;
        touched.push_back(idx);
      }
      tuple_flow[idx] += fv * mult * d.values[v];
    });
  }
  for (int idx : touched) {
    double phi = tuple_flow[idx];
    if (phi == 0.0) continue;
    for (auto [e, sign] : ExpandTuple(idx)) f.values[e] += phi * sign;
  }
  return f;
}

std::vector<double> RoutingOperator::ApplyTranspose(const std::vector<double>& y) const {
  const int n = graph_.NumVertices();
  if (static_cast<int>(y.size()) != graph_.NumEdges())
    throw std::invalid_argument("edge vector size does not match edge count");
  std::vector<double> out(n, 0.0);
  if (L_ == 0) return out;

  // Per-segment signed sums of y, then per-tuple path values.
  std::vector<std::vector<std::vector<double>>> sseg(L_ + 1);
  for (int l = 1; l <= L_; ++l) {
    sseg[l].resize(paths_[l].size());
    for (size_t dcopy = 0; dcopy < paths_[l].size(); ++dcopy) {
      const PathCollection& pc = paths_[l][dcopy];
      sseg[l][dcopy].assign(pc.NumSegments(), 0.0);
      for (int s = 0; s < pc.NumSegments(); ++s)
        for (auto [e, sign] : pc.SegmentEdges(s)) sseg[l][dcopy][s] += sign * y[e];
    }
  }
  std::vector<double> tval(tuple_key_.size(), 0.0);
  for (size_t i = 0; i < tuple_key_.size(); ++i) {
    TupleView t = Tuple(i);
    double val = 0;
    if (t.l >= 1) {
      const PathCollection& pc = paths_[t.l][t.a];
      for (const SegmentRef& sr : pc.DecomposeRootPath(t.witness))
        val += sseg[t.l][t.a][sr.segment];
    }
    int up_level = t.l + 1;
    int up_copy = (up_level == L_) ? 0 : t.b;
    const PathCollection& pc2 = paths_[up_level][up_copy];
    for (const SegmentRef& sr : pc2.DecomposeRootPath(t.witness))
      val -= sseg[up_level][up_copy][sr.segment];
    tval[i] = val;
  }
  for (int v = 0; v < n; ++v) {
    EnumerateCoefficients(v, [&](int l, int a, int b, int ca, int cb, double fv, double mult) {
      if (fv * mult < kCoeffPrune) return;
      out[v] += fv * mult * tval[FindTuple(PackKey(l, a, b, ca, cb))];
    });
  }
  return out;
}

RatioReport VerifyCompetitiveRatio(const RoutingOperator& op, double threshold) {
  const WeightedGraph& g = op.Graph();
  const int n = g.NumVertices();
  RatioReport rep;
  rep.threshold = threshold;
  rep.per_edge.assign(g.NumEdges(), 0.0);
  rep.histogram.assign(8, 0);

  std::vector<std::vector<double>> dist(n);
  std::vector<char> have(n, 0);
  Demand d;
  d.values.assign(n, 0.0);
  for (int e = 0; e < g.NumEdges(); ++e) {
    auto [u, v, w] = g.Edge(e);
    if (!have[u]) {
      dist[u] = SsspExact(g, {{u, 0.0}}).dist;
      have[u] = 1;
    }
    d.values[u] = 1.0;
    d.values[v] = -1.0;
    double cost = FlowCost(op.Apply(d));
    d.values[u] = 0.0;
    d.values[v] = 0.0;
    double ratio = cost / dist[u][v];
    rep.per_edge[e] = ratio;
    int bucket = ratio < 1 ? 0 : std::min<int>(7, static_cast<int>(std::log2(ratio)) + 1);
    ++rep.histogram[bucket];
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.argmax_edge = e;
    }
  }
  rep.pass = rep.max_ratio <= threshold;
  return rep;
}

CertifiedOperator VerifyOrRebuild(const WeightedGraph& g, DecompMode mode, const Rng& rng,
                                  double threshold, const RoutingConfig& cfg, int budget) {
  if (!(threshold > 1.0)) throw std::invalid_argument("threshold must exceed 1");
  for (int attempt = 0; attempt < budget; ++attempt) {
    RoutingOperator op = BuildRoutingOperator(g, mode, rng.Substream(3, attempt), cfg);
    RatioReport rep = VerifyCompetitiveRatio(op, threshold);
    if (rep.pass) return {std::move(op), std::move(rep), attempt + 1};
  }
  throw std::runtime_error("routing verification budget exhausted");
}

std::vector<double> MeasureCoefficientLipschitz(const RoutingOperator& op) {
  const WeightedGraph& g = op.Graph();
  const int n = g.NumVertices();
  std::vector<double> kappa(std::max(1, op.Levels()), 0.0);
  std::vector<std::vector<double>> dist(n);
  std::vector<char> have(n, 0);
  for (int e = 0; e < g.NumEdges(); ++e) {
    auto [u, v, w] = g.Edge(e);
    if (!have[u]) {
      dist[u] = SsspExact(g, {{u, 0.0}}).dist;
      have[u] = 1;
    }
    std::unordered_map<uint64_t, double> diff;
    op.EnumerateCoefficients(v, [&](int l, int a, int b, int ca, int cb, double f, double m) {
      diff[PackKey(l, a, b, ca, cb)] += f * m;
    });
    op.EnumerateCoefficients(u, [&](int l, int a, int b, int ca, int cb, double f, double m) {
      diff[PackKey(l, a, b, ca, cb)] -= f * m;
    });
    std::vector<double> per_level(std::max(1, op.Levels()), 0.0);
    for (const auto& [key, val] : diff) per_level[key >> 58] += std::abs(val);
    for (int l = 0; l < op.Levels(); ++l)
      kappa[l] = std::max(kappa[l], per_level[l] * std::ldexp(1.0, l) / dist[u][v]);
  }
  return kappa;
}

}  // namespace membed
