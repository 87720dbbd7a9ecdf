#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "membed/decomp.h"
#include "membed/graph.h"
#include "membed/hld.h"
#include "membed/rng.h"

namespace membed {

// Balanced per-vertex supply/sink vector.
struct Demand {
  std::vector<double> values;
};

// Signed per-edge flow under the global orientation low id -> high id.
struct Flow {
  std::vector<double> values;
};

double L1Norm(const std::vector<double>& v);
double FlowCost(const Flow& f);  // sum of |f(e)| (unit-cost l1)
// Net out-flow per vertex.
std::vector<double> Divergence(const WeightedGraph& g, const Flow& f);
void CheckBalanced(const Demand& d);

// Per-vertex boundary distances within one clustering and the capped values
// p = min(1, dist(v, V \ C) / 2^level) for each vertex's own cluster.
// Unclustered vertices get p = 0.
struct PValues {
  std::vector<double> boundary_dist;
  std::vector<double> p;
};

PValues ComputePValues(const WeightedGraph& g, const Clustering& c, int level);

struct RoutingConfig {
  bool dcnt_base_lg = false;  // copies per level = ceil(36 * log(n)); ln by default
  double eps = 0;             // blur tolerance for approximate mode; 0 = default
  int level_resample_budget = 32;
};

// Factored l1-oblivious routing A = B * C. B maps dyadic forest segments to
// signed edges; C routes each unit of demand at v through one center per
// level, splitting mass proportionally to the boundary-distance weights p/w
// and moving between consecutive levels along the witness path of the cluster
// pair. A is never materialized; Apply and ApplyTranspose expand segments on
// the fly. Immutable after construction; applies are pure.
class RoutingOperator {
 public:
  int NumVertices() const { return graph_.NumVertices(); }
  const WeightedGraph& Graph() const { return graph_; }
  int Levels() const { return L_; }
  int Dcnt() const { return dcnt_; }
  int Copies(int level) const;  // dcnt at interior levels, 1 pseudo copy at 0 and L

  const Clustering& LevelClustering(int level, int copy) const;
  const PathCollection& Paths(int level, int copy) const;
  double PValue(int level, int copy, int v) const;
  double WValue(int level, int v) const;  // sum over copies of p
  double QValue(int level, int copy, int v) const;

  Flow Apply(const Demand& d) const;
  std::vector<double> ApplyTranspose(const std::vector<double>& edge_values) const;

  // Enumerates the nonzero coefficients of column v: one call per
  // (boundary level l, copy a at l, copy b at l+1) with the per-pair value
  // f = q_a * q_b and the multiplicity of collapsed pseudo copies.
  using CoefficientFn =
      std::function<void(int l, int a, int b, int cl_a, int cl_b, double f, double mult)>;
  void EnumerateCoefficients(int v, const CoefficientFn& fn) const;

  struct TupleView {
    int l, a, b, cluster_a, cluster_b;
    int witness;
    double weight;  // total walk weight m
  };
  int NumTuples() const { return static_cast<int>(tuple_key_.size()); }
  TupleView Tuple(int idx) const;
  // Expands the inter-center walk of a tuple into (edge id, sign) steps, in
  // walk order from Center_l(witness) to Center_{l+1}(witness).
  std::vector<std::pair<int, int8_t>> ExpandTuple(int idx) const;

  friend RoutingOperator BuildRoutingOperator(const WeightedGraph&, DecompMode, const Rng&,
                                              const RoutingConfig&);
  friend RoutingOperator AssembleRoutingOperator(WeightedGraph, int,
                                                 std::vector<std::vector<Clustering>>);

 private:
  RoutingOperator() = default;
  void BuildDerived();  // p/q, path collections, witness table
  int FindTuple(uint64_t key) const;
  double CenterDist(int level, int copy, int v) const;

  WeightedGraph graph_;
  int L_ = 0;
  int dcnt_ = 1;
  // levels_[0] and levels_[L] hold one conventional clustering each
  // (singletons; all of V spanned by the exact tree from the root).
  std::vector<std::vector<Clustering>> levels_;
  std::vector<std::vector<PathCollection>> paths_;
  std::vector<std::vector<std::vector<double>>> p_;  // [level][copy][v], interior only
  std::vector<std::vector<std::vector<double>>> q_;
  std::vector<uint64_t> tuple_key_;  // sorted
  std::vector<int32_t> tuple_witness_;
  std::vector<double> tuple_weight_;
};

int DcntFor(int n, bool base_lg);

RoutingOperator BuildRoutingOperator(const WeightedGraph& g, DecompMode mode, const Rng& rng,
                                     const RoutingConfig& cfg = {});

// Rebuilds an operator from serialized parts; derived state (p/q values,
// segment store, witness table) is recomputed deterministically.
RoutingOperator AssembleRoutingOperator(WeightedGraph g, int dcnt,
                                        std::vector<std::vector<Clustering>> levels);

struct RatioReport {
  double max_ratio = 0;
  int argmax_edge = -1;
  std::vector<double> per_edge;
  std::vector<long> histogram;  // log2 buckets: [1,2), [2,4), ...
  double threshold = 0;
  bool pass = true;
};

// Worst per-edge routed cost against the shortest-path distance; equal to the
// operator's competitive ratio by the matrix-norm identity.
RatioReport VerifyCompetitiveRatio(const RoutingOperator& op, double threshold);

struct CertifiedOperator {
  RoutingOperator op;
  RatioReport report;
  int attempts = 0;
};

// Rebuilds with fresh substreams until the verifier accepts; the Las-Vegas
// wrapper around the Monte-Carlo construction.
CertifiedOperator VerifyOrRebuild(const WeightedGraph& g, DecompMode mode, const Rng& rng,
                                  double threshold, const RoutingConfig& cfg = {},
                                  int budget = 16);

// Measured Lipschitz constants of the coefficient rows: per boundary level,
// max over edges of sum |f(v) - f(u)| * 2^l / dist(u, v).
std::vector<double> MeasureCoefficientLipschitz(const RoutingOperator& op);

}  // namespace membed
