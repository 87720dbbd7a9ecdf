#pragma once

#include <vector>

#include "membed/graph.h"
#include "membed/routing.h"

namespace membed {

// Optimal transshipment cost: the minimum of sum_e w(e) * |f(e)| over flows
// routing the balanced demand. Successive shortest paths with Johnson
// potentials on the bidirected graph; the returned value carries an internal
// optimality certificate (no negative reduced cost survives). Desk-scale
// oracle, guarded to n <= 12.
double OptTransshipment(const WeightedGraph& g, const Demand& d);

}  // namespace membed
