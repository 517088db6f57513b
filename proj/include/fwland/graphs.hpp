#pragma once

#include "fwland/model.hpp"

#include <vector>

namespace fwland {

/// An in-forest rooted at a state set A: every state outside A carries exactly
/// one out-edge, following out-edges always reaches A, and no loops occur.
struct Arborescence {
  std::vector<int> roots;   // sorted
  std::vector<int> parent;  // parent[v] = chosen successor, -1 for roots
  Rate total_cost;
};

/// Minimum-total-cost in-forest rooted at `roots`. Throws std::runtime_error
/// when some state cannot reach the root set through finite rates.
Arborescence min_arborescence(const Model& model, const std::vector<int>& roots);

/// Cost of the minimum in-forest rooted at {v : is_root[v]}, infinity when
/// no valid forest exists.
Rate min_forest_cost(const Model& model, const std::vector<bool>& is_root);

/// Minimum cost over in-forests rooted at A in which the chain of out-edges
/// starting at `from` (a non-root) ends at the root `to`. Infinity when no
/// such forest exists.
Rate min_forest_cost_constrained(const Model& model, const std::vector<bool>& is_root,
                                 int from, int to);

/// Structural check of the three in-forest properties (single out-edge per
/// non-root, no edge leaving the roots, loop-free with chains reaching roots)
/// plus the cost bookkeeping.
bool arborescence_valid(const Model& model, const Arborescence& arb);

}  // namespace fwland
