#pragma once

#include "fwland/landscape.hpp"

#include <map>
#include <vector>

namespace fwland {

/// A cycle with its cached landscape data. For the full space the exit
/// quantities are infinite and the boundary is empty.
struct Cycle {
  std::vector<int> members;  // sorted
  Rat bottom_energy;         // H(C)
  Rate exit_level;           // Phi(C, X \ C)
  Rate depth;                // Gamma(C) = exit_level - H(C)
  std::vector<int> principal_boundary;  // sorted
  std::map<int, Rate> exit_costs;       // finite entries: the one-jump boundary
};

/// True iff `set` is a singleton, the full space, or satisfies the strict
/// energy-cycle inequality max internal Phi < Phi(A, X \ A).
bool is_cycle(const Landscape& land, const std::vector<int>& set);

/// Cached quantities for a verified cycle; throws when `members` is not a
/// cycle. Depth is evaluated through both characterizations (exit level minus
/// bottom, and the max-min formula) which must agree exactly.
Cycle make_cycle(const Model& model, const Landscape& land, std::vector<int> members);

/// Gamma(C); requires a proper cycle.
Rate cycle_depth(const Model& model, const Landscape& land,
                 const std::vector<int>& members);

/// B(C): exterior states reachable by one jump at the exit level.
std::vector<int> principal_boundary(const Model& model, const Landscape& land,
                                    const std::vector<int>& members);

/// Delta_C(y) for exterior y with a finite one-jump cost; infinity otherwise.
std::map<int, Rate> exit_costs(const Model& model, const Landscape& land,
                               const std::vector<int>& members);

struct CycleNode {
  Cycle cycle;
  int parent = -1;
  std::vector<int> children;
};

/// All cycles of the model ordered by size (singletons first, full space
/// last), with parent/child links by strict inclusion.
struct CycleTree {
  std::vector<CycleNode> nodes;
  int root = -1;

  int find(const std::vector<int>& members) const;
  /// Smallest node containing all of `states`.
  int enclosing(const std::vector<int>& states) const;
};

CycleTree cycle_tree(const Model& model, const Landscape& land);

/// The R_D(x) construction: partition of D into maximal cycles.
std::vector<Cycle> maximal_partition(const Model& model, const Landscape& land,
                                     const std::vector<int>& domain);

/// Decomposition of a non-singleton cycle into its maximal strict subcycles.
std::vector<Cycle> max_strict_subcycles(const Model& model, const Landscape& land,
                                        const std::vector<int>& members);

/// Directed connections through principal boundaries between the elements of
/// a partition of `domain`; exterior[i] marks elements whose boundary leaves
/// the domain.
struct VtjGraph {
  std::vector<Cycle> nodes;
  std::vector<std::vector<int>> edges;
  std::vector<bool> exterior;
};

VtjGraph vtj_graph(const Model& model, std::vector<Cycle> partition,
                   const std::vector<int>& domain);

/// A vtj-connected sequence of maximal-partition elements from the one
/// containing x to one exiting the domain (breadth-first, lexicographic).
std::vector<Cycle> vtj_exit_path(const Model& model, const Landscape& land,
                                 const std::vector<int>& domain, int x);

/// For a vtj-connected system of disjoint cycles: whether all principal
/// boundaries stay inside the union (then the union is itself a cycle).
bool check_isolated_union(const Model& model, const Landscape& land,
                          const std::vector<Cycle>& cycles);

}  // namespace fwland
