#pragma once

#include "fwland/cycles.hpp"

#include <string>

namespace fwland {

/// I_x and V_x = Phi(x, I_x) - H(x); level is infinite when I_x is empty.
struct StabilityRecord {
  std::vector<int> below_set;
  Rate level;
};

std::vector<StabilityRecord> stability_levels(const Model& model,
                                              const Landscape& land);

struct MetaSets {
  std::vector<int> stable;      // X^s = F(X)
  Rate vmax;                    // V^m, meaningless when degenerate
  std::vector<int> metastable;  // X^m
  std::vector<std::pair<Rat, std::vector<int>>> level_sets;  // requested X_a
  bool degenerate = false;  // X^s = X: no state left to define V^m
};

MetaSets meta_sets(const std::vector<StabilityRecord>& records,
                   const EnergyTable& energy, const std::vector<Rat>& levels);

/// Minimal cycle containing x and y. Computed from the tree and cross-checked
/// against the threshold construction {u : Phi(x,u) < Phi(x,y) + gap/2}.
Cycle enclosing_cycle(const Model& model, const Landscape& land,
                      const CycleTree& tree, int x, int y);

/// S(x,y): union of the principal boundaries of the maximal strict subcycles
/// of the enclosing cycle.
std::vector<int> saddles(const Model& model, const Landscape& land,
                         const CycleTree& tree, int x, int y);

struct OptimalPaths {
  std::vector<PathRecord> paths;  // simple, lexicographic by state index
  bool truncated = false;
};

/// All simple paths from x to y of elevation Phi(x,y); prefixes above that
/// level are pruned. Stops collecting at `cap` paths.
OptimalPaths optimal_paths(const Model& model, const Landscape& land, int x, int y,
                           std::size_t cap = 1000000);

/// All inclusion-minimal hitting sets of the trace family. `truncated` is set
/// when the enumeration hits the cap.
std::vector<std::vector<int>> minimal_transversals(
    const std::vector<std::vector<int>>& traces, std::size_t cap, bool* truncated);

struct GateOptions {
  bool include_endpoints = false;  // keep x,y in path traces
  std::size_t path_cap = 1000000;
  std::size_t transversal_cap = 1000000;
};

struct GateAnalysis {
  std::pair<int, int> pair;
  Cycle enclosing;
  std::vector<Cycle> decomposition;  // M_{x,y}
  std::vector<int> saddle_set;       // S(x,y)
  OptimalPaths paths;
  std::vector<std::vector<int>> minimal_gates;
  std::vector<int> gate_union;  // G(x,y)
  bool gates_truncated = false;
  std::vector<std::string> notes;
};

GateAnalysis gate_analysis(const Model& model, const Landscape& land,
                           const CycleTree& tree, int x, int y,
                           const GateOptions& options = {});

/// Clause-by-clause membership in the tube of typical (x,y)-trajectories:
/// (1) reach y while staying in the enclosing cycle, (2) exit decomposition
/// elements only through their principal boundaries, (3) once in the element
/// containing y, hit y before leaving it.
struct TubeVerdict {
  bool member = false;
  int violated_clause = 0;  // 1..3 when not a member
  std::string detail;
};

TubeVerdict tube_membership(const Model& model, const Landscape& land,
                            const CycleTree& tree,
                            const std::vector<int>& trajectory, int x, int y);

}  // namespace fwland
