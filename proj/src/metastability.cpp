#include "fwland/metastability.hpp"

#include <algorithm>
#include <set>

namespace fwland {

std::vector<StabilityRecord> stability_levels(const Model& model,
                                              const Landscape& land) {
  const int n = model.size();
  std::vector<StabilityRecord> records(n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y)
      if (land.energy[y] < land.energy[x]) records[x].below_set.push_back(y);
    if (records[x].below_set.empty()) {
      records[x].level = Rate::infinity();
    } else {
      Rate reach = Rate::infinity();
      for (int y : records[x].below_set) reach = min(reach, land.heights(x, y));
      records[x].level = reach - Rate(land.energy[x]);
    }
  }
  return records;
}

MetaSets meta_sets(const std::vector<StabilityRecord>& records,
                   const EnergyTable& energy, const std::vector<Rat>& levels) {
  const int n = energy.size();
  MetaSets out;
  Rat ground = energy[0];
  for (int x = 0; x < n; ++x) ground = std::min(ground, energy[x]);
  for (int x = 0; x < n; ++x)
    if (energy[x] == ground) out.stable.push_back(x);

  out.degenerate = static_cast<int>(out.stable.size()) == n;
  if (!out.degenerate) {
    bool first = true;
    for (int x = 0; x < n; ++x) {
      if (energy[x] == ground) continue;
      out.vmax = first ? records[x].level : max(out.vmax, records[x].level);
      first = false;
    }
    for (int x = 0; x < n; ++x)
      if (energy[x] != ground && records[x].level == out.vmax)
        out.metastable.push_back(x);
  }

  for (const Rat& a : levels) {
    std::vector<int> xa;
    for (int x = 0; x < n; ++x)
      if (records[x].level > Rate(a)) xa.push_back(x);
    out.level_sets.emplace_back(a, std::move(xa));
  }
  return out;
}

Cycle enclosing_cycle(const Model& model, const Landscape& land,
                      const CycleTree& tree, int x, int y) {
  if (x == y) throw std::invalid_argument("enclosing_cycle: states must differ");
  int node = tree.enclosing({x, y});
  if (node == -1) throw std::logic_error("enclosing_cycle: tree lookup failed");
  const Cycle& c = tree.nodes[node].cycle;

  // Threshold construction: half the gap to the next realized height level
  // above Phi(x,y); with no level above, any positive margin works.
  const Rate& target = land.heights(x, y);
  Rate next = Rate::infinity();
  for (int u = 0; u < model.size(); ++u)
    for (int v = 0; v < model.size(); ++v)
      if (target < land.heights(u, v)) next = min(next, land.heights(u, v));
  std::vector<int> direct;
  for (int u = 0; u < model.size(); ++u) {
    bool inside;
    if (next.is_finite()) {
      Rat threshold =
          target.finite() + (next.finite() - target.finite()) / 2;
      inside = land.heights(x, u) < Rate(threshold);
    } else {
      inside = land.heights(x, u) <= target;
    }
    if (inside) direct.push_back(u);
  }
  if (direct != c.members)
    throw std::logic_error("enclosing_cycle: threshold construction disagrees with tree");
  return c;
}

std::vector<int> saddles(const Model& model, const Landscape& land,
                         const CycleTree& tree, int x, int y) {
  Cycle c = enclosing_cycle(model, land, tree, x, y);
  std::set<int> acc;
  for (const Cycle& part : max_strict_subcycles(model, land, c.members))
    acc.insert(part.principal_boundary.begin(), part.principal_boundary.end());
  return {acc.begin(), acc.end()};
}

OptimalPaths optimal_paths(const Model& model, const Landscape& land, int x, int y,
                           std::size_t cap) {
  if (x == y) throw std::invalid_argument("optimal_paths: states must differ");
  OptimalPaths out;
  const Rate& target = land.heights(x, y);
  std::vector<bool> visited(model.size(), false);
  std::vector<int> current{x};
  visited[x] = true;

  // Depth-first with elevation pruning; successors ascend by index, so the
  // collected paths come out in lexicographic order.
  auto recurse = [&](auto&& self, int u, const Rate& elevation) -> void {
    if (out.truncated) return;
    for (int v : model.finite_successors(u)) {
      if (visited[v]) continue;
      Rate step = max(elevation, Rate(land.energy[u]) + model.delta(u, v));
      if (target < step) continue;
      current.push_back(v);
      if (v == y) {
        if (out.paths.size() >= cap) {
          out.truncated = true;
        } else {
          out.paths.push_back(PathRecord{current, step});
        }
      } else {
        visited[v] = true;
        self(self, v, step);
        visited[v] = false;
      }
      current.pop_back();
      if (out.truncated) return;
    }
  };
  recurse(recurse, x, Rate(land.energy[x]));
  return out;
}

namespace {

bool hits(const std::vector<int>& sorted_set, const std::vector<int>& trace) {
  for (int t : trace)
    if (std::binary_search(sorted_set.begin(), sorted_set.end(), t)) return true;
  return false;
}

struct TransversalSearch {
  const std::vector<std::vector<int>>& traces;
  std::size_t cap;
  bool truncated = false;
  std::set<std::vector<int>> found;

  bool minimal(const std::vector<int>& sorted_pick) const {
    for (int e : sorted_pick) {
      bool witness = false;
      for (const auto& t : traces) {
        bool only_e = false, other = false;
        for (int v : t) {
          if (std::binary_search(sorted_pick.begin(), sorted_pick.end(), v)) {
            if (v == e)
              only_e = true;
            else
              other = true;
          }
        }
        if (only_e && !other) {
          witness = true;
          break;
        }
      }
      if (!witness) return false;
    }
    return true;
  }

  void run(std::vector<int>& pick) {
    if (truncated) return;
    std::vector<int> sorted_pick = pick;
    std::sort(sorted_pick.begin(), sorted_pick.end());
    const std::vector<int>* open = nullptr;
    for (const auto& t : traces)
      if (!hits(sorted_pick, t)) {
        open = &t;
        break;
      }
    if (!open) {
      if (minimal(sorted_pick) && found.insert(sorted_pick).second &&
          found.size() > cap)
        truncated = true;
      return;
    }
    for (int e : *open) {
      pick.push_back(e);
      run(pick);
      pick.pop_back();
      if (truncated) return;
    }
  }
};

}  // namespace

std::vector<std::vector<int>> minimal_transversals(
    const std::vector<std::vector<int>>& traces, std::size_t cap, bool* truncated) {
  // Supersets of other traces are hit automatically; dropping them shrinks
  // the branching.
  std::vector<std::vector<int>> reduced;
  for (const auto& t : traces) {
    std::vector<int> s = t;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    reduced.push_back(std::move(s));
  }
  std::sort(reduced.begin(), reduced.end(),
            [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::vector<std::vector<int>> kept;
  for (const auto& t : reduced) {
    bool redundant = false;
    for (const auto& k : kept)
      if (std::includes(t.begin(), t.end(), k.begin(), k.end())) {
        redundant = true;
        break;
      }
    if (!redundant) kept.push_back(t);
  }

  TransversalSearch search{kept, cap, false, {}};
  if (!kept.empty()) {
    std::vector<int> pick;
    search.run(pick);
  }
  if (truncated) *truncated = search.truncated;
  std::vector<std::vector<int>> out(search.found.begin(), search.found.end());
  if (out.size() > cap) out.resize(cap);
  return out;
}

GateAnalysis gate_analysis(const Model& model, const Landscape& land,
                           const CycleTree& tree, int x, int y,
                           const GateOptions& options) {
  GateAnalysis out;
  out.pair = {x, y};
  out.enclosing = enclosing_cycle(model, land, tree, x, y);
  out.decomposition = max_strict_subcycles(model, land, out.enclosing.members);
  std::set<int> sset;
  for (const Cycle& part : out.decomposition)
    sset.insert(part.principal_boundary.begin(), part.principal_boundary.end());
  out.saddle_set.assign(sset.begin(), sset.end());

  out.paths = optimal_paths(model, land, x, y, options.path_cap);
  if (out.paths.truncated)
    out.notes.push_back("optimal path enumeration truncated; gates may be partial");

  std::set<std::vector<int>> trace_set;
  bool empty_trace = false;
  for (const PathRecord& p : out.paths.paths) {
    std::vector<int> trace;
    for (int s : p.states) {
      if (!sset.count(s)) continue;
      if (!options.include_endpoints && (s == x || s == y)) continue;
      trace.push_back(s);
    }
    std::sort(trace.begin(), trace.end());
    trace.erase(std::unique(trace.begin(), trace.end()), trace.end());
    if (trace.empty()) empty_trace = true;
    trace_set.insert(std::move(trace));
  }

  if (empty_trace) {
    out.notes.push_back(
        "an optimal path avoids the saddle set entirely; no gate exists");
    return out;
  }

  std::vector<std::vector<int>> traces(trace_set.begin(), trace_set.end());
  out.minimal_gates =
      minimal_transversals(traces, options.transversal_cap, &out.gates_truncated);
  if (out.gates_truncated)
    out.notes.push_back("transversal enumeration truncated; gate list is partial");

  std::set<int> gunion;
  for (const auto& gate : out.minimal_gates) gunion.insert(gate.begin(), gate.end());
  out.gate_union.assign(gunion.begin(), gunion.end());
  return out;
}

TubeVerdict tube_membership(const Model& model, const Landscape& land,
                            const CycleTree& tree,
                            const std::vector<int>& trajectory, int x, int y) {
  if (trajectory.empty() || trajectory.front() != x)
    throw std::invalid_argument("tube_membership: trajectory must start at x");
  for (std::size_t i = 0; i + 1 < trajectory.size(); ++i) {
    if (trajectory[i] == trajectory[i + 1]) continue;  // lazy steps are harmless
    if (!model.delta(trajectory[i], trajectory[i + 1]).is_finite())
      throw std::invalid_argument("tube_membership: trajectory has an infinite-rate step");
  }

  Cycle c = enclosing_cycle(model, land, tree, x, y);
  std::vector<Cycle> parts = max_strict_subcycles(model, land, c.members);
  std::vector<int> owner(model.size(), -1);
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (int s : parts[i].members) owner[s] = static_cast<int>(i);
  const int target_part = owner[y];

  TubeVerdict verdict;
  bool in_target_part = owner[x] == target_part;
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const int s = trajectory[i];
    if (s == y) {
      verdict.member = true;
      return verdict;
    }
    if (i + 1 == trajectory.size()) break;
    const int t = trajectory[i + 1];
    if (t == s) continue;
    const int part = owner[s];
    if (part == -1 || owner[t] == part) continue;
    // Transition leaves the current element.
    if (in_target_part) {
      verdict.violated_clause = 3;
      verdict.detail = "left the element containing '" + model.label(y) +
                       "' at '" + model.label(t) + "' before hitting it";
      return verdict;
    }
    const auto& boundary = parts[part].principal_boundary;
    if (!std::binary_search(boundary.begin(), boundary.end(), t)) {
      verdict.violated_clause = 2;
      verdict.detail = "exit from element of '" + model.label(s) + "' at '" +
                       model.label(t) + "' misses its principal boundary";
      return verdict;
    }
    if (owner[t] == target_part) in_target_part = true;
  }
  verdict.violated_clause = 1;
  verdict.detail = "trajectory ends before reaching '" + model.label(y) + "'";
  return verdict;
}

}  // namespace fwland
