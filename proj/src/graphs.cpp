#include "fwland/graphs.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace fwland {

namespace {

struct Edge {
  int from, to;
  Rat cost;
  int id;  // index into the caller's original edge list
};

// Chu-Liu/Edmonds: minimum spanning out-arborescence rooted at `root`.
// Returns the original ids of the chosen edges, or nullopt when some node is
// unreachable. Ties break on the smaller edge id, so results are deterministic.
std::optional<std::vector<int>> min_out_arborescence(int n, int root,
                                                     std::vector<Edge> edges) {
  std::vector<const Edge*> best(n, nullptr);
  for (const Edge& e : edges) {
    if (e.to == root || e.from == e.to) continue;
    const Edge*& b = best[e.to];
    if (!b || e.cost < b->cost || (e.cost == b->cost && e.id < b->id)) b = &e;
  }
  for (int v = 0; v < n; ++v)
    if (v != root && !best[v]) return std::nullopt;

  // Find a cycle among the chosen in-edges.
  std::vector<int> color(n, 0);  // 0 unseen, 1 on stack, 2 done
  std::vector<int> cycle;
  for (int s = 0; s < n && cycle.empty(); ++s) {
    int v = s;
    std::vector<int> path;
    while (v != root && color[v] == 0) {
      color[v] = 1;
      path.push_back(v);
      v = best[v]->from;
    }
    if (v != root && color[v] == 1) {
      auto it = std::find(path.begin(), path.end(), v);
      cycle.assign(it, path.end());
    }
    for (int u : path) color[u] = 2;
  }

  if (cycle.empty()) {
    std::vector<int> chosen;
    for (int v = 0; v < n; ++v)
      if (v != root) chosen.push_back(best[v]->id);
    return chosen;
  }

  // Contract the cycle into one supernode and adjust entering costs.
  std::vector<int> in_cycle(n, 0);
  for (int v : cycle) in_cycle[v] = 1;
  std::vector<int> remap(n);
  int m = 0;
  for (int v = 0; v < n; ++v) remap[v] = in_cycle[v] ? -1 : m++;
  const int super = m++;
  for (int v = 0; v < n; ++v)
    if (in_cycle[v]) remap[v] = super;

  // The cycle edge displaced by the entering edge is resolved on the way
  // back: record, per contracted entering edge, which cycle node it enters.
  std::vector<Edge> next;
  std::map<int, std::pair<int, int>> enters;  // new id -> (orig id, cycle node)
  std::map<int, int> alias;                   // new id -> orig id for the rest
  for (const Edge& e : edges) {
    int u = remap[e.from], v = remap[e.to];
    if (u == v) continue;
    int nid = static_cast<int>(next.size());
    if (v == super) {
      next.push_back({u, v, e.cost - best[e.to]->cost, nid});
      enters[nid] = {e.id, e.to};
    } else {
      next.push_back({u, v, e.cost, nid});
      alias[nid] = e.id;
    }
  }

  auto sub = min_out_arborescence(m, remap[root], std::move(next));
  if (!sub) return std::nullopt;

  int entered_at = -1;
  std::vector<int> result;
  for (int nid : *sub) {
    auto it = enters.find(nid);
    if (it != enters.end()) {
      result.push_back(it->second.first);
      entered_at = it->second.second;
    } else {
      result.push_back(alias.at(nid));
    }
  }
  for (int v : cycle)
    if (v != entered_at) result.push_back(best[v]->id);
  return result;
}

struct Instance {
  std::vector<Edge> edges;        // reversed graph, super-root = n
  std::vector<std::pair<int, int>> orig;  // id -> (state, parent) in model orientation
};

// Reversed-graph instance: choosing out-edge v->u in the forest corresponds to
// in-edge u->v of an out-arborescence rooted at the super-root.
Instance reversed_instance(const Model& model, const std::vector<bool>& is_root) {
  const int n = model.size();
  Instance inst;
  auto add = [&](int from, int to, Rat cost, int state, int parent) {
    int id = static_cast<int>(inst.edges.size());
    inst.edges.push_back({from, to, std::move(cost), id});
    inst.orig.emplace_back(state, parent);
  };
  for (int a = 0; a < n; ++a)
    if (is_root[a]) add(n, a, Rat(0), a, -1);
  for (int v = 0; v < n; ++v) {
    if (is_root[v]) continue;
    for (int u : model.finite_successors(v)) add(u, v, model.delta(v, u).finite(), v, u);
  }
  return inst;
}

Rat forest_cost(const Instance& inst, const std::vector<int>& chosen) {
  Rat total = 0;
  for (int id : chosen) total += inst.edges[id].cost;
  return total;
}

}  // namespace

Arborescence min_arborescence(const Model& model, const std::vector<int>& roots) {
  const int n = model.size();
  if (roots.empty()) throw std::invalid_argument("min_arborescence: empty root set");
  std::vector<bool> is_root(n, false);
  for (int r : roots) is_root.at(r) = true;

  Instance inst = reversed_instance(model, is_root);
  auto chosen = min_out_arborescence(n + 1, n, inst.edges);
  if (!chosen) {
    // Name an offending state: one from which no finite-rate path reaches A.
    std::vector<bool> reaches = is_root;
    for (bool grew = true; grew;) {
      grew = false;
      for (int v = 0; v < n; ++v)
        if (!reaches[v])
          for (int u : model.finite_successors(v))
            if (reaches[u]) {
              reaches[v] = true;
              grew = true;
              break;
            }
    }
    std::string who;
    for (int v = 0; v < n; ++v)
      if (!reaches[v]) {
        who = model.label(v);
        break;
      }
    throw std::runtime_error("min_arborescence: state '" + who +
                             "' cannot reach the root set through finite rates");
  }

  Arborescence arb;
  for (int v = 0; v < n; ++v)
    if (is_root[v]) arb.roots.push_back(v);
  arb.parent.assign(n, -1);
  for (int id : *chosen) {
    auto [state, parent] = inst.orig[id];
    arb.parent[state] = parent;
  }
  arb.total_cost = Rate(forest_cost(inst, *chosen));
  return arb;
}

Rate min_forest_cost(const Model& model, const std::vector<bool>& is_root) {
  Instance inst = reversed_instance(model, is_root);
  auto chosen = min_out_arborescence(model.size() + 1, model.size(), inst.edges);
  if (!chosen) return Rate::infinity();
  return Rate(forest_cost(inst, *chosen));
}

namespace {

// Every forest in G_{from,to}(A) splits into the simple out-edge path
// from -> ... -> to (intermediates outside A) plus a minimum forest rooted at
// A together with the path states. Enumerate paths depth-first with cost
// pruning; forests per augmented root set are memoized.
struct ConstrainedSearch {
  const Model& model;
  const std::vector<bool>& base_root;
  int target;
  Rate best = Rate::infinity();
  std::vector<bool> on_path;
  std::map<std::vector<bool>, Rate> forest_cache;

  Rate forest(const std::vector<bool>& roots) {
    auto it = forest_cache.find(roots);
    if (it != forest_cache.end()) return it->second;
    Rate c = min_forest_cost(model, roots);
    forest_cache.emplace(roots, c);
    return c;
  }

  void extend(int v, const Rat& path_cost, std::vector<bool>& roots) {
    if (best.is_finite() && Rate(path_cost) >= best) return;
    for (int u : model.finite_successors(v)) {
      Rat cost = path_cost + model.delta(v, u).finite();
      if (u == target) {
        Rate total = Rate(cost) + forest(roots);
        if (total < best) best = total;
        continue;
      }
      if (base_root[u] || on_path[u]) continue;
      on_path[u] = true;
      roots[u] = true;
      extend(u, cost, roots);
      roots[u] = false;
      on_path[u] = false;
    }
  }
};

}  // namespace

Rate min_forest_cost_constrained(const Model& model, const std::vector<bool>& is_root,
                                 int from, int to) {
  if (is_root.at(from) || !is_root.at(to))
    throw std::invalid_argument("constrained forest: need non-root source, root target");
  ConstrainedSearch search{model, is_root, to, Rate::infinity(),
                           std::vector<bool>(model.size(), false), {}};
  std::vector<bool> roots = is_root;
  search.on_path[from] = true;
  roots[from] = true;
  search.extend(from, Rat(0), roots);
  return search.best;
}

bool arborescence_valid(const Model& model, const Arborescence& arb) {
  const int n = model.size();
  if (static_cast<int>(arb.parent.size()) != n) return false;
  std::vector<bool> is_root(n, false);
  for (int r : arb.roots) is_root[r] = true;
  Rat total = 0;
  for (int v = 0; v < n; ++v) {
    if (is_root[v] != (arb.parent[v] == -1)) return false;
    if (arb.parent[v] != -1) {
      if (!model.delta(v, arb.parent[v]).is_finite()) return false;
      total += model.delta(v, arb.parent[v]).finite();
    }
  }
  // Chains must reach the roots without revisiting a state.
  for (int v = 0; v < n; ++v) {
    int steps = 0, u = v;
    while (arb.parent[u] != -1) {
      u = arb.parent[u];
      if (++steps > n) return false;
    }
    if (!is_root[u]) return false;
  }
  return arb.total_cost == Rate(total);
}

}  // namespace fwland
