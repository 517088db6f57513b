#include "fwland/cycles.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace fwland {

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::vector<Rat> realized_elevations(const Model& model, const EnergyTable& energy) {
  std::set<Rat> values;
  for (int x = 0; x < model.size(); ++x)
    for (int y : model.finite_successors(x))
      values.insert(energy[x] + model.delta(x, y).finite());
  return {values.begin(), values.end()};
}

bool contains(const std::vector<int>& sorted, int x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

// One-jump reach level: min over x in C of H(x) + delta(x, y).
Rate one_jump_level(const Model& model, const EnergyTable& energy,
                    const std::vector<int>& members, int y) {
  Rate best = Rate::infinity();
  for (int x : members) best = min(best, Rate(energy[x]) + model.delta(x, y));
  return best;
}

}  // namespace

bool is_cycle(const Landscape& land, const std::vector<int>& set) {
  if (set.empty()) throw std::invalid_argument("is_cycle: empty set");
  const int n = land.heights.size();
  if (set.size() == 1) return true;
  std::vector<int> members = set;
  std::sort(members.begin(), members.end());
  Rate internal(0);
  bool first = true;
  for (int x : members)
    for (int y : members) {
      if (x == y) continue;
      internal = first ? land.heights(x, y) : max(internal, land.heights(x, y));
      first = false;
    }
  Rate exit = Rate::infinity();
  for (int x : members)
    for (int y = 0; y < n; ++y)
      if (!contains(members, y)) exit = min(exit, land.heights(x, y));
  return internal < exit;
}

Cycle make_cycle(const Model& model, const Landscape& land, std::vector<int> members) {
  std::sort(members.begin(), members.end());
  if (!is_cycle(land, members))
    throw std::invalid_argument("make_cycle: set is not a cycle");
  const int n = model.size();
  Cycle c;
  c.members = std::move(members);
  c.bottom_energy = land.energy[c.members.front()];
  for (int x : c.members) c.bottom_energy = std::min(c.bottom_energy, land.energy[x]);

  c.exit_level = Rate::infinity();
  for (int x : c.members)
    for (int y = 0; y < n; ++y)
      if (!contains(c.members, y)) c.exit_level = min(c.exit_level, land.heights(x, y));
  c.depth = c.exit_level - Rate(c.bottom_energy);

  if (static_cast<int>(c.members.size()) < n) {
    // Cross-check the depth against the max-min characterization.
    Rate alt(0);
    bool first = true;
    for (int x : c.members) {
      Rate reach = Rate::infinity();
      for (int y = 0; y < n; ++y)
        if (!contains(c.members, y)) reach = min(reach, land.heights(x, y));
      Rate v = reach - Rate(land.energy[x]);
      alt = first ? v : max(alt, v);
      first = false;
    }
    if (!(alt == c.depth))
      throw std::logic_error("make_cycle: depth characterizations disagree");

    for (int y = 0; y < n; ++y) {
      if (contains(c.members, y)) continue;
      Rate level = one_jump_level(model, land.energy, c.members, y);
      if (level == c.exit_level) c.principal_boundary.push_back(y);
      if (level.is_finite()) {
        Rate cost = level - c.exit_level;
        if (cost < Rate(0))
          throw std::logic_error("make_cycle: negative exit cost");
        c.exit_costs.emplace(y, cost);
      }
    }
    if (c.principal_boundary.empty())
      throw std::logic_error("make_cycle: empty principal boundary");
  }
  return c;
}

Rate cycle_depth(const Model& model, const Landscape& land,
                 const std::vector<int>& members) {
  if (static_cast<int>(members.size()) == model.size())
    throw std::invalid_argument("cycle_depth: the full space has no exterior");
  return make_cycle(model, land, members).depth;
}

std::vector<int> principal_boundary(const Model& model, const Landscape& land,
                                    const std::vector<int>& members) {
  if (static_cast<int>(members.size()) == model.size())
    throw std::invalid_argument("principal_boundary: the full space has no exterior");
  return make_cycle(model, land, members).principal_boundary;
}

std::map<int, Rate> exit_costs(const Model& model, const Landscape& land,
                               const std::vector<int>& members) {
  if (static_cast<int>(members.size()) == model.size())
    throw std::invalid_argument("exit_costs: the full space has no exterior");
  return make_cycle(model, land, members).exit_costs;
}

int CycleTree::find(const std::vector<int>& members) const {
  std::vector<int> key = members;
  std::sort(key.begin(), key.end());
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    if (nodes[i].cycle.members == key) return i;
  return -1;
}

int CycleTree::enclosing(const std::vector<int>& states) const {
  int best = -1;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    bool all = true;
    for (int s : states)
      if (!std::binary_search(nodes[i].cycle.members.begin(),
                              nodes[i].cycle.members.end(), s)) {
        all = false;
        break;
      }
    if (all && (best == -1 ||
                nodes[i].cycle.members.size() < nodes[best].cycle.members.size()))
      best = i;
  }
  return best;
}

CycleTree cycle_tree(const Model& model, const Landscape& land) {
  const int n = model.size();
  std::set<std::vector<int>> member_sets;
  for (int x = 0; x < n; ++x) member_sets.insert({x});

  // Classes of Phi <= v; the relation is transitive because Phi is an
  // ultrametric, so a union-find over low pairs suffices.
  for (const Rat& v : realized_elevations(model, land.energy)) {
    Dsu dsu(n);
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y)
        if (land.heights(x, y) <= Rate(v)) dsu.unite(x, y);
    std::map<int, std::vector<int>> classes;
    for (int x = 0; x < n; ++x) classes[dsu.find(x)].push_back(x);
    for (auto& [root, members] : classes) member_sets.insert(members);
  }

  CycleTree tree;
  std::vector<std::vector<int>> ordered(member_sets.begin(), member_sets.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  for (auto& members : ordered) {
    CycleNode node;
    node.cycle = make_cycle(model, land, members);
    tree.nodes.push_back(std::move(node));
  }

  for (int i = 0; i < static_cast<int>(tree.nodes.size()); ++i) {
    const auto& mi = tree.nodes[i].cycle.members;
    for (int j = i + 1; j < static_cast<int>(tree.nodes.size()); ++j) {
      const auto& mj = tree.nodes[j].cycle.members;
      if (mj.size() == mi.size()) continue;
      if (std::includes(mj.begin(), mj.end(), mi.begin(), mi.end())) {
        tree.nodes[i].parent = j;
        tree.nodes[j].children.push_back(i);
        break;
      }
    }
  }
  tree.root = static_cast<int>(tree.nodes.size()) - 1;
  if (static_cast<int>(tree.nodes[tree.root].cycle.members.size()) != n)
    throw std::logic_error("cycle_tree: missing full-space root");
  return tree;
}

std::vector<Cycle> maximal_partition(const Model& model, const Landscape& land,
                                     const std::vector<int>& domain) {
  if (domain.empty()) throw std::invalid_argument("maximal_partition: empty domain");
  const int n = model.size();
  if (static_cast<int>(domain.size()) == n)
    throw std::invalid_argument(
        "maximal_partition: domain is the full space; decompose the root cycle instead");
  std::vector<bool> in_domain(n, false);
  for (int x : domain) in_domain.at(x) = true;

  std::set<std::vector<int>> classes;
  for (int x : domain) {
    Rate escape = Rate::infinity();
    for (int y = 0; y < n; ++y)
      if (!in_domain[y]) escape = min(escape, land.heights(x, y));
    std::vector<int> members{x};
    for (int y = 0; y < n; ++y)
      if (y != x && land.heights(x, y) < escape) members.push_back(y);
    std::sort(members.begin(), members.end());
    classes.insert(members);
  }
  std::vector<Cycle> out;
  for (const auto& members : classes) out.push_back(make_cycle(model, land, members));
  return out;
}

std::vector<Cycle> max_strict_subcycles(const Model& model, const Landscape& land,
                                        const std::vector<int>& members) {
  if (members.size() < 2)
    throw std::invalid_argument("max_strict_subcycles: need a non-singleton cycle");
  std::vector<int> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  const int n = model.size();

  // Classes of Phi <= v inside C at the largest realized elevation where the
  // classes are strict subsets; with ties at the exit level the threshold
  // keeps descending, and with no workable level every member stands alone.
  auto classes_at = [&](const Rate& threshold) {
    Dsu dsu(n);
    for (std::size_t i = 0; i < sorted.size(); ++i)
      for (std::size_t j = i + 1; j < sorted.size(); ++j)
        if (land.heights(sorted[i], sorted[j]) <= threshold)
          dsu.unite(sorted[i], sorted[j]);
    std::map<int, std::vector<int>> classes;
    for (int x : sorted) classes[dsu.find(x)].push_back(x);
    return classes;
  };

  std::map<int, std::vector<int>> classes;
  auto levels = realized_elevations(model, land.energy);
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    auto candidate = classes_at(Rate(*it));
    if (candidate.size() >= 2) {
      classes = std::move(candidate);
      break;
    }
  }
  if (classes.empty())
    for (int x : sorted) classes[x] = {x};

  std::vector<Cycle> out;
  for (auto& [root, cls] : classes) out.push_back(make_cycle(model, land, cls));

  // Constant exit level across the decomposition.
  for (const Cycle& c : out)
    if (!(c.exit_level == out.front().exit_level))
      throw std::logic_error("max_strict_subcycles: exit levels differ");
  return out;
}

VtjGraph vtj_graph(const Model& model, std::vector<Cycle> partition,
                   const std::vector<int>& domain) {
  const int n = model.size();
  std::vector<int> owner(n, -1);
  for (std::size_t i = 0; i < partition.size(); ++i)
    for (int x : partition[i].members) {
      if (owner.at(x) != -1)
        throw std::invalid_argument("vtj_graph: elements are not disjoint");
      owner[x] = static_cast<int>(i);
    }
  std::vector<bool> in_domain(n, false);
  for (int x : domain) {
    in_domain.at(x) = true;
    if (owner[x] == -1)
      throw std::invalid_argument("vtj_graph: partition does not cover the domain");
  }
  for (int x = 0; x < n; ++x)
    if (owner[x] != -1 && !in_domain[x])
      throw std::invalid_argument("vtj_graph: partition leaves the domain");

  VtjGraph graph;
  graph.nodes = std::move(partition);
  graph.edges.resize(graph.nodes.size());
  graph.exterior.assign(graph.nodes.size(), false);
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    std::set<int> seen;
    for (int y : graph.nodes[i].principal_boundary) {
      if (!in_domain[y]) {
        graph.exterior[i] = true;
      } else if (owner[y] != static_cast<int>(i) && seen.insert(owner[y]).second) {
        graph.edges[i].push_back(owner[y]);
      }
    }
    std::sort(graph.edges[i].begin(), graph.edges[i].end());
  }
  return graph;
}

std::vector<Cycle> vtj_exit_path(const Model& model, const Landscape& land,
                                 const std::vector<int>& domain, int x) {
  if (domain.empty()) throw std::invalid_argument("vtj_exit_path: empty domain");
  std::vector<Cycle> partition = maximal_partition(model, land, domain);
  // Deterministic node order: by smallest member.
  std::sort(partition.begin(), partition.end(), [](const Cycle& a, const Cycle& b) {
    return a.members.front() < b.members.front();
  });
  VtjGraph graph = vtj_graph(model, std::move(partition), domain);

  int start = -1;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i)
    if (std::binary_search(graph.nodes[i].members.begin(),
                           graph.nodes[i].members.end(), x))
      start = static_cast<int>(i);
  if (start == -1) throw std::invalid_argument("vtj_exit_path: x not in domain");

  std::vector<int> parent(graph.nodes.size(), -2);
  std::vector<int> queue{start};
  parent[start] = -1;
  int found = -1;
  for (std::size_t head = 0; head < queue.size() && found == -1; ++head) {
    int u = queue[head];
    if (graph.exterior[u]) {
      found = u;
      break;
    }
    for (int v : graph.edges[u])
      if (parent[v] == -2) {
        parent[v] = u;
        queue.push_back(v);
      }
  }
  if (found == -1)
    throw std::logic_error("vtj_exit_path: no exit path (domain inconsistency)");
  std::vector<Cycle> path;
  for (int v = found; v != -1; v = parent[v]) path.push_back(graph.nodes[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

bool check_isolated_union(const Model& model, const Landscape& land,
                          const std::vector<Cycle>& cycles) {
  if (cycles.empty()) throw std::invalid_argument("check_isolated_union: empty system");
  const int n = model.size();
  std::vector<int> owner(n, -1);
  std::vector<int> union_members;
  for (std::size_t i = 0; i < cycles.size(); ++i)
    for (int x : cycles[i].members) {
      if (owner.at(x) != -1)
        throw std::invalid_argument("check_isolated_union: cycles are not disjoint");
      owner[x] = static_cast<int>(i);
      union_members.push_back(x);
    }
  std::sort(union_members.begin(), union_members.end());

  // vtj-connectedness: strong connectivity of the boundary digraph.
  const int m = static_cast<int>(cycles.size());
  std::vector<std::vector<int>> adj(m);
  for (int i = 0; i < m; ++i)
    for (int y : cycles[i].principal_boundary)
      if (owner[y] != -1 && owner[y] != i) adj[i].push_back(owner[y]);
  for (int s = 0; s < m; ++s) {
    std::vector<bool> seen(m, false);
    std::vector<int> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
    }
    if (m > 1)
      for (int v = 0; v < m; ++v)
        if (!seen[v])
          throw std::invalid_argument(
              "check_isolated_union: cycles do not form a vtj-connected system");
  }

  bool isolated = true;
  for (const Cycle& c : cycles)
    for (int y : c.principal_boundary)
      if (owner[y] == -1) isolated = false;
  if (isolated && !is_cycle(land, union_members))
    throw std::logic_error("check_isolated_union: isolated union is not a cycle");
  return isolated;
}

}  // namespace fwland
