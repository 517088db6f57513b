#include "fwland/landscape.hpp"

#include <algorithm>
#include <queue>

namespace fwland {

Rate path_elevation(const Model& model, const EnergyTable& energy,
                    const std::vector<int>& states) {
  if (states.empty()) throw std::invalid_argument("path_elevation: empty sequence");
  if (states.size() == 1) return Rate(energy[states[0]]);
  Rate elevation(0);
  bool first = true;
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    Rate step = Rate(energy[states[i]]) + model.delta(states[i], states[i + 1]);
    elevation = first ? step : max(elevation, step);
    first = false;
  }
  return elevation;
}

std::vector<Rate> comm_height_from(const Model& model, const EnergyTable& energy,
                                   int source, std::vector<int>* predecessor) {
  const int n = model.size();
  std::vector<Rate> dist(n, Rate::infinity());
  std::vector<bool> done(n, false);
  if (predecessor) predecessor->assign(n, -1);

  // Every step elevation out of `source` is at least H(source), so seeding
  // the key with H(source) realizes the Phi(x,x) = H(x) convention without
  // disturbing other targets.
  dist[source] = Rate(energy[source]);

  using Item = std::pair<Rate, int>;
  auto cmp = [](const Item& a, const Item& b) {
    if (a.first != b.first) return b.first < a.first;
    return b.second < a.second;  // smaller index first
  };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> queue(cmp);
  queue.push({dist[source], source});
  while (!queue.empty()) {
    auto [key, u] = queue.top();
    queue.pop();
    if (done[u] || dist[u] < key) continue;
    done[u] = true;
    for (int v : model.finite_successors(u)) {
      if (done[v]) continue;
      Rate candidate = max(dist[u], Rate(energy[u]) + model.delta(u, v));
      if (candidate < dist[v]) {
        dist[v] = candidate;
        if (predecessor) (*predecessor)[v] = u;
        queue.push({candidate, v});
      }
    }
  }
  return dist;
}

HeightMatrix comm_heights(const Model& model, const EnergyTable& energy) {
  HeightMatrix out;
  for (int x = 0; x < model.size(); ++x)
    out.phi.push_back(comm_height_from(model, energy, x));
  return out;
}

Rate comm_height(const Model& model, const EnergyTable& energy, int x, int y) {
  return comm_height_from(model, energy, x)[y];
}

PathRecord comm_height_witness(const Model& model, const EnergyTable& energy, int x,
                               int y) {
  std::vector<int> pred;
  auto dist = comm_height_from(model, energy, x, &pred);
  PathRecord rec;
  rec.elevation = dist[y];
  if (!dist[y].is_finite()) return rec;
  for (int v = y; v != -1; v = pred[v]) rec.states.push_back(v);
  std::reverse(rec.states.begin(), rec.states.end());
  return rec;
}

Rate comm_height_sets(const HeightMatrix& phi, const std::vector<int>& a,
                      const std::vector<int>& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("comm_height_sets: empty set");
  Rate best = Rate::infinity();
  for (int x : a)
    for (int y : b) best = min(best, phi(x, y));
  return best;
}

std::pair<std::vector<int>, Rat> bottom(const EnergyTable& energy,
                                        const std::vector<int>& set) {
  if (set.empty()) throw std::invalid_argument("bottom: empty set");
  Rat level = energy[set.front()];
  for (int x : set) level = std::min(level, energy[x]);
  std::vector<int> minima;
  for (int x : set)
    if (energy[x] == level) minima.push_back(x);
  std::sort(minima.begin(), minima.end());
  return {minima, level};
}

std::vector<int> external_boundary(const Model& model, const std::vector<int>& set) {
  if (set.empty()) throw std::invalid_argument("external_boundary: empty set");
  std::vector<bool> inside(model.size(), false);
  for (int x : set) inside.at(x) = true;
  std::vector<int> boundary;
  for (int y = 0; y < model.size(); ++y) {
    if (inside[y]) continue;
    for (int x : set)
      if (model.delta(x, y).is_finite()) {
        boundary.push_back(y);
        break;
      }
  }
  return boundary;
}

Landscape analyze_landscape(const Model& model) {
  Landscape land;
  land.energy = virtual_energy(model);
  land.heights = comm_heights(model, land.energy);
  return land;
}

}  // namespace fwland
