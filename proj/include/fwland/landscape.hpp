#pragma once

#include "fwland/energy.hpp"
#include "fwland/model.hpp"

#include <utility>
#include <vector>

namespace fwland {

struct PathRecord {
  std::vector<int> states;
  Rate elevation;
};

/// phi[x][y] = communication height; phi[x][x] = H(x) by convention.
struct HeightMatrix {
  std::vector<std::vector<Rate>> phi;

  const Rate& operator()(int x, int y) const { return phi.at(x).at(y); }
  int size() const { return static_cast<int>(phi.size()); }
};

/// Elevation of a path: max of H(w_i) + delta(w_i, w_{i+1}); H(w_1) for a
/// single state; infinity when some step has an infinite rate.
Rate path_elevation(const Model& model, const EnergyTable& energy,
                    const std::vector<int>& states);

/// Minimax search from `source` over edge weights H(u) + delta(u,v) with
/// max-composition. Returns the source's row of the height matrix; if
/// `predecessor` is given, it is filled for witness reconstruction.
std::vector<Rate> comm_height_from(const Model& model, const EnergyTable& energy,
                                   int source, std::vector<int>* predecessor = nullptr);

HeightMatrix comm_heights(const Model& model, const EnergyTable& energy);

Rate comm_height(const Model& model, const EnergyTable& energy, int x, int y);

/// A simple path realizing the communication height.
PathRecord comm_height_witness(const Model& model, const EnergyTable& energy, int x,
                               int y);

/// Phi(A, B) = min over pairs.
Rate comm_height_sets(const HeightMatrix& phi, const std::vector<int>& a,
                      const std::vector<int>& b);

/// Bottom F(A): the H-minimizers of A, together with H(A).
std::pair<std::vector<int>, Rat> bottom(const EnergyTable& energy,
                                        const std::vector<int>& set);

/// {y not in A : delta(x,y) finite for some x in A}.
std::vector<int> external_boundary(const Model& model, const std::vector<int>& set);

/// Bundles the derived geometry of one model.
struct Landscape {
  EnergyTable energy;
  HeightMatrix heights;
};

Landscape analyze_landscape(const Model& model);

}  // namespace fwland
