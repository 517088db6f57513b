#pragma once

#include "fwland/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fwland {

/// Raised for malformed model files and ill-formed model construction.
struct ModelFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RateMode { Explicit, Metropolis };

/// A finite state space with a rate function Delta: X x X -> Q+ u {inf}.
/// Immutable after construction and safe to share across threads.
class Model {
 public:
  Model(std::vector<std::string> labels, std::vector<std::vector<Rate>> delta,
        RateMode mode = RateMode::Explicit,
        std::optional<std::vector<Rat>> potential = std::nullopt,
        std::optional<std::vector<std::vector<bool>>> support = std::nullopt);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const { return labels_.at(i); }

  /// Index of a label; throws ModelFormatError for unknown labels.
  int state(const std::string& label) const;
  std::optional<int> find_state(const std::string& label) const;

  const Rate& delta(int x, int y) const { return delta_[x][y]; }
  RateMode mode() const { return mode_; }
  const std::optional<std::vector<Rat>>& potential() const { return potential_; }
  const std::optional<std::vector<std::vector<bool>>>& support() const {
    return support_;
  }

  /// States y != x with delta(x, y) finite, in index order.
  const std::vector<int>& finite_successors(int x) const { return succ_[x]; }

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<Rate>> delta_;
  RateMode mode_;
  std::optional<std::vector<Rat>> potential_;
  std::optional<std::vector<std::vector<bool>>> support_;
  std::vector<std::vector<int>> succ_;
};

struct ValidationReport {
  bool irreducible = false;
  std::vector<std::pair<int, int>> unreachable_pairs;
  std::vector<std::string> warnings;
};

/// Metropolis rates delta(x,y) = max(U(y)-U(x), 0) on the support graph,
/// infinity elsewhere. The support graph must be irreducible unless
/// require_irreducible is false (used by the parser so validation can report
/// the failure instead).
Model build_metropolis(std::vector<std::string> labels, std::vector<Rat> potential,
                       std::vector<std::vector<bool>> support,
                       bool require_irreducible = true);

/// Parse a model file (JSON text, see README for the schema).
Model parse_model(const std::string& text);

/// Canonical serialization; parse_model(serialize_model(m)) reproduces the
/// same delta matrix exactly.
std::string serialize_model(const Model& model);

/// FNV-1a content hash of the canonical serialization.
std::string model_digest(const Model& model);

/// Reachability of every ordered pair through finite-rate paths. Warnings
/// list one-way transitions (finite rate whose reverse is infinite).
ValidationReport check_irreducible(const Model& model);

/// Whether U(x) + delta(x,y) = U(y) + delta(y,x) for every pair, with the
/// convention inf + r = inf.
bool check_weak_reversibility(const Model& model, const std::vector<Rat>& potential);

}  // namespace fwland
