#include "fwland/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace fwland {

using nlohmann::json;

Model::Model(std::vector<std::string> labels, std::vector<std::vector<Rate>> delta,
             RateMode mode, std::optional<std::vector<Rat>> potential,
             std::optional<std::vector<std::vector<bool>>> support)
    : labels_(std::move(labels)),
      delta_(std::move(delta)),
      mode_(mode),
      potential_(std::move(potential)),
      support_(std::move(support)) {
  const int n = size();
  if (n == 0) throw ModelFormatError("model needs at least one state");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw ModelFormatError("empty state label");
    if (!seen.insert(l).second) throw ModelFormatError("duplicate label: '" + l + "'");
  }
  if (static_cast<int>(delta_.size()) != n)
    throw ModelFormatError("delta matrix has wrong dimensions");
  for (int x = 0; x < n; ++x) {
    if (static_cast<int>(delta_[x].size()) != n)
      throw ModelFormatError("delta matrix has wrong dimensions");
    delta_[x][x] = Rate::infinity();  // self-transitions are never modeled
    for (int y = 0; y < n; ++y)
      if (delta_[x][y].is_finite() && delta_[x][y].finite() < 0)
        throw ModelFormatError("negative rate for " + labels_[x] + " -> " + labels_[y]);
  }
  if (potential_ && static_cast<int>(potential_->size()) != n)
    throw ModelFormatError("potential has wrong dimensions");
  succ_.resize(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (y != x && delta_[x][y].is_finite()) succ_[x].push_back(y);
}

int Model::state(const std::string& label) const {
  auto i = find_state(label);
  if (!i) throw ModelFormatError("unknown state label: '" + label + "'");
  return *i;
}

std::optional<int> Model::find_state(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

namespace {

std::vector<std::vector<bool>> reachability(const Model& m) {
  const int n = m.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int s = 0; s < n; ++s) {
    std::vector<int> stack{s};
    reach[s][s] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : m.finite_successors(u))
        if (!reach[s][v]) {
          reach[s][v] = true;
          stack.push_back(v);
        }
    }
  }
  return reach;
}

bool directed_irreducible(const std::vector<std::vector<bool>>& adj) {
  const int n = static_cast<int>(adj.size());
  for (int s = 0; s < n; ++s) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v)
        if (adj[u][v] && !seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
    }
    for (int v = 0; v < n; ++v)
      if (!seen[v]) return false;
  }
  return true;
}

}  // namespace

Model build_metropolis(std::vector<std::string> labels, std::vector<Rat> potential,
                       std::vector<std::vector<bool>> support,
                       bool require_irreducible) {
  const int n = static_cast<int>(labels.size());
  if (static_cast<int>(potential.size()) != n ||
      static_cast<int>(support.size()) != n)
    throw ModelFormatError("metropolis inputs have inconsistent dimensions");
  if (require_irreducible && !directed_irreducible(support))
    throw ModelFormatError("support graph is not irreducible");
  std::vector<std::vector<Rate>> delta(n, std::vector<Rate>(n, Rate::infinity()));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && support[x][y]) {
        Rat diff = potential[y] - potential[x];
        delta[x][y] = Rate(diff > 0 ? diff : Rat(0));
      }
  return Model(std::move(labels), std::move(delta), RateMode::Metropolis,
               std::move(potential), std::move(support));
}

namespace {

const json& require_field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end())
    throw ModelFormatError(std::string("missing field '") + key + "'");
  return *it;
}

Rat parse_rate_string(const json& j, const std::string& what) {
  if (!j.is_string())
    throw ModelFormatError(what + ": numbers must be decimal strings");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(what + ": " + e.what());
  }
}

}  // namespace

Model parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ModelFormatError("model file must be a JSON object");

  static const std::set<std::string> known{"states", "mode", "rates", "potential",
                                           "support"};
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!known.count(it.key()))
      throw ModelFormatError("unknown field '" + it.key() + "'");

  const json& jstates = require_field(doc, "states");
  if (!jstates.is_array() || jstates.empty())
    throw ModelFormatError("'states' must be a non-empty array of labels");
  std::vector<std::string> labels;
  for (const auto& s : jstates) {
    if (!s.is_string()) throw ModelFormatError("state labels must be strings");
    labels.push_back(s.get<std::string>());
  }
  const int n = static_cast<int>(labels.size());
  auto index_of = [&](const std::string& l) -> int {
    for (int i = 0; i < n; ++i)
      if (labels[i] == l) return i;
    throw ModelFormatError("unknown state label: '" + l + "'");
  };

  std::string mode = "explicit";
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw ModelFormatError("'mode' must be a string");
    mode = doc["mode"].get<std::string>();
  }
  if (mode != "explicit" && mode != "metropolis")
    throw ModelFormatError("mode must be 'explicit' or 'metropolis'");

  std::optional<std::vector<Rat>> potential;
  if (doc.contains("potential")) {
    const json& jpot = doc["potential"];
    if (!jpot.is_object()) throw ModelFormatError("'potential' must be an object");
    std::vector<Rat> u(n);
    std::vector<bool> given(n, false);
    for (auto it = jpot.begin(); it != jpot.end(); ++it) {
      int i = index_of(it.key());
      u[i] = parse_rate_string(it.value(), "potential of '" + it.key() + "'");
      given[i] = true;
    }
    for (int i = 0; i < n; ++i)
      if (!given[i])
        throw ModelFormatError("potential missing for state '" + labels[i] + "'");
    potential = std::move(u);
  }

  std::optional<std::vector<std::vector<bool>>> support;
  if (doc.contains("support")) {
    const json& jsup = doc["support"];
    if (!jsup.is_array()) throw ModelFormatError("'support' must be an array of pairs");
    std::vector<std::vector<bool>> q(n, std::vector<bool>(n, false));
    for (const auto& pair : jsup) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
          !pair[1].is_string())
        throw ModelFormatError("support entries must be [from, to] label pairs");
      int x = index_of(pair[0].get<std::string>());
      int y = index_of(pair[1].get<std::string>());
      if (x == y) throw ModelFormatError("support must not contain self-pairs");
      q[x][y] = true;
    }
    support = std::move(q);
  }

  if (mode == "metropolis") {
    if (doc.contains("rates"))
      throw ModelFormatError("explicit rates are not allowed in metropolis mode");
    if (!potential) throw ModelFormatError("metropolis mode requires 'potential'");
    if (!support) throw ModelFormatError("metropolis mode requires 'support'");
    return build_metropolis(std::move(labels), std::move(*potential),
                            std::move(*support), /*require_irreducible=*/false);
  }

  std::vector<std::vector<Rate>> delta(n, std::vector<Rate>(n, Rate::infinity()));
  if (doc.contains("rates")) {
    const json& jrates = doc["rates"];
    if (!jrates.is_array()) throw ModelFormatError("'rates' must be an array");
    for (const auto& entry : jrates) {
      if (!entry.is_object())
        throw ModelFormatError("rate entries must be objects with from/to/delta");
      int x = index_of(require_field(entry, "from").get<std::string>());
      int y = index_of(require_field(entry, "to").get<std::string>());
      if (x == y)
        throw ModelFormatError("self-transition rates are not representable; omit them");
      if (delta[x][y].is_finite())
        throw ModelFormatError("duplicate rate entry " + labels[x] + " -> " + labels[y]);
      Rat v = parse_rate_string(require_field(entry, "delta"),
                                "rate " + labels[x] + " -> " + labels[y]);
      if (v < 0)
        throw ModelFormatError("negative rate for " + labels[x] + " -> " + labels[y]);
      delta[x][y] = Rate(std::move(v));
    }
  }
  return Model(std::move(labels), std::move(delta), RateMode::Explicit,
               std::move(potential), std::move(support));
}

std::string serialize_model(const Model& model) {
  json doc;
  doc["states"] = model.labels();
  const int n = model.size();
  if (model.mode() == RateMode::Metropolis) {
    doc["mode"] = "metropolis";
  } else {
    doc["mode"] = "explicit";
    json rates = json::array();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (x != y && model.delta(x, y).is_finite())
          rates.push_back({{"from", model.label(x)},
                           {"to", model.label(y)},
                           {"delta", model.delta(x, y).str()}});
    doc["rates"] = rates;
  }
  if (model.potential()) {
    json pot = json::object();
    for (int i = 0; i < n; ++i)
      pot[model.label(i)] = rational_to_string((*model.potential())[i]);
    doc["potential"] = pot;
  }
  if (model.support()) {
    json sup = json::array();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if ((*model.support())[x][y]) sup.push_back({model.label(x), model.label(y)});
    doc["support"] = sup;
  }
  return doc.dump(2);
}

std::string model_digest(const Model& model) {
  const std::string canon = serialize_model(model);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << h;
  return out.str();
}

ValidationReport check_irreducible(const Model& model) {
  ValidationReport report;
  const int n = model.size();
  auto reach = reachability(model);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && !reach[x][y]) report.unreachable_pairs.emplace_back(x, y);
  report.irreducible = report.unreachable_pairs.empty();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && model.delta(x, y).is_finite() && !model.delta(y, x).is_finite())
        report.warnings.push_back("one-way transition " + model.label(x) + " -> " +
                                  model.label(y) + " (reverse rate is infinite)");
  return report;
}

bool check_weak_reversibility(const Model& model, const std::vector<Rat>& potential) {
  const int n = model.size();
  if (static_cast<int>(potential.size()) != n)
    throw std::invalid_argument("potential has wrong dimensions");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      Rate lhs = Rate(potential[x]) + model.delta(x, y);
      Rate rhs = Rate(potential[y]) + model.delta(y, x);
      if (!(lhs == rhs)) return false;
    }
  return true;
}

}  // namespace fwland
