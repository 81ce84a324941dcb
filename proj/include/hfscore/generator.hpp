#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hierarchy.hpp"
#include "random.hpp"

namespace hfs {

// Tree-structured stick-breaking configuration. Depth-d stop sticks are
// Beta(1, alpha0 * lambda^d); branch sticks are Beta(1, gamma).
struct TssbParams {
  double alpha0 = 1.0;
  double lambda = 0.5;
  double gamma = 0.2;
  std::size_t max_depth = 50;  // number of levels; nodes at depth max_depth - 1 always stop
  std::size_t n_points = 1000;

  void validate() const {
    if (!(alpha0 > 0.0) || !(lambda > 0.0) || !(gamma > 0.0))
      throw std::invalid_argument("alpha0, lambda and gamma must be positive");
    if (max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");
    if (n_points < 1) throw std::invalid_argument("n_points must be at least 1");
  }
};

struct Preset {
  std::string_view name;
  double alpha0;
  double lambda;
  double gamma;
};

inline constexpr std::array<Preset, 8> kPresets{{
    {"s00", 1.0, 0.5, 0.2},
    {"s01", 1.0, 1.0, 0.2},
    {"s02", 1.0, 1.0, 1.0},
    {"s03", 5.0, 0.5, 0.2},
    {"s04", 5.0, 1.0, 0.2},
    {"s05", 5.0, 0.5, 1.0},
    {"s06", 25.0, 0.5, 0.2},
    {"s07", 25.0, 0.5, 1.0},
}};

inline std::size_t preset_index(std::string_view name) {
  for (std::size_t i = 0; i < kPresets.size(); ++i) {
    if (kPresets[i].name == name) return i;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected s00..s07)");
}

inline TssbParams preset_params(std::string_view name) {
  const auto& p = kPresets[preset_index(name)];
  TssbParams params;
  params.alpha0 = p.alpha0;
  params.lambda = p.lambda;
  params.gamma = p.gamma;
  return params;
}

inline double alpha_at_depth(const TssbParams& params, std::size_t depth) {
  return params.alpha0 * std::pow(params.lambda, static_cast<double>(depth));
}

struct StickNode {
  std::optional<NodeId> parent;
  std::size_t depth = 0;
  double stop_stick = 0.0;            // probability of stopping here
  std::vector<double> branch_sticks;  // branch_sticks[i] belongs to children[i]
  std::vector<NodeId> children;

  friend bool operator==(const StickNode&, const StickNode&) = default;
};

// Latent sticks of one tree. Node ids are creation order; the root is 0.
class StickState {
 public:
  StickState() = default;

  static StickState with_root(double stop_stick) {
    StickState s;
    s.nodes_.push_back({std::nullopt, 0, stop_stick, {}, {}});
    return s;
  }

  std::size_t size() const { return nodes_.size(); }
  const StickNode& node(NodeId id) const { return nodes_.at(id); }
  std::span<const StickNode> nodes() const { return nodes_; }

  NodeId add_child(NodeId parent, double branch_stick, double stop_stick) {
    const auto id = static_cast<NodeId>(nodes_.size());
    const std::size_t depth = nodes_.at(parent).depth + 1;
    nodes_.push_back({parent, depth, stop_stick, {}, {}});
    nodes_[parent].branch_sticks.push_back(branch_stick);
    nodes_[parent].children.push_back(id);
    return id;
  }

  friend bool operator==(const StickState&, const StickState&) = default;

 private:
  std::vector<StickNode> nodes_;
};

// Same tree shape as `sticks`, with the given point assignment.
inline Hierarchy build_hierarchy(const StickState& sticks, std::span<const NodeId> assignment) {
  HierarchyDesc desc;
  desc.n_points = assignment.size();
  desc.nodes.resize(sticks.size());
  for (NodeId id = 0; id < sticks.size(); ++id) {
    desc.nodes[id].id = id;
    desc.nodes[id].parent = sticks.node(id).parent;
  }
  for (PointId p = 0; p < assignment.size(); ++p) desc.nodes.at(assignment[p]).points.push_back(p);
  return Hierarchy::from_desc(desc);
}

struct Descent {
  NodeId node = 0;
  bool hit_depth_cap = false;
};

struct SampleOptions {
  // When false, descent never instantiates nodes: if the walk over a node's
  // branch sticks runs past its last existing child, it stops at that node.
  bool allow_new_nodes = true;
};

// Root-down descent through the sticks. At each node: stop with probability
// of its stop stick, otherwise take child i with probability
// psi_i * prod_{k<i} (1 - psi_k). Missing sticks and nodes are drawn on
// demand and persisted.
inline Descent sample_descent(StickState& sticks, const TssbParams& params, RandomStream& rng,
                              SampleOptions options = {}) {
  NodeId cur = 0;
  while (true) {
    const std::size_t depth = sticks.node(cur).depth;
    if (depth + 1 >= params.max_depth) return {cur, true};
    if (rng.uniform() < sticks.node(cur).stop_stick) return {cur, false};

    std::size_t i = 0;
    while (true) {
      if (i == sticks.node(cur).children.size()) {
        if (!options.allow_new_nodes) return {cur, false};
        const double psi = sample_beta_one(params.gamma, rng);
        const double nu = sample_beta_one(alpha_at_depth(params, depth + 1), rng);
        sticks.add_child(cur, psi, nu);
      }
      if (rng.uniform() < sticks.node(cur).branch_sticks[i]) break;
      ++i;
    }
    cur = sticks.node(cur).children[i];
  }
}

inline NodeId sample_node(StickState& sticks, const TssbParams& params, RandomStream& rng,
                          SampleOptions options = {}) {
  return sample_descent(sticks, params, rng, options).node;
}

struct GeneratedInstance {
  Instance instance;
  StickState sticks;  // sticks of the model hierarchy (same node ids)
  TssbParams params;
  std::uint64_t seed = 0;
};

// Draws params.n_points assignments. The ground truth and the model are
// identical at creation.
inline GeneratedInstance generate_instance(const TssbParams& params, std::uint64_t seed) {
  params.validate();
  RandomStream rng(seed);
  auto sticks = StickState::with_root(sample_beta_one(alpha_at_depth(params, 0), rng));
  std::vector<NodeId> assignment(params.n_points);
  for (auto& a : assignment) a = sample_node(sticks, params, rng);
  auto gt = build_hierarchy(sticks, assignment);
  Hierarchy model = gt;
  return {Instance(std::move(gt), std::move(model)), std::move(sticks), params, seed};
}

}  // namespace hfs
