#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "generator.hpp"
#include "hierarchy.hpp"
#include "random.hpp"

namespace hfs {

enum class PerturbationKind { Reinsert, Collapse, Flatten };

struct PointMove {
  PointId point;
  NodeId from;
  NodeId to;
};

struct PerturbationRecord {
  PerturbationKind kind = PerturbationKind::Reinsert;
  std::vector<PointMove> moved_points;  // one entry per re-insertion event
  std::size_t errors_applied = 0;
};

// k error events on the model. Each event picks one point uniformly (with
// replacement across events) and re-draws its cluster from the model's own
// sticks. Classes and the ground truth are left alone.
inline std::pair<GeneratedInstance, PerturbationRecord> reinsert_random(GeneratedInstance gi, std::size_t k,
                                                                        RandomStream& rng,
                                                                        SampleOptions options = {}) {
  PerturbationRecord record;
  record.kind = PerturbationKind::Reinsert;
  if (k == 0) return {std::move(gi), std::move(record)};

  const std::size_t n = gi.instance.n_points();
  std::vector<NodeId> assignment(gi.instance.model.assignment().begin(), gi.instance.model.assignment().end());
  record.moved_points.reserve(k);
  for (std::size_t e = 0; e < k; ++e) {
    const auto p = static_cast<PointId>(rng.below(n));
    const NodeId to = sample_node(gi.sticks, gi.params, rng, options);
    record.moved_points.push_back({p, assignment[p], to});
    assignment[p] = to;
  }
  record.errors_applied = k;
  gi.instance.model = build_hierarchy(gi.sticks, assignment);
  return {std::move(gi), std::move(record)};
}

// Every point moved to the root; nodes and edges are kept.
inline Hierarchy collapse_to_root(const Hierarchy& model) {
  auto desc = model.to_desc();
  std::vector<PointId> all(model.n_points());
  for (PointId p = 0; p < all.size(); ++p) all[p] = p;
  for (auto& node : desc.nodes) {
    if (node.id == model.root())
      node.points = all;
    else
      node.points.clear();
  }
  return Hierarchy::from_desc(desc);
}

struct FlatLayout {
  Hierarchy model;
  std::vector<NodeId> origin;  // origin[flat id] = source node id; origin[0] = source root
};

// New empty root (id 0) with one leaf per data-bearing node of `model`, in
// ascending source id. Each leaf keeps only the node's own points.
inline FlatLayout flatten_layout(const Hierarchy& model) {
  HierarchyDesc desc;
  desc.n_points = model.n_points();
  desc.nodes.push_back({0, std::nullopt, {}});
  std::vector<NodeId> origin{model.root()};
  for (NodeId n = 0; n < model.node_count(); ++n) {
    if (model.points(n).empty()) continue;
    const auto id = static_cast<NodeId>(desc.nodes.size());
    desc.nodes.push_back({id, NodeId{0}, {model.points(n).begin(), model.points(n).end()}});
    origin.push_back(n);
  }
  return {Hierarchy::from_desc(desc), std::move(origin)};
}

inline Hierarchy flatten_one_level(const Hierarchy& model) { return flatten_layout(model).model; }

struct FlatInstance {
  GeneratedInstance flat;       // model is single-level, sticks drive level-preserving errors
  std::vector<NodeId> origin;   // see FlatLayout
};

// Flattens the model of `gi` and builds sticks for a single-level tree:
// the root never stops (its mass is renormalized over the children), every
// leaf gets a fresh Beta(1, gamma) branch stick in leaf order, and the depth
// cap of two levels forces a stop at any leaf. Re-insertion through these
// sticks keeps the model flat; new nodes are appended as new leaves.
inline FlatInstance flatten_instance(const GeneratedInstance& gi, RandomStream& rng) {
  auto layout = flatten_layout(gi.instance.model);
  TssbParams params = gi.params;
  params.max_depth = 2;
  auto sticks = StickState::with_root(0.0);
  for (std::size_t leaf = 1; leaf < layout.model.node_count(); ++leaf) {
    sticks.add_child(0, sample_beta_one(params.gamma, rng), 1.0);
  }
  Instance inst(gi.instance.ground_truth, std::move(layout.model));
  return {GeneratedInstance{std::move(inst), std::move(sticks), params, gi.seed}, std::move(layout.origin)};
}

// Maps a (possibly perturbed) flat model back onto the tree it was
// flattened from: points of a leaf with a known origin go to that source
// node; leaves created after flattening (and the flat root, if it holds
// points) become new children of the source root. The result has exactly the same point partition as `flat`.
inline Hierarchy unflatten(const Hierarchy& source, const Hierarchy& flat, std::span<const NodeId> origin) {
  auto desc = source.to_desc();
  std::vector<std::size_t> slot(source.node_count());
  for (std::size_t i = 0; i < desc.nodes.size(); ++i) {
    slot[desc.nodes[i].id] = i;
    desc.nodes[i].points.clear();
  }
  for (NodeId leaf = 0; leaf < flat.node_count(); ++leaf) {
    const auto pts = flat.points(leaf);
    if (pts.empty()) continue;
    if (leaf != flat.root() && leaf < origin.size()) {
      auto& target = desc.nodes[slot[origin[leaf]]].points;
      target.insert(target.end(), pts.begin(), pts.end());
    } else {
      const auto id = static_cast<NodeId>(desc.nodes.size());
      desc.nodes.push_back({id, source.root(), {pts.begin(), pts.end()}});
    }
  }
  return Hierarchy::from_desc(desc);
}

}  // namespace hfs
