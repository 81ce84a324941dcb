#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hfs {

using NodeId = std::uint32_t;
using PointId = std::uint32_t;

// One node of a hierarchy as written in a file or assembled by hand. No
// invariants are assumed; see validate_hierarchy.
struct NodeRecord {
  NodeId id = 0;
  std::optional<NodeId> parent;
  std::vector<PointId> points;
};

struct HierarchyDesc {
  std::size_t n_points = 0;
  std::vector<NodeRecord> nodes;
};

struct Violation {
  std::string kind;     // short stable tag, e.g. "multiple roots"
  std::string message;  // names the offending node or point
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  bool has(const std::string& kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.kind == kind; });
  }

  std::string summary() const {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += v.kind + ": " + v.message;
    }
    return out;
  }
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report)
      : std::runtime_error("invalid hierarchy: " + report.summary()),
        report_(std::move(report)) {}

  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

class UniverseMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Checks every structural invariant of a hierarchy description:
//  - node ids are unique and dense in [0, node count)
//  - exactly one root, every parent exists, no cycles, all nodes reachable
//  - every point in [0, n_points) is assigned to exactly one node
inline ValidationReport validate_hierarchy(const HierarchyDesc& desc) {
  ValidationReport report;
  auto add = [&](std::string kind, std::string message) {
    report.violations.push_back({std::move(kind), std::move(message)});
  };

  const std::size_t count = desc.nodes.size();
  if (count == 0) {
    add("no root", "hierarchy has no nodes");
    return report;
  }

  // slot[id] = index into desc.nodes
  std::vector<std::optional<std::size_t>> slot(count);
  bool ids_ok = true;
  for (std::size_t i = 0; i < count; ++i) {
    const NodeId id = desc.nodes[i].id;
    if (id >= count) {
      add("node id out of range", "node " + std::to_string(id) + " (ids must be dense in [0, " +
                                      std::to_string(count) + "))");
      ids_ok = false;
    } else if (slot[id]) {
      add("duplicate node id", "node " + std::to_string(id));
      ids_ok = false;
    } else {
      slot[id] = i;
    }
  }

  std::vector<NodeId> roots;
  for (const auto& n : desc.nodes) {
    if (!n.parent) {
      roots.push_back(n.id);
    } else if (*n.parent >= count || (ids_ok && !slot[*n.parent])) {
      add("unknown parent", "node " + std::to_string(n.id) + " references parent " +
                                std::to_string(*n.parent));
      ids_ok = false;
    } else if (*n.parent == n.id) {
      add("cycle", "node " + std::to_string(n.id) + " is its own parent");
    }
  }
  if (roots.empty()) {
    add("no root", "no node has a null parent");
  } else if (roots.size() > 1) {
    std::string which;
    for (NodeId r : roots) which += (which.empty() ? "" : ", ") + std::to_string(r);
    add("multiple roots", "nodes " + which);
  }

  if (ids_ok) {
    // Walk parent pointers from each node; anything that fails to reach the
    // root within `count` steps sits on (or below) a cycle.
    std::vector<std::optional<NodeId>> parent_of(count);
    for (const auto& n : desc.nodes) parent_of[n.id] = n.parent;
    std::vector<std::uint8_t> state(count, 0);  // 0 unknown, 1 reaches a root, 2 does not
    for (NodeId start = 0; start < count; ++start) {
      std::vector<NodeId> path;
      NodeId cur = start;
      std::uint8_t verdict = 2;
      while (true) {
        if (state[cur] != 0) {
          verdict = state[cur];
          break;
        }
        if (!parent_of[cur]) {
          verdict = 1;
          path.push_back(cur);
          break;
        }
        if (path.size() > count) break;
        path.push_back(cur);
        cur = *parent_of[cur];
      }
      for (NodeId p : path) state[p] = verdict;
    }
    for (NodeId id = 0; id < count; ++id) {
      if (state[id] == 2) add("unreachable node", "node " + std::to_string(id) + " is not reachable from a root (cycle)");
    }
  }

  std::vector<std::optional<NodeId>> owner(desc.n_points);
  for (const auto& n : desc.nodes) {
    for (PointId p : n.points) {
      if (p >= desc.n_points) {
        add("point out of range", "point " + std::to_string(p) + " in node " + std::to_string(n.id));
      } else if (owner[p]) {
        add("point multiply assigned", "point " + std::to_string(p) + " in nodes " +
                                           std::to_string(*owner[p]) + " and " + std::to_string(n.id));
      } else {
        owner[p] = n.id;
      }
    }
  }
  for (std::size_t p = 0; p < desc.n_points; ++p) {
    if (!owner[p]) add("point unassigned", "point " + std::to_string(p));
  }
  return report;
}

// Immutable rooted tree of clusters (or classes) with a hard assignment of
// the points [0, n_points) to nodes. Points may sit on any node, not only on
// leaves. Construct through from_desc, which validates.
class Hierarchy {
 public:
  static Hierarchy from_desc(const HierarchyDesc& desc) {
    auto report = validate_hierarchy(desc);
    if (!report.ok()) throw ValidationError(std::move(report));

    Hierarchy h;
    const std::size_t count = desc.nodes.size();
    h.n_points_ = desc.n_points;
    h.parent_.assign(count, std::nullopt);
    h.children_.assign(count, {});
    h.points_.assign(count, {});
    h.node_of_.assign(desc.n_points, 0);
    h.list_order_.reserve(count);
    for (const auto& n : desc.nodes) {
      h.list_order_.push_back(n.id);
      h.parent_[n.id] = n.parent;
      if (!n.parent) h.root_ = n.id;
      h.points_[n.id] = n.points;
      std::sort(h.points_[n.id].begin(), h.points_[n.id].end());
      for (PointId p : n.points) h.node_of_[p] = n.id;
    }
    for (const auto& n : desc.nodes) {
      if (n.parent) h.children_[*n.parent].push_back(n.id);
    }
    h.build_index();
    return h;
  }

  std::size_t n_points() const { return n_points_; }
  std::size_t node_count() const { return parent_.size(); }
  NodeId root() const { return root_; }

  std::optional<NodeId> parent(NodeId n) const { return parent_.at(n); }
  std::span<const NodeId> children(NodeId n) const { return children_.at(n); }
  std::span<const PointId> points(NodeId n) const { return points_.at(n); }
  std::size_t depth(NodeId n) const { return depth_.at(n); }

  NodeId node_of(PointId p) const {
    if (p >= n_points_) throw std::out_of_range("unknown point " + std::to_string(p));
    return node_of_[p];
  }
  std::span<const NodeId> assignment() const { return node_of_; }

  // |points in the subtree rooted at n|
  std::size_t subtree_size(NodeId n) const { return subtree_size_.at(n); }

  // Number of levels, i.e. 1 + max node depth.
  std::size_t height() const { return height_; }

  // Edges from the root to the deepest node (empty nodes included).
  std::size_t tree_depth() const { return height_ - 1; }

  // Nodes in preorder; a node's descendants occupy a contiguous run starting
  // at its own position.
  std::span<const NodeId> preorder() const { return preorder_; }
  std::size_t preorder_index(NodeId n) const { return enter_.at(n); }
  std::size_t preorder_end(NodeId n) const { return exit_.at(n); }

  // {n} plus all descendants, by explicit recursion over children. Sorted.
  std::vector<NodeId> descendant_nodes(NodeId n) const {
    check(n);
    std::vector<NodeId> out;
    collect(n, out);
    std::sort(out.begin(), out.end());
    return out;
  }

  // Points held by n and all its descendants. Sorted.
  std::vector<PointId> subtree_points(NodeId n) const {
    std::vector<PointId> out;
    for (NodeId d : descendant_nodes(n)) out.insert(out.end(), points_[d].begin(), points_[d].end());
    std::sort(out.begin(), out.end());
    return out;
  }

  // True iff a is b or a descendant of b. O(1) via preorder intervals.
  bool is_desc_or_equal(NodeId a, NodeId b) const {
    check(a);
    check(b);
    return enter_[b] <= enter_[a] && exit_[a] <= exit_[b];
  }

  HierarchyDesc to_desc() const {
    HierarchyDesc desc;
    desc.n_points = n_points_;
    for (NodeId id : list_order_) desc.nodes.push_back({id, parent_[id], points_[id]});
    return desc;
  }

  friend bool operator==(const Hierarchy& a, const Hierarchy& b) {
    return a.n_points_ == b.n_points_ && a.parent_ == b.parent_ && a.children_ == b.children_ &&
           a.points_ == b.points_ && a.list_order_ == b.list_order_;
  }

 private:
  Hierarchy() = default;

  void check(NodeId n) const {
    if (n >= parent_.size()) throw std::out_of_range("unknown node " + std::to_string(n));
  }

  void collect(NodeId n, std::vector<NodeId>& out) const {
    out.push_back(n);
    for (NodeId c : children_[n]) collect(c, out);
  }

  void build_index() {
    const std::size_t count = parent_.size();
    enter_.assign(count, 0);
    exit_.assign(count, 0);
    depth_.assign(count, 0);
    subtree_size_.assign(count, 0);
    preorder_.clear();
    preorder_.reserve(count);

    // iterative DFS: (node, next child index)
    std::vector<std::pair<NodeId, std::size_t>> stack{{root_, 0}};
    enter_[root_] = 0;
    preorder_.push_back(root_);
    height_ = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < children_[node].size()) {
        NodeId child = children_[node][next++];
        depth_[child] = depth_[node] + 1;
        height_ = std::max(height_, depth_[child] + 1);
        enter_[child] = preorder_.size();
        preorder_.push_back(child);
        stack.push_back({child, 0});
      } else {
        exit_[node] = preorder_.size();
        std::size_t size = points_[node].size();
        for (NodeId c : children_[node]) size += subtree_size_[c];
        subtree_size_[node] = size;
        stack.pop_back();
      }
    }
  }

  std::size_t n_points_ = 0;
  NodeId root_ = 0;
  std::vector<std::optional<NodeId>> parent_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::vector<PointId>> points_;
  std::vector<NodeId> node_of_;
  std::vector<NodeId> list_order_;

  std::vector<std::size_t> enter_;
  std::vector<std::size_t> exit_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> subtree_size_;
  std::vector<NodeId> preorder_;
  std::size_t height_ = 1;
};

inline ValidationReport validate_hierarchy(const Hierarchy& h) { return validate_hierarchy(h.to_desc()); }

// A ground truth and a model over the same point universe.
struct Instance {
  Hierarchy ground_truth;
  Hierarchy model;

  Instance(Hierarchy gt, Hierarchy m) : ground_truth(std::move(gt)), model(std::move(m)) {
    if (ground_truth.n_points() != model.n_points()) {
      throw UniverseMismatch("ground truth has " + std::to_string(ground_truth.n_points()) +
                             " points but model has " + std::to_string(model.n_points()));
    }
  }

  std::size_t n_points() const { return ground_truth.n_points(); }
};

}  // namespace hfs
