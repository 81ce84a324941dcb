#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hierarchy.hpp"

namespace hfs {

// Ordered-pair hypothesis tallies over all pairs (i, j), i != j.
struct PairCounts {
  std::uint64_t p_t = 0;  // G and M
  std::uint64_t p_f = 0;  // not G, M
  std::uint64_t n_t = 0;  // not G, not M
  std::uint64_t n_f = 0;  // G, not M

  std::uint64_t total() const { return p_t + p_f + n_t + n_f; }

  friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

// Equality: same node.  PartialOrderSub: node(i) is node(j) or below it.
// PartialOrderSup: node(i) is node(j) or above it.
enum class RelationKind { Equality, PartialOrderSub, PartialOrderSup };

enum class Direction { Sub, Sup };

inline RelationKind relation_for(Direction d) {
  return d == Direction::Sub ? RelationKind::PartialOrderSub : RelationKind::PartialOrderSup;
}

namespace detail {

inline bool nodes_related(const Hierarchy& h, RelationKind kind, NodeId a, NodeId b) {
  switch (kind) {
    case RelationKind::Equality:
      return a == b;
    case RelationKind::PartialOrderSub:
      return h.is_desc_or_equal(a, b);
    case RelationKind::PartialOrderSup:
      return h.is_desc_or_equal(b, a);
  }
  return false;
}

inline std::uint64_t ordered_pairs(std::uint64_t n) { return n == 0 ? 0 : n * (n - 1); }

}  // namespace detail

inline bool relation_holds(const Hierarchy& h, RelationKind kind, PointId i, PointId j) {
  if (i == j) throw std::invalid_argument("relation is defined on distinct points only");
  return detail::nodes_related(h, kind, h.node_of(i), h.node_of(j));
}

// Brute force over all N(N-1) ordered pairs.
inline PairCounts pair_counts_naive(const Instance& inst, RelationKind kind) {
  PairCounts c;
  const auto n = static_cast<PointId>(inst.n_points());
  for (PointId i = 0; i < n; ++i) {
    for (PointId j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool g = relation_holds(inst.ground_truth, kind, i, j);
      const bool m = relation_holds(inst.model, kind, i, j);
      if (g && m)
        ++c.p_t;
      else if (!g && m)
        ++c.p_f;
      else if (!g && !m)
        ++c.n_t;
      else
        ++c.n_f;
    }
  }
  return c;
}

// Occupied cells of the (class node, cluster node) contingency table.
struct ContingencyCell {
  NodeId class_node;
  NodeId cluster_node;
  std::uint64_t count;
};

inline std::vector<ContingencyCell> contingency_cells(const Instance& inst) {
  std::map<std::pair<NodeId, NodeId>, std::uint64_t> table;
  for (PointId p = 0; p < inst.n_points(); ++p) {
    ++table[{inst.ground_truth.node_of(p), inst.model.node_of(p)}];
  }
  std::vector<ContingencyCell> cells;
  cells.reserve(table.size());
  for (const auto& [key, count] : table) cells.push_back({key.first, key.second, count});
  return cells;
}

namespace detail {

// Ordered pairs (i, j), i != j, with rel(node(i), node(j)) in one hierarchy.
// Both partial-order directions give the same count: each related pair is
// counted once in one direction and once reversed in the other.
inline std::uint64_t related_pairs(const Hierarchy& h, RelationKind kind) {
  std::uint64_t sum = 0;
  if (kind == RelationKind::Equality) {
    for (NodeId n = 0; n < h.node_count(); ++n) {
      const std::uint64_t k = h.points(n).size();
      sum += k * k;
    }
  } else {
    for (NodeId n = 0; n < h.node_count(); ++n) {
      sum += static_cast<std::uint64_t>(h.points(n).size()) * h.subtree_size(n);
    }
  }
  return sum - h.n_points();
}

}  // namespace detail

// Same result as pair_counts_naive, aggregated over contingency cells.
inline PairCounts pair_counts_fast(const Instance& inst, RelationKind kind) {
  const auto& gt = inst.ground_truth;
  const auto& model = inst.model;
  const std::uint64_t n = inst.n_points();

  const auto cells = contingency_cells(inst);
  std::uint64_t joint = 0;
  if (kind == RelationKind::Equality) {
    for (const auto& c : cells) joint += c.count * c.count;
  } else {
    for (const auto& a : cells) {
      for (const auto& b : cells) {
        if (detail::nodes_related(gt, kind, a.class_node, b.class_node) &&
            detail::nodes_related(model, kind, a.cluster_node, b.cluster_node)) {
          joint += a.count * b.count;
        }
      }
    }
  }
  // every point is related to itself under both relations
  joint -= n;

  const std::uint64_t g_pos = detail::related_pairs(gt, kind);
  const std::uint64_t m_pos = detail::related_pairs(model, kind);

  PairCounts c;
  c.p_t = joint;
  c.p_f = m_pos - joint;
  c.n_f = g_pos - joint;
  c.n_t = detail::ordered_pairs(n) - c.p_t - c.p_f - c.n_f;
  return c;
}

// 2 p_t / (2 p_t + n_f + p_f); 1.0 when no positive pair exists on either side.
inline double f1_from_counts(const PairCounts& c) {
  const double denom = 2.0 * static_cast<double>(c.p_t) + static_cast<double>(c.n_f) +
                       static_cast<double>(c.p_f);
  if (denom == 0.0) return 1.0;
  return 2.0 * static_cast<double>(c.p_t) / denom;
}

inline double classic_fscore(const Instance& inst) {
  return f1_from_counts(pair_counts_fast(inst, RelationKind::Equality));
}

inline double partial_order_fscore(const Instance& inst, Direction direction = Direction::Sub) {
  return f1_from_counts(pair_counts_fast(inst, relation_for(direction)));
}

struct ClassScore {
  NodeId class_node = 0;
  double f_c = 0.0;
  NodeId best_cluster = 0;
  std::uint64_t weight = 0;  // |points in the class subtree|
};

struct HierFScoreDetail {
  std::vector<ClassScore> classes;  // ascending class id; classes with empty subtrees omitted
  double overall = 1.0;
};

// For every class c, the best F over all clusters e of
//   2 |X(subtree e) ∩ X(subtree c)| / (|X(subtree e)| + |X(subtree c)|),
// then the average of those maxima weighted by class subtree size.
// Ties go to the smallest cluster id.
inline HierFScoreDetail hierarchical_fscore(const Instance& inst) {
  const auto& gt = inst.ground_truth;
  const auto& model = inst.model;

  // cells grouped by the preorder position of their class node, so that a
  // class subtree is a contiguous run of groups
  const auto cells = contingency_cells(inst);
  std::vector<std::vector<std::pair<NodeId, std::uint64_t>>> by_position(gt.node_count());
  for (const auto& c : cells) {
    by_position[gt.preorder_index(c.class_node)].push_back({c.cluster_node, c.count});
  }

  // model nodes in reverse preorder: children before parents
  const auto model_order = model.preorder();
  std::vector<std::uint64_t> overlap(model.node_count());

  HierFScoreDetail detail;
  double weighted = 0.0;
  std::uint64_t total_weight = 0;
  for (NodeId c = 0; c < gt.node_count(); ++c) {
    const std::uint64_t class_size = gt.subtree_size(c);
    if (class_size == 0) continue;

    std::fill(overlap.begin(), overlap.end(), 0);
    for (std::size_t pos = gt.preorder_index(c); pos < gt.preorder_end(c); ++pos) {
      for (const auto& [cluster, count] : by_position[pos]) overlap[cluster] += count;
    }
    for (auto it = model_order.rbegin(); it != model_order.rend(); ++it) {
      if (auto p = model.parent(*it)) overlap[*p] += overlap[*it];
    }

    ClassScore row{c, -1.0, 0, class_size};
    for (NodeId e = 0; e < model.node_count(); ++e) {
      const double f = 2.0 * static_cast<double>(overlap[e]) /
                       static_cast<double>(model.subtree_size(e) + class_size);
      if (f > row.f_c) {
        row.f_c = f;
        row.best_cluster = e;
      }
    }
    weighted += static_cast<double>(class_size) * row.f_c;
    total_weight += class_size;
    detail.classes.push_back(row);
  }
  detail.overall = total_weight == 0 ? 1.0 : weighted / static_cast<double>(total_weight);
  return detail;
}

struct MeasureScores {
  double classic = 0.0;
  double partial_order = 0.0;
  double hierarchical = 0.0;
};

inline MeasureScores score_all(const Instance& inst) {
  return {classic_fscore(inst), partial_order_fscore(inst), hierarchical_fscore(inst).overall};
}

}  // namespace hfs
