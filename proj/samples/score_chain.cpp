// Builds the two-point chain by hand, collapses its copy into the root and
// prints the three F-scores.

#include <cstdio>

#include <hfscore/hfscore.hpp>

int main() {
  using namespace hfs;

  // A({x0}) -> B({x1})
  const auto truth = Hierarchy::from_desc({2, {{0, std::nullopt, {0}}, {1, NodeId{0}, {1}}}});
  const Instance inst(truth, collapse_to_root(truth));

  const auto scores = score_all(inst);
  std::printf("classic       %.6f\n", scores.classic);
  std::printf("partial order %.6f\n", scores.partial_order);
  std::printf("hierarchical  %.6f\n", scores.hierarchical);
  for (const auto& row : hierarchical_fscore(inst).classes) {
    std::printf("  class %u: F=%.6f via cluster %u (weight %llu)\n", row.class_node, row.f_c, row.best_cluster,
                static_cast<unsigned long long>(row.weight));
  }
  return 0;
}
