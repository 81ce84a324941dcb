// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <hfscore/hfscore.hpp>

#include "random_instances.hpp"

using namespace hfs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Lowest hierarchical score seen anywhere in this run (criterion 7).
double g_min_hierarchical = std::numeric_limits<double>::infinity();
std::size_t g_scored_instances = 0;

void note_hierarchical(double h) {
  g_min_hierarchical = std::min(g_min_hierarchical, h);
  ++g_scored_instances;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---- 1 -------------------------------------------------------------------
Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::size_t mismatches = 0, conservation = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const auto inst = fixtures::random_instance(rng, 200, 60);
    const std::uint64_t n = inst.n_points();
    for (auto k : {RelationKind::Equality, RelationKind::PartialOrderSub, RelationKind::PartialOrderSup}) {
      const auto fast = pair_counts_fast(inst, k);
      if (!(fast == pair_counts_naive(inst, k))) ++mismatches;
      if (fast.total() != n * (n - 1)) ++conservation;
    }
    note_hierarchical(hierarchical_fscore(inst).overall);
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && conservation == 0 && secs < 60.0,
          std::to_string(trials) + " instances x 3 relations, " + std::to_string(mismatches) + " mismatches, " +
              std::to_string(conservation) + " conservation failures, " + fmt(secs, 2) + " s (limit 60 s)"};
}

// ---- 2 -------------------------------------------------------------------
Outcome micro_instances() {
  const Instance inst(fixtures::chain_two(), fixtures::chain_two_all_in_root());
  const double classic = classic_fscore(inst);
  const double sub = partial_order_fscore(inst, Direction::Sub);
  const double sup = partial_order_fscore(inst, Direction::Sup);
  const double hier = hierarchical_fscore(inst).overall;
  note_hierarchical(hier);
  const double tol = 1e-12;
  const bool ok = std::abs(classic - 0.0) <= tol && std::abs(sub - 2.0 / 3.0) <= tol &&
                  std::abs(sup - 2.0 / 3.0) <= tol && std::abs(hier - 8.0 / 9.0) <= tol;
  return {ok, "classic " + fmt(classic, 12) + ", partial order " + fmt(sub, 12) + "/" + fmt(sup, 12) +
                  ", hierarchical " + fmt(hier, 12) + " (tol 1e-12)"};
}

// ---- 3 -------------------------------------------------------------------
Outcome perfection_and_degeneracy() {
  std::size_t checked = 0, failures = 0;
  auto check = [&](const Instance& inst) {
    const auto s = score_all(inst);
    note_hierarchical(s.hierarchical);
    ++checked;
    if (s.classic != 1.0 || s.partial_order != 1.0 || partial_order_fscore(inst, Direction::Sup) != 1.0 ||
        s.hierarchical != 1.0)
      ++failures;
  };
  for (const auto& p : kPresets) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) check(generate_instance(preset_params(p.name), seed).instance);
  }
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto h = fixtures::random_hierarchy(rng, 100, 40);
    check(Instance(h, h));
  }
  // single point: vacuous denominators
  const auto one = Hierarchy::from_desc({1, {{0, std::nullopt, {0}}}});
  const auto deep = Hierarchy::from_desc({1, {{0, std::nullopt, {}}, {1, NodeId{0}, {}}, {2, NodeId{1}, {0}}}});
  check(Instance(one, one));
  check(Instance(one, deep));
  check(Instance(deep, one));
  return {failures == 0, std::to_string(checked) + " identity/single-point instances, " + std::to_string(failures) +
                             " not scored 1.0 by every measure"};
}

// ---- 4 -------------------------------------------------------------------
struct PaperRow {
  const char* preset;
  double classic_mu, classic_sigma, po_mu, po_sigma, hier_mu, hier_sigma;
};

// all-in-root study, as published
constexpr std::array<PaperRow, 8> kTable1{{
    {"s00", 0.6456, 0.1616, 0.8300, 0.0857, 0.8225, 0.0719},
    {"s01", 0.5973, 0.2374, 0.7977, 0.1393, 0.7501, 0.0966},
    {"s02", 0.5311, 0.2600, 0.7139, 0.1854, 0.6970, 0.1062},
    {"s03", 0.3729, 0.1207, 0.6891, 0.0915, 0.7598, 0.0853},
    {"s04", 0.1931, 0.1389, 0.5737, 0.1384, 0.5750, 0.1089},
    {"s05", 0.1952, 0.0953, 0.4253, 0.1363, 0.5680, 0.0672},
    {"s06", 0.2031, 0.0872, 0.4829, 0.1368, 0.6748, 0.1049},
    {"s07", 0.0611, 0.0481, 0.2528, 0.0939, 0.4723, 0.0918},
}};

std::vector<Outcome> table1_reproduction() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;  // 1000 points, 30 repetitions, all presets
  const auto table = run_collapse_study(cfg);
  for (const auto& p : cfg.presets) {
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) note_hierarchical(collapse_scores(cfg, p, rep).hierarchical);
  }
  const double secs = seconds_since(t0);

  bool order_ok = true, positive_ok = true;
  std::size_t within = 0;
  std::ostringstream rows;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& got = table[i];
    const auto& paper = kTable1[i];
    order_ok &= got.partial_order.mean > got.classic.mean;
    positive_ok &= got.hierarchical.mean > 0.0;
    const bool c = std::abs(got.classic.mean - paper.classic_mu) <= 2.5 * paper.classic_sigma;
    const bool p = std::abs(got.partial_order.mean - paper.po_mu) <= 2.5 * paper.po_sigma;
    const bool h = std::abs(got.hierarchical.mean - paper.hier_mu) <= 2.5 * paper.hier_sigma;
    within += (c && p && h) ? 1 : 0;
    rows << "\n       " << got.preset << "  classic " << fmt(got.classic.mean) << " (paper " << fmt(paper.classic_mu)
         << ")  partialOrder " << fmt(got.partial_order.mean) << " (paper " << fmt(paper.po_mu) << ")  adapted "
         << fmt(got.hierarchical.mean) << " (paper " << fmt(paper.hier_mu) << ")" << (c && p && h ? "" : "  [outside 2.5 sigma]");
  }
  const bool time_ok = secs < 300.0;
  return {
      {order_ok && time_ok, "(a) partial-order mean > classic mean for all 8 presets; " + fmt(secs, 2) + " s (limit 300 s)"},
      {positive_ok, "(b) hierarchical mean > 0 for all 8 presets"},
      {within >= 6 && time_ok,
       "(c) " + std::to_string(within) + "/8 presets with every mean within 2.5 paper-sigma (need >= 6)" + rows.str()},
  };
}

// ---- 5 -------------------------------------------------------------------
Outcome random_error_trends() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  std::vector<double> grid(cfg.error_grid.begin(), cfg.error_grid.end());
  std::size_t failures = 0;
  double worst_rho = -1.0;
  std::string worst;
  for (const auto& preset : cfg.presets) {
    std::vector<std::vector<MeasureScores>> per_rep;
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
      per_rep.push_back(random_errors_trajectory(cfg, preset, rep));
      for (const auto& s : per_rep.back()) note_hierarchical(s.hierarchical);
    }
    const auto table = detail::aggregate(preset, cfg.error_grid, per_rep);
    const std::array<std::pair<const char*, std::function<double(const CurveRow&)>>, 3> measures{{
        {"standard", [](const CurveRow& r) { return r.classic.mean; }},
        {"partialOrder", [](const CurveRow& r) { return r.partial_order.mean; }},
        {"adapted", [](const CurveRow& r) { return r.hierarchical.mean; }},
    }};
    for (const auto& [name, get] : measures) {
      std::vector<double> means;
      for (const auto& r : table.rows) means.push_back(get(r));
      const double rho = spearman(grid, means);
      if (!(means.back() < means.front()) || rho > -0.9) ++failures;
      if (rho > worst_rho || worst.empty()) {
        worst_rho = rho;
        worst = preset + "/" + name;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 600.0, "8 presets x 3 measures, " + std::to_string(failures) +
                                              " failing; weakest Spearman " + fmt(worst_rho) + " (" + worst +
                                              ", limit -0.9); " + fmt(secs, 2) + " s (limit 600 s)"};
}

// ---- 6 -------------------------------------------------------------------
Outcome flatten_claims() {
  ExperimentConfig cfg;
  std::size_t classic_mismatch = 0, deep_reps = 0, not_degraded = 0, reps = 0;
  for (const auto& preset : cfg.presets) {
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep, ++reps) {
      const auto trace = flatten_trajectory(cfg, preset, rep);
      for (std::size_t g = 0; g < trace.scores.size(); ++g) {
        note_hierarchical(trace.scores[g].hierarchical);
        if (trace.scores[g].classic != trace.classic_unflattened[g]) ++classic_mismatch;
      }
      if (trace.ground_truth_depth >= 2) {
        ++deep_reps;
        const auto& zero = trace.scores.front();
        if (!(zero.partial_order < 1.0) || !(zero.hierarchical < 1.0)) ++not_degraded;
      }
    }
  }
  return {classic_mismatch == 0 && not_degraded == 0,
          std::to_string(reps) + " repetitions: " + std::to_string(classic_mismatch) +
              " classic mismatches (flat vs partition-equivalent tree, all error counts); " +
              std::to_string(not_degraded) + "/" + std::to_string(deep_reps) +
              " depth>=2 repetitions not degraded at 0 errors"};
}

// ---- 7 -------------------------------------------------------------------
Outcome conclusions() {
  std::mt19937_64 rng(77);
  std::size_t flat_mismatch = 0, asym = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 200;
    const Instance inst(fixtures::random_leaf_flat(rng, n, 1 + rng() % 15), fixtures::random_leaf_flat(rng, n, 1 + rng() % 15));
    if (partial_order_fscore(inst) != classic_fscore(inst)) ++flat_mismatch;
    note_hierarchical(hierarchical_fscore(inst).overall);
  }
  for (int t = 0; t < 100; ++t) {
    const auto inst = fixtures::random_instance(rng, 200, 60);
    if (partial_order_fscore(inst, Direction::Sub) != partial_order_fscore(inst, Direction::Sup)) ++asym;
    note_hierarchical(hierarchical_fscore(inst).overall);
  }
  const bool positive = g_min_hierarchical > 0.0;
  return {flat_mismatch == 0 && asym == 0 && positive,
          std::to_string(flat_mismatch) + "/100 leaf-only mismatches (partial order vs classic); " +
              std::to_string(asym) + "/100 Sub/Sup asymmetries; min hierarchical " + fmt(g_min_hierarchical, 6) +
              " over " + std::to_string(g_scored_instances) + " scored instances"};
}

// ---- 8 -------------------------------------------------------------------
std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_experiment(const std::string& which, const ExperimentConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  if (which == "collapse") {
    emit_csv(run_collapse_study(cfg), dir / "collapse.csv");
    return;
  }
  const auto tables = which == "random-errors" ? run_random_errors(cfg) : run_flatten_study(cfg);
  for (const auto& t : tables) emit_csv(t, dir / (t.preset + ".csv"));
}

Outcome determinism() {
  ExperimentConfig cfg;
  cfg.seed = 2016;
  const auto root = fs::temp_directory_path() / "hfscore_acceptance_determinism";
  fs::remove_all(root);
  std::size_t files = 0, differing = 0;
  for (const std::string which : {"random-errors", "collapse", "flatten"}) {
    const auto a = root / (which + "-a");
    const auto b = root / (which + "-b");
    write_experiment(which, cfg, a);
    write_experiment(which, cfg, b);
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      if (fnv1a(read_text(entry.path())) != fnv1a(read_text(b / entry.path().filename()))) ++differing;
    }
  }
  fs::remove_all(root);
  return {files == 17 && differing == 0,
          std::to_string(files) + " CSV files from 3 studies written twice, " + std::to_string(differing) +
              " hash mismatches"};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](const std::string& id, const std::string& title, const Outcome& o) {
    std::printf("[%s] AC%s %s: %s\n", o.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  };

  report("1", "oracle equivalence", oracle_equivalence());
  report("2", "hand-derived micro-instance", micro_instances());
  report("3", "perfection and degeneracy", perfection_and_degeneracy());
  const auto t1 = table1_reproduction();
  report("4a", "collapse study ordering", t1[0]);
  report("4b", "collapse study positivity", t1[1]);
  report("4c", "collapse study vs published table", t1[2]);
  report("5", "random-error degradation trends", random_error_trends());
  report("6", "flatten study", flatten_claims());
  report("7", "conclusions as tests", conclusions());
  report("8", "determinism", determinism());

  std::printf("%s: %d criterion line(s) failed\n", failed == 0 ? "ACCEPTED" : "REJECTED", failed);
  return failed == 0 ? 0 : 1;
}
