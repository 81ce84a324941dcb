// hfscore: generate hierarchies of clusters, perturb them, score them, and
// run the degradation experiments.
//
// Exit codes: 0 success, 1 validation or parse error, 2 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <hfscore/hfscore.hpp>

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kIo = 2;

std::string f6(double v) { return hfs::detail::fixed6(v); }

void print_counts(const char* label, const hfs::PairCounts& c) {
  std::cout << label << ": p_t=" << c.p_t << " p_f=" << c.p_f << " n_t=" << c.n_t << " n_f=" << c.n_f << "\n";
}

int cmd_score(const std::string& gt_path, const std::string& model_path, bool as_json) {
  hfs::Instance inst(hfs::load_hierarchy(gt_path), hfs::load_hierarchy(model_path));
  const auto eq = hfs::pair_counts_fast(inst, hfs::RelationKind::Equality);
  const auto sub = hfs::pair_counts_fast(inst, hfs::RelationKind::PartialOrderSub);
  const auto sup = hfs::pair_counts_fast(inst, hfs::RelationKind::PartialOrderSup);
  const double classic = hfs::f1_from_counts(eq);
  const double po_sub = hfs::f1_from_counts(sub);
  const double po_sup = hfs::f1_from_counts(sup);
  if (po_sub != po_sup) {
    std::cerr << "error: partial-order directions disagree (" << po_sub << " vs " << po_sup << ")\n";
    return kInvalid;
  }
  const auto hier = hfs::hierarchical_fscore(inst);

  if (as_json) {
    auto counts = [](const hfs::PairCounts& c) {
      return nlohmann::ordered_json{{"p_t", c.p_t}, {"p_f", c.p_f}, {"n_t", c.n_t}, {"n_f", c.n_f}};
    };
    nlohmann::ordered_json out;
    out["n_points"] = inst.n_points();
    out["classic"] = classic;
    out["partial_order"] = po_sub;
    out["hierarchical"] = hier.overall;
    out["pair_counts"] = {{"equality", counts(eq)}, {"partial_order_sub", counts(sub)}, {"partial_order_sup", counts(sup)}};
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : hier.classes) {
      rows.push_back({{"class", r.class_node}, {"f_c", r.f_c}, {"best_cluster", r.best_cluster}, {"weight", r.weight}});
    }
    out["classes"] = rows;
    std::cout << out.dump(2) << "\n";
    return kOk;
  }

  std::cout << "points: " << inst.n_points() << "\n";
  std::cout << "classic F-score:       " << f6(classic) << "\n";
  std::cout << "partial order F-score: " << f6(po_sub) << " (sub) " << f6(po_sup) << " (sup)\n";
  std::cout << "hierarchical F-score:  " << f6(hier.overall) << "\n";
  print_counts("equality pairs", eq);
  print_counts("partial order (sub) pairs", sub);
  print_counts("partial order (sup) pairs", sup);
  std::cout << "class;weight;f_c;best_cluster\n";
  for (const auto& r : hier.classes) {
    std::cout << r.class_node << ";" << r.weight << ";" << f6(r.f_c) << ";" << r.best_cluster << "\n";
  }
  return kOk;
}

int cmd_generate(const std::string& preset, std::size_t n_points, std::size_t max_depth, std::uint64_t seed,
                 const fs::path& out) {
  auto params = hfs::preset_params(preset);
  params.n_points = n_points;
  params.max_depth = max_depth;
  const auto gi = hfs::generate_instance(params, seed);
  hfs::save_generated(gi, out);
  std::cout << "generated " << preset << ": " << gi.instance.ground_truth.node_count() << " nodes, height "
            << gi.instance.ground_truth.height() << ", " << n_points << " points -> " << out.string() << "\n";
  return kOk;
}

int cmd_perturb(const fs::path& in, const std::string& kind, std::size_t errors, std::uint64_t seed, bool no_new_nodes,
                const fs::path& out) {
  auto gi = hfs::load_generated(in);
  hfs::RandomStream rng(seed);
  if (kind == "reinsert") {
    auto [next, record] = hfs::reinsert_random(std::move(gi), errors, rng, {!no_new_nodes});
    hfs::save_generated(next, out);
    std::size_t changed = 0;
    for (const auto& m : record.moved_points) changed += m.from != m.to;
    std::cout << "applied " << record.errors_applied << " re-insertions (" << changed << " changed cluster) -> "
              << out.string() << "\n";
  } else if (kind == "collapse") {
    gi.instance.model = hfs::collapse_to_root(gi.instance.model);
    hfs::save_generated(gi, out);
    std::cout << "collapsed all points into the root -> " << out.string() << "\n";
  } else {
    auto flat = hfs::flatten_instance(gi, rng);
    auto [next, record] = hfs::reinsert_random(std::move(flat.flat), errors, rng, {!no_new_nodes});
    hfs::save_generated(next, out);
    std::cout << "flattened to " << next.instance.model.node_count() - 1 << " leaves, applied "
              << record.errors_applied << " re-insertions -> " << out.string() << "\n";
  }
  return kOk;
}

int cmd_experiment(const std::string& which, const hfs::ExperimentConfig& cfg, const fs::path& out) {
  cfg.validate();
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw hfs::IoError("cannot create directory " + out.string() + ": " + ec.message());

  if (which == "collapse") {
    const auto table = hfs::run_collapse_study(cfg);
    const auto path = out / "collapse.csv";
    hfs::emit_csv(table, path);
    std::cout << hfs::format_summary_csv(table);
    std::cout << "wrote " << path.string() << "\n";
    return kOk;
  }
  const auto tables = which == "random-errors" ? hfs::run_random_errors(cfg) : hfs::run_flatten_study(cfg);
  const std::string suffix = which == "random-errors" ? ".csv" : "-flat-clustering.csv";
  for (const auto& t : tables) {
    const auto path = out / (t.preset + suffix);
    hfs::emit_csv(t, path);
    const auto& first = t.rows.front();
    const auto& last = t.rows.back();
    std::cout << t.preset << ": errors " << first.errors << " -> " << last.errors << "  standard " << f6(first.classic.mean)
              << " -> " << f6(last.classic.mean) << "  partialOrder " << f6(first.partial_order.mean) << " -> "
              << f6(last.partial_order.mean) << "  adapted " << f6(first.hierarchical.mean) << " -> "
              << f6(last.hierarchical.mean) << "\n";
  }
  std::cout << "wrote " << tables.size() << " table(s) to " << out.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quality measures for hierarchies of clusters"};
  app.require_subcommand(1);

  // score
  std::string gt_path, model_path;
  bool as_json = false;
  auto* score = app.add_subcommand("score", "Score a model hierarchy against a ground-truth hierarchy");
  score->add_option("ground_truth", gt_path, "Ground-truth hierarchy file")->required();
  score->add_option("model", model_path, "Model hierarchy file")->required();
  score->add_flag("--json", as_json, "Print a JSON document instead of text");

  // generate
  std::string preset = "s00";
  std::size_t n_points = 1000, max_depth = 50;
  std::uint64_t seed = 0;
  std::string out;
  auto* generate = app.add_subcommand("generate", "Sample a ground truth (and identical model) from a preset");
  generate->add_option("--preset", preset, "s00..s07")->capture_default_str();
  generate->add_option("--n-points", n_points, "Number of points")->capture_default_str()->check(CLI::PositiveNumber);
  generate->add_option("--max-depth", max_depth, "Depth cap (levels)")->capture_default_str()->check(CLI::PositiveNumber);
  generate->add_option("--seed", seed, "Random seed")->capture_default_str();
  generate->add_option("--out", out, "Output directory")->required();

  // perturb
  std::string in_dir, kind = "reinsert";
  std::size_t errors = 0;
  bool no_new_nodes = false;
  auto* perturb = app.add_subcommand("perturb", "Degrade the model of a generated instance");
  perturb->add_option("--in", in_dir, "Instance directory written by generate")->required();
  perturb->add_option("--kind", kind, "reinsert | collapse | flatten")
      ->capture_default_str()
      ->check(CLI::IsMember({"reinsert", "collapse", "flatten"}));
  perturb->add_option("--errors", errors, "Number of re-insertion events")->capture_default_str();
  perturb->add_option("--seed", seed, "Random seed")->capture_default_str();
  perturb->add_flag("--no-new-nodes", no_new_nodes, "Re-insert only into existing clusters");
  perturb->add_option("--out", out, "Output directory")->required();

  // experiment
  std::string which;
  std::vector<std::string> presets;
  hfs::ExperimentConfig cfg;
  std::size_t max_errors = 1000, error_step = 100;
  auto* experiment = app.add_subcommand("experiment", "Run a study over presets and repetitions");
  experiment->add_option("study", which, "random-errors | collapse | flatten")
      ->required()
      ->check(CLI::IsMember({"random-errors", "collapse", "flatten"}));
  experiment->add_option("--preset", presets, "Preset(s); default all of s00..s07");
  experiment->add_option("--n-points", cfg.n_points, "Points per instance")->capture_default_str()->check(CLI::PositiveNumber);
  experiment->add_option("--reps", cfg.repetitions, "Repetitions per preset")->capture_default_str()->check(CLI::PositiveNumber);
  experiment->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  experiment->add_option("--max-depth", cfg.max_depth, "Depth cap (levels)")->capture_default_str()->check(CLI::PositiveNumber);
  experiment->add_option("--max-errors", max_errors, "Last error count")->capture_default_str();
  experiment->add_option("--error-step", error_step, "Error grid spacing")->capture_default_str()->check(CLI::PositiveNumber);
  experiment->add_flag("--no-new-nodes", no_new_nodes, "Re-insert only into existing clusters");
  experiment->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*score) return cmd_score(gt_path, model_path, as_json);
    if (*generate) return cmd_generate(preset, n_points, max_depth, seed, out);
    if (*perturb) return cmd_perturb(in_dir, kind, errors, seed, no_new_nodes, out);
    if (!presets.empty()) cfg.presets = presets;
    cfg.allow_new_nodes = !no_new_nodes;
    cfg.error_grid.clear();
    for (std::size_t e = 0; e <= max_errors; e += error_step) cfg.error_grid.push_back(e);
    return cmd_experiment(which, cfg, out);
  } catch (const hfs::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const hfs::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInvalid;
  } catch (const hfs::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kInvalid;
  } catch (const hfs::UniverseMismatch& e) {
    std::cerr << "universe mismatch: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kInvalid;
  }
}
