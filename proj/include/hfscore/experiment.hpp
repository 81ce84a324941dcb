#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "generator.hpp"
#include "io.hpp"
#include "measures.hpp"
#include "perturbation.hpp"
#include "stats.hpp"

namespace hfs {

inline std::vector<std::size_t> default_error_grid() {
  std::vector<std::size_t> grid;
  for (std::size_t e = 0; e <= 1000; e += 100) grid.push_back(e);
  return grid;
}

inline std::vector<std::string> all_preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.emplace_back(p.name);
  return names;
}

struct ExperimentConfig {
  std::vector<std::string> presets = all_preset_names();
  std::size_t n_points = 1000;
  std::size_t repetitions = 30;
  std::vector<std::size_t> error_grid = default_error_grid();
  std::uint64_t seed = 0;
  std::size_t max_depth = 50;
  bool allow_new_nodes = true;

  void validate() const {
    if (presets.empty()) throw std::invalid_argument("at least one preset is required");
    for (const auto& p : presets) preset_index(p);
    if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
    if (n_points < 1) throw std::invalid_argument("n_points must be at least 1");
    if (error_grid.empty() || error_grid.front() != 0) throw std::invalid_argument("error grid must start at 0");
    if (!std::is_sorted(error_grid.begin(), error_grid.end()))
      throw std::invalid_argument("error grid must be sorted ascending");
  }

  TssbParams params_for(const std::string& preset) const {
    auto params = preset_params(preset);
    params.n_points = n_points;
    params.max_depth = max_depth;
    return params;
  }
};

// Stream layout: one seed per (preset, repetition); child 0 drives
// generation, child 1 the errors, child 2 the flat-model sticks. The preset
// index is its global number, so a preset's numbers do not depend on which
// other presets are selected.
inline std::uint64_t repetition_seed(std::uint64_t seed, const std::string& preset, std::size_t rep) {
  return derive_seed(derive_seed(seed, preset_index(preset)), rep);
}

inline GeneratedInstance generate_repetition(const ExperimentConfig& cfg, const std::string& preset, std::size_t rep) {
  return generate_instance(cfg.params_for(preset), derive_seed(repetition_seed(cfg.seed, preset, rep), 0));
}

// One degradation trajectory: scores after cumulative re-insertions at each
// grid count.
inline std::vector<MeasureScores> random_errors_trajectory(const ExperimentConfig& cfg, const std::string& preset,
                                                           std::size_t rep) {
  auto gi = generate_repetition(cfg, preset, rep);
  RandomStream rng(derive_seed(repetition_seed(cfg.seed, preset, rep), 1));
  std::vector<MeasureScores> out;
  std::size_t applied = 0;
  for (std::size_t target : cfg.error_grid) {
    gi = reinsert_random(std::move(gi), target - applied, rng, {cfg.allow_new_nodes}).first;
    applied = target;
    out.push_back(score_all(gi.instance));
  }
  return out;
}

inline MeasureScores collapse_scores(const ExperimentConfig& cfg, const std::string& preset, std::size_t rep) {
  const auto gi = generate_repetition(cfg, preset, rep);
  return score_all(Instance(gi.instance.ground_truth, collapse_to_root(gi.instance.model)));
}

struct FlattenTrace {
  std::vector<MeasureScores> scores;        // flat model, per grid count
  std::vector<double> classic_unflattened;  // same partition mapped back onto the source tree
  std::size_t ground_truth_depth = 0;  // in edges
};

inline FlattenTrace flatten_trajectory(const ExperimentConfig& cfg, const std::string& preset, std::size_t rep) {
  const auto gi = generate_repetition(cfg, preset, rep);
  const auto seed = repetition_seed(cfg.seed, preset, rep);
  RandomStream stick_rng(derive_seed(seed, 2));
  auto flat = flatten_instance(gi, stick_rng);
  RandomStream rng(derive_seed(seed, 1));

  FlattenTrace trace;
  trace.ground_truth_depth = gi.instance.ground_truth.tree_depth();
  std::size_t applied = 0;
  for (std::size_t target : cfg.error_grid) {
    flat.flat = reinsert_random(std::move(flat.flat), target - applied, rng, {cfg.allow_new_nodes}).first;
    applied = target;
    trace.scores.push_back(score_all(flat.flat.instance));
    const auto lifted = unflatten(gi.instance.model, flat.flat.instance.model, flat.origin);
    trace.classic_unflattened.push_back(classic_fscore(Instance(gi.instance.ground_truth, lifted)));
  }
  return trace;
}

struct CurveRow {
  std::size_t errors = 0;
  MeanStd classic;
  MeanStd partial_order;
  MeanStd hierarchical;
};

struct CurveTable {
  std::string preset;
  std::vector<CurveRow> rows;
};

struct SummaryRow {
  std::string preset;
  MeanStd classic;
  MeanStd partial_order;
  MeanStd hierarchical;
};

using SummaryTable = std::vector<SummaryRow>;

namespace detail {

struct Columns {
  std::vector<double> classic, partial_order, hierarchical;

  void add(const MeasureScores& s) {
    classic.push_back(s.classic);
    partial_order.push_back(s.partial_order);
    hierarchical.push_back(s.hierarchical);
  }
};

// per_rep[rep][grid index] -> one row per grid index, reduced in repetition order
inline CurveTable aggregate(const std::string& preset, const std::vector<std::size_t>& grid,
                            const std::vector<std::vector<MeasureScores>>& per_rep) {
  CurveTable table{preset, {}};
  for (std::size_t g = 0; g < grid.size(); ++g) {
    Columns cols;
    for (const auto& rep : per_rep) cols.add(rep[g]);
    table.rows.push_back({grid[g], mean_std(cols.classic), mean_std(cols.partial_order), mean_std(cols.hierarchical)});
  }
  return table;
}

}  // namespace detail

inline std::vector<CurveTable> run_random_errors(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<CurveTable> tables;
  for (const auto& preset : cfg.presets) {
    std::vector<std::vector<MeasureScores>> per_rep;
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) per_rep.push_back(random_errors_trajectory(cfg, preset, rep));
    tables.push_back(detail::aggregate(preset, cfg.error_grid, per_rep));
  }
  return tables;
}

inline SummaryTable run_collapse_study(const ExperimentConfig& cfg) {
  cfg.validate();
  SummaryTable table;
  for (const auto& preset : cfg.presets) {
    detail::Columns cols;
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) cols.add(collapse_scores(cfg, preset, rep));
    table.push_back({preset, mean_std(cols.classic), mean_std(cols.partial_order), mean_std(cols.hierarchical)});
  }
  return table;
}

inline std::vector<CurveTable> run_flatten_study(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<CurveTable> tables;
  for (const auto& preset : cfg.presets) {
    std::vector<std::vector<MeasureScores>> per_rep;
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) per_rep.push_back(flatten_trajectory(cfg, preset, rep).scores);
    tables.push_back(detail::aggregate(preset, cfg.error_grid, per_rep));
  }
  return tables;
}

// ---- CSV ------------------------------------------------------------------

inline constexpr const char* kCurveHeader =
    "number-of-random-changes;standard-mean;standard-std;partialOrder-mean;partialOrder-std;adapted-mean;adapted-std";
inline constexpr const char* kSummaryHeader =
    "set;standard-mean;standard-std;partialOrder-mean;partialOrder-std;adapted-mean;adapted-std";

namespace detail {

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string stat_columns(const MeanStd& c, const MeanStd& p, const MeanStd& h) {
  return fixed6(c.mean) + ";" + fixed6(c.std) + ";" + fixed6(p.mean) + ";" + fixed6(p.std) + ";" + fixed6(h.mean) +
         ";" + fixed6(h.std);
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline double parse_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  }
}

}  // namespace detail

inline std::string format_curve_csv(const CurveTable& table) {
  std::string out = std::string(kCurveHeader) + "\n";
  for (const auto& r : table.rows) {
    out += std::to_string(r.errors) + ";" + detail::stat_columns(r.classic, r.partial_order, r.hierarchical) + "\n";
  }
  return out;
}

inline std::string format_summary_csv(const SummaryTable& table) {
  std::string out = std::string(kSummaryHeader) + "\n";
  for (const auto& r : table) out += r.preset + ";" + detail::stat_columns(r.classic, r.partial_order, r.hierarchical) + "\n";
  return out;
}

inline void emit_csv(const CurveTable& table, const std::filesystem::path& path) {
  write_text(path, format_curve_csv(table));
}

inline void emit_csv(const SummaryTable& table, const std::filesystem::path& path) {
  write_text(path, format_summary_csv(table));
}

inline CurveTable parse_curve_csv(const std::string& text, std::string preset = {}) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCurveHeader) throw ParseError("line 1: unexpected header");
  CurveTable table{std::move(preset), {}};
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = detail::split(line, ';');
    if (cells.size() != 7) throw ParseError("line " + std::to_string(line_no) + ": expected 7 columns");
    CurveRow row;
    row.errors = static_cast<std::size_t>(detail::parse_double(cells[0], line_no));
    row.classic = {detail::parse_double(cells[1], line_no), detail::parse_double(cells[2], line_no)};
    row.partial_order = {detail::parse_double(cells[3], line_no), detail::parse_double(cells[4], line_no)};
    row.hierarchical = {detail::parse_double(cells[5], line_no), detail::parse_double(cells[6], line_no)};
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace hfs
