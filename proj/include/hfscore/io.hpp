#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "generator.hpp"
#include "hierarchy.hpp"

namespace hfs {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed on " + path.string());
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed on " + path.string());
}

namespace detail {

inline nlohmann::json parse_document(const std::string& text, const std::string& source) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.what() carries "at line L, column C"; e.byte is the offset
    throw ParseError(source + ": " + e.what() + " (byte offset " + std::to_string(e.byte) + ")");
  }
}

template <typename T>
T field(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(where + ": field '" + key + "' has the wrong type");
  }
}

inline std::optional<NodeId> optional_id(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  if (obj.at(key).is_null()) return std::nullopt;
  return field<NodeId>(obj, key, where);
}

// {"n_points": N, "nodes": [ ... one node per line ... ]}
inline std::string layout(std::size_t n_points, const std::string& head, const std::vector<nlohmann::json>& nodes) {
  std::string out = "{\n" + head + "  \"n_points\": " + std::to_string(n_points) + ",\n  \"nodes\": [";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out += (i == 0 ? "\n    " : ",\n    ") + nodes[i].dump();
  }
  out += nodes.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

}  // namespace detail

// Hierarchy file:
//   {"n_points": 3, "nodes": [{"id": 0, "parent": null, "points": [0, 2]}, ...]}
inline HierarchyDesc parse_hierarchy_desc(const std::string& text, const std::string& source = "<input>") {
  const auto doc = detail::parse_document(text, source);
  HierarchyDesc desc;
  desc.n_points = detail::field<std::size_t>(doc, "n_points", source);
  const auto& nodes = doc.contains("nodes") ? doc.at("nodes") : throw ParseError(source + ": missing field 'nodes'");
  if (!nodes.is_array()) throw ParseError(source + ": field 'nodes' must be an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = source + ": nodes[" + std::to_string(i) + "]";
    NodeRecord rec;
    rec.id = detail::field<NodeId>(nodes[i], "id", where);
    rec.parent = detail::optional_id(nodes[i], "parent", where);
    rec.points = detail::field<std::vector<PointId>>(nodes[i], "points", where);
    desc.nodes.push_back(std::move(rec));
  }
  return desc;
}

inline Hierarchy parse_hierarchy(const std::string& text, const std::string& source = "<input>") {
  return Hierarchy::from_desc(parse_hierarchy_desc(text, source));
}

inline std::string serialize_hierarchy(const Hierarchy& h) {
  std::vector<nlohmann::json> nodes;
  for (const auto& rec : h.to_desc().nodes) {
    nlohmann::json node;
    node["id"] = rec.id;
    node["parent"] = rec.parent ? nlohmann::json(*rec.parent) : nlohmann::json(nullptr);
    node["points"] = rec.points;
    nodes.push_back(std::move(node));
  }
  return detail::layout(h.n_points(), "", nodes);
}

inline Hierarchy load_hierarchy(const std::filesystem::path& path) {
  return parse_hierarchy(read_text(path), path.string());
}

inline void save_hierarchy(const Hierarchy& h, const std::filesystem::path& path) {
  write_text(path, serialize_hierarchy(h));
}

// Sticks file: generator parameters, seed, and per node its parent, its stop
// stick and the branch stick it owns within its parent (null for the root).
// Nodes appear in creation order.
inline std::string serialize_sticks(const StickState& sticks, const TssbParams& params, std::uint64_t seed) {
  std::ostringstream head;
  head << "  \"alpha0\": " << nlohmann::json(params.alpha0).dump() << ",\n"
       << "  \"lambda\": " << nlohmann::json(params.lambda).dump() << ",\n"
       << "  \"gamma\": " << nlohmann::json(params.gamma).dump() << ",\n"
       << "  \"max_depth\": " << params.max_depth << ",\n"
       << "  \"seed\": " << seed << ",\n";
  std::vector<nlohmann::json> nodes;
  for (NodeId id = 0; id < sticks.size(); ++id) {
    const auto& n = sticks.node(id);
    nlohmann::json node;
    node["id"] = id;
    node["stop"] = n.stop_stick;
    if (n.parent) {
      const auto& siblings = sticks.node(*n.parent).children;
      const auto idx = static_cast<std::size_t>(std::find(siblings.begin(), siblings.end(), id) - siblings.begin());
      node["parent"] = *n.parent;
      node["branch"] = sticks.node(*n.parent).branch_sticks[idx];
    } else {
      node["parent"] = nullptr;
      node["branch"] = nullptr;
    }
    nodes.push_back(std::move(node));
  }
  return detail::layout(params.n_points, head.str(), nodes);
}

struct LoadedSticks {
  StickState sticks;
  TssbParams params;
  std::uint64_t seed = 0;
};

inline LoadedSticks parse_sticks(const std::string& text, const std::string& source = "<input>") {
  const auto doc = detail::parse_document(text, source);
  LoadedSticks out;
  out.params.alpha0 = detail::field<double>(doc, "alpha0", source);
  out.params.lambda = detail::field<double>(doc, "lambda", source);
  out.params.gamma = detail::field<double>(doc, "gamma", source);
  out.params.max_depth = detail::field<std::size_t>(doc, "max_depth", source);
  out.params.n_points = detail::field<std::size_t>(doc, "n_points", source);
  out.seed = detail::field<std::uint64_t>(doc, "seed", source);
  const auto& nodes = doc.contains("nodes") ? doc.at("nodes") : throw ParseError(source + ": missing field 'nodes'");
  if (!nodes.is_array() || nodes.empty()) throw ParseError(source + ": field 'nodes' must be a non-empty array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = source + ": nodes[" + std::to_string(i) + "]";
    if (detail::field<NodeId>(nodes[i], "id", where) != i) throw ParseError(where + ": ids must be 0, 1, 2, ... in order");
    const double stop = detail::field<double>(nodes[i], "stop", where);
    const auto parent = detail::optional_id(nodes[i], "parent", where);
    if (i == 0) {
      if (parent) throw ParseError(where + ": node 0 must be the root");
      out.sticks = StickState::with_root(stop);
    } else {
      if (!parent || *parent >= i) throw ParseError(where + ": parent must be an earlier node");
      out.sticks.add_child(*parent, detail::field<double>(nodes[i], "branch", where), stop);
    }
  }
  return out;
}

namespace instance_files {
inline constexpr const char* kGroundTruth = "ground_truth.json";
inline constexpr const char* kModel = "model.json";
inline constexpr const char* kSticks = "sticks.json";
}  // namespace instance_files

// Directory layout: ground_truth.json, model.json, sticks.json.
inline void save_generated(const GeneratedInstance& gi, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  save_hierarchy(gi.instance.ground_truth, dir / instance_files::kGroundTruth);
  save_hierarchy(gi.instance.model, dir / instance_files::kModel);
  write_text(dir / instance_files::kSticks, serialize_sticks(gi.sticks, gi.params, gi.seed));
}

inline GeneratedInstance load_generated(const std::filesystem::path& dir) {
  auto gt = load_hierarchy(dir / instance_files::kGroundTruth);
  auto model = load_hierarchy(dir / instance_files::kModel);
  const auto sticks_path = dir / instance_files::kSticks;
  auto loaded = parse_sticks(read_text(sticks_path), sticks_path.string());
  if (loaded.sticks.size() != model.node_count())
    throw ParseError(sticks_path.string() + ": node count does not match the model hierarchy");
  for (NodeId id = 0; id < model.node_count(); ++id) {
    if (loaded.sticks.node(id).parent != model.parent(id))
      throw ParseError(sticks_path.string() + ": node " + std::to_string(id) + " has a different parent than in the model");
  }
  loaded.params.n_points = gt.n_points();
  return {Instance(std::move(gt), std::move(model)), std::move(loaded.sticks), loaded.params, loaded.seed};
}

}  // namespace hfs
