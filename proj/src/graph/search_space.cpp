#include "graph/search_space.hpp"

#include <algorithm>
#include <set>

#include "common/error.hpp"

namespace archbench {

namespace {

void require(bool ok, const std::string &what) {
  if (!ok) throw Error(ErrorCode::validation, what);
}

}  // namespace

void SearchSpaceDef::validate() const {
  require(!space_id.empty(), "space_id must not be empty");
  require(num_nodes >= 2, "space needs at least an input and an output node");
  require(!op_vocab.empty(), "op_vocab must not be empty");
  std::set<std::string> names(op_vocab.begin(), op_vocab.end());
  require(names.size() == op_vocab.size(), "op_vocab has duplicate names");
  for (const auto &name : op_vocab) {
    require(!name.empty() &&
                name.find_first_of("|~+;=") == std::string::npos,
            "op name '" + name + "' is empty or contains a reserved character");
  }
  auto check_edges = [&](const std::vector<Edge> &list, const char *what) {
    require(std::is_sorted(list.begin(), list.end()),
            std::string(what) + " must be sorted by (from, to)");
    require(std::adjacent_find(list.begin(), list.end()) == list.end(),
            std::string(what) + " has duplicates");
    for (const auto &e : list) {
      require(e.from >= 0 && e.to < num_nodes && e.from < e.to,
              std::string(what) + " pair violates from < to ordering");
    }
  };
  check_edges(edges, "edge_set");
  check_edges(aux_edges, "aux_edges");
  for (const auto &slot : macro_slots) {
    require(slot.cardinality >= 1, "macro slot cardinality must be >= 1");
  }
  if (topology.max_edges) {
    require(*topology.max_edges >= 0, "max_edges must be non-negative");
  }
  if (label_mode == LabelMode::node_ops) {
    require(num_nodes >= 3 || !variable_topology,
            "node-ops spaces need an interior node");
  }
}

std::size_t SearchSpaceDef::labeled_slot_count() const {
  if (label_mode == LabelMode::edge_ops) return edges.size();
  return static_cast<std::size_t>(std::max(0, num_nodes - 2));
}

bool SearchSpaceDef::is_complete_dag() const {
  return edges == complete_dag_edges(num_nodes);
}

std::optional<int> SearchSpaceDef::op_index(std::string_view name) const {
  for (std::size_t i = 0; i < op_vocab.size(); ++i) {
    if (op_vocab[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<int> SearchSpaceDef::zero_op() const {
  if (auto i = op_index("none")) return i;
  return op_index("zero");
}

std::optional<int> SearchSpaceDef::identity_op() const {
  for (const char *name : {"skip_connect", "identity", "skip"}) {
    if (auto i = op_index(name)) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> SearchSpaceDef::edge_index(Edge e) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), e);
  if (it == edges.end() || *it != e) return std::nullopt;
  return static_cast<std::size_t>(it - edges.begin());
}

std::vector<Edge> complete_dag_edges(int num_nodes) {
  std::vector<Edge> out;
  for (int u = 0; u < num_nodes; ++u) {
    for (int v = u + 1; v < num_nodes; ++v) out.push_back({u, v});
  }
  return out;
}

namespace {

std::string shape_problem(const CellGraph &cell, const SearchSpaceDef &space) {
  if (cell.ops.size() != space.labeled_slot_count()) {
    return "expected " + std::to_string(space.labeled_slot_count()) +
           " labeled slots, got " + std::to_string(cell.ops.size());
  }
  const int vocab = static_cast<int>(space.op_vocab.size());
  for (std::size_t i = 0; i < cell.ops.size(); ++i) {
    if (cell.ops[i] < 0 || cell.ops[i] >= vocab) {
      return "op index " + std::to_string(cell.ops[i]) + " at slot " +
             std::to_string(i) + " out of range";
    }
  }
  const std::size_t want_active =
      space.variable_topology ? space.edges.size() : 0;
  if (cell.active.size() != want_active) return "active edge vector has wrong size";
  for (auto b : cell.active) {
    if (b > 1) return "active edge bits must be 0 or 1";
  }
  if (cell.aux.size() != space.aux_edges.size()) return "aux bit vector has wrong size";
  for (auto b : cell.aux) {
    if (b > 1) return "aux bits must be 0 or 1";
  }
  if (cell.macro.size() != space.macro_slots.size()) return "macro choice vector has wrong size";
  for (std::size_t i = 0; i < cell.macro.size(); ++i) {
    if (cell.macro[i] < 0 || cell.macro[i] >= space.macro_slots[i].cardinality) {
      return "macro slot " + std::to_string(i) + " choice out of range";
    }
  }
  return {};
}

std::string topology_problem(const CellGraph &cell,
                             const SearchSpaceDef &space) {
  if (!space.variable_topology) return {};
  const auto count = std::count(cell.active.begin(), cell.active.end(), 1);
  if (space.topology.max_edges && count > *space.topology.max_edges) {
    return "active edge count " + std::to_string(count) + " exceeds maximum " +
           std::to_string(*space.topology.max_edges);
  }
  if (space.topology.require_connectivity &&
      !has_input_output_path(space, cell.active)) {
    return "no input-to-output path";
  }
  return {};
}

}  // namespace

void validate_cell(const CellGraph &cell, const SearchSpaceDef &space) {
  auto problem = shape_problem(cell, space);
  if (problem.empty()) problem = topology_problem(cell, space);
  if (!problem.empty()) {
    throw Error(ErrorCode::invalid_architecture,
                "invalid architecture for space '" + space.space_id +
                    "': " + problem);
  }
}

bool is_valid_cell(const CellGraph &cell, const SearchSpaceDef &space) {
  return shape_problem(cell, space).empty() &&
         topology_problem(cell, space).empty();
}

bool has_input_output_path(const SearchSpaceDef &space,
                           const std::vector<std::uint8_t> &active) {
  std::vector<char> reached(static_cast<std::size_t>(space.num_nodes), 0);
  reached[0] = 1;
  // Edges are sorted by source, and sources precede targets, so one pass
  // in source order propagates reachability.
  for (std::size_t i = 0; i < space.edges.size(); ++i) {
    if (!active.empty() && !active[i]) continue;
    const auto &e = space.edges[i];
    if (reached[static_cast<std::size_t>(e.from)]) {
      reached[static_cast<std::size_t>(e.to)] = 1;
    }
  }
  return reached[static_cast<std::size_t>(space.output_node())] != 0;
}

void to_json(nlohmann::json &j, const SearchSpaceDef &space) {
  auto edge_list = [](const std::vector<Edge> &edges) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &e : edges) arr.push_back({e.from, e.to});
    return arr;
  };
  j = nlohmann::json::object();
  j["space_id"] = space.space_id;
  j["num_nodes"] = space.num_nodes;
  j["edges"] = edge_list(space.edges);
  j["op_vocab"] = space.op_vocab;
  j["label_mode"] =
      space.label_mode == LabelMode::node_ops ? "node-ops" : "edge-ops";
  j["variable_topology"] = space.variable_topology;
  j["aux_edges"] = edge_list(space.aux_edges);
  nlohmann::json slots = nlohmann::json::array();
  for (const auto &s : space.macro_slots) {
    slots.push_back({{"name", s.name}, {"cardinality", s.cardinality}});
  }
  j["macro_slots"] = slots;
  nlohmann::json topo = nlohmann::json::object();
  if (space.topology.max_edges) topo["max_edges"] = *space.topology.max_edges;
  topo["require_connectivity"] = space.topology.require_connectivity;
  j["topology"] = topo;
}

void from_json(const nlohmann::json &j, SearchSpaceDef &space) {
  auto edge_list = [](const nlohmann::json &arr) {
    std::vector<Edge> out;
    for (const auto &e : arr) out.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    return out;
  };
  space.space_id = j.at("space_id").get<std::string>();
  space.num_nodes = j.at("num_nodes").get<int>();
  if (j.contains("complete_dag") && j.at("complete_dag").get<bool>()) {
    space.edges = complete_dag_edges(space.num_nodes);
  } else {
    space.edges = edge_list(j.value("edges", nlohmann::json::array()));
  }
  space.op_vocab = j.at("op_vocab").get<std::vector<std::string>>();
  const auto mode = j.value("label_mode", std::string("edge-ops"));
  if (mode == "node-ops") {
    space.label_mode = LabelMode::node_ops;
  } else if (mode == "edge-ops") {
    space.label_mode = LabelMode::edge_ops;
  } else {
    throw Error(ErrorCode::validation, "unknown label_mode '" + mode + "'");
  }
  space.variable_topology = j.value("variable_topology", false);
  space.aux_edges = edge_list(j.value("aux_edges", nlohmann::json::array()));
  space.macro_slots.clear();
  for (const auto &s : j.value("macro_slots", nlohmann::json::array())) {
    space.macro_slots.push_back(
        {s.at("name").get<std::string>(), s.at("cardinality").get<int>()});
  }
  space.topology = {};
  if (j.contains("topology")) {
    const auto &t = j.at("topology");
    if (t.contains("max_edges")) space.topology.max_edges = t.at("max_edges").get<int>();
    space.topology.require_connectivity = t.value("require_connectivity", false);
  }
  space.validate();
}

}  // namespace archbench
