#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace archbench {

enum class LabelMode { node_ops, edge_ops };

struct Edge {
  int from = 0;
  int to = 0;

  auto operator<=>(const Edge &) const = default;
};

struct MacroSlot {
  std::string name;
  int cardinality = 1;

  bool operator==(const MacroSlot &) const = default;
};

struct TopologyConstraints {
  std::optional<int> max_edges;
  bool require_connectivity = false;

  bool operator==(const TopologyConstraints &) const = default;
};

/// Declarative description of a cell or macro search space.
///
/// Node 0 is the input and node `num_nodes - 1` the output. Edges are stored
/// sorted by (from, to) with from < to, so acyclicity holds by construction.
/// In node-ops mode the interior nodes carry the operation labels; in edge-ops
/// mode every edge does. When `variable_topology` is set the active edge
/// subset is part of the cell and must satisfy `topology`.
struct SearchSpaceDef {
  std::string space_id;
  int num_nodes = 2;
  std::vector<Edge> edges;
  std::vector<std::string> op_vocab;
  LabelMode label_mode = LabelMode::edge_ops;
  bool variable_topology = false;
  std::vector<Edge> aux_edges;
  std::vector<MacroSlot> macro_slots;
  TopologyConstraints topology;

  bool operator==(const SearchSpaceDef &) const = default;

  /// Throws Error(validation) when an invariant is violated.
  void validate() const;

  int input_node() const { return 0; }
  int output_node() const { return num_nodes - 1; }

  /// Number of operation-labeled slots: interior nodes or edges.
  std::size_t labeled_slot_count() const;

  bool is_complete_dag() const;

  /// Index of an operation by name, or nullopt.
  std::optional<int> op_index(std::string_view name) const;

  /// Index of the zero ("none") operation when the vocabulary has one.
  std::optional<int> zero_op() const;

  /// Index of the identity ("skip_connect") operation when present.
  std::optional<int> identity_op() const;

  std::optional<std::size_t> edge_index(Edge e) const;
};

/// All (u, v) pairs with u < v over n nodes, sorted.
std::vector<Edge> complete_dag_edges(int num_nodes);

/// One concrete architecture. Vectors are aligned with the owning space:
/// `ops` with the labeled slots, `active` with `edges` (variable topology
/// only), `aux` with `aux_edges`, `macro` with `macro_slots`.
struct CellGraph {
  std::vector<int> ops;
  std::vector<std::uint8_t> active;
  std::vector<std::uint8_t> aux;
  std::vector<int> macro;

  auto operator<=>(const CellGraph &) const = default;
};

/// Shape and range checks; throws Error(invalid_architecture).
void validate_cell(const CellGraph &cell, const SearchSpaceDef &space);

/// Shape/range checks plus topology constraints, without throwing.
bool is_valid_cell(const CellGraph &cell, const SearchSpaceDef &space);

/// Whether the active edge set (or all edges for fixed topologies) contains
/// an input-to-output path.
bool has_input_output_path(const SearchSpaceDef &space,
                           const std::vector<std::uint8_t> &active);

void to_json(nlohmann::json &j, const SearchSpaceDef &space);
void from_json(const nlohmann::json &j, SearchSpaceDef &space);

}  // namespace archbench
