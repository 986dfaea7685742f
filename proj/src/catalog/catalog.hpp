#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graph/search_space.hpp"

namespace archbench {

enum class Orientation { higher_better, lower_better };

const char *orientation_name(Orientation o);
Orientation parse_orientation(const std::string &text);

struct MetricSpec {
  std::string name;
  Orientation orientation = Orientation::higher_better;

  bool operator==(const MetricSpec &) const = default;
};

struct SpaceCatalogEntry {
  SearchSpaceDef space;
  // Size as published, which may be an order of magnitude or a deduplicated
  // count; compare with space_size() for the raw count.
  std::string declared_size;
  std::optional<std::uint64_t> reported_classes;
  std::vector<std::string> task_names;
  std::vector<MetricSpec> metrics;
  std::string notes;
};

struct SpaceSize {
  std::optional<std::uint64_t> exact;  // nullopt = unbounded/too large
  double log10 = 0.0;
};

/// Raw cell count. Exact for fixed topologies (product rule) and for
/// variable topologies whose adjacency set can be enumerated.
SpaceSize space_size(const SearchSpaceDef &space);

/// 4-node complete DAG, 6 edges, 5 ops per edge.
SearchSpaceDef make_nb201_like();

/// Same topology with 4 ops per edge.
SearchSpaceDef make_tnb_micro_like();

/// Node-labeled cell over a variable DAG: interior nodes carry one of `ops`
/// operations, at most `max_edges` edges, input-to-output path required.
/// Throws Error(validation) when nodes < 3.
SearchSpaceDef make_nb101_like(int nodes, int max_edges, int ops);

/// Three chained main edges with 6 ops each plus 6 togglable skip edges.
SearchSpaceDef make_asr_like();

/// Ordered categorical slots; no cell graph.
SearchSpaceDef make_macro_string(const std::vector<int> &slot_cardinalities);

/// Chain of `edges` edges with `ops` ops each; size ops^edges.
SearchSpaceDef make_synthetic(int edges, int ops);

/// Named entries: nb201, tnb-micro, nb101, nb101-small, asr, tnb-macro,
/// synthetic-<edges>x<ops>, macro-<c1>-<c2>-...
SpaceCatalogEntry catalog_entry(const std::string &name);

std::vector<std::string> catalog_names();

}  // namespace archbench
