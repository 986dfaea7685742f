#pragma once

#include <cstdint>

#include "graph/search_space.hpp"

namespace archbench {

/// Node-relabeling-invariant hash of a node-ops cell. Nodes that lie on no
/// input-to-output path are dropped first; the remaining vertices start
/// from (out-degree, in-degree, label) and are refined num_nodes times with
/// the sorted hashes of their in- and out-neighbors. The hash of the sorted
/// vertex hashes is returned. Throws Error(unsupported_reduction) for
/// edge-ops spaces and Error(invalid_architecture) for cells without an
/// input-to-output path.
std::uint64_t graph_hash(const CellGraph &cell, const SearchSpaceDef &space);

/// Distinct graph_hash values over every valid cell of a variable-topology
/// node-ops space (at most 64 candidate edges).
std::size_t count_unique_graphs(const SearchSpaceDef &space);

}  // namespace archbench
